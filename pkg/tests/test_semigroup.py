import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poslab import flags as fl
from poslab import linalg as la
from poslab import semigroup as sg
from poslab.errors import (
    FloatAmbiguous,
    NonPositiveParameter,
    NotInOpenSemigroup,
    NotTransverse,
)

F = Fraction


def u3(a, b, c):
    return la.mat([[1, a, b], [0, 1, c], [0, 0, 1]])


def random_reduced_word(rng, n):
    # peel random descents off the longest element
    perm = list(range(n, 0, -1))
    word = []
    while perm != sorted(perm):
        i = rng.choice([k for k in range(1, n) if perm[k - 1] > perm[k]])
        word.append(i)
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(word)


def trivial_frame(n):
    return fl.normalize_pair(fl.standard_flag(n), fl.antistandard_flag(n))


# -- words ------------------------------------------------------------------


def test_canonical_word_small():
    assert sg.canonical_word(2) == (1,)
    assert sg.canonical_word(3) == (1, 2, 1)
    assert sg.canonical_word(4) == (1, 2, 1, 3, 2, 1)


def test_canonical_word_is_reduced():
    for n in range(2, 8):
        assert sg._word_is_reduced_for_w0(n, sg.canonical_word(n))


def test_bad_words_rejected():
    with pytest.raises(ValueError):
        sg.params(3, (1, 1, 1), word=(1, 1, 2))
    with pytest.raises(ValueError):
        sg.params(3, (1, 1), word=(1, 2))


def test_nonpositive_parameters_rejected():
    with pytest.raises(NonPositiveParameter):
        sg.params(3, (1, 0, 1))
    with pytest.raises(NonPositiveParameter):
        sg.params(2, (-F(1, 2),))


# -- psi --------------------------------------------------------------------


def test_psi_canonical_word_n3_closed_form():
    # x_1(a) x_2(b) x_1(c) has entries (a+c, ab, b) above the diagonal
    a, b, c = F(2), F(3), F(5)
    g = sg.psi(sg.params(3, (a, b, c)))
    assert g.entries == u3(a + c, a * b, b)
    assert g.entries == la.mat([[1, 7, 6], [0, 1, 3], [0, 0, 1]])


def test_psi_lands_in_semigroup():
    rng = random.Random(11)
    for n in (2, 3, 4, 5):
        for _ in range(20):
            p = sg.random_cone_params(rng, n)
            assert sg.in_positive_semigroup(sg.psi(p).entries)


def test_psi_float_mode():
    g = sg.psi(sg.params(3, (0.5, 2.0, 1.5)))
    assert not la.is_exact(g.entries)
    assert sg.in_positive_semigroup(g.entries)


# -- membership -------------------------------------------------------------


def test_eligible_minor_counts():
    # n = 3: three entries above the diagonal plus three mixed 2x2 minors
    assert len(sg.eligible_minor_pairs(3)) == 6
    assert ((0, 2), (1, 2)) in sg.eligible_minor_pairs(3)


def test_identity_not_in_open_semigroup():
    for n in (2, 3, 4):
        assert not sg.in_positive_semigroup(la.identity(n))


def test_boundary_matrix_excluded():
    # u_13 = u_12 u_23 kills the (01|12) minor
    assert not sg.in_positive_semigroup(u3(1, 1, 1))


def test_semigroup_closed_under_product():
    rng = random.Random(23)
    for n in (2, 3, 4):
        for _ in range(10):
            g = sg.psi(sg.random_cone_params(rng, n))
            h = sg.psi(sg.random_cone_params(rng, n))
            assert sg.in_positive_semigroup(la.mat_mul(g.entries, h.entries))


def test_torus_conjugation_preserves_semigroup():
    delta = la.mat([[F(2), 0, 0], [0, F(1), 0], [0, 0, F(1, 2)]])
    rng = random.Random(5)
    for _ in range(10):
        u = sg.psi(sg.random_cone_params(rng, 3)).entries
        v = la.mat_mul(la.mat_mul(delta, u), la.inverse(delta))
        assert sg.in_positive_semigroup(v)


def test_membership_float_ambiguity():
    u = [[1.0, 1e-12, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]
    with pytest.raises(FloatAmbiguous):
        sg.in_positive_semigroup(u)


def test_membership_rejects_nonunipotent():
    with pytest.raises(ValueError):
        sg.in_positive_semigroup(la.mat([[2, 0], [0, 1]]))


# -- factorization ----------------------------------------------------------


def test_factorize_frozen_example():
    p = sg.factorize(u3(2, 1, 1))
    assert p.word == (1, 2, 1)
    assert p.t == (F(1), F(1), F(1))


def test_factorize_rejects_boundary():
    with pytest.raises(NotInOpenSemigroup):
        sg.factorize(u3(1, 1, 1))
    with pytest.raises(NotInOpenSemigroup):
        sg.factorize(la.identity(3))


def test_factorize_rejects_negative_cell():
    with pytest.raises(NotInOpenSemigroup):
        sg.factorize(u3(-2, 1, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_factorize_roundtrip(seed, n):
    rng = random.Random(seed)
    p = sg.random_cone_params(rng, n)
    q = sg.factorize(sg.psi(p).entries)
    assert q.word == p.word
    assert q.t == p.t


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_factorize_roundtrip_random_words(seed, n):
    rng = random.Random(seed)
    word = random_reduced_word(rng, n)
    p = sg.random_cone_params(rng, n, word=word)
    q = sg.factorize(sg.psi(p).entries, word=word)
    assert q.t == p.t


def test_factorize_other_word_n3():
    # x_2(p) x_1(q) x_2(r): entries q, qr, p + r
    p, q, r = F(3), F(2), F(5)
    u = la.mat([[1, q, q * r], [0, 1, p + r], [0, 0, 1]])
    got = sg.factorize(u, word=(2, 1, 2))
    assert got.t == (p, q, r)


def test_factorize_float():
    p = sg.params(4, [0.5, 1.25, 2.0, 0.75, 3.0, 1.0])
    q = sg.factorize(sg.psi(p).entries)
    assert all(abs(a - b) < 1e-9 for a, b in zip(q.t, p.t))


def test_psi_injective_across_parameters():
    rng = random.Random(31)
    seen = set()
    for _ in range(50):
        p = sg.random_cone_params(rng, 3)
        seen.add(sg.psi(p).entries)
    assert len(seen) == 50


# -- unipotent coordinates --------------------------------------------------


def test_unipotent_coordinate_roundtrip():
    rng = random.Random(7)
    frame = trivial_frame(3)
    for _ in range(20):
        u = sg.psi(sg.random_cone_params(rng, 3)).entries
        x = sg.point_from_unipotent(frame, u)
        assert sg.unipotent_coordinate(frame, x) == u


def test_unipotent_coordinate_requires_transversality():
    frame = trivial_frame(3)
    with pytest.raises(NotTransverse):
        sg.unipotent_coordinate(frame, fl.standard_flag(3))


# -- certificates -----------------------------------------------------------


def test_certificate_of_positive_point():
    frame = trivial_frame(3)
    u = sg.psi(sg.params(3, (1, 1, 1))).entries
    c = sg.point_from_unipotent(frame, u)
    cert = sg.component_certificate(
        fl.standard_flag(3), fl.antistandard_flag(3), c
    )
    assert cert == ((1, 1), sg.PLUS)


def test_certificate_absent_for_mixed_signs():
    # all eligible minors nonzero, but no sign class fits
    frame = trivial_frame(3)
    c = sg.point_from_unipotent(frame, u3(1, 1, -1))
    cert = sg.component_certificate(
        fl.standard_flag(3), fl.antistandard_flag(3), c
    )
    assert cert is None


def test_certificate_every_component_found():
    frame = trivial_frame(3)
    rng = random.Random(13)
    seen = set()
    for sigma in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        eps = sg.sign_vector(sigma)
        u = sg.psi(sg.random_cone_params(rng, 3)).entries
        v = sg.conjugate_by_signs(u, eps)
        c = sg.point_from_unipotent(frame, v)
        cert = sg.component_certificate(
            fl.standard_flag(3), fl.antistandard_flag(3), c
        )
        assert cert is not None
        seen.add(cert)
        want = sigma if sigma[0] == 1 else tuple(-s for s in sigma)
        assert cert[0] == want
    assert len(seen) == 4


def test_membership_frame_independent_via_transported_witness():
    # absolute labels may move with the frame; membership relative to a
    # transported witness may not
    rng = random.Random(17)
    a = fl.standard_flag(3)
    b = fl.antistandard_flag(3)
    frame = trivial_frame(3)
    c = sg.point_from_unipotent(frame, sg.psi(sg.params(3, (2, 1, 3))).entries)
    xs = [
        sg.point_from_unipotent(frame, sg.psi(sg.random_cone_params(rng, 3)).entries),
        sg.point_from_unipotent(frame, la.inverse(sg.unipotent_coordinate(frame, c))),
        sg.point_from_unipotent(frame, la.mat([[1, 1, 1], [0, 1, -1], [0, 0, 1]])),
    ]
    d = sg.diamond_of(a, b, c)
    base = [sg.diamond_contains(d, x) for x in xs]
    for _ in range(10):
        g = fl.random_unimodular(rng, 3)
        dg = sg.diamond_of(fl.act(g, a), fl.act(g, b), fl.act(g, c))
        moved = [sg.diamond_contains(dg, fl.act(g, x)) for x in xs]
        assert moved == base


def test_certificate_requires_transversality():
    a = fl.standard_flag(3)
    b = fl.antistandard_flag(3)
    with pytest.raises(NotTransverse):
        sg.component_certificate(a, b, a)


# -- diamonds ---------------------------------------------------------------


def positive_triple(n, seed=0):
    a = fl.standard_flag(n)
    b = fl.antistandard_flag(n)
    rng = random.Random(seed)
    frame = fl.normalize_pair(a, b)
    c = sg.point_from_unipotent(frame, sg.psi(sg.random_cone_params(rng, n)).entries)
    return a, b, c


def test_diamond_contains_witness():
    a, b, c = positive_triple(3)
    d = sg.diamond_of(a, b, c)
    assert sg.diamond_contains(d, c)
    assert d.sign_class == (1, 1)
    assert d.side == sg.PLUS


def test_diamond_membership_nontransverse_is_false():
    a, b, c = positive_triple(3)
    d = sg.diamond_of(a, b, c)
    assert not sg.diamond_contains(d, a)
    assert not sg.diamond_contains(d, b)


def test_opposite_diamond():
    a, b, c = positive_triple(3, seed=3)
    d = sg.diamond_of(a, b, c)
    o = sg.opposite(d)
    assert (o.sign_class, o.side) == (d.sign_class, sg.MINUS)
    assert not sg.diamond_contains(d, o.witness)
    assert sg.diamond_contains(o, o.witness)
    back = sg.opposite(o)
    assert sg.diamond_contains(back, c)
    assert back.witness == c


def test_sample_diamond_members():
    rng = random.Random(41)
    a, b, c = positive_triple(3, seed=9)
    d = sg.diamond_of(a, b, c)
    for x in sg.sample_diamond(d, rng, 8):
        assert sg.diamond_contains(d, x)
    o = sg.opposite(d)
    for x in sg.sample_diamond(o, rng, 8):
        assert sg.diamond_contains(o, x)
        assert not sg.diamond_contains(d, x)


def test_nesting_check_positive_triple():
    rng = random.Random(29)
    a, b, c = positive_triple(3, seed=1)
    assert sg.nesting_check(a, b, c, samples=6, rng=rng)
    a4, b4, c4 = positive_triple(4, seed=2)
    assert sg.nesting_check(a4, b4, c4, samples=4, rng=rng)


def test_nesting_check_zero_samples_vacuous():
    rng = random.Random(0)
    a, b, c = positive_triple(3, seed=4)
    assert sg.nesting_check(a, b, c, samples=0, rng=rng)


# -- projective line --------------------------------------------------------


def test_p1_psi_and_certificate():
    assert sg.psi(sg.params(2, (1,))).entries == la.mat([[1, 1], [0, 1]])
    assert sg.factorize(la.mat([[1, 3], [0, 1]])).t == (F(3),)
    inf = fl.standard_flag(2)
    zero = fl.antistandard_flag(2)
    slope1 = fl.flag([[1, 0], [1, 1]])
    cert = sg.component_certificate(inf, zero, slope1)
    assert cert == ((1,), sg.PLUS)


def test_p1_diamond_is_a_halfline():
    inf = fl.standard_flag(2)
    zero = fl.antistandard_flag(2)
    slope = lambda s: fl.flag([[F(s), 0], [1, 1]])  # noqa: E731
    d = sg.diamond_of(inf, zero, slope(1))
    assert all(sg.diamond_contains(d, slope(s)) for s in (F(1, 2), 2, 100))
    assert not any(sg.diamond_contains(d, slope(s)) for s in (-1, -F(1, 3)))
    o = sg.opposite(d)
    assert sg.diamond_contains(o, slope(-1))


def test_p1_nesting_intervals():
    # over (inf, 0) with midpoint 1: V(1,0) = (0,1) and V(inf,1) = (1,inf)
    inf = fl.standard_flag(2)
    zero = fl.antistandard_flag(2)
    one = fl.flag([[1, 0], [1, 1]])
    rng = random.Random(3)
    assert sg.nesting_check(inf, zero, one, samples=50, rng=rng)


# -- salience and the closure ----------------------------------------------


def test_salience_inverse_outside():
    rng = random.Random(37)
    for n in (2, 3, 4):
        for _ in range(10):
            u = sg.psi(sg.random_cone_params(rng, n)).entries
            assert sg.in_positive_semigroup(u)
            assert not sg.in_positive_semigroup(la.inverse(u))


def closure_element(n, t):
    m = la.identity(n)
    for i, x in zip(sg.canonical_word(n), t):
        m = la.mat_mul(m, sg.elementary(n, i, F(x)))
    return m


def test_closure_products_trivial_only_at_identity():
    # if u v = 1 with u, v in the closure then u = v = 1
    grid = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    for tu in grid:
        for tv in grid:
            u = closure_element(3, tu)
            v = closure_element(3, tv)
            if la.mat_mul(u, v) == la.identity(3):
                assert u == la.identity(3) and v == la.identity(3)


# -- cached coordinate membership -------------------------------------------


def test_coordinate_membership_trio():
    frame = trivial_frame(3)
    u = sg.psi(sg.params(3, (1, 2, 1))).entries
    pos = sg.coordinate(frame, sg.point_from_unipotent(frame, u))
    assert (pos.in_n, pos.in_n_inverse, pos.membership) == (True, False, "N")
    neg = sg.coordinate(frame, sg.point_from_unipotent(frame, la.inverse(u)))
    assert (neg.in_n, neg.in_n_inverse, neg.membership) == (False, True, "N_inv")
    mixed = sg.coordinate(frame, sg.point_from_unipotent(frame, u3(1, 1, -1)))
    assert mixed.membership == "neither"
