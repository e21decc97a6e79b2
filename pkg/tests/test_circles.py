import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poslab import circles as ci
from poslab import configurations as cf
from poslab import flags as fl
from poslab import linalg as la
from poslab import semigroup as sg

F = Fraction


def rational_sl2(rng, bound=5):
    # L U with unit diagonals is unimodular
    a = F(rng.randint(-bound, bound))
    c = F(rng.randint(-bound, bound))
    lower = la.mat([[1, 0], [a, 1]])
    upper = la.mat([[1, c], [0, 1]])
    return la.mat_mul(lower, upper)


# -- principal sl2 ------------------------------------------------------------


def test_principal_sl2_frozen():
    t = ci.principal_sl2(3)
    assert t.h == la.mat([[2, 0, 0], [0, 0, 0], [0, 0, -2]])
    assert t.e == la.mat([[0, 2, 0], [0, 0, 2], [0, 0, 0]])
    assert t.f == la.mat([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    t2 = ci.principal_sl2(2)
    assert t2.e == la.mat([[0, 1], [0, 0]])
    assert t2.h == la.mat([[1, 0], [0, -1]])
    assert t2.f == la.mat([[0, 0], [1, 0]])


def test_principal_sl2_brackets_exact():
    for n in range(2, 7):
        t = ci.principal_sl2(n)
        two_e = la.mat_scale(t.e, 2)
        minus_two_f = la.mat_scale(t.f, -2)
        assert ci.bracket(t.h, t.e) == two_e
        assert ci.bracket(t.h, t.f) == minus_two_f
        assert ci.bracket(t.e, t.f) == t.h


def test_principal_exp_lands_in_semigroup():
    for n in (2, 3, 4, 5):
        ts = [F(k, 7) for k in range(1, 51)]
        assert ci.principal_positivity_check(n, ts)
    assert not sg.in_positive_semigroup(
        ci.exp_nilpotent(ci.principal_sl2(3).e, F(-1))
    )


# -- circle points and the symmetric power ------------------------------------


def test_circle_point_canonical():
    assert ci.circle_point(F(1, 2)) == ci.CirclePoint(F(2), F(4))
    assert ci.circle_point(None) == ci.CirclePoint(F(-5), F(0))
    assert ci.INFINITY.is_infinity
    assert ci.circle_point(3).value == F(3)
    with pytest.raises(ValueError):
        ci.CirclePoint(F(0), F(0))


def test_sym_power_frozen_n3():
    g = la.mat([[1, 0], [1, 1]])
    m = ci.sym_power(g, 3)
    assert m == la.mat([[1, 0, 0], [1, 1, 0], [1, 2, 1]])


def test_sym_power_multiplicative():
    rng = random.Random(5)
    for n in (2, 3, 4, 5):
        for _ in range(10):
            g = rational_sl2(rng)
            h = rational_sl2(rng)
            lhs = ci.sym_power(la.mat_mul(g, h), n)
            rhs = la.mat_mul(ci.sym_power(g, n), ci.sym_power(h, n))
            assert lhs == rhs


def test_sym_power_unimodular():
    rng = random.Random(7)
    for n in (2, 3, 4):
        for _ in range(5):
            assert la.det(ci.sym_power(rational_sl2(rng), n)) == 1


def test_circle_map_base_points():
    for n in (2, 3, 4, 5):
        assert ci.circle_map(ci.INFINITY, n) == fl.standard_flag(n)
        assert ci.circle_map(ci.circle_point(0), n) == fl.antistandard_flag(n)


def test_circle_map_frozen_n3():
    x = ci.circle_map(ci.circle_point(1), 3)
    assert x.basis == la.mat([[1, 0, 0], [1, 1, 0], [1, 2, 1]])
    assert x.subspace_basis(1) == ((F(1),), (F(1),), (F(1),))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_circle_map_equivariant(seed, n):
    rng = random.Random(seed)
    g = rational_sl2(rng)
    s = F(rng.randint(-6, 6), rng.randint(1, 6))
    p = rng.choice([ci.circle_point(s), ci.INFINITY])
    lhs = ci.circle_map(ci.mobius(g, p), n)
    rhs = fl.apply_matrix(ci.sym_power(g, n), ci.circle_map(p, n))
    assert lhs == rhs


# -- circles through pairs -----------------------------------------------------


def test_delta_torus():
    d = ci.delta_torus((F(2), F(3)))
    assert d == la.mat([[6, 0, 0], [0, 3, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        ci.delta_torus((F(1), F(-2)))


def test_circle_through_standard_pair_is_veronese():
    a = fl.standard_flag(3)
    b = fl.antistandard_flag(3)
    c = ci.circle_through(a, b, (F(1), F(1)))
    assert c.matrix == la.identity(3)


def test_circle_through_hits_extremities():
    rng = random.Random(11)
    for n in (2, 3, 4):
        a, b = fl.random_transverse_pair(rng, n)
        lam = [F(rng.randint(1, 4)) for _ in range(n - 1)]
        c = ci.circle_through(a, b, lam)
        assert c.at(ci.INFINITY) == a
        assert c.point(0) == b


def test_circle_triples_positive():
    rng = random.Random(13)
    for n in (2, 3, 4):
        a, b = fl.random_transverse_pair(rng, n)
        lam = [F(rng.randint(1, 3)) for _ in range(n - 1)]
        c = ci.circle_through(a, b, lam)
        for _ in range(8):
            s = F(rng.randint(1, 60), rng.randint(1, 9))
            assert cf.is_positive_triple(a, c.point(s), b)


def test_circle_arc_membership():
    # points of the circle between 0 and s sit in the diamond over
    # (b, c_s) away from a
    a = fl.standard_flag(3)
    b = fl.antistandard_flag(3)
    c = ci.circle_through(a, b, (F(1), F(2)))
    s = F(3)
    inner = sg.opposite(sg.diamond_of(b, c.point(s), a))
    for t in (F(1, 4), F(1, 2), F(1), F(2), F(5, 2)):
        assert sg.diamond_contains(inner, c.point(t))
    for t in (F(4), F(7)):
        assert not sg.diamond_contains(inner, c.point(t))


def test_circle_through_requires_transversality():
    a = fl.standard_flag(3)
    with pytest.raises(Exception):
        ci.circle_through(a, a, (F(1), F(1)))


# -- proximality ---------------------------------------------------------------


def test_proximality_report():
    for n in (2, 3, 4, 5):
        rep = ci.proximality_report(n)
        assert rep["pass"], rep
        assert rep["parabolic_rejected"]
        kinds = {c["kind"] for c in rep["cases"]}
        assert kinds == {"diagonal", "conjugated"}


def test_attracting_point():
    assert ci.attracting_point(la.mat([[F(2), 0], [0, F(1, 2)]])).is_infinity
    # diag(2, 1/2) conjugated by [[1, 1], [1, 2]]; attracting line spans (1, 1)
    g = la.mat([[F(7, 2), F(-3, 2)], [F(3), F(-1)]])
    assert ci.attracting_point(g) == ci.circle_point(F(1))
    with pytest.raises(ValueError):
        ci.attracting_point(la.mat([[F(1), F(1)], [F(0), F(1)]]))


def test_torus_centralizer_classes():
    d = la.mat([[F(2), 0], [0, F(1, 2)]])
    r = la.mat([[F(2), F(1)], [F(1), F(1)]])
    conj = la.mat_mul(la.mat_mul(r, d), la.inverse(r))
    for n in (2, 3, 4):
        mats = [ci.sym_power(d, n), ci.sym_power(conj, n)]
        assert ci.torus_centralizer_classes(mats) == 1
        # a single diagonal element centralizes the whole torus
        assert ci.torus_centralizer_classes([ci.sym_power(d, n)]) == n


# -- circle configurations -------------------------------------------------------


def test_veronese_five_tuple_positive():
    circle = ci.veronese_circle(3)
    pts = [circle.point(s) for s in (F(-2), F(-1, 2), F(0), F(1), F(3))]
    assert cf.is_positive_configuration(cf.Configuration(points=pts))


def test_circle_configuration_check_exhaustive():
    for k in (3, 4, 5, 6):
        rep = ci.circle_configuration_check(3, k)
        assert rep["pass"], rep
        assert rep["checked"] > 0
    rep = ci.circle_configuration_check(2, 4)
    assert rep["pass"]
    rep = ci.circle_configuration_check(
        4, 4, grid=[F(-1), F(0), F(1), F(2), None]
    )
    assert rep["pass"]
