"""Seeded batch property suites behind the command line.

Each suite is a fixed list of named checks run at desk scale; a report
row records the verdict, how much was checked, and an extremal
statistic where one is informative.  Reports carry no timestamps, and
every random draw comes from a generator seeded by (seed, property
name), so a fixed configuration reproduces a byte-identical JSON
document.

The mode switch changes the arithmetic of the semigroup sampling
checks; certificate, circle, and Bruhat machinery stays exact where
exactness is its contract.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from poslab import boundary as bd
from poslab import circles as ci
from poslab import configurations as cf
from poslab import flags as fl
from poslab import linalg as la
from poslab import semigroup as sg
from poslab import tripods as tp
from poslab import weyl
from poslab.errors import (
    ConfigInvalid,
    FloatAmbiguous,
    PoslabError,
    UnknownSuite,
)

SCHEMA = "poslab/1"
SUITE_NAMES = ("combinatorial", "circles", "metrics", "boundary", "bruhat")


@dataclass(frozen=True)
class SuiteConfig:
    """Run parameters shared by every suite."""

    n: int = 3
    trials: int = 200
    seed: int = 42
    mode: str = "exact"
    tol: float | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or not 2 <= self.n <= 6:
            raise ConfigInvalid(f"n must be an integer in [2, 6], got {self.n}")
        if not isinstance(self.trials, int) or self.trials < 0:
            raise ConfigInvalid(f"trials must be a count, got {self.trials}")
        if self.mode not in ("exact", "float"):
            raise ConfigInvalid(f"mode must be exact or float, got {self.mode}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigInvalid(f"tol must be positive, got {self.tol}")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


# ---------------------------------------------------------------------------
# Shared sampling helpers.


def _rationalized_matrix(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _in_semigroup(m) -> bool:
    # float ambiguity re-signs exactly on the rationalized matrix
    try:
        return sg.in_positive_semigroup(m)
    except FloatAmbiguous:
        return sg.in_positive_semigroup(_rationalized_matrix(m))


def _cone_matrix(cfg, rng):
    return sg.psi(sg.random_cone_params(rng, cfg.n, exact=cfg.exact)).entries


def _transported_pair(rng, n):
    g = fl.random_unimodular(rng, n)
    return fl.act(g, fl.standard_flag(n)), fl.act(g, fl.antistandard_flag(n))


def _positive_triple(rng, n):
    a, b = _transported_pair(rng, n)
    frame = fl.normalize_pair(a, b)
    c = sg.point_from_unipotent(
        frame, sg.psi(sg.random_cone_params(rng, n)).entries)
    return a, b, c


def _unit_upper(rng, n):
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = fl.random_rational(rng, 5)
    return la.mat(rows)


# ---------------------------------------------------------------------------
# Combinatorial suite: the semigroup, its cone coordinates, diamonds,
# and configurations of flags.


def _check_semigroup_closure(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        g = _cone_matrix(cfg, rng)
        h = _cone_matrix(cfg, rng)
        if not _in_semigroup(la.mat_mul(g, h)):
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _check_torus_invariance(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        u = _cone_matrix(cfg, rng)
        diag = [Fraction(rng.randint(1, 9), rng.randint(1, 9))
                for _ in range(cfg.n)]
        d = la.mat([[diag[i] if i == j else Fraction(0)
                     for j in range(cfg.n)] for i in range(cfg.n)])
        if not _in_semigroup(la.mat_mul(la.mat_mul(d, u), la.inverse(d))):
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _check_salience(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        u = _cone_matrix(cfg, rng)
        if not _in_semigroup(u) or _in_semigroup(la.inverse(u)):
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _check_cone_roundtrip(cfg, rng):
    fails = 0
    worst = 0.0
    for _ in range(cfg.trials):
        p = sg.random_cone_params(rng, cfg.n, exact=cfg.exact)
        q = sg.factorize(sg.psi(p).entries)
        if cfg.exact:
            ok = q == p
        else:
            err = max(abs(float(x) - float(y)) / max(abs(float(y)), 1e-12)
                      for x, y in zip(q.t, p.t))
            worst = max(worst, err)
            ok = q.word == p.word and err < 1e-8
        fails += 0 if ok else 1
    out = {"count": cfg.trials, "failures": fails}
    if not cfg.exact:
        out["worst_relative_error"] = worst
    return out


def _check_cone_injective(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        m = _cone_matrix(cfg, rng)
        m2 = sg.psi(sg.factorize(m)).entries
        ok = m2 == m if cfg.exact else la.frobenius_distance(m2, m) < 1e-8
        fails += 0 if ok else 1
    return {"count": cfg.trials, "failures": fails}


def _check_diamond_certificate(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        a, b, c = _positive_triple(rng, cfg.n)
        cert = sg.component_certificate(a, b, c)
        if cert is None or not sg.diamond_contains(sg.diamond_of(a, b, c), c):
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _check_diamond_opposite(cfg, rng):
    per = 8
    rounds = max(1, cfg.trials // per)
    checked = fails = 0
    for _ in range(rounds):
        a, b, c = _positive_triple(rng, cfg.n)
        d = sg.diamond_of(a, b, c)
        o = sg.opposite(d)
        for x, y in zip(sg.sample_diamond(d, rng, per),
                        sg.sample_diamond(o, rng, per)):
            checked += 1
            ok = (sg.diamond_contains(d, x) and sg.diamond_contains(o, y)
                  and not sg.diamond_contains(o, x)
                  and not sg.diamond_contains(d, y)
                  and fl.is_transverse(x, y))
            fails += 0 if ok else 1
    return {"count": checked, "failures": fails}


def _check_diamond_nesting(cfg, rng):
    per = 25
    rounds = max(1, cfg.trials // per)
    fails = 0
    for _ in range(rounds):
        a, b, c = _positive_triple(rng, cfg.n)
        if not sg.nesting_check(a, b, c, samples=per, rng=rng):
            fails += 1
    return {"count": rounds * per, "failures": fails}


def _check_positive_triples(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        a, b, c = _positive_triple(rng, cfg.n)
        if not (cf.is_positive_triple(a, b, c)
                and cf.is_positive_triple(b, c, a)):
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _check_dihedral(cfg, rng):
    rounds = min(cfg.trials, 20)
    fails = 0
    for _ in range(rounds):
        quad = cf.extend_configuration(_positive_triple(rng, cfg.n), rng)
        rep = cf.dihedral_invariance_report(quad)
        if not (rep["pass"] and rep["dihedral_positive_count"] == 8
                and rep["other_positive_count"] == 0):
            fails += 1
    return {"count": rounds, "failures": fails}


def _check_necklace(cfg, rng):
    per = 10
    rounds = max(1, min(cfg.trials, 50) // per)
    fails = 0
    for _ in range(rounds):
        a, b, c = _positive_triple(rng, cfg.n)
        if not cf.necklace_check(a, b, c, rng, trials=per):
            fails += 1
    return {"count": rounds * per, "failures": fails}


def _check_exclusion(cfg, rng):
    t = min(cfg.trials, 60)
    rep = cf.exclusion_suite(rng, trials=t, n=cfg.n)
    fails = rep["sanity_failures"] + (0 if rep["pass"] else 1)
    return {"count": t, "failures": fails,
            "cycle_positive_counts": rep["cycle_positive_counts"]}


def _check_inclusion(cfg, rng):
    per = 20
    rounds = max(1, min(cfg.trials, 60) // per)
    fails = 0
    for _ in range(rounds):
        a, y, b, c = cf.extend_configuration(_positive_triple(rng, cfg.n), rng)
        if not cf.inclusion_check(a, y, b, c, rng, trials=per):
            fails += 1
    return {"count": rounds * per, "failures": fails}


_P1_GRID = (None, Fraction(-3), Fraction(-1), Fraction(-1, 2), Fraction(0),
            Fraction(2, 3), Fraction(1), Fraction(5))


def _p1_flag(s):
    if s is None:
        return fl.standard_flag(2)
    return fl.flag(((s, Fraction(1)), (Fraction(1), Fraction(0))))


def _cyc3(p, q, r):
    if p is None:
        return q < r
    if q is None:
        return r < p
    if r is None:
        return p < q
    return p < q < r or q < r < p or r < p < q


def _check_p1_oracle(cfg, rng):
    flags = {s: _p1_flag(s) for s in _P1_GRID}
    checked = fails = 0
    for a, x, b, y in permutations(_P1_GRID, 4):
        checked += 1
        got = cf.is_positive_quadruple(flags[a], flags[x], flags[b], flags[y])
        if got != (_cyc3(a, x, b) != _cyc3(a, y, b)):
            fails += 1
    return {"count": checked, "failures": fails}


# ---------------------------------------------------------------------------
# Circles suite: positive circles, their configurations, and one-sided
# limits along them.


def _check_circle_triples(cfg, rng):
    per = 8
    rounds = max(1, min(cfg.trials, 80) // per)
    checked = fails = 0
    for _ in range(rounds):
        a, b = _transported_pair(rng, cfg.n)
        lam = [Fraction(rng.randint(1, 4)) for _ in range(cfg.n - 1)]
        c = ci.circle_through(a, b, lam)
        for _ in range(per):
            s = Fraction(rng.randint(1, 60), rng.randint(1, 9))
            checked += 1
            if not cf.is_positive_triple(a, c.point(s), b):
                fails += 1
    return {"count": checked, "failures": fails}


def _check_circle_arcs(cfg, rng):
    a = fl.standard_flag(cfg.n)
    b = fl.antistandard_flag(cfg.n)
    lam = [Fraction(rng.randint(1, 3)) for _ in range(cfg.n - 1)]
    c = ci.circle_through(a, b, lam)
    s = Fraction(3)
    inner = sg.opposite(sg.diamond_of(b, c.point(s), a))
    k = min(cfg.trials, 40)
    checked = fails = 0
    for j in range(1, k + 1):
        checked += 2
        if not sg.diamond_contains(inner, c.point(s * Fraction(j, k + 1))):
            fails += 1
        if sg.diamond_contains(inner, c.point(s * Fraction(k + 1 + j, k))):
            fails += 1
    return {"count": checked, "failures": fails}


def _check_circle_tuples(cfg, rng):
    n = min(cfg.n, 4)
    checked = fails = 0
    per_k = {}
    for k in (3, 4, 5, 6):
        rep = ci.circle_configuration_check(n, k)
        checked += rep["checked"]
        fails += rep["failures"]
        per_k[str(k)] = rep["checked"]
    return {"count": checked, "failures": fails, "per_k": per_k}


def _check_proximality(cfg, rng):
    rep = ci.proximality_report(cfg.n)
    return {"count": len(rep["cases"]), "failures": 0 if rep["pass"] else 1,
            "parabolic_rejected": rep["parabolic_rejected"]}


def _check_limits(cfg, rng):
    probes = max(2, min(cfg.trials // 25, 10))
    ver = ci.veronese_circle(cfg.n)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    checked = fails = 0
    worst = 0.0
    for k in range(probes):
        theta = Fraction(2 * k + 1, 2 * probes + 1)
        angles = [theta + Fraction(2, 5), theta - Fraction(2, 5)]
        for j in range(1, 34):
            step = Fraction(1, 2 ** j) / 4
            angles += [theta - step, theta + step]
        sample = bd.cyclic_sample(
            (a, ver.at(bd.point_at_turn(a % 1))) for a in angles)
        target = ver.at(bd.point_at_turn(theta))
        for side in ("left", "right"):
            lim = bd.left_right_limits(sample, theta, side, tol=tol)
            err = fl.flag_distance(lim, target)
            worst = max(worst, err)
            checked += 1
            if err > tol:
                fails += 1
    return {"count": checked, "failures": fails, "worst_error": worst}


# ---------------------------------------------------------------------------
# Metrics suite: tripod distances, the defect norm, and contraction.


_PRINCIPAL2 = ((Fraction(5, 4), Fraction(3, 4)),
               (Fraction(3, 4), Fraction(5, 4)))


def _check_tripod_axioms(cfg, rng):
    tau = tp.standard_tripod(cfg.n)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    t = min(cfg.trials, 100)
    pts = sg.sample_diamond(tau.diamond, rng, 2 * t)
    checked = fails = 0
    for k in range(t):
        p, q = pts[2 * k], pts[2 * k + 1]
        d = tp.tripod_distance(tau, p, q)
        ok = (d == tp.tripod_distance(tau, q, p)
              and tp.tripod_distance(tau, p, p) == (0.0, 0.0, 0.0)
              and max(d[0], d[1]) <= d[2] <= d[0] + d[1] + tol
              and d[2] > 0)
        checked += 1
        fails += 0 if ok else 1
    return {"count": checked, "failures": fails}


def _check_completeness(cfg, rng):
    tau = tp.standard_tripod(cfg.n)
    length = len(sg.canonical_word(cfg.n))
    paths = min(cfg.trials, 10)
    checked = fails = 0
    deepest = 0.0
    for k in range(paths):
        others = tuple(Fraction(rng.randint(1, 3)) for _ in range(length - 1))
        path = [tp.tripod_point(tau, others + (Fraction(k + 1, 3 ** j),))
                for j in range(12)]
        rep = tp.completeness_probe(tau, path)
        checked += 1
        deepest = max(deepest, rep["distances"][-1])
        if rep["verdict"] != "diverges" or rep["distances"][-1] <= 1e3:
            fails += 1
    return {"count": checked, "failures": fails, "deepest": deepest}


def _check_norm_zero(cfg, rng):
    circle = ci.veronese_circle(cfg.n)
    t = min(cfg.trials, 6)
    checked = fails = 0
    worst = 0.0
    for _ in range(t):
        s = Fraction(rng.randint(1, 40), rng.randint(1, 40))
        res = tp.tripod_norm(circle.point(None), circle.point(s),
                             circle.point(0))
        checked += 1
        worst = max(worst, res.value)
        if not res.converged or res.value > 1e-6:
            fails += 1
    return {"count": checked, "failures": fails, "max_value": worst}


def _check_norm_grid(cfg, rng):
    # the u13 offset measures distance to the circle-union locus at n=3
    c3 = ci.veronese_circle(3)
    frame = fl.normalize_pair(c3.point(None), c3.point(0))
    values = []
    for off in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(0)):
        u = la.mat(((Fraction(1), Fraction(2), Fraction(1) + off),
                    (Fraction(0), Fraction(1), Fraction(1)),
                    (Fraction(0), Fraction(0), Fraction(1))))
        z = sg.point_from_unipotent(frame, u)
        values.append(
            tp.tripod_norm(c3.point(None), z, c3.point(0), seed=1).value)
    ok = (all(b < a for a, b in zip(values, values[1:]))
          and values[-1] <= 1e-6)
    return {"count": len(values), "failures": 0 if ok else 1,
            "values": values}


def _check_contraction(cfg, rng):
    gamma = ci.sym_power(la.mat(_PRINCIPAL2), 3)
    rep = tp.contraction_experiment(gamma, tp.standard_tripod(3), m_max=5)
    k = rep["k"]
    ok = (rep["contracting"] and all(b < a for a, b in zip(k, k[1:]))
          and k[-1] < 1e-2)
    return {"count": len(k), "failures": 0 if ok else 1, "k": k}


def _check_corner(cfg, rng):
    c3 = ci.veronese_circle(3)
    ladder = [tp.tripod(c3, None, Fraction(2, 4 ** m), Fraction(1, 4 ** m))
              for m in range(1, 12)]
    pilot = [(Fraction(1),) * 3] * len(ladder)
    rep = tp.corner_contraction_probe(ladder, pilot, c3.point(0))
    return {"count": rep["probes"], "failures": 0 if rep["pass"] else 1,
            "max_final": rep["max_final"]}


# ---------------------------------------------------------------------------
# Boundary suite: ping-pong boundary maps at desk scale.


def _check_boundary_positive(cfg, rng):
    checked = fails = 0
    witnesses = []
    for n, depth in ((2, 3), (3, 2)):
        sample = bd.schottky_boundary_map(bd.schottky_rep(3, n), depth)
        verdict = bd.positive_map_check(sample)
        checked += sample.size
        if verdict is not True:
            fails += 1
            witnesses.append([str(a) for a in verdict])
    out = {"count": checked, "failures": fails}
    if witnesses:
        out["witnesses"] = witnesses
    return out


def _check_boundedness(cfg, rng):
    sample = bd.schottky_boundary_map(bd.schottky_rep(3, 3), 2)
    rep = bd.triple_boundedness_report(sample)
    return {"count": rep["windows"], "failures": 0 if rep["pass"] else 1,
            "min_margin": rep["min_margin"]}


def _check_anosov(cfg, rng):
    rep = bd.anosov_contraction_report(bd.schottky_rep(3, 2), 5,
                                       check_positivity=False)
    predicted = rep["mobius_prediction"]
    ok = rep["pass"] and abs(rep["rate"] - predicted) <= 0.1 * abs(predicted)
    count = sum(len(v["depths"]) for v in rep["per_generator"].values())
    return {"count": count, "failures": 0 if ok else 1,
            "rate": rep["rate"], "predicted": predicted}


def _check_equivariance(cfg, rng):
    rep = bd.equivariance_check(bd.schottky_rep(3, 3), 4)
    return {"count": rep["checks"], "failures": 0 if rep["pass"] else 1,
            "worst": rep["worst"]}


# ---------------------------------------------------------------------------
# Bruhat suite: cells, the order, involutions, and generator scans.


def _check_bruhat_roundtrip(cfg, rng):
    fails = 0
    for _ in range(cfg.trials):
        w = tuple(rng.sample(range(1, cfg.n + 1), cfg.n))
        g = la.mat_mul(
            la.mat_mul(_unit_upper(rng, cfg.n), weyl.permutation_matrix(w)),
            _unit_upper(rng, cfg.n))
        if weyl.bruhat_cell(g).perm != w:
            fails += 1
    return {"count": cfg.trials, "failures": fails}


def _simple_perm(n, i):
    return tuple(i + 1 if x == i else i if x == i + 1 else x
                 for x in range(1, n + 1))


def _subword_ideal(w):
    # reversed bubble-sort word of w, then all products of its subwords
    n = len(w)
    w = list(w)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i + 1)
                changed = True
    word.reverse()
    ideal = set()
    for mask in range(1 << len(word)):
        p = weyl.identity_perm(n)
        for k, letter in enumerate(word):
            if mask >> k & 1:
                p = weyl.perm_mul(p, _simple_perm(n, letter))
        ideal.add(p)
    return ideal


def _check_bruhat_oracle(cfg, rng):
    checked = fails = 0
    for n in (3, 4):
        perms = list(permutations(range(1, n + 1)))
        ideals = {w: _subword_ideal(w) for w in perms}
        for u in perms:
            for w in perms:
                checked += 1
                got = weyl.bruhat_leq(weyl.CellLabel(u), weyl.CellLabel(w))
                if got != (u in ideals[w]):
                    fails += 1
    return {"count": checked, "failures": fails}


def _check_involutions(cfg, rng):
    checked = fails = 0
    for n in range(2, 8):
        rep = weyl.check_involution_lemma(n)
        checked += rep["checked"]
        fails += 0 if rep["pass"] else 1
    return {"count": checked, "failures": fails}


def _check_scans(cfg, rng):
    m = la.mat(((Fraction(1), Fraction(1), Fraction(0)),
                (Fraction(1), Fraction(2), Fraction(1)),
                (Fraction(0), Fraction(1), Fraction(2))))
    d = la.mat(((Fraction(2), Fraction(0), Fraction(0)),
                (Fraction(0), Fraction(1), Fraction(0)),
                (Fraction(0), Fraction(0), Fraction(1, 2))))
    g = la.mat_mul(la.mat_mul(m, d), la.inverse(m))
    semisimple = weyl.transversality_scan([g], depth=3)
    ok1 = (semisimple.witness is not None
           and weyl.bruhat_cell(semisimple.witness).perm == weyl.w0_perm(3))
    unipotents = [
        la.mat(((Fraction(1), Fraction(1), Fraction(0)),
                (Fraction(0), Fraction(1), Fraction(0)),
                (Fraction(0), Fraction(0), Fraction(1)))),
        la.mat(((Fraction(1), Fraction(0), Fraction(0)),
                (Fraction(0), Fraction(1), Fraction(2)),
                (Fraction(0), Fraction(0), Fraction(1)))),
    ]
    borel = weyl.transversality_scan(unipotents, depth=3)
    ok2 = (borel.witness is None
           and borel.dominating_cell.perm == weyl.identity_perm(3))
    return {"count": semisimple.samples_checked + borel.samples_checked,
            "failures": (0 if ok1 else 1) + (0 if ok2 else 1)}


# ---------------------------------------------------------------------------
# The runner.


_SUITES = {
    "combinatorial": (
        ("semigroup-closure", _check_semigroup_closure),
        ("semigroup-torus-invariance", _check_torus_invariance),
        ("semigroup-salience", _check_salience),
        ("cone-roundtrip", _check_cone_roundtrip),
        ("cone-injective", _check_cone_injective),
        ("diamond-certificate", _check_diamond_certificate),
        ("diamond-opposite", _check_diamond_opposite),
        ("diamond-nesting", _check_diamond_nesting),
        ("config-triples", _check_positive_triples),
        ("config-dihedral", _check_dihedral),
        ("config-necklace", _check_necklace),
        ("config-exclusion", _check_exclusion),
        ("config-inclusion", _check_inclusion),
        ("projective-line-oracle", _check_p1_oracle),
    ),
    "circles": (
        ("circle-triples", _check_circle_triples),
        ("circle-arc-membership", _check_circle_arcs),
        ("circle-tuples-exhaustive", _check_circle_tuples),
        ("circle-proximality", _check_proximality),
        ("limit-two-sided", _check_limits),
    ),
    "metrics": (
        ("tripod-metric-axioms", _check_tripod_axioms),
        ("tripod-completeness", _check_completeness),
        ("tripod-norm-zero-on-circles", _check_norm_zero),
        ("tripod-norm-grid", _check_norm_grid),
        ("contraction-rates", _check_contraction),
        ("corner-contraction", _check_corner),
    ),
    "boundary": (
        ("boundary-sample-positive", _check_boundary_positive),
        ("boundary-boundedness", _check_boundedness),
        ("anosov-decay", _check_anosov),
        ("boundary-equivariance", _check_equivariance),
    ),
    "bruhat": (
        ("bruhat-cell-roundtrip", _check_bruhat_roundtrip),
        ("bruhat-order-oracle", _check_bruhat_oracle),
        ("involution-lemma", _check_involutions),
        ("transversality-scan", _check_scans),
    ),
}


def _run_check(part: str, prop: str, check, cfg: SuiteConfig) -> dict:
    row = {"suite": part, "property": prop}
    if cfg.trials == 0:
        row.update({"count": 0, "failures": 0, "pass": True})
        return row
    # string seeding is stable across processes, unlike hash-based seeds
    rng = random.Random(f"{cfg.seed}:{prop}")
    try:
        out = dict(check(cfg, rng))
        out["pass"] = out["failures"] == 0
    except PoslabError as exc:
        out = {"count": 0, "failures": 1, "pass": False,
               "error": f"{type(exc).__name__}: {exc}"}
    row.update(out)
    return row


def run_suite(name: str, cfg: SuiteConfig | None = None) -> dict:
    """Run one named suite (or all of them) and return the JSON report."""
    cfg = cfg if cfg is not None else SuiteConfig()
    if name == "all":
        parts = SUITE_NAMES
    elif name in _SUITES:
        parts = (name,)
    else:
        raise UnknownSuite(
            f"unknown suite {name!r}; choose from {('all',) + SUITE_NAMES}")
    rows = [_run_check(part, prop, check, cfg)
            for part in parts for prop, check in _SUITES[part]]
    return {
        "schema": SCHEMA,
        "suite": name,
        "config": {"n": cfg.n, "trials": cfg.trials, "seed": cfg.seed,
                   "mode": cfg.mode, "tol": cfg.tol},
        "properties": rows,
        "pass": all(r["pass"] for r in rows),
    }
