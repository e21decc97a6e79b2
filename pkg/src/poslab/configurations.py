"""Positive triples, quadruples, and cyclic configurations of flags.

A triple is positive when each point sits in a diamond whose extremities
are the other two.  A quadruple (a, x, b, y) is positive when all four
subtriples are and the certificates of x and y over (a, b) name the same
sign class from opposite sides.  Longer configurations reduce to their
cyclically ordered subquadruples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import flags as fl
from . import linalg as la
from . import semigroup as sg
from .errors import NotInDiamond, NotTransverse

DIHEDRAL_4 = (
    (0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2),
    (3, 2, 1, 0), (2, 1, 0, 3), (1, 0, 3, 2), (0, 3, 2, 1),
)


def is_positive_triple(a: fl.Flag, b: fl.Flag, c: fl.Flag) -> bool:
    pts = (a, b, c)
    for x, y in combinations(pts, 2):
        if not fl.is_transverse(x, y):
            return False
    for i in range(3):
        x, y, z = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        if sg.component_certificate(y, z, x) is None:
            return False
    return True


def is_positive_quadruple(a: fl.Flag, x: fl.Flag, b: fl.Flag,
                          y: fl.Flag) -> bool:
    pts = (a, x, b, y)
    for p, q in combinations(pts, 2):
        if not fl.is_transverse(p, q):
            return False
    for skip in range(4):
        tri = [p for i, p in enumerate(pts) if i != skip]
        if not is_positive_triple(*tri):
            return False
    cx = sg.component_certificate(a, b, x)
    cy = sg.component_certificate(a, b, y)
    if cx is None or cy is None:
        return False
    return cx[0] == cy[0] and cx[1] != cy[1]


@dataclass
class Configuration:
    """A cyclically ordered tuple of flags, p >= 3."""

    points: tuple
    certified_diamonds: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        self.points = tuple(self.points)
        if len(self.points) < 3:
            raise ValueError("configuration needs at least 3 points")

    @property
    def p(self) -> int:
        return len(self.points)


def _forward_witness(points, i, j):
    """First point strictly between i and j walking forward, or None."""
    p = len(points)
    k = (i + 1) % p
    if k == j:
        return None
    return points[k]


def _certify(cfg: Configuration):
    diamonds = {}
    pts = cfg.points
    for i in range(cfg.p):
        for j in range(cfg.p):
            if i == j:
                continue
            w = _forward_witness(pts, i, j)
            if w is not None:
                diamonds[(i, j)] = sg.diamond_of(pts[i], pts[j], w)
    cfg.certified_diamonds = diamonds


def is_positive_configuration(cfg: Configuration) -> bool:
    pts = cfg.points
    if cfg.p == 3:
        ok = is_positive_triple(*pts)
    else:
        ok = all(
            is_positive_quadruple(pts[i], pts[j], pts[k], pts[l])
            for i, j, k, l in combinations(range(cfg.p), 4)
        )
    if ok:
        _certify(cfg)
    return ok


def dihedral_invariance_report(quad) -> dict:
    quad = tuple(quad)
    if len(quad) != 4:
        raise ValueError("quadruple expected")
    results = {
        perm: is_positive_quadruple(*(quad[i] for i in perm))
        for perm in permutations(range(4))
    }
    dihedral = {p: results[p] for p in DIHEDRAL_4}
    others = {p: results[p] for p in results if p not in DIHEDRAL_4}
    vals = set(dihedral.values())
    return {
        "base_positive": results[(0, 1, 2, 3)],
        "dihedral_agree": len(vals) == 1,
        "dihedral_positive_count": sum(dihedral.values()),
        "other_positive_count": sum(others.values()),
        "pass": len(vals) == 1,
    }


def necklace_check(a: fl.Flag, b: fl.Flag, c: fl.Flag, rng,
                   trials: int) -> bool:
    """Sampled necklace property: one point from each edge diamond of a
    positive triple always forms a positive triple.

    The bead between two of the points is the diamond over that pair
    away from the third, the same diamond the insertion builder uses;
    picking the diamonds around the points instead admits
    counterexamples at n >= 3.
    """
    edge_bc = sg.opposite(sg.diamond_of(b, c, a))
    edge_ca = sg.opposite(sg.diamond_of(c, a, b))
    edge_ab = sg.opposite(sg.diamond_of(a, b, c))
    for _ in range(trials):
        alpha = sg.sample_diamond(edge_bc, rng, 1)[0]
        beta = sg.sample_diamond(edge_ca, rng, 1)[0]
        gamma = sg.sample_diamond(edge_ab, rng, 1)[0]
        if not is_positive_triple(alpha, beta, gamma):
            return False
    return True


def _side_sample(frame, rng, n, side):
    u = sg.psi(sg.random_cone_params(rng, n)).entries
    if side == sg.MINUS:
        u = la.inverse(u)
    return sg.point_from_unipotent(frame, u)


def exclusion_suite(rng, trials: int, n: int = 3) -> dict:
    """Sampled exclusion laws: swapping the middle pair of a positive
    quadruple breaks positivity, and the three cyclic quadruples built
    from points over a common pair are never all positive."""
    a = fl.standard_flag(n)
    b = fl.antistandard_flag(n)
    frame = fl.normalize_pair(a, b)
    swap_failures = 0
    cycle_failures = 0
    sanity_failures = 0
    cycle_counts = {0: 0, 1: 0, 2: 0, 3: 0}
    for _ in range(trials):
        x = _side_sample(frame, rng, n, sg.PLUS)
        y = _side_sample(frame, rng, n, sg.MINUS)
        if not is_positive_quadruple(a, x, b, y):
            sanity_failures += 1
            continue
        if is_positive_quadruple(a, b, x, y):
            swap_failures += 1
        xs = [_side_sample(frame, rng, n, rng.choice((sg.PLUS, sg.MINUS)))
              for _ in range(3)]
        wins = sum(
            bool(is_positive_quadruple(a, xs[i], b, xs[(i + 1) % 3]))
            for i in range(3)
        )
        cycle_counts[wins] += 1
        if wins == 3:
            cycle_failures += 1
    return {
        "trials": trials,
        "sanity_failures": sanity_failures,
        "swap_exclusion_failures": swap_failures,
        "cycle_exclusion_failures": cycle_failures,
        "cycle_positive_counts": {str(k): v for k, v in cycle_counts.items()},
        "pass": swap_failures == 0 and cycle_failures == 0
        and sanity_failures == 0,
    }


def _spiky_params(rng, n: int) -> sg.LusztigParams:
    # push some coordinates toward the cone boundary and the far interior
    t = []
    for _ in sg.canonical_word(n):
        r = rng.random()
        if r < 0.2:
            t.append(Fraction(1, 10**6))
        elif r < 0.4:
            t.append(Fraction(10**6))
        else:
            f = Fraction(rng.lognormvariate(0.0, 1.0)).limit_denominator(10**6)
            t.append(f if f > 0 else Fraction(1, 10**6))
    return sg.params(n, t)


def inclusion_check(a: fl.Flag, b: fl.Flag, c: fl.Flag, d: fl.Flag, rng,
                    trials: int) -> bool:
    """Sampled closure inclusion for a positive quadruple (a, b, c, d):
    points of the diamond over (b, c) away from d stay in the diamond
    over (a, d) around b, even with near-boundary parameters."""
    if not is_positive_quadruple(a, b, c, d):
        raise NotInDiamond("inclusion_check needs a positive quadruple")
    inner = sg.opposite(sg.diamond_of(b, c, d))
    outer = sg.diamond_of(a, d, b)
    n = a.n
    pts = sg.sample_diamond(inner, rng, trials,
                            params_fn=lambda r: _spiky_params(r, n))
    return all(sg.diamond_contains(outer, x) for x in pts)


def extend_configuration(points, rng, count: int = 1):
    """Grow a positive configuration by inserting diamond samples.

    Each step inserts between points[0] and points[1] a sample of the
    diamond over that pair away from points[2]; positivity is preserved.
    """
    pts = list(points)
    for _ in range(count):
        if not fl.is_transverse(pts[0], pts[1]):
            raise NotTransverse("cannot extend across a degenerate pair")
        gap = sg.opposite(sg.diamond_of(pts[0], pts[1], pts[2]))
        y = sg.sample_diamond(gap, rng, 1)[0]
        pts.insert(1, y)
    return tuple(pts)
