"""Cyclically ordered boundary samples and free-group dynamics.

A boundary sample is a finite positive map from exact rational turns on
the circle to flags.  Limits of monotone subsequences extend the map;
Schottky pairs give dense equivariant samples whose nested-cylinder
diameters decay geometrically.

Projective parameters are placed on the circle by the turn chart
t -> (t/(1+|t|) + 1)/2 with infinity at turn 0.  The chart is a
monotone bijection, so cyclic order of slopes is cyclic order of turns.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import circles as ci
from . import configurations as cf
from . import flags as fl
from . import linalg as la
from . import semigroup as sg
from .errors import (
    NotCauchyAtDepth,
    NotInDiamond,
    PingPongViolated,
    PoslabError,
    PositivityFailed,
)

CAUCHY_TOL = 1e-8
CAUCHY_DEPTH = 60
SUBSAMPLE_CAP = 5000
EXHAUSTIVE_LIMIT = 14


def turn_of(p) -> Fraction:
    """Exact rational turn of a projective parameter."""
    q = p if isinstance(p, ci.CirclePoint) else ci.circle_point(p)
    if q.y == 0:
        return Fraction(0)
    t = Fraction(q.x) / Fraction(q.y)
    return (t / (1 + abs(t)) + 1) / 2


def point_at_turn(turn) -> ci.CirclePoint:
    turn = Fraction(turn) % 1
    if turn == 0:
        return ci.INFINITY
    v = 2 * turn - 1
    return ci.circle_point(v / (1 - v) if v >= 0 else v / (1 + v))


@dataclass(frozen=True)
class CyclicSample:
    """Angle-sorted pairs (turn, flag); rotation changes nothing since
    the constructor re-sorts."""

    entries: tuple

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def angles(self) -> tuple:
        return tuple(a for a, _ in self.entries)

    @property
    def flags(self) -> tuple:
        return tuple(f for _, f in self.entries)


def cyclic_sample(pairs) -> CyclicSample:
    entries = tuple(sorted(((Fraction(a) % 1, f) for a, f in pairs),
                           key=lambda e: e[0]))
    angles = [a for a, _ in entries]
    if len(set(angles)) != len(angles):
        raise ValueError("sample angles must be pairwise distinct")
    return CyclicSample(entries=entries)


def _index_tuples(k: int, size: int, rng) -> list:
    if k <= EXHAUSTIVE_LIMIT or math.comb(k, size) <= SUBSAMPLE_CAP:
        return list(combinations(range(k), size))
    seen = set()
    while len(seen) < SUBSAMPLE_CAP:
        seen.add(tuple(sorted(rng.sample(range(k), size))))
    return sorted(seen)


def _rationalized(f: fl.Flag) -> fl.Flag:
    # Fraction(float) is the exact binary value, so the rationalized flag
    # has exactly the minors the float flag tried to sign.
    if f.mode == fl.EXACT:
        return f
    return fl.flag(tuple(tuple(Fraction(x) for x in row) for row in f.basis))


def _triple_ok(flags) -> bool:
    try:
        return cf.is_positive_triple(*flags)
    except PoslabError:
        return cf.is_positive_triple(*(_rationalized(f) for f in flags))


def _quad_ok(flags) -> bool:
    try:
        return cf.is_positive_quadruple(*flags)
    except PoslabError:
        return cf.is_positive_quadruple(*(_rationalized(f) for f in flags))


def positive_map_check(s: CyclicSample, *, seed: int = 0):
    """True when every cyclically ordered triple and quadruple of the
    sample is positive; otherwise the first failing angle tuple.

    Certificate minors shrink like products of point separations, so on
    tight samples they can fall inside the float sign tolerance even when
    every pairwise margin is healthy; ambiguous tuples are resigned
    exactly on rationalized approximants.
    """
    k = s.size
    if k < 3:
        raise ValueError("positivity needs at least 3 sample points")
    flags = s.flags
    angles = s.angles
    rng = random.Random(seed)
    for idx in _index_tuples(k, 3, rng):
        if not _triple_ok([flags[i] for i in idx]):
            return tuple(angles[i] for i in idx)
    if k >= 4:
        for idx in _index_tuples(k, 4, rng):
            if not _quad_ok([flags[i] for i in idx]):
                return tuple(angles[i] for i in idx)
    return True


def triples_suffice_check(s: CyclicSample, *, spacing: float = 1e-2) -> bool:
    """With fine spacing and all triples positive, quadruples follow;
    this verifies the implication on a concrete sample."""
    angles = s.angles
    if s.size >= 2:
        gaps = [angles[i + 1] - angles[i] for i in range(s.size - 1)]
        if any(g > spacing for g in gaps):
            raise ValueError("sample spacing is too coarse")
    flags = s.flags
    rng = random.Random(0)
    for idx in _index_tuples(s.size, 3, rng):
        if not _triple_ok([flags[i] for i in idx]):
            return False
    if s.size < 4:
        return True
    return all(
        _quad_ok([flags[i] for i in idx])
        for idx in _index_tuples(s.size, 4, rng)
    )


# ---------------------------------------------------------------------------
# One-sided limits.


def _in_closed_diamond(d: sg.Diamond, x: fl.Flag, slack: float = 1e-14):
    frame = fl.normalize_pair(d.a, d.b)
    u = sg.conjugate_by_signs(
        sg.unipotent_coordinate(frame, x),
        sg._actual_eps(d.sign_class, d.side, x.n))
    return all(float(m) >= -slack for m in sg.eligible_minors(u))


def left_right_limits(s: CyclicSample, theta, side: str, *,
                      tol: float = CAUCHY_TOL,
                      depth: int = CAUCHY_DEPTH) -> fl.Flag:
    """Limit flag of the sample along a monotone approach to `theta`.

    The approach uses the half circle on the requested side, nearest
    points last; once successive flags come within `tol` and stay there,
    the nearest flag is the limit, and it must land in the closed
    diamond spanned by the farthest approach point and the nearest point
    across `theta`.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    theta = Fraction(theta) % 1
    here, across = [], []
    for a, f in s.entries:
        gap = (theta - a) % 1 if side == "left" else (a - theta) % 1
        if gap == 0:
            continue
        if gap < Fraction(1, 2):
            here.append((gap, a, f))
        else:
            across.append((1 - gap, a, f))
    if len(here) < 3 or not across:
        raise ValueError("no straddling monotone approach to theta")
    here.sort(reverse=True)
    far_flag = here[0][2]
    other_flag = min(across)[2]
    tail = [f for _, _, f in here[1:]]
    if len(tail) > depth:
        tail = tail[-depth:]
    steps = [fl.flag_distance(p, c) for p, c in zip(tail, tail[1:])]
    hit = next((i for i, r in enumerate(steps) if r < tol), None)
    if hit is None or any(r >= tol for r in steps[hit:]):
        residual = steps[-1] if hit is None else max(steps[hit:])
        raise NotCauchyAtDepth(
            f"residual {residual} after {len(tail)} terms")
    limit = tail[-1]
    _assert_in_straddling_diamond(far_flag, other_flag, tail, limit)
    return limit


def _assert_in_straddling_diamond(far_flag, other_flag, tail, limit):
    # Corners belong to the closed diamond, so a tail that ends on one
    # (constant tails do) passes without a witness.
    if min(fl.flag_distance(limit, far_flag),
           fl.flag_distance(limit, other_flag)) == 0:
        return
    for witness in tail:
        try:
            d = sg.diamond_of(far_flag, other_flag, witness)
        except PoslabError:
            continue
        try:
            inside = _in_closed_diamond(d, limit)
        except PoslabError:
            # not signable against a corner: closure point iff next to it
            inside = min(fl.flag_distance(limit, far_flag),
                         fl.flag_distance(limit, other_flag)) < 1e-8
        if not inside:
            raise NotInDiamond("limit left the straddling closed diamond")
        return


# ---------------------------------------------------------------------------
# Schottky pairs.  Arcs are counterclockwise endpoint pairs; all the
# ping-pong certificates reduce to exact turn comparisons because a
# positive-determinant 2x2 matrix preserves the cyclic order.


@dataclass(frozen=True)
class Arc:
    start: ci.CirclePoint
    end: ci.CirclePoint

    @property
    def turns(self):
        lo = turn_of(self.start)
        width = (turn_of(self.end) - lo) % 1
        return lo, width

    def contains(self, turn, strict: bool = False) -> bool:
        lo, width = self.turns
        x = (Fraction(turn) - lo) % 1
        return 0 < x < width if strict else x <= width


def _arc_image(g2: la.Mat, arc: Arc) -> Arc:
    return Arc(start=ci.mobius(g2, arc.start), end=ci.mobius(g2, arc.end))


def _arcs_disjoint(p: Arc, q: Arc) -> bool:
    return not (
        p.contains(turn_of(q.start)) or p.contains(turn_of(q.end))
        or q.contains(turn_of(p.start)) or q.contains(turn_of(p.end))
    )


def _maps_complement_inside(g2: la.Mat, rep: Arc, att: Arc) -> bool:
    image = _arc_image(g2, Arc(start=rep.end, end=rep.start))
    lo, width = att.turns
    x1 = (turn_of(image.start) - lo) % 1
    x2 = (turn_of(image.end) - lo) % 1
    return 0 < x1 <= x2 < width


@dataclass(frozen=True)
class SchottkyRep:
    """A certified ping-pong pair and its symmetric-power image."""

    gens: tuple
    n: int
    image_gens: tuple
    intervals: dict
    lam: Fraction
    axis: Fraction

    def letter(self, c: str) -> la.Mat:
        a, b = self.gens
        return {"a": a, "A": la.inverse(a), "b": b,
                "B": la.inverse(b)}[c]

    def image_letter(self, c: str) -> la.Mat:
        a, b = self.image_gens
        return {"a": a, "A": la.inverse(a), "b": b,
                "B": la.inverse(b)}[c]


_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def schottky_rep(lam, n: int, axis=1) -> SchottkyRep:
    """Ping-pong pair: a diagonal generator and its conjugate whose
    axis ends at the given slope.

    The interval family pairs a repelling half-slope s with the
    attracting bound lam^2 s (margined); a deterministic sweep over s
    finds exactly certified intervals or reports failure.
    """
    lam = Fraction(lam)
    axis = Fraction(axis)
    if lam <= 1:
        raise PingPongViolated("generator is not proximal")
    if axis == 0:
        raise PingPongViolated("conjugate axis collapses onto the first")
    a = la.mat([[lam, Fraction(0)], [Fraction(0), 1 / lam]])
    r = la.mat([[axis, Fraction(-1)], [Fraction(1), axis]])
    b = la.mat_mul(r, la.mat_mul(a, la.inverse(r)))
    candidates = []
    for j in range(20):
        candidates.extend([Fraction(1, 2 * 2 ** j), Fraction(1, 3 * 2 ** j)])
    for s in candidates:
        cap = lam * lam * s * Fraction(15, 16)
        rep_a = Arc(start=ci.circle_point(-s), end=ci.circle_point(s))
        att_a = Arc(start=ci.circle_point(cap), end=ci.circle_point(-cap))
        arcs = {
            "a": att_a,
            "A": rep_a,
            "b": _arc_image(r, att_a),
            "B": _arc_image(r, rep_a),
        }
        if not all(_arcs_disjoint(p, q)
                   for p, q in combinations(arcs.values(), 2)):
            continue
        letters = {"a": a, "A": la.inverse(a), "b": b, "B": la.inverse(b)}
        if all(
            _maps_complement_inside(g2, arcs[_INVERSE[c]], arcs[c])
            for c, g2 in letters.items()
        ):
            return SchottkyRep(
                gens=(a, b), n=n,
                image_gens=(ci.sym_power(a, n), ci.sym_power(b, n)),
                intervals={c: arc.turns for c, arc in arcs.items()},
                lam=lam, axis=axis)
    raise PingPongViolated("no interval width certifies the pair")


def reduced_words(max_len: int):
    """All nonempty reduced words up to the length, sorted."""
    out = []
    frontier = [""]
    for _ in range(max_len):
        grown = []
        for w in frontier:
            for c in "aAbB":
                if w and _INVERSE[c] == w[-1]:
                    continue
                grown.append(w + c)
        out.extend(grown)
        frontier = grown
    return tuple(sorted(out, key=lambda w: (len(w), w)))


def _primitive_root(word: str) -> str:
    """The primitive root of a reduced word: writing w = c u^k c^-1 with
    the core cyclically reduced and u primitive, this is c u c^-1."""
    i, j = 0, len(word)
    while j - i >= 2 and word[i] == _INVERSE[word[j - 1]]:
        i += 1
        j -= 1
    core = word[i:j]
    k = len(core)
    d = next(d for d in range(1, k + 1)
             if k % d == 0 and core[:d] * (k // d) == core)
    return word[:i] + core[:d] + word[j:]


def _is_primitive(word: str) -> bool:
    return _primitive_root(word) == word


def word_matrix(rep: SchottkyRep, word: str, image: bool = False) -> la.Mat:
    pick = rep.image_letter if image else rep.letter
    m = la.identity(rep.n if image else 2)
    for c in word:
        m = la.mat_mul(m, pick(c))
    return m


def _attracting_flag(m: la.Mat, tol: float = 1e-12,
                     max_iter: int = 10 ** 4) -> fl.Flag:
    """Full attracting flag by orthogonal iteration with a final
    Rayleigh-Ritz rotation onto the modulus-ordered eigenbasis."""
    A = la.to_float(m)
    n = len(m)
    q, _ = np.linalg.qr(np.ones((n, n)) + np.eye(n))
    last = None
    for _ in range(max_iter):
        q, _ = np.linalg.qr(A @ q)
        if last is not None:
            drift = 0.0
            for k in range(1, n):
                pk = q[:, :k] @ q[:, :k].T
                pl = last[:, :k] @ last[:, :k].T
                drift = max(drift, float(np.linalg.norm(pk - pl, 2)))
            if drift < tol:
                break
        last = q
    h = q.T @ A @ q
    evals, vecs = np.linalg.eig(h)
    order = np.argsort(-np.abs(evals))
    basis = (q @ np.real(vecs))[:, order]
    return fl.flag_from_column_list(
        [tuple(float(x) for x in basis[:, j]) for j in range(n)])


SNAP_TOL = 1e-9


def _word_table(rep: SchottkyRep, max_len: int) -> dict:
    """word -> (attracting point, attracting flag) for reduced words.

    The iterated flag of a word lies on the invariant circle of the
    symmetric-power image, so it is snapped to the exact osculating flag
    at the rationalized fixed point; the snap distance certifies the
    iteration.  Nearby fixed points of long words separate like products
    of letter contractions, which float flags cannot resolve but the
    exact snapped flags can."""
    ver = ci.veronese_circle(rep.n)
    table = {}
    for w in reduced_words(max_len):
        m2 = word_matrix(rep, w)
        if not ci.is_hyperbolic(m2):
            raise PingPongViolated(f"word {w} is not hyperbolic")
        point = ci.attracting_point(m2)
        exact_point = point_at_turn(turn_of(point))
        iterated = _attracting_flag(word_matrix(rep, w, image=True))
        snapped = ver.at(exact_point)
        drift = fl.flag_distance(iterated, snapped)
        if drift > SNAP_TOL:
            raise ValueError(
                f"attracting flag of {w!r} strays {drift} from the "
                "invariant circle")
        table[w] = (point, snapped)
    return table


def schottky_boundary_map(rep: SchottkyRep, max_len: int) -> CyclicSample:
    """Attracting fixed points of all primitive reduced words up to the
    length, mapped to the attracting flags of their symmetric-power
    images.

    c u^k c^-1 shares its fixed point with c u c^-1, so only words equal
    to their primitive root contribute; those have pairwise distinct
    fixed points and any numeric collision is a hard error downstream."""
    table = _word_table(rep, max_len)
    pairs = [
        (turn_of(point), flag)
        for w, (point, flag) in table.items() if _is_primitive(w)
    ]
    return cyclic_sample(pairs)


def equivariance_check(rep: SchottkyRep, max_len: int,
                       tol: float = 1e-9) -> dict:
    """Spot checks that the flag of g w g^-1 is the symmetric-power
    image of the flag of w, over all conjugations staying in the table."""
    table = _word_table(rep, max_len)
    checks = 0
    worst = 0.0
    for w in sorted(table):
        for g in "aAbB":
            conj = g + w + _INVERSE[g]
            if conj not in table:
                continue
            rho = ci.sym_power(word_matrix(rep, g), rep.n)
            moved = fl.apply_matrix(rho, table[w][1])
            worst = max(worst, fl.flag_distance(table[conj][1], moved))
            checks += 1
    return {"checks": checks, "worst": worst, "tol": tol,
            "pass": checks > 0 and worst <= tol}


# ---------------------------------------------------------------------------
# Boundedness and contraction reports.


def _transversality_margin(a: fl.Flag, b: fl.Flag) -> float:
    A = la.to_float(a.basis)
    B = la.to_float(b.basis)
    A = A / np.linalg.norm(A, axis=0)
    B = B / np.linalg.norm(B, axis=0)
    n = a.n
    worst = math.inf
    for i in range(1, n):
        block = np.concatenate([A[:, :i], B[:, :n - i]], axis=1)
        worst = min(worst, abs(float(np.linalg.det(block))))
    return worst


def triple_boundedness_report(s: CyclicSample, windows: int | None = None,
                              floor: float = 1e-10) -> dict:
    """Minimal transversality determinant over sliding separated
    triples; a positive uniform floor is the boundedness surrogate."""
    k = s.size
    if k < 3:
        raise ValueError("boundedness needs at least 3 sample points")
    flags = s.flags
    gap = max(1, k // 3)
    count = min(windows if windows is not None else k, k)
    margins = []
    for j in range(count):
        tri = (flags[j % k], flags[(j + gap) % k], flags[(j + 2 * gap) % k])
        margins.append(
            min(_transversality_margin(p, q)
                for p, q in combinations(tri, 2)))
    observed = min(margins)
    return {
        "windows": count,
        "margins": margins,
        "min_margin": observed,
        "floor": floor,
        "pass": observed >= floor,
    }


def _cylinder_diameter(flags) -> float:
    if len(flags) > 120:
        stride = math.ceil(len(flags) / 120)
        flags = flags[::stride]
    return max(
        (fl.flag_distance(p, q) for p, q in combinations(flags, 2)),
        default=0.0)


def anosov_contraction_report(rep: SchottkyRep, max_len: int, *,
                              check_positivity: bool = True) -> dict:
    """Diameters of nested one-generator cylinders and their fitted
    log-linear decay rate per letter."""
    table = _word_table(rep, max_len)
    if check_positivity:
        sample = cyclic_sample(
            (turn_of(point), flag)
            for w, (point, flag) in table.items() if _is_primitive(w))
        verdict = positive_map_check(sample)
        if verdict is not True:
            raise PositivityFailed(f"sample fails positivity at {verdict}")
    per_gen = {}
    rates = []
    for g in ("a", "b"):
        depths = []
        diams = []
        for m in range(1, max_len):
            prefix = g * m
            inside = [flag for w, (_, flag) in table.items()
                      if w.startswith(prefix) and len(w) > m]
            if len(inside) < 2:
                break
            depths.append(m)
            diams.append(_cylinder_diameter(inside))
        if len(depths) < 2:
            raise ValueError("depth too small to fit a decay rate")
        rate = float(np.polyfit(depths, np.log(diams), 1)[0])
        rates.append(rate)
        per_gen[g] = {
            "depths": depths,
            "diameters": diams,
            "monotone": all(b < a for a, b in zip(diams, diams[1:])),
            "rate": rate,
        }
    overall = sum(rates) / len(rates)
    monotone = all(per_gen[g]["monotone"] for g in per_gen)
    return {
        "per_generator": per_gen,
        "rate": overall,
        "mobius_prediction": -2.0 * math.log(float(rep.lam)),
        "monotone": monotone,
        "pass": overall < -0.05 and monotone,
    }


# ---------------------------------------------------------------------------
# JSON round trips for the CLI.


def sample_to_json(s: CyclicSample) -> dict:
    return {
        "entries": [[fl.scalar_to_json(a), fl.flag_to_json(f)]
                    for a, f in s.entries]
    }


def sample_from_json(obj: dict) -> CyclicSample:
    return cyclic_sample(
        (fl.scalar_from_json(a), fl.flag_from_json(f))
        for a, f in obj["entries"])


def rep_to_json(rep: SchottkyRep) -> dict:
    return {
        "lam": fl.scalar_to_json(rep.lam),
        "axis": fl.scalar_to_json(rep.axis),
        "n": rep.n,
    }


def rep_from_json(obj: dict) -> SchottkyRep:
    return schottky_rep(
        fl.scalar_from_json(obj["lam"]), int(obj["n"]),
        fl.scalar_from_json(obj["axis"]))
