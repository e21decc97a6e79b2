"""Tripods and the diamond metric.

A tripod is a positive triple realized on a parametrized positive
circle.  The circle singles out two frames on the diamond between the
extremities, one per orientation; in each frame the diamond is the open
cone of factorization parameters and the middle point sits at the
all-ones vector.  Distances are chordal: Euclidean jointly in the two
parameter vectors.  The geodesic distance of the summed form is
sandwiched between max(d+, d-) and d+ + d-, so every inequality tested
here is stable under the replacement.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from scipy.optimize import minimize as _nm_minimize

from . import circles as ci
from . import configurations as cf
from . import flags as fl
from . import linalg as la
from . import semigroup as sg
from .errors import (
    DegenerateSlackSet,
    NestingNotCertified,
    NotInDiamond,
    NotTransverse,
    OptimizationDidNotConverge,
    PoslabError,
)

DIVERGENCE_THRESHOLD = 1e3


def _as_circle_point(s) -> ci.CirclePoint:
    if isinstance(s, ci.CirclePoint):
        return s
    return ci.circle_point(s)


def _mobius_through(a: ci.CirclePoint, b: ci.CirclePoint,
                    c: ci.CirclePoint) -> la.Mat:
    """2 by 2 matrix sending (infinity, 1, 0) to (a, b, c)."""
    m = la.mat([[a.x, c.x], [a.y, c.y]])
    w = la.mat_vec(la.inverse(m), (b.x, b.y))
    if w[0] == 0 or w[1] == 0:
        raise ValueError("circle parameters must be pairwise distinct")
    return la.mat(
        [[w[0] * a.x, w[1] * c.x], [w[0] * a.y, w[1] * c.y]]
    )


@dataclass(frozen=True)
class Tripod:
    """A positive triple on a stored parametrized circle.

    The frames re-parametrize the circle so that (minus, zero, plus)
    sit at (infinity, 1, 0); coordinates taken there inherit the
    all-ones normalization of the middle point.
    """

    minus: fl.Flag
    zero: fl.Flag
    plus: fl.Flag
    circle: ci.PositiveCircle
    s_minus: ci.CirclePoint
    s_zero: ci.CirclePoint
    s_plus: ci.CirclePoint

    @property
    def n(self) -> int:
        return self.circle.n

    def _window(self, a: ci.CirclePoint, b: ci.CirclePoint,
                c: ci.CirclePoint) -> la.Mat:
        two = _mobius_through(a, b, c)
        return la.mat_mul(self.circle.matrix, ci.sym_power(two, self.n))

    @cached_property
    def frame_plus(self) -> fl.TransversePairFrame:
        w = self._window(self.s_minus, self.s_zero, self.s_plus)
        return fl.TransversePairFrame(
            a=self.minus, b=self.plus, g=la.inverse(w), g_inv=w,
            sign_class=(1,) * (self.n - 1))

    @cached_property
    def frame_minus(self) -> fl.TransversePairFrame:
        w = self._window(self.s_plus, self.s_zero, self.s_minus)
        return fl.TransversePairFrame(
            a=self.plus, b=self.minus, g=la.inverse(w), g_inv=w,
            sign_class=(1,) * (self.n - 1))

    @cached_property
    def diamond(self) -> sg.Diamond:
        return sg.diamond_of(self.minus, self.plus, self.zero)


def tripod(circle: ci.PositiveCircle, s_minus, s_zero, s_plus) -> Tripod:
    """Tripod on `circle` at three distinct circle parameters."""
    pts = tuple(_as_circle_point(s) for s in (s_minus, s_zero, s_plus))
    flags = tuple(circle.at(p) for p in pts)
    if not cf.is_positive_triple(*flags):
        raise NotTransverse("tripod points must form a positive triple")
    return Tripod(minus=flags[0], zero=flags[1], plus=flags[2],
                  circle=circle, s_minus=pts[0], s_zero=pts[1],
                  s_plus=pts[2])


@lru_cache(maxsize=None)
def standard_tripod(n: int) -> Tripod:
    return tripod(ci.veronese_circle(n), None, 1, 0)


def reverse(tau: Tripod) -> Tripod:
    """Swap the extremities; the two frames trade places."""
    return Tripod(minus=tau.plus, zero=tau.zero, plus=tau.minus,
                  circle=tau.circle, s_minus=tau.s_plus,
                  s_zero=tau.s_zero, s_plus=tau.s_minus)


def transport(g, tau: Tripod) -> Tripod:
    """Image tripod under a group element or plain invertible matrix."""
    m = g.entries if isinstance(g, fl.GroupElement) else la.mat(g)
    circle = ci.PositiveCircle(
        n=tau.n, matrix=la.mat_mul(m, tau.circle.matrix))
    return Tripod(minus=fl.apply_matrix(m, tau.minus),
                  zero=fl.apply_matrix(m, tau.zero),
                  plus=fl.apply_matrix(m, tau.plus),
                  circle=circle, s_minus=tau.s_minus,
                  s_zero=tau.s_zero, s_plus=tau.s_plus)


# ---------------------------------------------------------------------------
# Coordinates and the chordal distance.


@dataclass(frozen=True)
class MetricSample:
    """A diamond point with its parameters in both tripod frames."""

    point: fl.Flag
    params_plus: sg.LusztigParams
    params_minus: sg.LusztigParams


def tripod_coordinates(tau: Tripod, p: fl.Flag) -> MetricSample:
    if not sg.diamond_contains(tau.diamond, p):
        raise NotInDiamond("point is outside the tripod diamond")
    plus = sg.factorize(sg.unipotent_coordinate(tau.frame_plus, p))
    minus = sg.factorize(sg.unipotent_coordinate(tau.frame_minus, p))
    return MetricSample(point=p, params_plus=plus, params_minus=minus)


def tripod_point(tau: Tripod, t) -> fl.Flag:
    """Point of the diamond with plus-frame parameters `t`."""
    p = sg.params(tau.n, tuple(t))
    return sg.point_from_unipotent(tau.frame_plus, sg.psi(p).entries)


def _euclid(s, t) -> float:
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(s, t)))


def tripod_distance(tau: Tripod, p: fl.Flag, q: fl.Flag):
    """(d_plus, d_minus, chordal) between two points of the diamond."""
    cp = tripod_coordinates(tau, p)
    cq = tripod_coordinates(tau, q)
    d_plus = _euclid(cp.params_plus.t, cq.params_plus.t)
    d_minus = _euclid(cp.params_minus.t, cq.params_minus.t)
    return d_plus, d_minus, math.hypot(d_plus, d_minus)


def completeness_probe(tau: Tripod, path) -> dict:
    """Chordal divergence along a path of diamond points.

    The path is flagged divergent when the distance to its start
    crosses DIVERGENCE_THRESHOLD and keeps growing from there on; the
    report carries the smallest positivity minor per step so the blowup
    can be read against the boundary approach.
    """
    samples = [tripod_coordinates(tau, p) for p in path]
    dists = []
    minors = []
    for smp in samples:
        d_plus = _euclid(samples[0].params_plus.t, smp.params_plus.t)
        d_minus = _euclid(samples[0].params_minus.t, smp.params_minus.t)
        dists.append(math.hypot(d_plus, d_minus))
        u = sg.unipotent_coordinate(tau.frame_plus, smp.point)
        minors.append(min(float(m) for m in sg.eligible_minors(u)))
    crossed = next(
        (i for i, d in enumerate(dists) if d > DIVERGENCE_THRESHOLD), None)
    divergent = crossed is not None and all(
        dists[i + 1] > dists[i] for i in range(crossed, len(dists) - 1))
    return {
        "distances": dists,
        "min_minors": minors,
        "threshold": DIVERGENCE_THRESHOLD,
        "divergent": divergent,
        "verdict": "diverges" if divergent else "interior",
    }


# ---------------------------------------------------------------------------
# The tripod norm K.


@lru_cache(maxsize=None)
def _h_matrix(n: int) -> la.Mat:
    ones = tuple(Fraction(1) for _ in sg.canonical_word(n))
    return sg.psi(sg.params(n, ones)).entries


@lru_cache(maxsize=None)
def _antidiag(n: int) -> la.Mat:
    return la.mat(
        [[Fraction(int(i + j == n - 1)) for j in range(n)] for i in range(n)]
    )


@dataclass(frozen=True)
class TripodNormResult:
    value: float
    minimizer: Tripod
    slack_set: tuple[Tripod, ...]
    converged: bool
    evaluations: int


class _NormProblem:
    """K(t) objective in the frame where the extremities are pinned.

    The middle point's coordinate is sign-conjugated into the positive
    semigroup, so candidate circles are the torus family over the pinned
    pair and the gauge pair (circle, position) collapses to the single
    vector mu = lambda * s0.
    """

    def __init__(self, x: fl.Flag, z: fl.Flag, y: fl.Flag):
        cert = sg.component_certificate(x, y, z)
        if cert is None:
            raise NotInDiamond("middle point is in no diamond over (x, y)")
        self.eps = sg._actual_eps(cert[0], cert[1], x.n)
        self.frame = fl.normalize_pair(x, y)
        u = sg.conjugate_by_signs(
            sg.unipotent_coordinate(self.frame, z), self.eps)
        self.n = len(u)
        self.base = la.mat_mul(u, _antidiag(self.n))
        h = _h_matrix(self.n)
        self.calibrated = tuple(
            u[i][i + 1] / h[i][i + 1] for i in range(self.n - 1))
        self.evals: list[tuple[float, tuple[float, ...]]] = []

    def params_at(self, mu):
        exact = all(la.is_exact_scalar(m) for m in mu)
        acc = Fraction(1) if exact else 1.0
        d = [acc] * self.n
        for i in range(self.n - 2, -1, -1):
            acc = mu[i] * acc
            d[i] = acc
        scaled = tuple(
            tuple(v / d[i] for v in row) for i, row in enumerate(self.base))
        t_plus = sg.factorize(
            sg._ucoord_over_antistandard(fl.flag(scaled))).t
        t_minus = sg.factorize(
            sg._ucoord_over_antistandard(fl.flag(tuple(reversed(scaled))))).t
        return t_plus, t_minus

    def value_at(self, mu) -> float:
        try:
            t_plus, t_minus = self.params_at(mu)
        except (PoslabError, ZeroDivisionError, OverflowError):
            return math.inf
        s = sum((float(t) - 1.0) ** 2 for t in t_plus)
        s += sum((float(t) - 1.0) ** 2 for t in t_minus)
        return math.sqrt(s)

    def objective(self, theta) -> float:
        if any(abs(v) > 50.0 for v in theta):
            return math.inf
        mu = tuple(
            math.exp(theta[i] + theta[-1]) for i in range(self.n - 1))
        value = self.value_at(mu)
        if math.isfinite(value):
            self.evals.append((value, mu))
        return value

    def build(self, mu) -> Tripod:
        """Real-space tripod for the gauge vector mu, zero pinned at 1."""
        scale = la.mat_mul(
            ci.delta_torus(tuple(mu)),
            la.mat([[self.eps[i] * Fraction(int(i == j)) for j in
                     range(self.n)] for i in range(self.n)]))
        circle = ci.PositiveCircle(
            n=self.n, matrix=la.mat_mul(self.frame.g_inv, scale))
        return tripod(circle, None, 1, 0)


def tripod_norm(x: fl.Flag, z: fl.Flag, y: fl.Flag, *, seed: int = 0,
                starts: int = 8, max_evals: int = 2000, tol: float = 1e-6,
                slack_rel: float = 1e-3,
                slack_abs: float = 1e-6) -> TripodNormResult:
    """Least chordal distance from z to the middle point of a tripod
    with extremities (x, y).

    Derivative-free multistart search in (log torus, log position); the
    first start is calibrated from the superdiagonal of z's coordinate
    and is an exact zero whenever z lies on a circle through the
    extremities.
    """
    if not cf.is_positive_triple(x, z, y):
        raise NotInDiamond("tripod norm needs a positive triple")
    prob = _NormProblem(x, z, y)
    if la.is_exact(prob.base):
        try:
            t_plus, t_minus = prob.params_at(prob.calibrated)
            if all(t == 1 for t in t_plus + t_minus):
                tau = prob.build(prob.calibrated)
                return TripodNormResult(value=0.0, minimizer=tau,
                                        slack_set=(tau,), converged=True,
                                        evaluations=1)
        except PoslabError:
            pass
    theta0 = [math.log(float(c)) for c in prob.calibrated] + [0.0]
    rng = random.Random(seed)
    start_points = [theta0]
    for _ in range(starts - 1):
        start_points.append([v + rng.uniform(-1.5, 1.5) for v in theta0])
    converged = False
    for point in start_points:
        res = _nm_minimize(
            prob.objective, point, method="Nelder-Mead",
            options={"maxfev": max_evals, "xatol": tol, "fatol": tol})
        converged = converged or bool(res.success)
    finite = [e for e in prob.evals if math.isfinite(e[0])]
    if not finite:
        raise OptimizationDidNotConverge("no feasible tripod was found")
    best_value, best_mu = min(finite, key=lambda e: e[0])
    cut = (1.0 + slack_rel) * best_value + slack_abs
    # near-minimizers, one representative per 1% cell of log-mu space
    cells: dict[tuple, tuple] = {}
    for value, mu in finite:
        if value <= cut:
            key = tuple(round(math.log(m), 2) for m in mu)
            if key not in cells or value < cells[key][0]:
                cells[key] = (value, mu)
    minimizer = prob.build(best_mu)
    slack = []
    for value, mu in sorted(cells.values())[:8]:
        try:
            slack.append(minimizer if mu == best_mu else prob.build(mu))
        except PoslabError:
            continue
    if not slack:
        slack = [minimizer]
    return TripodNormResult(value=best_value, minimizer=minimizer,
                            slack_set=tuple(slack), converged=converged,
                            evaluations=len(prob.evals))


# ---------------------------------------------------------------------------
# The diamond metric for general positive triples.


def _check_direction(v: la.Mat) -> la.Mat:
    vm = la.mat(v)
    n = len(vm)
    for i in range(n):
        for j in range(i + 1):
            if vm[i][j] != 0:
                raise ValueError("tangent vectors are strictly upper "
                                 "triangular perturbations")
    return vm


def _form_value(tau: Tripod, frame: fl.TransversePairFrame, u_p: la.Mat,
                vm: la.Mat, step: float) -> float:
    """Quadratic form of one tripod on the tangent vector `vm` at the
    point with coordinate `u_p` in the shared chart `frame`.

    The step is halved until both offset points are interior, so thin
    diamonds (deeply iterated tripods) stay differentiable.
    """
    scale = max(1.0, max(abs(float(x)) for row in u_p for x in row))
    h = step * scale
    for attempt in range(60):
        offsets = []
        try:
            for off in (h, -h):
                u2 = tuple(
                    tuple(float(u_p[i][j]) + off * float(vm[i][j])
                          for j in range(len(u_p))) for i in range(len(u_p)))
                offsets.append(
                    tripod_coordinates(tau, sg.point_from_unipotent(frame, u2)))
            break
        except PoslabError:
            if attempt == 59:
                raise
            h *= 0.5
    out = 0.0
    for hi, lo in ((offsets[0].params_plus.t, offsets[1].params_plus.t),
                   (offsets[0].params_minus.t, offsets[1].params_minus.t)):
        for a, b in zip(hi, lo):
            d = (float(a) - float(b)) / (2.0 * h)
            out += d * d
    return out


def diamond_metric_eval(x: fl.Flag, z: fl.Flag, y: fl.Flag, p: fl.Flag, v,
                        *, norm: TripodNormResult | None = None,
                        step: float = 1e-6, **norm_opts) -> float:
    """Averaged tripod form over the slack set of the triple (x, z, y).

    Jacobians of both factorization maps are taken by central finite
    differences with relative step `step`; tangent vectors live in the
    unipotent-coordinate chart of the pinned extremities.
    """
    vm = _check_direction(v)
    if not sg.diamond_contains(sg.diamond_of(x, y, z), p):
        raise NotInDiamond("evaluation point is outside the diamond")
    if norm is None:
        norm = tripod_norm(x, z, y, **norm_opts)
    frame = fl.normalize_pair(x, y)
    u_p = sg.unipotent_coordinate(frame, p)
    values = []
    for tau in norm.slack_set:
        try:
            values.append(_form_value(tau, frame, u_p, vm, step))
        except (PoslabError, ZeroDivisionError):
            continue
    if not values:
        raise DegenerateSlackSet("no slack tripod evaluated the form")
    return sum(values) / len(values)


# ---------------------------------------------------------------------------
# Contraction experiments.


def _random_direction(rng, n: int) -> la.Mat:
    return la.mat(
        [[rng.uniform(-1.0, 1.0) if j > i else 0.0 for j in range(n)]
         for i in range(n)]
    )


def contraction_experiment(gamma, tau0: Tripod, m_max: int = 5,
                           radius: float = 0.5, *, points: int = 4,
                           directions: int = 3, nesting_samples: int = 12,
                           step: float = 1e-6, seed: int = 0) -> dict:
    """Form-ratio decay along the iterated images of a tripod.

    k_m is the worst ratio g_tau0 / g_taum over sampled points near the
    m-th middle point and random tangent directions.  The ratio decays
    to zero exactly when the image diamonds shrink to a point; a gamma
    fixing the extremities keeps the diamond and fails the decay.
    """
    g = gamma.entries if isinstance(gamma, fl.GroupElement) else la.mat(gamma)
    rng = random.Random(seed)
    exact = la.is_exact(g) and tau0.zero.mode == fl.EXACT
    for q in sg.sample_diamond(tau0.diamond, rng, nesting_samples,
                               exact=exact):
        if not sg.diamond_contains(tau0.diamond, fl.apply_matrix(g, q)):
            raise NestingNotCertified("an image sample left the diamond")
    frame = fl.normalize_pair(tau0.minus, tau0.plus)
    length = len(sg.canonical_word(tau0.n))
    spread = min(0.4, radius / (2.0 * math.sqrt(2.0 * length)))
    # one battery reused at every depth, so each sample's ratio traces a
    # decaying curve and the max inherits the decay
    ts = [tuple(1.0 + rng.uniform(-spread, spread) for _ in range(length))
          for _ in range(points)]
    vs = [_random_direction(rng, tau0.n) for _ in range(directions)]
    ks = []
    acc = la.identity(tau0.n)
    for _ in range(m_max):
        acc = la.mat_mul(g, acc)
        tau_m = transport(acc, tau0)
        worst = 0.0
        for t in ts:
            p = tripod_point(tau_m, t)
            u_p = sg.unipotent_coordinate(frame, p)
            for vm in vs:
                g_base = _form_value(tau0, frame, u_p, vm, step)
                g_iter = _form_value(tau_m, frame, u_p, vm, step)
                if g_iter > 0.0:
                    worst = max(worst, g_base / g_iter)
        ks.append(worst)
    contracting = all(b < a for a, b in zip(ks, ks[1:])) and ks[-1] < 1.0
    return {"k": ks, "m_max": m_max, "radius": radius,
            "contracting": contracting}


def corner_contraction_probe(tripods, pilot, x0: fl.Flag, *,
                             probes: int = 20, tol: float = 1e-4,
                             seed: int = 0) -> dict:
    """Corner collapse: once one bounded parameter sequence lands at the
    moving extremity, every bounded sequence does.

    `tripods` collapse toward x0 on their plus side while the minus
    extremity stays put; `pilot` is the given parameter sequence whose
    images are checked first.  The battery draws `probes` random
    convergent sequences and reports final distances to x0.
    """
    far = tripods[0].minus
    if not fl.is_transverse(x0, far):
        raise NotTransverse("corner limit must stay transverse to the "
                            "fixed extremity")
    pilot_final = fl.flag_distance(
        tripod_point(tripods[-1], pilot[-1]), x0)
    if pilot_final > 10.0 * tol:
        raise ValueError("pilot sequence does not reach the corner")
    rng = random.Random(seed)
    length = len(sg.canonical_word(tripods[0].n))
    # deep ladders span too many float scales; keep exact ladders exact
    exact = tripods[0].zero.mode == fl.EXACT
    finals = []
    for _ in range(probes):
        limit = [math.exp(rng.uniform(-1.0, 1.0)) for _ in range(length)]
        dist = None
        for m, tau in enumerate(tripods):
            draws = [v * math.exp(0.5 ** (m + 1) * rng.uniform(-1.0, 1.0))
                     for v in limit]
            t = tuple(Fraction(v).limit_denominator(10 ** 6) for v in draws) \
                if exact else tuple(draws)
            dist = fl.flag_distance(tripod_point(tau, t), x0)
        finals.append(dist)
    return {
        "probes": probes,
        "pilot_final": pilot_final,
        "final_distances": finals,
        "max_final": max(finals),
        "pass": max(finals) <= tol,
    }
