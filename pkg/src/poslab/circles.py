"""The principal SL2, the rational circle map, and positive circles.

Sym^{n-1} of a 2x2 matrix is written in the scaled monomial basis
B_j = binom(n-1, j) x^{n-1-j} y^j, which absorbs all binomial factors:
the image of the projective point [s:1] has coordinates
(s^{n-1}, ..., s, 1) and rational input stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, sqrt

from . import configurations as cf
from . import flags as fl
from . import linalg as la
from . import semigroup as sg
from .errors import NotTransverse

F = Fraction


# ---------------------------------------------------------------------------
# The principal sl2 triple.


@dataclass(frozen=True)
class Sl2Triple:
    e: la.Mat
    h: la.Mat
    f: la.Mat


def bracket(a: la.Mat, b: la.Mat) -> la.Mat:
    ab = la.mat_mul(a, b)
    ba = la.mat_mul(b, a)
    return tuple(
        tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba)
    )


def principal_sl2(n: int) -> Sl2Triple:
    """e superdiagonal i(n-i), h = diag(n-1, n-3, ...), f subdiagonal ones."""
    if n < 2:
        raise ValueError("n >= 2 required")
    e = [[F(0)] * n for _ in range(n)]
    h = [[F(0)] * n for _ in range(n)]
    f = [[F(0)] * n for _ in range(n)]
    for i in range(1, n):
        e[i - 1][i] = F(i * (n - i))
        f[i][i - 1] = F(1)
    for i in range(n):
        h[i][i] = F(n - 1 - 2 * i)
    return Sl2Triple(e=la.mat(e), h=la.mat(h), f=la.mat(f))


def exp_nilpotent(m: la.Mat, t) -> la.Mat:
    """exp(t m) as the exact finite series of a nilpotent matrix."""
    n = len(m)
    t = la.coerce(t)
    out = la.identity(n)
    power = la.identity(n)
    for k in range(1, n):
        power = la.mat_mul(power, m)
        term = la.mat_scale(power, t**k / factorial(k))
        out = tuple(
            tuple(x + y for x, y in zip(r1, r2))
            for r1, r2 in zip(out, term)
        )
    return out


# ---------------------------------------------------------------------------
# Projective points and the symmetric power.


@dataclass(frozen=True)
class CirclePoint:
    """A point of the projective line, stored in canonical form:
    (s, 1) for finite slope s, (1, 0) for infinity."""

    x: object
    y: object

    def __post_init__(self):
        x, y = la.coerce(self.x), la.coerce(self.y)
        if x == 0 and y == 0:
            raise ValueError("(0, 0) is not projective")
        exact = la.is_exact_scalar(x) and la.is_exact_scalar(y)
        one = F(1) if exact else 1.0
        if y == 0:
            x, y = one, 0 * one
        else:
            x, y = x / y, one
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    @property
    def value(self):
        """Finite slope, or None at infinity."""
        return None if self.is_infinity else self.x


INFINITY = CirclePoint(F(1), F(0))


def circle_point(s) -> CirclePoint:
    return INFINITY if s is None else CirclePoint(la.coerce(s), F(1))


def mobius(g2: la.Mat, p: CirclePoint) -> CirclePoint:
    (a, b), (c, d) = g2
    return CirclePoint(a * p.x + b * p.y, c * p.x + d * p.y)


def sym_power(g2: la.Mat, n: int) -> la.Mat:
    """Sym^{n-1} of a 2x2 matrix in the scaled monomial basis."""
    (a, b), (c, d) = g2
    deg = n - 1
    cols = []
    for j in range(n):
        # coefficients of (a X + c)^{deg-j} (b X + d)^j
        q = [F(1)] if la.is_exact_scalar(a) else [1.0]
        for _ in range(deg - j):
            q = _poly_mul(q, [c, a])
        for _ in range(j):
            q = _poly_mul(q, [d, b])
        col = [
            comb(deg, j) * q[deg - m] / comb(deg, m) for m in range(n)
        ]
        cols.append(col)
    return tuple(zip(*cols))


def _poly_mul(p, q):
    out = [0 * (p[0] * q[0])] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + x * y
    return out


def _completion(p: CirclePoint) -> la.Mat:
    if p.is_infinity:
        return la.identity(2)
    one = F(1) if la.is_exact_scalar(p.x) else 1.0
    return la.mat([[p.x, one], [one, 0 * one]])


def circle_map(p: CirclePoint, n: int) -> fl.Flag:
    """The osculating flag of the moment curve at p."""
    return fl.flag(sym_power(_completion(p), n))


# ---------------------------------------------------------------------------
# Positive circles through a transverse pair.


def delta_torus(torus_param) -> la.Mat:
    """Positive diagonal with successive ratios the given parameters:
    d_n = 1 and d_i / d_{i+1} = torus_param_i."""
    lam = [la.coerce(x) for x in torus_param]
    if any(not x > 0 for x in lam):
        raise ValueError("torus parameters must be positive")
    n = len(lam) + 1
    d = [None] * n
    acc = F(1) if all(isinstance(x, Fraction) for x in lam) else 1.0
    d[n - 1] = acc
    for i in range(n - 2, -1, -1):
        acc = acc * lam[i]
        d[i] = acc
    return la.mat([[d[i] if i == j else 0 * d[i] for j in range(n)]
                   for i in range(n)])


@dataclass(frozen=True)
class PositiveCircle:
    """A parametrized circle of flags, the matrix image of the base
    rational circle."""

    n: int
    matrix: la.Mat

    def at(self, p: CirclePoint) -> fl.Flag:
        return fl.apply_matrix(self.matrix, circle_map(p, self.n))

    def point(self, s) -> fl.Flag:
        return self.at(circle_point(s))


def veronese_circle(n: int) -> PositiveCircle:
    return PositiveCircle(n=n, matrix=la.identity(n))


def circle_through(a: fl.Flag, b: fl.Flag, torus_param) -> PositiveCircle:
    """The positive circle through a (at infinity) and b (at 0) with the
    given identity-component torus parameter."""
    n = a.n
    if len(tuple(torus_param)) != n - 1:
        raise ValueError("torus parameter length must be n - 1")
    frame = fl.normalize_pair(a, b)
    m = la.mat_mul(frame.g_inv, delta_torus(torus_param))
    return PositiveCircle(n=n, matrix=m)


# ---------------------------------------------------------------------------
# Proximality of hyperbolic elements.


def is_hyperbolic(g2: la.Mat) -> bool:
    tr = g2[0][0] + g2[1][1]
    return abs(tr) > 2


def attracting_point(g2: la.Mat) -> CirclePoint:
    """Attracting fixed point in the projective line; exact when the
    discriminant is a perfect rational square."""
    if not is_hyperbolic(g2):
        raise ValueError("not hyperbolic")
    (a, b), (c, d) = g2
    tr = a + d
    disc = tr * tr - 4
    if la.is_exact_scalar(disc):
        try:
            root = _exact_sqrt(disc)
        except ValueError:
            root = sqrt(float(disc))
    else:
        root = sqrt(disc)
    lam = (tr + root) / 2 if tr > 0 else (tr - root) / 2
    # eigenvector for the larger-modulus eigenvalue
    if c != 0:
        return CirclePoint(lam - d, c)
    if b != 0:
        return CirclePoint(b, lam - a)
    return INFINITY if abs(a) > abs(d) else CirclePoint(F(0), F(1))


def _exact_sqrt(q: Fraction) -> Fraction:
    num = int(q.numerator)
    den = int(q.denominator)
    rn = int(round(num**0.5))
    rd = int(round(den**0.5))
    for cand_n in (rn - 1, rn, rn + 1):
        for cand_d in (rd - 1, rd, rd + 1):
            if cand_n >= 0 and cand_d > 0 and cand_n**2 == num \
                    and cand_d**2 == den:
                return F(cand_n, cand_d)
    raise ValueError(f"{q} is not a rational square")


def _eigen_flag(m: la.Mat, eigenvalues) -> fl.Flag:
    """Flag of nested spans of eigenvectors, ordered as given."""
    n = len(m)
    cols = []
    for lam in eigenvalues:
        shifted = tuple(
            tuple(m[i][j] - (lam if i == j else 0) for j in range(n))
            for i in range(n)
        )
        cols.append(la.nullspace_vector(shifted))
    return fl.flag_from_column_list(cols)


def proximality_report(n: int, lam: Fraction = F(2)) -> dict:
    """Exact proximality of Sym^{n-1} of hyperbolic elements: distinct
    eigenvalue moduli at every exterior level and attracting flag equal
    to the circle image of the attracting fixed point."""
    diag = la.mat([[lam, F(0)], [F(0), 1 / lam]])
    r = la.mat([[F(2), F(1)], [F(1), F(1)]])
    conj = la.mat_mul(la.mat_mul(r, diag), la.inverse(r))
    cases = []
    for kind, g2 in (("diagonal", diag), ("conjugated", conj)):
        m = sym_power(g2, n)
        eigs = [lam ** (n - 1 - 2 * j) for j in range(n)]
        moduli = sorted((abs(x) for x in eigs), reverse=True)
        simple_top = [
            moduli[k - 1] > moduli[k] if k < n else True
            for k in range(1, n + 1)
        ]
        # top eigenvalue of the k-th compound is the product of the k
        # largest; simplicity at level k needs a strict gap
        compound_simple = all(simple_top[k - 1] for k in range(1, n))
        att = _eigen_flag(m, eigs)
        expected = circle_map(attracting_point(g2), n)
        cases.append({
            "kind": kind,
            "compound_top_simple": compound_simple,
            "attracting_matches_circle": att == expected,
        })
    parabolic = la.mat([[F(1), F(1)], [F(0), F(1)]])
    ok = all(c["compound_top_simple"] and c["attracting_matches_circle"]
             for c in cases)
    return {
        "n": n,
        "cases": cases,
        "parabolic_rejected": not is_hyperbolic(parabolic),
        "pass": ok and not is_hyperbolic(parabolic),
    }


def torus_centralizer_classes(mats) -> int:
    """Number of diagonal-entry classes forced equal by commutation with
    every given matrix; 1 means only scalars centralize."""
    n = len(mats[0])
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in mats:
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j] != 0:
                    parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


# ---------------------------------------------------------------------------
# Circle configurations.


def principal_positivity_check(n: int, ts) -> bool:
    """exp(t e) lies in the open semigroup for every positive t given."""
    e = principal_sl2(n).e
    return all(sg.in_positive_semigroup(exp_nilpotent(e, t)) for t in ts)


def cyclic_tuples(grid, k):
    """Ascending k-tuples of a sorted slope grid (None = infinity last),
    one representative per cyclic class."""
    return list(combinations(grid, k))


def circle_configuration_check(n: int, k: int, grid=None) -> dict:
    """Exhaustive positivity of configurations of k cyclically ordered
    circle points over a rational grid."""
    if grid is None:
        grid = [F(-3), F(-1), F(-1, 4), F(0), F(1, 2), F(1), F(5), None]
    circle = veronese_circle(n)
    checked = 0
    failures = 0
    for tup in cyclic_tuples(grid, k):
        pts = [circle.point(s) for s in tup]
        if k == 3:
            ok = cf.is_positive_triple(*pts)
        else:
            ok = cf.is_positive_configuration(cf.Configuration(points=pts))
        checked += 1
        failures += 0 if ok else 1
    return {"n": n, "k": k, "checked": checked, "failures": failures,
            "pass": failures == 0}
