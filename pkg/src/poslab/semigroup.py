"""The totally positive unipotent semigroup, its cone coordinates,
sign-class certificates, and diamonds of flags.

The open semigroup N inside the upper unipotent group is cut out by
strict positivity of every minor that is not identically zero there:
row set I and column set J (both sorted) contribute exactly when
I <= J entrywise, and the I = J principal minors are identically 1.
Conjugating by a diagonal sign matrix eps produces the other components
N_eps; a diamond over a transverse pair is the image of one such
component, and the pair (sign class, side) is its certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import flags as fl
from . import linalg as la
from .errors import (
    FloatAmbiguous,
    NonPositiveParameter,
    NotInDiamond,
    NotInOpenSemigroup,
    NotTransverse,
)

PLUS = "plus"
MINUS = "minus"

TAU_SIGN = fl.TAU_SIGN


# ---------------------------------------------------------------------------
# Words and the cone parameterization.


@lru_cache(maxsize=None)
def canonical_word(n: int) -> tuple[int, ...]:
    """Reduced word for the longest element: blocks (1),(2,1),...  """
    word: list[int] = []
    for k in range(1, n):
        word.extend(range(k, 0, -1))
    return tuple(word)


def _word_is_reduced_for_w0(n: int, word) -> bool:
    if len(word) != n * (n - 1) // 2:
        return False
    perm = list(range(1, n + 1))
    for i in word:
        if not 1 <= i <= n - 1:
            return False
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return perm == list(range(n, 0, -1))


@dataclass(frozen=True)
class LusztigParams:
    """A point of the open parameter cone attached to a reduced word."""

    n: int
    word: tuple[int, ...]
    t: tuple

    def __post_init__(self):
        if not _word_is_reduced_for_w0(self.n, self.word):
            raise ValueError(f"not a reduced word for w0: {self.word}")
        if len(self.t) != len(self.word):
            raise ValueError("parameter count does not match the word")
        for x in self.t:
            if not x > 0:
                raise NonPositiveParameter(f"parameter {x} is not positive")


def params(n: int, t, word=None) -> LusztigParams:
    word = canonical_word(n) if word is None else tuple(word)
    return LusztigParams(n=n, word=word, t=tuple(la.coerce(x) for x in t))


def elementary(n: int, i: int, t) -> la.Mat:
    """I + t E_{i,i+1} (1-indexed superdiagonal slot i)."""
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    rows[i - 1][i] = t if isinstance(t, (Fraction, float)) else la.coerce(t)
    if not la.is_exact_scalar(rows[i - 1][i]):
        rows = [[float(x) for x in row] for row in rows]
        rows[i - 1][i] = float(t)
    return la.mat(rows)


def psi(p: LusztigParams) -> fl.GroupElement:
    """Product of elementary one-parameter factors along the word."""
    m = la.identity(p.n)
    if any(not la.is_exact_scalar(x) for x in p.t):
        m = la.mat([[float(x) for x in row] for row in m])
    for i, t in zip(p.word, p.t):
        m = la.mat_mul(m, elementary(p.n, i, t))
    return fl.GroupElement(m)


# ---------------------------------------------------------------------------
# Membership by minors.


@lru_cache(maxsize=None)
def eligible_minor_pairs(n: int):
    """Index pairs (I, J) of the minors that are generically nonzero on
    the unipotent group: sorted I <= J entrywise and I != J."""
    out = []
    for k in range(1, n):
        for I in combinations(range(n), k):
            for J in combinations(range(n), k):
                if I != J and all(i <= j for i, j in zip(I, J)):
                    out.append((I, J))
    return tuple(out)


def _check_unipotent(u: la.Mat, tol: float = 1e-9):
    n = len(u)
    exact = la.is_exact(u)
    for i in range(n):
        d = u[i][i]
        ok = d == 1 if exact else abs(d - 1.0) <= tol
        if not ok:
            raise ValueError("matrix is not unit upper triangular")
        for j in range(i):
            z = u[i][j]
            ok = z == 0 if exact else abs(z) <= tol
            if not ok:
                raise ValueError("matrix is not upper triangular")


def eligible_minors(u: la.Mat):
    return tuple(la.minor(u, I, J) for I, J in eligible_minor_pairs(len(u)))


def in_positive_semigroup(u, tol: float = TAU_SIGN) -> bool:
    """True iff every eligible minor of u is strictly positive."""
    M = u.entries if hasattr(u, "entries") else la.mat(u)
    _check_unipotent(M)
    exact = la.is_exact(M)
    for m in eligible_minors(M):
        if exact:
            if not m > 0:
                return False
        else:
            if abs(m) <= tol:
                raise FloatAmbiguous(f"minor {m} within {tol} of zero")
            if m < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# Factorization: peel elementary factors in word order.


def factorize(u, word=None) -> LusztigParams:
    """Invert psi: recover the cone parameters of a semigroup element.

    Peels x_i(t) factors left to right.  A one-line permutation tracks
    which column block pins each parameter; the pin is an exact linear
    solve whose unique solution is the minor ratio for that letter.
    Any nonpositive parameter, ambiguous pin, or nonidentity residue
    means u is outside the open semigroup.
    """
    M = u.entries if hasattr(u, "entries") else la.mat(u)
    _check_unipotent(M)
    n = len(M)
    word = canonical_word(n) if word is None else tuple(word)
    if not _word_is_reduced_for_w0(n, word):
        raise ValueError(f"not a reduced word for w0: {word}")
    exact = la.is_exact(M)
    tol = 0.0 if exact else 1e-10
    zero = (lambda x: x == 0) if exact else (lambda x: abs(x) <= tol)
    z = [list(row) for row in M]
    sigma = list(range(n, 0, -1))
    ts = []
    for i in word:
        b = sigma[i] + 1  # column block start, 1-indexed
        cols = range(b - 1, n)
        rows = list(range(i - 1)) + [i]  # earlier block rows and row i+1
        A = la.mat([[z[r][c] for r in rows] for c in cols])
        rhs = la.vec([z[i - 1][c] for c in cols])
        try:
            sol, pivots = la.solve_affine(A, rhs, tol=tol)
        except la.InconsistentSystem:
            raise NotInOpenSemigroup("no factorization at letter "
                                     f"{len(ts) + 1}")
        if len(rows) - 1 not in pivots:
            raise NotInOpenSemigroup(
                f"parameter {len(ts) + 1} is not pinned by the word"
            )
        t = sol[-1]
        if not t > 0:
            raise NotInOpenSemigroup(f"parameter {len(ts) + 1} = {t} <= 0")
        ts.append(t)
        for c in range(n):  # z <- x_i(-t) z
            z[i - 1][c] = z[i - 1][c] - t * z[i][c]
        sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
    for r in range(n):
        for c in range(n):
            want = 1 if r == c else 0
            if not zero(z[r][c] - want):
                raise NotInOpenSemigroup("nonidentity residue after peeling")
    return LusztigParams(n=n, word=word, t=tuple(ts))


# ---------------------------------------------------------------------------
# Sign classes.


def sign_vector(sign_class) -> tuple[int, ...]:
    """Diagonal signs eps (eps_1 = +1) with eps_i eps_{i+1} = sigma_i."""
    eps = [1]
    for s in sign_class:
        eps.append(eps[-1] * s)
    return tuple(eps)


def conjugate_by_signs(u: la.Mat, eps) -> la.Mat:
    return tuple(
        tuple(eps[i] * eps[j] * u[i][j] for j in range(len(u)))
        for i in range(len(u))
    )


def _all_sign_classes(n: int):
    out = [()]
    for _ in range(n - 1):
        out = [s + (x,) for s in out for x in (1, -1)]
    return out


def _canonical_certificate(sigma: tuple[int, ...]):
    """Each component reads as (sigma, plus) or (sigma^allminus, minus);
    present the one whose class starts with +1."""
    if sigma[0] == 1:
        return sigma, PLUS
    return tuple(-s for s in sigma), MINUS


def component_certificate(a: fl.Flag, b: fl.Flag, c: fl.Flag, tol=TAU_SIGN):
    """The (sign class, side) of the diamond over (a, b) containing c,
    or None when c is in no diamond.

    Eligible minors of c's unipotent coordinate are computed once in
    the trivial frame; each sign class rescales a minor (I, J) by
    prod_I eps * prod_J eps, so the scan is over sign patterns.
    """
    # Modes in the key: a rationalized flag is hash-equal to its float
    # original, and the cached answers differ.
    return _certificate_impl(a, b, c, tol, a.mode, b.mode, c.mode)


@lru_cache(maxsize=65536)
def _certificate_impl(a, b, c, tol, mode_a, mode_b, mode_c):
    frame = fl.normalize_pair(a, b)
    if not (fl.is_transverse(a, c) and fl.is_transverse(b, c)):
        raise NotTransverse("certificate needs c transverse to both")
    u = unipotent_coordinate(frame, c)
    minors = eligible_minors(u)
    exact = la.is_exact(u)
    signs = []
    for m in minors:
        if exact:
            if m == 0:
                return None
        else:
            if abs(m) <= tol:
                raise FloatAmbiguous(f"minor {m} within {tol} of zero")
        signs.append(1 if m > 0 else -1)
    n = len(u)
    pairs = eligible_minor_pairs(n)
    for sigma in _all_sign_classes(n):
        eps = sign_vector(sigma)
        if all(
            s * math.prod(eps[i] for i in I) * math.prod(eps[j] for j in J) > 0
            for s, (I, J) in zip(signs, pairs)
        ):
            return _canonical_certificate(sigma)
    return None


# ---------------------------------------------------------------------------
# Unipotent coordinates over the antistandard base point.


@dataclass(frozen=True)
class UnipotentCoordinate:
    """A flag's coordinate in a transverse-pair frame, with its semigroup
    membership resolved once at construction."""

    u: la.Mat
    frame: fl.TransversePairFrame
    in_n: bool
    in_n_inverse: bool

    @property
    def membership(self) -> str:
        if self.in_n:
            return "N"
        if self.in_n_inverse:
            return "N_inv"
        return "neither"


def coordinate(frame: fl.TransversePairFrame, x: fl.Flag,
               tol: float = TAU_SIGN) -> UnipotentCoordinate:
    u = unipotent_coordinate(frame, x)
    return UnipotentCoordinate(
        u=u,
        frame=frame,
        in_n=in_positive_semigroup(u, tol=tol),
        in_n_inverse=in_positive_semigroup(la.inverse(u), tol=tol),
    )


def unipotent_coordinate(frame: fl.TransversePairFrame, x: fl.Flag) -> la.Mat:
    """Unit upper triangular u with u . (antistandard flag) = frame image
    of x.  Exists iff x is transverse to frame.a."""
    q = fl.apply_matrix(frame.g, x)
    return _ucoord_over_antistandard(q)


def _ucoord_over_antistandard(q: fl.Flag) -> la.Mat:
    n = q.n
    exact = q.mode == fl.EXACT
    tol = 0.0 if exact else 1e-12
    zero = (lambda v: v == 0) if exact else (lambda v: abs(v) <= tol)
    w = [list(col) for col in zip(*q.basis)]  # columns
    for j in range(n):
        pr = n - 1 - j
        if zero(w[j][pr]):
            raise NotTransverse("coordinate pivot vanishes")
        w[j] = [v / w[j][pr] for v in w[j]]
        for j2 in range(j + 1, n):
            f = w[j2][pr]
            if not zero(f):
                w[j2] = [v - f * y for v, y in zip(w[j2], w[j])]
    u = [[None] * n for _ in range(n)]
    one = Fraction(1) if exact else 1.0
    zero_s = Fraction(0) if exact else 0.0
    for j in range(n):
        for i in range(n):
            v = w[j][i]
            if i > n - 1 - j:
                v = zero_s
            elif i == n - 1 - j:
                v = one
            u[i][n - 1 - j] = v
    return la.mat(u)


def point_from_unipotent(frame: fl.TransversePairFrame, u: la.Mat) -> fl.Flag:
    """Inverse of unipotent_coordinate."""
    n = len(u)
    anti = fl.antistandard_flag(n).basis
    if not la.is_exact(u):
        anti = la.mat([[float(x) for x in row] for row in anti])
    return fl.apply_matrix(frame.g_inv, fl.flag(la.mat_mul(u, anti)))


# ---------------------------------------------------------------------------
# Diamonds.


@dataclass(frozen=True)
class Diamond:
    """A diamond over the transverse pair (a, b), identified by witness."""

    a: fl.Flag
    b: fl.Flag
    witness: fl.Flag
    sign_class: tuple[int, ...]
    side: str

    @property
    def n(self) -> int:
        return self.a.n


def diamond_of(a: fl.Flag, b: fl.Flag, c: fl.Flag) -> Diamond:
    cert = component_certificate(a, b, c)
    if cert is None:
        raise NotInDiamond("witness is in no diamond over this pair")
    return Diamond(a=a, b=b, witness=c, sign_class=cert[0], side=cert[1])


def diamond_contains(d: Diamond, x: fl.Flag) -> bool:
    try:
        cert = component_certificate(d.a, d.b, x)
    except NotTransverse:
        return False
    return cert == (d.sign_class, d.side)


def opposite(d: Diamond) -> Diamond:
    """Same extremities, other side; witness from the inverse coordinate."""
    frame = fl.normalize_pair(d.a, d.b)
    u = unipotent_coordinate(frame, d.witness)
    w = point_from_unipotent(frame, la.inverse(u))
    side = MINUS if d.side == PLUS else PLUS
    return Diamond(a=d.a, b=d.b, witness=w, sign_class=d.sign_class, side=side)


def _actual_eps(d_sign_class, d_side, n):
    """The sign conjugation realizing the component as eps N eps."""
    eps = sign_vector(d_sign_class)
    if d_side == MINUS:
        alt = sign_vector((-1,) * (n - 1))
        eps = tuple(e * a for e, a in zip(eps, alt))
    return eps


def random_cone_params(rng, n: int, exact: bool = True, word=None):
    """Independent log-normal coordinates (median 1, sigma 1)."""
    word = canonical_word(n) if word is None else tuple(word)
    t = []
    for _ in word:
        x = rng.lognormvariate(0.0, 1.0)
        if exact:
            f = Fraction(x).limit_denominator(10**6)
            if f <= 0:
                f = Fraction(1, 10**6)
            t.append(f)
        else:
            t.append(x)
    return params(n, t, word)


def sample_diamond(d: Diamond, rng, count: int, exact: bool = True,
                   params_fn=None):
    """Random interior points of a diamond via the cone parameterization.

    `params_fn(rng)` overrides the default log-normal draw.
    """
    frame = fl.normalize_pair(d.a, d.b)
    eps = _actual_eps(d.sign_class, d.side, d.n)
    out = []
    for _ in range(count):
        if params_fn is None:
            p = random_cone_params(rng, d.n, exact=exact)
        else:
            p = params_fn(rng)
        u = psi(p).entries
        out.append(point_from_unipotent(frame, conjugate_by_signs(u, eps)))
    return out


def nesting_check(a: fl.Flag, b: fl.Flag, c: fl.Flag, samples: int, rng) -> bool:
    """Sampled inclusion of the two inner diamonds of (a, c, b) in the
    outer one, plus sampled disjointness of the inner pair."""
    outer = diamond_of(a, b, c)
    inner_cb = opposite(diamond_of(c, b, a))
    inner_ac = opposite(diamond_of(a, c, b))
    pts_cb = sample_diamond(inner_cb, rng, samples)
    pts_ac = sample_diamond(inner_ac, rng, samples)
    for x in pts_cb + pts_ac:
        if not diamond_contains(outer, x):
            return False
    for x in pts_ac:
        if diamond_contains(inner_cb, x):
            return False
    return True
