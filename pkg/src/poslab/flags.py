"""Complete flags in R^n, transversality, and pair normalization.

A complete flag is stored as a full rank n by n basis matrix whose first
i columns span the i dimensional subspace.  Construction reduces the
basis to a canonical column echelon form (each new pivot column has
zeros in the pivot rows of the earlier columns and its first nonzero
entry equals 1), so two flags are equal iff their stored bases are equal
entry by entry.  Exact rational and float data are both supported; the
mode is recorded per object and float sign decisions below `TAU_SIGN`
raise `FloatAmbiguous`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .errors import FloatAmbiguous, NotTransverse

TAU_SIGN = 1e-9

EXACT = "exact"
FLOAT = "float"


def _canonical_basis(basis: la.Mat, tol: float) -> la.Mat:
    n = len(basis)
    cols = [list(col) for col in zip(*basis)]
    if len(cols) != n:
        raise ValueError("flag basis must be square")
    exact = la.is_exact(basis)
    zero = (lambda x: x == 0) if exact else (lambda x: abs(x) <= tol)
    pivots: list[int] = []
    for j in range(n):
        col = cols[j]
        for i, p in enumerate(pivots):
            f = col[p]
            if not zero(f):
                col = [x - f * y for x, y in zip(col, cols[i])]
        piv = next((r for r in range(n) if not zero(col[r])), None)
        if piv is None:
            raise ValueError("flag basis is singular")
        lead = col[piv]
        col = [x / lead for x in col]
        col[piv] = Fraction(1) if exact else 1.0
        for p in pivots:
            col[p] = Fraction(0) if exact else 0.0
        cols[j] = col
        pivots.append(piv)
    return tuple(zip(*[tuple(c) for c in cols]))


@dataclass(frozen=True)
class Flag:
    """A complete flag, stored by its canonical basis matrix."""

    basis: la.Mat

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def mode(self) -> str:
        return EXACT if la.is_exact(self.basis) else FLOAT

    def subspace_basis(self, i: int) -> la.Mat:
        """Columns spanning the i dimensional piece, as an n by i matrix."""
        return tuple(row[:i] for row in self.basis)

    def to_float(self) -> "Flag":
        return flag_from_columns(la.from_numpy(la.to_float(self.basis)))


def flag(basis_rows) -> Flag:
    """Build a flag from a row-major matrix whose columns are the basis."""
    return Flag(_canonical_basis(la.mat(basis_rows), tol=TAU_SIGN))


def flag_from_columns(basis_rows) -> Flag:
    return flag(basis_rows)


def flag_from_column_list(cols) -> Flag:
    return flag(tuple(zip(*la.mat(cols))))


@lru_cache(maxsize=None)
def standard_flag(n: int) -> Flag:
    return Flag(la.identity(n))


@lru_cache(maxsize=None)
def antistandard_flag(n: int) -> Flag:
    rows = [[Fraction(int(i + j == n - 1)) for j in range(n)] for i in range(n)]
    return flag(rows)


@dataclass(frozen=True)
class GroupElement:
    """An element of SL(n), det validated on construction."""

    entries: la.Mat

    def __post_init__(self):
        d = la.det(self.entries)
        if la.is_exact(self.entries):
            if d != 1:
                raise ValueError(f"determinant is {d}, not 1")
        elif abs(d - 1.0) > 1e-8:
            raise ValueError(f"determinant {d} not within 1e-8 of 1")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def mode(self) -> str:
        return EXACT if la.is_exact(self.entries) else FLOAT

    def inverse(self) -> "GroupElement":
        return GroupElement(la.inverse(self.entries))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(la.mat_mul(self.entries, other.entries))


def group_element(rows) -> GroupElement:
    return GroupElement(la.mat(rows))


def w0_matrix(n: int) -> GroupElement:
    """Antidiagonal representative of the longest Weyl element, det 1."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = Fraction(1)
    sign = (-1) ** (n * (n - 1) // 2)
    if sign < 0:
        rows[0] = [-x for x in rows[0]]
    return GroupElement(tuple(tuple(r) for r in rows))


def apply_matrix(M: la.Mat, x: Flag) -> Flag:
    """Transform a flag by any invertible matrix (no det restriction)."""
    return Flag(_canonical_basis(la.mat_mul(M, x.basis), tol=TAU_SIGN))


def act(g: GroupElement, x: Flag) -> Flag:
    return apply_matrix(g.entries, x)


def _unit_columns(M: la.Mat) -> la.Mat:
    cols = list(zip(*M))
    out = []
    for col in cols:
        nrm = float(sum(float(x) * float(x) for x in col)) ** 0.5
        out.append(tuple(float(x) / nrm for x in col))
    return tuple(zip(*out))


def mixed_determinants(a: Flag, b: Flag):
    """The n-1 transversality determinants det[a_1..a_i | b_1..b_{n-i}].

    In float mode columns are normalized to unit length first, so the
    values are scale free and comparable against `TAU_SIGN`.
    """
    n = a.n
    if b.n != n:
        raise ValueError("flag sizes differ")
    exact = a.mode == EXACT and b.mode == EXACT
    dets = []
    for i in range(1, n):
        cols = [tuple(row[j] for row in a.basis) for j in range(i)]
        cols += [tuple(row[j] for row in b.basis) for j in range(n - i)]
        M = tuple(zip(*cols))
        if not exact:
            M = _unit_columns(la.mat(M))
        dets.append(la.det(la.mat(M)))
    return tuple(dets)


def is_transverse(a: Flag, b: Flag, tol: float = TAU_SIGN) -> bool:
    """True iff every mixed determinant of the pair is nonzero."""
    exact = a.mode == EXACT and b.mode == EXACT
    for d in mixed_determinants(a, b):
        if exact:
            if d == 0:
                return False
        else:
            if abs(d) <= tol:
                raise FloatAmbiguous(
                    f"mixed determinant {d} within {tol} of zero"
                )
    return True


def transversality_margin(a: Flag, b: Flag) -> float:
    """Smallest |mixed determinant| over levels (columns unit normalized)."""
    af, bf = a.to_float(), b.to_float()
    return min(abs(float(d)) for d in mixed_determinants(af, bf))


TRIVIAL_SIGNS = None


def _sign_vector(n: int, sign_class) -> tuple[int, ...]:
    if sign_class is None:
        return (1,) * (n - 1)
    sc = tuple(int(s) for s in sign_class)
    if len(sc) != n - 1 or any(s not in (-1, 1) for s in sc):
        raise ValueError("sign class must be n-1 entries of +-1")
    return sc


@dataclass(frozen=True)
class TransversePairFrame:
    """Normalization data for a transverse pair of flags.

    `g` maps `a` to the standard flag and `b` to the antistandard flag;
    the residual freedom is the positive diagonal torus once the sign
    class (one of the 2^(n-1) torus components) is chosen.
    """

    a: Flag
    b: Flag
    g: la.Mat
    g_inv: la.Mat
    sign_class: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.g)

    def to_frame(self, x: Flag) -> Flag:
        return apply_matrix(self.g, x)

    def from_frame(self, x: Flag) -> Flag:
        return apply_matrix(self.g_inv, x)


def normalize_pair(a: Flag, b: Flag, sign_class=None) -> TransversePairFrame:
    """Send (a, b) to the (standard, antistandard) pair.

    Column i of g^-1 spans V_i(a) meet V_{n-i+1}(b); columns are scaled
    so the first nonzero entry is 1, flipped per `sign_class` on the
    first n-1 columns, and the last column absorbs the determinant.
    """
    # Fraction(x) == x for floats, so a rationalized flag is hash-equal
    # to its float original; keying on the modes keeps them apart.
    return _normalize_pair_impl(a, b, sign_class, a.mode, b.mode)


@lru_cache(maxsize=4096)
def _normalize_pair_impl(a, b, sign_class, mode_a, mode_b):
    n = a.n
    if not is_transverse(a, b):
        raise NotTransverse("normalize_pair requires a transverse pair")
    signs = _sign_vector(n, sign_class)
    exact = a.mode == EXACT and b.mode == EXACT
    tol = 0.0 if exact else 1e-12
    cols = []
    for i in range(1, n + 1):
        A = a.subspace_basis(i)
        B = b.subspace_basis(n - i + 1)
        coeff = la.nullspace_vector(_stack(A, B), tol=tol)
        v = la.mat_vec(A, coeff[:i])
        lead = next(x for x in v if (x != 0 if exact else abs(x) > 1e-12))
        v = tuple(x / lead for x in v)
        cols.append(v)
    for i in range(n - 1):
        if signs[i] < 0:
            cols[i] = tuple(-x for x in cols[i])
    g_inv = tuple(zip(*cols))
    d = la.det(g_inv)
    cols[-1] = tuple(x / d for x in cols[-1])
    g_inv = tuple(zip(*cols))
    g = la.inverse(g_inv)
    return TransversePairFrame(a=a, b=b, g=g, g_inv=g_inv, sign_class=signs)


def _stack(A: la.Mat, B: la.Mat) -> la.Mat:
    """[A | -B] for the intersection kernel computation."""
    return tuple(
        tuple(row_a) + tuple(-x for x in row_b) for row_a, row_b in zip(A, B)
    )


def flags_close(a: Flag, b: Flag, tol: float = 1e-8) -> bool:
    return flag_distance(a, b) <= tol


def flag_distance(a: Flag, b: Flag) -> float:
    """Max over levels of the projection distance between subspaces."""
    import numpy as np

    A = la.to_float(a.basis)
    B = la.to_float(b.basis)
    n = a.n
    worst = 0.0
    for i in range(1, n):
        Qa, _ = np.linalg.qr(A[:, :i])
        Qb, _ = np.linalg.qr(B[:, :i])
        Pa = Qa @ Qa.T
        Pb = Qb @ Qb.T
        worst = max(worst, float(np.linalg.norm(Pa - Pb, 2)))
    return worst


# ---------------------------------------------------------------------------
# JSON serialization.  Rationals travel as "p/q" strings.


def scalar_to_json(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def scalar_from_json(x):
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(x, (int, float)):
        return la.coerce(x)
    raise ValueError(f"bad scalar {x!r}")


def matrix_to_json(M: la.Mat):
    return [[scalar_to_json(x) for x in row] for row in M]


def matrix_from_json(rows) -> la.Mat:
    return tuple(tuple(scalar_from_json(x) for x in row) for row in rows)


def flag_to_json(x: Flag) -> dict:
    return {"n": x.n, "mode": x.mode, "basis": matrix_to_json(x.basis)}


def flag_from_json(obj: dict) -> Flag:
    basis = matrix_from_json(obj["basis"])
    if len(basis) != obj.get("n", len(basis)):
        raise ValueError("flag size mismatch")
    return flag(basis)


def dump_flag(x: Flag) -> str:
    return json.dumps(flag_to_json(x), sort_keys=True)


def load_flag(s: str) -> Flag:
    return flag_from_json(json.loads(s))


# ---------------------------------------------------------------------------
# Random generators used by the test suites (seeded `random.Random`).


def random_rational(rng, bound: int = 6) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_unimodular(rng, n: int, bound: int = 4) -> GroupElement:
    """A random element of SL(n, Q) as a product L * U of unitriangulars."""
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            L[i][j] = random_rational(rng, bound)
        for j in range(i + 1, n):
            U[i][j] = random_rational(rng, bound)
    return GroupElement(la.mat_mul(la.mat(L), la.mat(U)))


def random_flag(rng, n: int, bound: int = 6) -> Flag:
    while True:
        rows = [
            [random_rational(rng, bound) for _ in range(n)] for _ in range(n)
        ]
        try:
            return flag(rows)
        except ValueError:
            continue


def random_transverse_pair(rng, n: int):
    while True:
        a = random_flag(rng, n)
        b = random_flag(rng, n)
        if is_transverse(a, b):
            return a, b
