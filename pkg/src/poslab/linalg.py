"""Small dense matrices over exact rationals or floats.

Matrices are immutable tuples of tuples.  A matrix is *exact* when every
entry is a `fractions.Fraction` (ints are coerced on construction); it is
in float mode when any entry is a float.  All sizes in this package are
tiny (n <= 21), so the exact routines use plain Gaussian elimination with
Fraction arithmetic and the float routines defer to numpy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]
Vec = tuple[Scalar, ...]
Mat = tuple[Vec, ...]


def coerce(x) -> Scalar:
    """Coerce an entry: ints become Fractions, floats stay floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"unsupported scalar {x!r}")


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(tuple(coerce(x) for x in row) for row in rows)


def vec(xs: Iterable) -> Vec:
    return tuple(coerce(x) for x in xs)


def is_exact_scalar(x: Scalar) -> bool:
    return isinstance(x, Fraction)


def is_exact(M: Mat) -> bool:
    return all(is_exact_scalar(x) for row in M for x in row)


def identity(n: int) -> Mat:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(M: Mat) -> Mat:
    return tuple(zip(*M))


def mat_mul(A: Mat, B: Mat) -> Mat:
    cols = transpose(B)
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A
    )


def mat_vec(A: Mat, v: Vec) -> Vec:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def mat_scale(A: Mat, c) -> Mat:
    c = coerce(c)
    return tuple(tuple(c * x for x in row) for row in A)


def submatrix(M: Mat, rows: Sequence[int], cols: Sequence[int]) -> Mat:
    return tuple(tuple(M[i][j] for j in cols) for i in rows)


def to_float(M: Mat) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in M], dtype=float)


def from_numpy(A: np.ndarray) -> Mat:
    return tuple(tuple(float(x) for x in row) for row in A)


def det(M: Mat) -> Scalar:
    """Determinant; exact for Fraction matrices, numpy otherwise."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if not is_exact(M):
        return float(np.linalg.det(to_float(M)))
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if n == 3:
        a, b, c = M[0]
        d, e, f = M[1]
        g, h, i = M[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    rows = [list(r) for r in M]
    sign = Fraction(1)
    acc = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        p = rows[col][col]
        acc *= p
        for r in range(col + 1, n):
            f = rows[r][col] / p
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return sign * acc


def minor(M: Mat, rows: Sequence[int], cols: Sequence[int]) -> Scalar:
    return det(submatrix(M, rows, cols))


def rank(M: Mat, tol: float = 1e-10) -> int:
    if len(M) == 0 or len(M[0]) == 0:
        return 0
    if not is_exact(M):
        return int(np.linalg.matrix_rank(to_float(M), tol=tol))
    rows = [list(r) for r in M]
    m, n = len(rows), len(rows[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(r + 1, m):
            f = rows[i][col] / p
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def inverse(M: Mat) -> Mat:
    n = len(M)
    if not is_exact(M):
        return from_numpy(np.linalg.inv(to_float(M)))
    aug = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


class InconsistentSystem(Exception):
    pass


def _rref(aug: list[list[Fraction]], ncols: int, tol: float = 0.0):
    """Row reduce in place; returns the list of pivot columns.

    `ncols` counts the coefficient columns; trailing columns are carried
    along (right hand sides).  With floats, entries below `tol` are
    treated as zero.
    """
    m = len(aug)
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        piv, best = None, tol
        for i in range(r, m):
            mag = abs(aug[i][col])
            if mag > best:
                piv, best = i, mag
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    return pivots


def solve_affine(A: Mat, b: Vec, tol: float = 0.0):
    """Solve A x = b.  Returns (particular solution, pivot column list).

    Free variables are set to zero in the particular solution.  Raises
    InconsistentSystem when there is no solution.  `tol` is the zero
    threshold used in float mode (pass 0 for exact data).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    pivots = _rref(aug, n, tol=tol)
    zero = (lambda x: x == 0) if tol == 0 else (lambda x: abs(x) <= tol)
    for row in aug:
        if all(zero(x) for x in row[:n]) and not zero(row[n]):
            raise InconsistentSystem
    x = [Fraction(0) if tol == 0 else 0.0] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return tuple(x), pivots


def solve_unique(A: Mat, b: Vec, tol: float = 0.0) -> Vec:
    """Solve a square or overdetermined system expecting a unique solution."""
    x, pivots = solve_affine(A, b, tol=tol)
    if len(pivots) != (len(A[0]) if A else 0):
        raise InconsistentSystem("solution not unique")
    return x


def nullspace_vector(A: Mat, tol: float = 0.0) -> Vec:
    """A nonzero kernel vector of A, assuming a one dimensional kernel."""
    m = len(A)
    n = len(A[0])
    aug = [list(A[i]) for i in range(m)]
    pivots = _rref(aug, n, tol=tol)
    free = [j for j in range(n) if j not in pivots]
    if not free:
        raise ValueError("trivial kernel")
    j0 = free[0]
    one = Fraction(1) if tol == 0 else 1.0
    x = [Fraction(0) if tol == 0 else 0.0] * n
    x[j0] = one
    for r, col in enumerate(pivots):
        x[col] = -aug[r][j0]
    return tuple(x)


def kth_compound(M: Mat, k: int) -> Mat:
    """Matrix of k by k minors in lexicographic index order."""
    n = len(M)
    idx = list(combinations(range(n), k))
    return tuple(
        tuple(minor(M, rows, cols) for cols in idx) for rows in idx
    )


def mat_eq(A: Mat, B: Mat) -> bool:
    return A == B


def frobenius_distance(A: Mat, B: Mat) -> float:
    return float(
        sum((float(a) - float(b)) ** 2 for ra, rb in zip(A, B) for a, b in zip(ra, rb))
        ** 0.5
    )
