"""Symmetric group combinatorics and Bruhat cells of exact matrices.

Permutations are one-line tuples over 1..n.  The Borel subgroup is the
upper triangular one, and the cell of an invertible matrix g is read
off the lower-left rank matrix r(i,j) = rank of rows i..n, columns
1..j: w(k) = j exactly where the rank pattern jumps.  With this
convention the big cell (w = w0) is the set of matrices sending the
standard flag to a flag transverse to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from . import linalg as la
from .errors import EmptyGeneratorSet, FloatModeUnsupported

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def w0_perm(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """(p q)(i) = p(q(i))."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def inversions(p: Perm) -> int:
    return sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )


@dataclass(frozen=True)
class CellLabel:
    """A Bruhat cell, labeled by its permutation."""

    perm: Perm

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"not a permutation of 1..n: {self.perm}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def length(self) -> int:
        return inversions(self.perm)

    def inverse(self) -> "CellLabel":
        return CellLabel(perm_inverse(self.perm))

    def __mul__(self, other: "CellLabel") -> "CellLabel":
        return CellLabel(perm_mul(self.perm, other.perm))


def permutation_matrix(w: Perm) -> la.Mat:
    """Matrix with a 1 in row k, column w(k)."""
    n = len(w)
    from fractions import Fraction

    return tuple(
        tuple(Fraction(int(w[k] == j + 1)) for j in range(n)) for k in range(n)
    )


def _entries(g) -> la.Mat:
    return g.entries if hasattr(g, "entries") else la.mat(g)


def bruhat_cell(g) -> CellLabel:
    """The unique w with g in BwB, for exact invertible g."""
    M = _entries(g)
    if not la.is_exact(M):
        raise FloatModeUnsupported("bruhat_cell needs exact rational entries")
    n = len(M)

    def r(i: int, j: int) -> int:
        # rank of rows i..n, cols 1..j (1-indexed); empty blocks rank 0
        if i > n or j < 1:
            return 0
        return la.rank(la.submatrix(M, range(i - 1, n), range(j)))

    w = []
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            if r(k, j) - r(k, j - 1) - r(k + 1, j) + r(k + 1, j - 1) == 1:
                w.append(j)
                break
        else:
            raise ValueError("matrix is singular")
    return CellLabel(tuple(w))


def _rank_table(w: Perm) -> tuple[tuple[int, ...], ...]:
    n = len(w)
    return tuple(
        tuple(sum(1 for k in range(i, n) if w[k] <= j + 1) for j in range(n))
        for i in range(n)
    )


def bruhat_leq(u: CellLabel, w: CellLabel) -> bool:
    """u <= w in Bruhat order (rank-matrix criterion)."""
    if u.n != w.n:
        raise ValueError("sizes differ")
    ru = _rank_table(u.perm)
    rw = _rank_table(w.perm)
    return all(
        ru[i][j] <= rw[i][j] for i in range(u.n) for j in range(u.n)
    )


def in_cell_closure(g, w: CellLabel) -> bool:
    return bruhat_leq(bruhat_cell(g), w)


def _in_proper_parabolic(p: Perm) -> int | None:
    """Smallest k < n with p({1..k}) = {1..k}, or None."""
    n = len(p)
    top = 0
    for k in range(1, n):
        top = max(top, p[k - 1])
        if top == k:
            return k
    return None


@lru_cache(maxsize=8)
def involutions(n: int) -> tuple[Perm, ...]:
    e = identity_perm(n)
    return tuple(
        p for p in permutations(range(1, n + 1)) if perm_mul(p, p) == e
    )


def check_involution_lemma(n: int) -> dict:
    """Every involution other than the order reversal has a conjugate
    inside a proper standard parabolic subgroup; verified exhaustively.
    """
    if not 2 <= n <= 7:
        raise ValueError("supported range is 2 <= n <= 7")
    w0 = w0_perm(n)
    checked = 0
    failures = []
    witnesses = {}
    all_perms = list(permutations(range(1, n + 1)))
    for sigma in involutions(n):
        if sigma == w0:
            continue
        checked += 1
        found = None
        if _in_proper_parabolic(sigma) is not None:
            found = identity_perm(n)
        else:
            for c in all_perms:
                conj = perm_mul(perm_mul(c, sigma), perm_inverse(c))
                if _in_proper_parabolic(conj) is not None:
                    found = c
                    break
        if found is None:
            failures.append(sigma)
        else:
            witnesses[sigma] = found
    return {
        "n": n,
        "checked": checked,
        "failures": failures,
        "witnesses": witnesses,
        "pass": not failures,
    }


@dataclass(frozen=True)
class TransversalityReport:
    witness: object | None
    dominating_cell: CellLabel | None
    samples_checked: int

    def __post_init__(self):
        if (self.witness is None) == (self.dominating_cell is None):
            raise ValueError("exactly one of witness/dominating_cell")


def transversality_scan(generators, depth: int) -> TransversalityReport:
    """Enumerate words in the generators (and inverses) up to `depth`.

    Returns the first product landing in the big cell as a witness, or
    else the length-minimal permutation dominating every sampled cell
    (lexicographic tie-break, Bruhat order is not a lattice).
    """
    gens = [_entries(g) for g in generators]
    if not gens:
        raise EmptyGeneratorSet("transversality_scan needs generators")
    for M in gens:
        if not la.is_exact(M):
            raise FloatModeUnsupported("scan needs exact rational entries")
    n = len(gens[0])
    alphabet = []
    for M in gens:
        alphabet.append(M)
        inv = la.inverse(M)
        if inv not in alphabet:
            alphabet.append(inv)
    seen = {la.identity(n)}
    frontier = [la.identity(n)]
    for _ in range(depth):
        nxt = []
        for M in frontier:
            for A in alphabet:
                P = la.mat_mul(M, A)
                if P not in seen:
                    seen.add(P)
                    nxt.append(P)
        frontier = nxt
    w0 = CellLabel(w0_perm(n))
    cells = set()
    for M in sorted(seen):
        c = bruhat_cell(M)
        if c == w0:
            from .flags import GroupElement

            g = GroupElement(M) if la.det(M) == 1 else M
            return TransversalityReport(
                witness=g, dominating_cell=None, samples_checked=len(seen)
            )
        cells.add(c)
    best = None
    for p in permutations(range(1, n + 1)):
        s = CellLabel(p)
        if all(bruhat_leq(c, s) for c in cells):
            key = (s.length, s.perm)
            if best is None or key < (best.length, best.perm):
                best = s
    return TransversalityReport(
        witness=None, dominating_cell=best, samples_checked=len(seen)
    )
