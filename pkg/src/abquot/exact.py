"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, with
numpy ``dtype=object`` arrays at the public surface.  Matrices in this
package are small (at most 16x16), so the algorithms are the textbook ones
with a little care taken over pivot choice to keep entries bounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Fraction",
    "LatticeBasis",
    "as_int_rows",
    "as_frac_rows",
    "to_array",
    "xgcd",
    "hnf",
    "snf",
    "invariant_factors",
    "rank_q",
    "rref_q",
    "kernel_q",
    "integer_kernel",
    "solve_q",
    "inverse_q",
    "det_z",
    "saturate",
    "lattice_meet_join",
    "quotient_structure",
    "reduce_mod_one",
    "lcm_denominator",
]


# ---------------------------------------------------------------------------
# conversions

def as_int_rows(M) -> list[list[int]]:
    """Copy a matrix-like object into a list of lists of Python ints."""
    rows = [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]
    return rows


def as_frac_rows(M) -> list[list[Fraction]]:
    arr = np.asarray(M, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return [[Fraction(x) for x in row] for row in arr.tolist()]


def to_array(rows, ncols: int | None = None) -> np.ndarray:
    """Wrap nested lists as an object array, keeping empty shapes sane."""
    if len(rows) == 0:
        return np.zeros((0, ncols or 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# normal forms

def _col_combine(A, c1, c2, a, b, c, d):
    # (col c1, col c2) <- (a*col c1 + b*col c2, c*col c1 + d*col c2)
    for row in A:
        x, y = row[c1], row[c2]
        row[c1] = a * x + b * y
        row[c2] = c * x + d * y


def _col_swap(A, c1, c2):
    for row in A:
        row[c1], row[c2] = row[c2], row[c1]


def _col_addmul(A, dst, src, q):
    # col dst -= q * col src
    if q:
        for row in A:
            row[dst] -= q * row[src]


def _hnf_rows(H: list[list[int]], ncols: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Column HNF in place; returns (H, U, pivot_rows)."""
    m = len(H)
    U = _identity(ncols)
    c = 0
    pivot_rows = []
    for i in range(m):
        if c >= ncols:
            break
        row = H[i]
        while True:
            nz = [j for j in range(c, ncols) if row[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != c:
                _col_swap(H, c, j0)
                _col_swap(U, c, j0)
            done = True
            for j in range(c + 1, ncols):
                if row[j] != 0:
                    q = row[j] // row[c]
                    _col_addmul(H, j, c, q)
                    _col_addmul(U, j, c, q)
                    if row[j] != 0:
                        done = False
            if done:
                break
        if row[c] == 0:
            continue
        if row[c] < 0:
            for r in H:
                r[c] = -r[c]
            for r in U:
                r[c] = -r[c]
        p = row[c]
        for j in range(c):
            q = row[j] // p
            if q:
                _col_addmul(H, j, c, q)
                _col_addmul(U, j, c, q)
        pivot_rows.append(i)
        c += 1
    return H, U, pivot_rows


def hnf(M) -> tuple[np.ndarray, np.ndarray]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``M @ U == H`` and ``U`` unimodular.  The nonzero
    columns of ``H`` come first; each has a positive pivot strictly below the
    pivot of the previous column, and entries to the left of a pivot lie in
    ``[0, pivot)``.

    >>> H, U = hnf([[2, 4]])
    >>> H.tolist()
    [[2, 0]]
    """
    rows = as_int_rows(M)
    ncols = len(rows[0]) if rows else 0
    H, U, _ = _hnf_rows(rows, ncols)
    return to_array(H, ncols), to_array(U, ncols)


def _snf_rows(A: list[list[int]], want_transforms: bool = True):
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if want_transforms else None
    V = _identity(n) if want_transforms else None

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def row_addmul(dst, src, q):
        if q:
            rs, rd = A[src], A[dst]
            for k in range(n):
                rd[k] -= q * rs[k]
            if U is not None:
                us, ud = U[src], U[dst]
                for k in range(m):
                    ud[k] -= q * us[k]

    def col_swap(i, j):
        _col_swap(A, i, j)
        if V is not None:
            _col_swap(V, i, j)

    def col_addmul(dst, src, q):
        _col_addmul(A, dst, src, q)
        if V is not None:
            _col_addmul(V, dst, src, q)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            clean = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    row_addmul(i, t, q)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    col_addmul(j, t, q)
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remaining entry of row/col t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i1, j1 = min(cands)
                if i1 != t:
                    row_swap(t, i1)
                if j1 != t:
                    col_swap(t, j1)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def snf(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``(D, U, V)`` with ``U @ M @ V == D``.

    The diagonal of ``D`` is nonnegative with ``d1 | d2 | ...`` and zeros
    after the rank.
    """
    rows = as_int_rows(M)
    m = len(rows)
    n = len(rows[0]) if m else 0
    D, U, V = _snf_rows(rows)
    return to_array(D, n), to_array(U, m), to_array(V, n)


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    rows = as_int_rows(M)
    if not rows:
        return []
    D, _, _ = _snf_rows(rows, want_transforms=False)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


def det_z(M) -> int:
    """Exact determinant of a square integer (or rational) matrix."""
    A = as_frac_rows(M)
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det) if det.denominator == 1 else det


# ---------------------------------------------------------------------------
# rational linear algebra

def rref_q(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    A = as_frac_rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank_q(M) -> int:
    arr = np.asarray(M, dtype=object)
    if arr.size == 0:
        return 0
    return len(rref_q(arr)[1])


def kernel_q(M) -> list[list[Fraction]]:
    """Basis of the right kernel ``{x : M x = 0}`` over Q."""
    R, pivots = rref_q(M)
    n = len(R[0]) if R else np.asarray(M, dtype=object).shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def integer_kernel(M) -> np.ndarray:
    """Z-basis (as columns) of the integer kernel ``{x in Z^k : M x = 0}``."""
    rows = as_int_rows(M)
    k = len(rows[0]) if rows else np.asarray(M, dtype=object).shape[1]
    if not rows:
        return to_array(_identity(k), k)
    H, U, piv = _hnf_rows(rows, k)
    r = len(piv)
    cols = [[U[i][j] for j in range(r, k)] for i in range(k)]
    return to_array(cols, k - r)


def solve_q(A, b) -> list[Fraction] | None:
    """One rational solution of ``A x = b`` or ``None`` if inconsistent."""
    A = as_frac_rows(A)
    m = len(A)
    n = len(A[0])
    aug = [A[i] + [Fraction(b[i])] for i in range(m)]
    R, pivots = rref_q(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def inverse_q(M) -> np.ndarray:
    A = as_frac_rows(M)
    n = len(A)
    aug = [A[i] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref_q(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return to_array([row[n:] for row in R], n)


def lcm_denominator(values: Iterable) -> int:
    out = 1
    for x in values:
        d = Fraction(x).denominator
        out = out * d // gcd(out, d)
    return out


def reduce_mod_one(v: Sequence) -> tuple[Fraction, ...]:
    """Coordinates reduced into ``[0, 1)``."""
    return tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in v)


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^d, stored as the columns of its column HNF.

    Two lattices are equal exactly when their ``cols`` tuples agree.
    """

    dim: int
    cols: tuple[tuple[int, ...], ...]  # each column has length dim

    @classmethod
    def from_columns(cls, M, dim: int | None = None) -> "LatticeBasis":
        arr = np.asarray(M, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if dim is None:
            dim = arr.shape[0]
        if arr.size == 0:
            return cls(dim, ())
        H, _ = hnf(arr)
        cols = []
        for j in range(H.shape[1]):
            c = tuple(int(x) for x in H[:, j])
            if any(c):
                cols.append(c)
        return cls(dim, tuple(cols))

    @classmethod
    def from_vectors(cls, vectors, dim: int | None = None) -> "LatticeBasis":
        vecs = [list(v) for v in vectors]
        if not vecs:
            if dim is None:
                raise ValueError("dimension needed for the zero lattice")
            return cls(dim, ())
        arr = to_array(vecs).T
        return cls.from_columns(arr, dim)

    @classmethod
    def full(cls, dim: int) -> "LatticeBasis":
        return cls(dim, tuple(tuple(int(i == j) for i in range(dim)) for j in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> "LatticeBasis":
        return cls(dim, ())

    @property
    def rank(self) -> int:
        return len(self.cols)

    def matrix(self) -> np.ndarray:
        """Basis as a ``dim x rank`` object array."""
        if not self.cols:
            return np.zeros((self.dim, 0), dtype=object)
        return to_array([list(c) for c in self.cols]).T

    def contains(self, v) -> bool:
        v = [Fraction(x) for x in v]
        if any(x.denominator != 1 for x in v):
            return False
        if not self.cols:
            return not any(v)
        x = solve_q(self.matrix(), v)
        return x is not None and all(c.denominator == 1 for c in x)

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(self.contains(c) for c in other.cols)

    def coordinates(self, v) -> list[Fraction]:
        """Rational coordinates of ``v`` in this basis (``v`` must lie in the span)."""
        x = solve_q(self.matrix(), v)
        if x is None:
            raise ValueError("vector not in the rational span of the lattice")
        return x

    def index_in(self, big: "LatticeBasis") -> int:
        """Index ``[big : self]`` for equal-rank lattices."""
        return _prod(quotient_structure(big, self)[0])

    def __repr__(self) -> str:
        return f"LatticeBasis(dim={self.dim}, rank={self.rank}, cols={list(self.cols)})"


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def saturate(L: LatticeBasis) -> LatticeBasis:
    """Smallest saturated lattice with the same rational span.

    >>> saturate(LatticeBasis.from_vectors([[2, 0]])).cols
    ((1, 0),)
    """
    if L.rank == 0:
        return L
    rows = as_int_rows(L.matrix())
    D, U, _ = _snf_rows(rows)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    Uinv = inverse_q(to_array(U, L.dim))
    cols = [[int(Uinv[i, j]) for i in range(L.dim)] for j in range(r)]
    return LatticeBasis.from_vectors(cols, L.dim)


def lattice_meet_join(L1: LatticeBasis, L2: LatticeBasis) -> tuple[LatticeBasis, LatticeBasis]:
    """Return ``(L1 + L2, L1 & L2)`` in canonical form."""
    if L1.dim != L2.dim:
        raise ValueError("ambient dimensions differ")
    d = L1.dim
    both = list(L1.cols) + list(L2.cols)
    total = LatticeBasis.from_vectors(both, d) if both else LatticeBasis.zero(d)
    if L1.rank == 0 or L2.rank == 0:
        return total, LatticeBasis.zero(d)
    B1 = L1.matrix()
    B2 = L2.matrix()
    M = np.concatenate([B1, -B2], axis=1)
    K = integer_kernel(M)
    if K.shape[1] == 0:
        return total, LatticeBasis.zero(d)
    inter = B1.dot(K[: L1.rank, :])
    return total, LatticeBasis.from_columns(inter, d)


def quotient_structure(big: LatticeBasis, small: LatticeBasis, enumerate_cosets: bool = True,
                       cap: int = 10 ** 6):
    """Structure of the finite group ``big / small``.

    Returns ``(factors, reps)`` where ``factors`` are the invariant factors
    greater than one and ``reps`` lists one representative per coset,
    written in coordinates of the ``small`` basis and reduced into
    ``[0, 1)``.  Representatives are sorted, so the order is deterministic.
    """
    if big.rank != small.rank:
        raise ValueError("lattices have different ranks")
    if not big.contains_lattice(small):
        raise ValueError("small lattice is not contained in big lattice")
    k = big.rank
    if k == 0:
        return [], [()]
    C = to_array([big.coordinates(c) for c in small.cols]).T  # k x k, integer
    Ci = as_int_rows(C)
    D, U, V = _snf_rows([row[:] for row in Ci])
    diag = [D[i][i] for i in range(k)]
    factors = [x for x in diag if x > 1]
    if not enumerate_cosets:
        return factors, None
    order = _prod(factors)
    if order > cap:
        raise OverflowError(f"quotient of order {order} exceeds enumeration cap {cap}")
    # U C V = D: in coordinates y = U x (x = big coords) the small lattice is D Z^k.
    Uinv = inverse_q(to_array(U, k))
    Bbig = big.matrix()
    Bsmall = small.matrix()
    reps = set()
    ranges = [range(x) for x in diag]
    for y in product(*ranges):
        x = [sum(Uinv[i, j] * y[j] for j in range(k)) for i in range(k)]
        amb = [sum(Bbig[r, i] * x[i] for i in range(k)) for r in range(big.dim)]
        coords = solve_q(Bsmall, amb)
        reps.add(reduce_mod_one(coords))
    return factors, sorted(reps)
