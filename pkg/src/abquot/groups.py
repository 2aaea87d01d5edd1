"""Finite groups of integer matrices acting on tori.

Group elements are ``int64`` numpy arrays acting on column vectors of
lattice coordinates.  A group is given by generators; its closure is
computed lazily with a vectorised breadth-first search and cached.  For
groups too large to close, :func:`orbit_stabilizer` works from the
generators alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import exact
from .exact import LatticeBasis

DEFAULT_CLOSURE_CAP = 10 ** 7
DEFAULT_STABILIZER_CAP = 10 ** 6
DEFAULT_ORBIT_CAP = 10 ** 6


class CapExceeded(RuntimeError):
    """A closure or orbit grew beyond its configured cap."""


# ---------------------------------------------------------------------------
# element helpers

def as_element(g) -> np.ndarray:
    a = np.array(np.asarray(g, dtype=object).tolist(), dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("group elements are square matrices")
    return a


def element_key(g: np.ndarray) -> bytes:
    """Canonical byte encoding of a matrix (row-major int16 entries)."""
    return np.ascontiguousarray(g, dtype=np.int16).tobytes()


def _batch_keys(stack: np.ndarray) -> list[bytes]:
    flat = np.ascontiguousarray(stack.reshape(len(stack), -1), dtype=np.int16)
    return [row.tobytes() for row in flat]


def _check_entries(stack: np.ndarray) -> None:
    if stack.size and np.abs(stack).max() >= 2 ** 15:
        raise OverflowError("matrix entries too large; the generators have infinite order")


def integer_inverse(g: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix."""
    inv = np.rint(np.linalg.inv(g.astype(float))).astype(np.int64)
    if not np.array_equal(g @ inv, np.eye(len(g), dtype=np.int64)):
        inv = np.array(exact.inverse_q(g.astype(object)).tolist(), dtype=object)
        if any(x.denominator != 1 for x in inv.ravel()):
            raise ValueError("matrix is not unimodular")
        inv = inv.astype(np.int64)
    return inv


def batch_inverse(stack: np.ndarray) -> np.ndarray:
    inv = np.rint(np.linalg.inv(stack.astype(float))).astype(np.int64)
    eye = np.eye(stack.shape[-1], dtype=np.int64)
    bad = ~np.all(stack @ inv == eye, axis=(1, 2))
    for i in np.nonzero(bad)[0]:
        inv[i] = integer_inverse(stack[i])
    return inv


def element_order(g: np.ndarray, limit: int = 10 ** 4) -> int:
    eye = np.eye(len(g), dtype=np.int64)
    h = g.copy()
    for k in range(1, limit + 1):
        if np.array_equal(h, eye):
            return k
        h = h @ g
        _check_entries(h)
    raise ValueError("element order exceeds limit")


def batch_rank(stack: np.ndarray) -> np.ndarray:
    """Ranks of a stack of small integer matrices.

    Floating-point SVD with an absolute tolerance of 1e-8.  For integer
    matrices of size <= 16 with entries below 10^3 every nonzero singular
    value is far above that threshold, so the answer is exact.
    """
    if len(stack) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.linalg.matrix_rank(stack.astype(float), tol=1e-8)


# ---------------------------------------------------------------------------
# closure

def close_group(generators: Sequence, cap: int = DEFAULT_CLOSURE_CAP,
                start: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """All elements of the group generated by ``generators``.

    Elements are returned sorted by their row-major entry tuple.  ``start``
    may hold the elements of an already closed subgroup to seed the search.

    Raises:
        CapExceeded: when more than ``cap`` elements are produced.
    """
    gens = [as_element(g) for g in generators]
    if not gens and start is None:
        raise ValueError("need generators or a dimension")
    d = len(gens[0]) if gens else start.shape[-1]
    eye = np.eye(d, dtype=np.int64)
    if start is None:
        start = eye[None]
    seen = set(_batch_keys(start))
    chunks = [start]
    frontier = start
    gstack = np.stack(gens) if gens else np.zeros((0, d, d), dtype=np.int64)
    total = len(start)
    while len(frontier) and len(gstack):
        cand = np.matmul(frontier[:, None, :, :], gstack[None, :, :, :]).reshape(-1, d, d)
        _check_entries(cand)
        keys = _batch_keys(cand)
        keep = []
        for i, k in enumerate(keys):
            if k not in seen:
                seen.add(k)
                keep.append(i)
        frontier = cand[keep]
        if len(frontier):
            chunks.append(frontier)
            total += len(frontier)
            if total > cap:
                raise CapExceeded(f"group closure exceeded {cap} elements")
    elements = np.concatenate(chunks)
    return sort_elements(elements), len(elements)


def sort_elements(stack: np.ndarray) -> np.ndarray:
    flat = stack.reshape(len(stack), -1)
    order = np.lexsort(flat.T[::-1])
    return stack[order]


class FiniteMatrixGroup:
    """A finite group of unimodular matrices given by generators.

    Args:
        generators: square integer matrices.
        order: the group order when known in advance (used for checks and
            for groups too large to close).
        cap: closure cap.
    """

    def __init__(self, generators: Iterable, order: int | None = None,
                 cap: int = DEFAULT_CLOSURE_CAP, dim: int | None = None):
        self.generators = [as_element(g) for g in generators]
        if self.generators:
            self.dim = len(self.generators[0])
        elif dim is not None:
            self.dim = dim
        else:
            raise ValueError("a group without generators needs dim")
        self.cap = cap
        self._known_order = order
        self._elements: np.ndarray | None = None
        self._index: dict[bytes, int] | None = None

    @classmethod
    def from_elements(cls, elements: np.ndarray, generators=None) -> "FiniteMatrixGroup":
        elements = sort_elements(np.asarray(elements, dtype=np.int64))
        G = cls(generators if generators is not None else [], order=len(elements),
                dim=elements.shape[-1])
        if generators is None:
            G.generators = list(elements)
        G._elements = elements
        return G

    @property
    def is_closed(self) -> bool:
        return self._elements is not None

    def elements(self) -> np.ndarray:
        if self._elements is None:
            if not self.generators:
                self._elements = np.eye(self.dim, dtype=np.int64)[None]
            else:
                self._elements, n = close_group(self.generators, cap=self.cap)
            if self._known_order is not None and self._known_order != len(self._elements):
                raise ValueError(
                    f"closure has {len(self._elements)} elements, expected {self._known_order}")
        return self._elements

    @property
    def order(self) -> int:
        if self._elements is not None:
            return len(self._elements)
        if self._known_order is not None:
            return self._known_order
        return len(self.elements())

    def index(self) -> dict[bytes, int]:
        if self._index is None:
            self._index = {k: i for i, k in enumerate(_batch_keys(self.elements()))}
        return self._index

    def contains(self, g) -> bool:
        return element_key(as_element(g)) in self.index()

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements())

    def __repr__(self) -> str:
        known = self._elements is not None or self._known_order is not None
        size = self.order if known else "?"
        return f"FiniteMatrixGroup(dim={self.dim}, gens={len(self.generators)}, order={size})"


# ---------------------------------------------------------------------------
# pseudoreflections

@dataclass(frozen=True)
class ReflectionReport:
    element: np.ndarray = field(repr=False)
    is_pseudoreflection: bool
    order: int
    root_line: LatticeBasis | None = None


def is_pseudoreflection(g) -> ReflectionReport:
    """Decide whether ``g`` fixes a complex hyperplane pointwise.

    Over the integers this is ``rank(g - I) == 2``.  The report carries the
    order of ``g`` and, for pseudoreflections, the root line: the saturated
    image of ``g - I``.
    """
    g = as_element(g)
    M = g - np.eye(len(g), dtype=np.int64)
    r = exact.rank_q(M.astype(object))
    order = element_order(g)
    if r != 2:
        return ReflectionReport(g, False, order)
    line = exact.saturate(LatticeBasis.from_columns(M.astype(object)))
    return ReflectionReport(g, True, order, line)


def pseudoreflection_mask(stack: np.ndarray) -> np.ndarray:
    """Boolean mask of the pseudoreflections in a stack of elements."""
    if len(stack) == 0:
        return np.zeros(0, dtype=bool)
    eye = np.eye(stack.shape[-1], dtype=np.int64)
    return batch_rank(stack - eye) == 2


def reflection_subgroup(S: FiniteMatrixGroup) -> tuple[FiniteMatrixGroup, int]:
    """Subgroup generated by all pseudoreflections of a closed group."""
    elems = S.elements()
    refl = elems[pseudoreflection_mask(elems)]
    if len(refl) == 0:
        P = FiniteMatrixGroup([], order=1, dim=S.dim)
        P._elements = np.eye(S.dim, dtype=np.int64)[None]
        return P, 1
    gens = _minimal_generators(refl)
    elements, n = close_group(gens, cap=max(S.order, 1))
    P = FiniteMatrixGroup.from_elements(elements, generators=gens)
    return P, n


def _minimal_generators(candidates: np.ndarray) -> list[np.ndarray]:
    """Greedy generating subset: keep a candidate only if it is new."""
    gens: list[np.ndarray] = []
    current: set[bytes] = set()
    elements = None
    for c in candidates:
        k = element_key(c)
        if k in current:
            continue
        gens.append(c)
        elements, _ = close_group(gens, start=elements)
        current = set(_batch_keys(elements))
    return gens


# ---------------------------------------------------------------------------
# torsion points as integer vectors modulo N

def point_level(x: Sequence) -> int:
    return exact.lcm_denominator(x)


def point_to_ints(x: Sequence, N: int) -> np.ndarray:
    out = []
    for c in x:
        c = Fraction(c) * N
        if c.denominator != 1:
            raise ValueError("point is not N-torsion")
        out.append(int(c) % N)
    return np.array(out, dtype=np.int64)


def ints_to_point(u: np.ndarray, N: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(a) % N, N) for a in u)


def point_stabilizer_mask(elements: np.ndarray, x: Sequence) -> np.ndarray:
    """Which of ``elements`` fix ``x`` modulo the lattice (brute force)."""
    N = point_level(x)
    u = point_to_ints(x, N)
    images = (elements @ u) % N
    return np.all(images == u, axis=1)


@dataclass
class OrbitStabilizer:
    orbit: np.ndarray  # orbit points as integer vectors mod N
    level: int
    stabilizer: FiniteMatrixGroup
    schreier_generators: int

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)


def orbit_stabilizer(group: FiniteMatrixGroup, x: Sequence,
                     orbit_cap: int = DEFAULT_ORBIT_CAP,
                     stabilizer_cap: int = DEFAULT_STABILIZER_CAP) -> OrbitStabilizer:
    """Orbit of a torsion point and its fully enumerated stabilizer.

    The orbit is found by breadth-first search from the generators while
    recording a transversal; Schreier generators are then folded into the
    stabilizer one at a time, each only when it is not already a member.
    When the group order is known the identity
    ``|orbit| * |stabilizer| == |G|`` is verified.
    """
    N = point_level(x)
    d = group.dim
    u0 = point_to_ints(x, N)
    gens = group.generators
    eye = np.eye(d, dtype=np.int64)
    if not gens:
        stab = FiniteMatrixGroup.from_elements(eye[None])
        return OrbitStabilizer(u0[None], N, stab, 0)
    gstack = np.stack(gens)
    index = {u0.tobytes(): 0}
    points = [u0]
    trans = [eye]
    frontier = [0]
    while frontier:
        P = np.stack([points[i] for i in frontier])
        T = np.stack([trans[i] for i in frontier])
        imgs = np.einsum("gij,pj->pgi", gstack, P) % N
        nxt = []
        for a, i in enumerate(frontier):
            for b in range(len(gens)):
                key = imgs[a, b].tobytes()
                if key not in index:
                    index[key] = len(points)
                    points.append(imgs[a, b].copy())
                    trans.append(gstack[b] @ T[a])
                    nxt.append(index[key])
                    if len(points) > orbit_cap:
                        raise CapExceeded(f"orbit exceeded {orbit_cap} points")
        frontier = nxt
    orbit = np.stack(points)
    T = np.stack(trans)
    Tinv = batch_inverse(T)
    # image index of every (point, generator) pair
    imgs = np.einsum("gij,pj->pgi", gstack, orbit) % N
    stab_elems = eye[None]
    stab_keys = {element_key(eye)}
    stab_gens: list[np.ndarray] = []
    n_schreier = 0
    for b in range(len(gens)):
        targets = np.array([index[imgs[a, b].tobytes()] for a in range(len(orbit))])
        cand = Tinv[targets] @ gstack[b] @ T
        for c in cand:
            k = element_key(c)
            if k in stab_keys:
                continue
            n_schreier += 1
            stab_gens.append(c)
            stab_elems, _ = close_group(stab_gens, cap=stabilizer_cap, start=stab_elems)
            stab_keys = set(_batch_keys(stab_elems))
    stab = FiniteMatrixGroup.from_elements(stab_elems, generators=stab_gens or [eye])
    known = group._known_order if group._elements is None else group.order
    if known is not None and len(orbit) * stab.order != known:
        raise AssertionError(
            f"orbit-stabilizer mismatch: {len(orbit)} * {stab.order} != {known}")
    return OrbitStabilizer(orbit, N, stab, n_schreier)


def brute_force_stabilizer(group: FiniteMatrixGroup, x: Sequence) -> np.ndarray:
    elems = group.elements()
    return elems[point_stabilizer_mask(elems, x)]


# ---------------------------------------------------------------------------
# congruences and fixed points

@dataclass(frozen=True)
class CongruenceSolution:
    """Solutions ``z`` of ``M z = c (mod Z^d)`` modulo ``Z^k + ker M``."""

    particular: tuple[tuple[Fraction, ...], ...]
    kernel: tuple[tuple[int, ...], ...]

    @property
    def empty(self) -> bool:
        return not self.particular


def solve_congruence(M, c, cap: int = 10 ** 6) -> CongruenceSolution:
    """Solve ``M z = c`` modulo integer vectors, ``M`` integer ``d x k``.

    Returns one representative per class modulo ``Z^k`` plus the real
    kernel directions of ``M`` (as integer columns).
    """
    rows = exact.as_int_rows(M)
    d = len(rows)
    k = len(rows[0]) if d else 0
    D, U, V = exact._snf_rows([r[:] for r in rows])
    c = [Fraction(v) for v in c]
    Uc = [sum(U[i][j] * c[j] for j in range(d)) for i in range(d)]
    diag = [D[i][i] if i < k else 0 for i in range(d)]
    r = sum(1 for x in diag[:k] if x)
    for i in range(r, d):
        if Uc[i].denominator != 1:
            return CongruenceSolution((), ())
    kernel = tuple(tuple(V[i][j] for i in range(k)) for j in range(r, k))
    total = 1
    for i in range(r):
        total *= diag[i]
    if total > cap:
        raise CapExceeded(f"{total} congruence solutions exceed cap {cap}")
    sols = set()
    base = [Uc[i] / diag[i] for i in range(r)]
    from itertools import product as _product
    for js in _product(*[range(diag[i]) for i in range(r)]):
        y = [base[i] + Fraction(js[i], diag[i]) for i in range(r)] + [Fraction(0)] * (k - r)
        z = [sum(V[i][j] * y[j] for j in range(k)) for i in range(k)]
        sols.add(exact.reduce_mod_one(z) if k == d else tuple(z))
    return CongruenceSolution(tuple(sorted(sols)), kernel)


@dataclass(frozen=True)
class AffineElement:
    """``x -> linear @ x + translation`` on R^d / Z^d."""

    linear: np.ndarray = field(repr=False)
    translation: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "translation", exact.reduce_mod_one(self.translation))

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        t = [a + sum(Fraction(int(self.linear[i, j])) * other.translation[j]
                     for j in range(len(other.translation)))
             for i, a in enumerate(self.translation)]
        return AffineElement(self.linear @ other.linear, tuple(t))

    def apply(self, x: Sequence) -> tuple[Fraction, ...]:
        y = [sum(Fraction(int(self.linear[i, j])) * Fraction(x[j]) for j in range(len(x)))
             + self.translation[i] for i in range(len(x))]
        return exact.reduce_mod_one(y)

    def key(self) -> tuple:
        return (element_key(self.linear), self.translation)


def in_image_subtorus(t: Sequence, g: np.ndarray) -> bool:
    """Is the point ``t`` on the subtorus ``im(1 - g)``?"""
    d = len(g)
    M = (np.eye(d, dtype=np.int64) - g).astype(object)
    if exact.rank_q(M) == 0:
        return all(Fraction(x).denominator == 1 for x in t)
    E = exact.saturate(LatticeBasis.from_columns(M))
    # t lies on the subtorus iff t = E a (mod Z^d) for real a
    sol = solve_congruence(E.matrix(), t)
    return not sol.empty


def is_affine_pseudoreflection(a: AffineElement) -> bool:
    """``(t, g)`` fixes a divisor iff ``g`` is a pseudoreflection and ``t`` lies on ``E_g``."""
    if not is_pseudoreflection(a.linear).is_pseudoreflection:
        return False
    return in_image_subtorus(a.translation, a.linear)


@dataclass(frozen=True)
class AffineFixedLocus:
    """Fixed points of an affine map: a finite set of translates of ``direction``."""

    points: tuple[tuple[Fraction, ...], ...]
    direction: LatticeBasis

    @property
    def empty(self) -> bool:
        return not self.points

    @property
    def codimension(self) -> int:
        return self.direction.dim - self.direction.rank


def affine_fixed_points(a: AffineElement) -> AffineFixedLocus:
    """Solve ``(1 - g) x = t`` on the torus.

    The answer is either empty or a finite union of translates of the
    identity component of ``Fix(g)``.
    """
    g = a.linear
    d = len(g)
    M = np.eye(d, dtype=np.int64) - g
    sol = solve_congruence(M, a.translation)
    ker = exact.kernel_q(M.astype(object))
    if ker:
        direction = exact.saturate(LatticeBasis.from_vectors(
            [[x * exact.lcm_denominator(v) for x in v] for v in ker], d))
    else:
        direction = LatticeBasis.zero(d)
    if sol.empty:
        return AffineFixedLocus((), direction)
    pts = {canonical_mod_subtorus(p, direction) for p in sol.particular}
    return AffineFixedLocus(tuple(sorted(pts)), direction)


def canonical_mod_subtorus(x: Sequence, T: LatticeBasis) -> tuple[Fraction, ...]:
    """Canonical representative of ``x`` modulo ``span(T) + Z^d``.

    ``T`` must be saturated.  A unimodular completion of ``T`` is derived
    deterministically from its HNF; ``x`` keeps only its complementary
    coordinates, reduced into ``[0, 1)``.
    """
    x = exact.reduce_mod_one(x)
    if T.rank == 0:
        return x
    W, Winv = _completion(T)
    k = T.rank
    d = T.dim
    y = [sum(Winv[i][j] * x[j] for j in range(d)) for i in range(d)]
    y = [Fraction(0)] * k + list(exact.reduce_mod_one(y[k:]))
    z = [sum(W[i][j] * y[j] for j in range(d)) for i in range(d)]
    return exact.reduce_mod_one(z)


_COMPLETION_CACHE: dict[LatticeBasis, tuple] = {}


def _completion(T: LatticeBasis):
    """Unimodular ``W`` whose first columns are a basis of saturated ``T``."""
    hit = _COMPLETION_CACHE.get(T)
    if hit is not None:
        return hit
    d, k = T.dim, T.rank
    rows = [list(r) for r in exact.as_int_rows(T.matrix().T)]  # k x d
    D, U, V = exact._snf_rows([r[:] for r in rows])
    if any(D[i][i] != 1 for i in range(k)):
        raise ValueError("lattice is not saturated")
    # U T^t V = [I_k 0]  =>  T^t = U^-1 [I 0] V^-1 ; columns of V^-1^t complete T
    Vinv = exact.inverse_q(exact.to_array(V, d))
    W = [[int(Vinv[j, i]) for j in range(d)] for i in range(d)]  # W = Vinv^T
    # first k columns of W span T (as U^-1 change of basis); replace them by T itself
    for j in range(k):
        for i in range(d):
            W[i][j] = T.cols[j][i]
    Winv_arr = exact.inverse_q(exact.to_array(W, d))
    Winv = [[Fraction(Winv_arr[i, j]) for j in range(d)] for i in range(d)]
    if any(x.denominator != 1 for row in Winv for x in row):
        raise AssertionError("completion is not unimodular")
    Winv = [[int(x) for x in row] for row in Winv]
    _COMPLETION_CACHE[T] = (W, Winv)
    return W, Winv


def element_without_eigenvalue_one(group: FiniteMatrixGroup) -> np.ndarray:
    """First element (in closure order) with ``det(1 - g) != 0``."""
    elems = group.elements()
    eye = np.eye(group.dim)
    dets = np.linalg.det(eye - elems.astype(float))
    for i in np.nonzero(np.abs(dets) > 0.5)[0]:
        g = elems[i]
        if exact.det_z((np.eye(group.dim, dtype=np.int64) - g).astype(object)) != 0:
            return g
    raise ValueError("every element has eigenvalue 1; the action has fixed vectors")
