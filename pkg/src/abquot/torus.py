"""Complex tori in the integral picture.

A torus ``A = C^n / Lambda`` is modelled as ``R^{2n} / Z^{2n}``: the
lattice is the standard one and the complex structure is carried by a
rational matrix ``theta`` with ``theta^2 = -c I``.  Multiplication by
``i`` is ``theta / sqrt(c)``, so a real-linear map is complex-linear
exactly when it commutes with ``theta``.

Subtori are saturated sublattices with a ``theta``-stable span; finite
subgroups are lists of torsion points with their invariant factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import cyclo, exact
from .exact import LatticeBasis
from .groups import FiniteMatrixGroup, as_element, is_pseudoreflection

DEFAULT_SUBGROUP_CACHE_CAP = 10 ** 6


def _obj(M) -> np.ndarray:
    return np.array(np.asarray(M, dtype=object).tolist(), dtype=object)


@dataclass(frozen=True, eq=False)
class ComplexTorus:
    """``R^{2n} / Z^{2n}`` with complex structure ``theta / sqrt(c)``.

    Args:
        theta: rational ``2n x 2n`` matrix with ``theta^2 = -c I``.
        c: positive integer.
        cm: optional tag ``m`` recording that the torus is ``E_m^n``.
    """

    theta: np.ndarray = field(repr=False)
    c: int = 1
    cm: int | None = None

    def __post_init__(self):
        th = _obj(self.theta)
        object.__setattr__(self, "theta", th)
        d = th.shape[0]
        if d % 2 or th.shape != (d, d):
            raise ValueError("complex structure must be an even square matrix")
        if not np.array_equal(th.dot(th), -self.c * np.eye(d, dtype=object)):
            raise ValueError("theta^2 != -c I: not a complex structure")

    @property
    def real_rank(self) -> int:
        return self.theta.shape[0]

    @property
    def dim(self) -> int:
        return self.real_rank // 2

    @classmethod
    def power_of_curve(cls, m: int, n: int) -> "ComplexTorus":
        """``E_m^n`` with ``E_m = C / Z[zeta_m]``, coordinates grouped per factor.

        For ``m`` in {1, 2} the square lattice is used.
        """
        th, c = cyclo.theta_block(m)
        T = np.zeros((2 * n, 2 * n), dtype=object)
        for i in range(n):
            T[2 * i:2 * i + 2, 2 * i:2 * i + 2] = th
        return cls(T, c, cm=m)

    def commutes(self, g) -> bool:
        g = _obj(g)
        return np.array_equal(g.dot(self.theta), self.theta.dot(g))

    def is_stable_span(self, L: LatticeBasis) -> bool:
        """Is the rational span of ``L`` stable under the complex structure?"""
        if L.rank == 0:
            return True
        img = self.theta.dot(L.matrix())
        both = np.concatenate([L.matrix(), img], axis=1)
        return exact.rank_q(both) == L.rank

    def point(self, coords) -> "TorsionPoint":
        return TorsionPoint(self, coords)


@dataclass(frozen=True, eq=False)
class TorsionPoint:
    """A rational point of the torus, coordinates reduced into ``[0, 1)``."""

    torus: ComplexTorus
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.torus.real_rank:
            raise ValueError("wrong number of coordinates")
        object.__setattr__(self, "coords", exact.reduce_mod_one(self.coords))

    def __eq__(self, other) -> bool:
        return isinstance(other, TorsionPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    @property
    def level(self) -> int:
        return exact.lcm_denominator(self.coords)

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.torus, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint(self.torus, tuple(-a for a in self.coords))

    def __repr__(self) -> str:
        return "TorsionPoint(" + ", ".join(str(x) for x in self.coords) + ")"


@dataclass(frozen=True, eq=False)
class Endomorphism:
    """Integer matrix commuting with the complex structure."""

    torus: ComplexTorus
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = _obj(self.matrix)
        if any(Fraction(x).denominator != 1 for x in M.ravel()):
            raise ValueError("endomorphisms have integer matrices")
        if not self.torus.commutes(M):
            raise ValueError("matrix does not commute with the complex structure")
        object.__setattr__(self, "matrix", M)


@dataclass(frozen=True, eq=False)
class Subtorus:
    """A saturated sublattice with complex-stable span."""

    torus: ComplexTorus
    lattice: LatticeBasis

    def __post_init__(self):
        if exact.saturate(self.lattice) != self.lattice:
            raise ValueError("subtorus lattice must be saturated")
        if not self.torus.is_stable_span(self.lattice):
            raise ValueError("span is not stable under the complex structure")

    @property
    def real_rank(self) -> int:
        return self.lattice.rank

    @property
    def dim(self) -> int:
        return self.lattice.rank // 2

    def __eq__(self, other) -> bool:
        return isinstance(other, Subtorus) and self.lattice == other.lattice

    def __hash__(self) -> int:
        return hash(self.lattice)


class FiniteSubgroup:
    """A finite subgroup of the torus, generated by torsion points.

    The element list is cached only when the order is at most ``cap``.
    """

    def __init__(self, torus: ComplexTorus, generators: Sequence, cap: int = DEFAULT_SUBGROUP_CACHE_CAP):
        self.torus = torus
        d = torus.real_rank
        self.generators = [TorsionPoint(torus, tuple(Fraction(x) for x in
                                                      (g.coords if isinstance(g, TorsionPoint) else g)))
                           for g in generators]
        N = exact.lcm_denominator([x for g in self.generators for x in g.coords])
        vecs = [[int(x * N) for x in g.coords] for g in self.generators]
        big = LatticeBasis.from_vectors(vecs + [[N * int(i == j) for i in range(d)] for j in range(d)], d)
        small = LatticeBasis.from_vectors([[N * int(i == j) for i in range(d)] for j in range(d)], d)
        factors, _ = exact.quotient_structure(big, small, enumerate_cosets=False)
        self.invariant_factors = factors
        self.order = exact._prod(factors)
        self._big = big
        self._small = small
        self._scale = N
        self._cap = cap
        self._elements = None

    def elements(self) -> list[TorsionPoint]:
        if self._elements is None:
            if self.order > self._cap:
                raise OverflowError(f"subgroup of order {self.order} exceeds cache cap")
            _, reps = exact.quotient_structure(self._big, self._small, cap=self._cap)
            # small is N Z^d, so small coordinates are the points themselves
            self._elements = [TorsionPoint(self.torus, r) for r in reps]
        return self._elements

    def contains(self, x) -> bool:
        coords = x.coords if isinstance(x, TorsionPoint) else x
        y = [Fraction(c) * self._scale for c in coords]
        if any(v.denominator != 1 for v in y):
            return False
        return self._big.contains([int(v) for v in y])

    def is_stable(self, g) -> bool:
        g = as_element(g)
        return all(self.contains(_apply(g, x.coords)) for x in self.generators)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteSubgroup(order={self.order}, factors={self.invariant_factors})"


def _apply(g: np.ndarray, x: Sequence) -> tuple[Fraction, ...]:
    return exact.reduce_mod_one(
        [sum(int(g[i, j]) * Fraction(x[j]) for j in range(len(x))) for i in range(len(x))])


# ---------------------------------------------------------------------------
# operations

def endo_image_subtorus(f: Endomorphism) -> Subtorus:
    """Subtorus ``f(A)``: the saturation of ``f(Z^{2n})``."""
    L = LatticeBasis.from_columns(f.matrix, f.torus.real_rank)
    return Subtorus(f.torus, exact.saturate(L))


def e_sigma(torus: ComplexTorus, g) -> Subtorus:
    """``E_g = im(1 - g)``."""
    g = _obj(g)
    return endo_image_subtorus(Endomorphism(torus, np.eye(len(g), dtype=object) - g))


def norm_map(g, order: int | None = None) -> np.ndarray:
    """``1 + g + ... + g^{r-1}`` with ``r`` the order of ``g``."""
    g = as_element(g)
    if order is None:
        order = is_pseudoreflection(g).order
    out = np.zeros_like(g)
    h = np.eye(len(g), dtype=np.int64)
    for _ in range(order):
        out = out + h
        h = h @ g
    return out


def d_sigma(torus: ComplexTorus, g) -> Subtorus:
    """``D_g = im(1 + g + ... + g^{r-1})``, the identity component of ``Fix(g)``."""
    return endo_image_subtorus(Endomorphism(torus, norm_map(g)))


def subtorus_intersection_group(T1: Subtorus, T2: Subtorus) -> FiniteSubgroup:
    """The finite group ``T1 & T2`` for subtori whose spans meet only in 0.

    Computed as ``(Z^{2n} & (V1 + V2)) / (L1 + L2)``; each coset
    representative ``v = v1 + v2`` gives the common point ``v1``.
    """
    torus = T1.torus
    d = torus.real_rank
    if T1.lattice.rank + T2.lattice.rank == 0:
        return FiniteSubgroup(torus, [])
    joined = list(T1.lattice.cols) + list(T2.lattice.cols)
    if exact.rank_q(exact.to_array(joined).T) != len(joined):
        raise ValueError("subtori spans intersect in positive dimension")
    S = LatticeBasis.from_vectors(joined, d)
    sat = exact.saturate(S)
    _, reps = exact.quotient_structure(sat, S)
    # reps are coordinates in the basis of S; split into the T1 part
    B = exact.to_array(joined).T
    B1 = T1.lattice.matrix()
    points = []
    for r in reps:
        v = S.matrix().dot(np.array(r, dtype=object))
        coeffs = exact.solve_q(B, list(v))
        v1 = B1.dot(np.array(coeffs[: T1.lattice.rank], dtype=object))
        points.append(tuple(v1))
    return FiniteSubgroup(torus, points)


def invariant_form(generators: Sequence, torus: ComplexTorus | None = None) -> np.ndarray:
    """``Q = sum_g g^T g`` over the group generated by ``generators``.

    When ``torus`` is given the form is further averaged over the complex
    structure, ``Q + theta^T Q theta / c``, which makes it the real part of
    a Hermitian form even for reducible actions.
    """
    G = generators if isinstance(generators, FiniteMatrixGroup) else FiniteMatrixGroup(generators)
    E = G.elements()
    Q = np.einsum("nki,nkj->ij", E, E).astype(object)
    if torus is not None:
        th = torus.theta
        Q = Q * torus.c + th.T.dot(Q).dot(th)
    return Q


def complementary_subtorus(T: Subtorus, Q) -> Subtorus:
    """Saturated lattice of vectors ``Q``-orthogonal to ``T``."""
    d = T.torus.real_rank
    if T.lattice.rank == 0:
        return Subtorus(T.torus, LatticeBasis.full(d))
    Q = _obj(Q)
    M = T.lattice.matrix().T.dot(Q)
    den = exact.lcm_denominator(M.ravel())
    K = exact.integer_kernel(M * den)
    if K.shape[1] == 0:
        return Subtorus(T.torus, LatticeBasis.zero(d))
    return Subtorus(T.torus, exact.saturate(LatticeBasis.from_columns(K, d)))


def isogeny_kernel(big: LatticeBasis, small: LatticeBasis, torus_b: ComplexTorus | None = None):
    """``Delta = big / small`` as torsion points of ``B = R^{2n} / small``.

    Both lattices are given in one ambient integer coordinate system; the
    returned points are in coordinates of the ``small`` basis.

    Returns:
        ``(Delta, basis)`` where ``basis`` is the ``small`` basis matrix (the
        change of coordinates from ``B`` to the ambient system).
    """
    if big.rank != small.rank or big.rank != big.dim:
        raise ValueError("isogeny lattices must have full rank")
    if not big.contains_lattice(small):
        raise ValueError("small lattice is not contained in big lattice")
    _, reps = exact.quotient_structure(big, small)
    d = big.dim
    if torus_b is None:
        torus_b = ComplexTorus(np.block([[np.zeros((d // 2, d // 2), dtype=object), -np.eye(d // 2, dtype=object)],
                                         [np.eye(d // 2, dtype=object), np.zeros((d // 2, d // 2), dtype=object)]]), 1)
    return FiniteSubgroup(torus_b, [r for r in reps if any(r)]), small.matrix()


@dataclass
class ReflectionDecomposition:
    factors: list[Subtorus]
    delta_order: int
    reflection_classes: list[list[int]]


def fixed_vectors(generators: Sequence) -> list[list[Fraction]]:
    """Rational vectors fixed by every generator."""
    gens = [as_element(g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    d = len(gens[0])
    M = np.concatenate([(g - np.eye(d, dtype=np.int64)).astype(object) for g in gens], axis=0)
    return exact.kernel_q(M)


def decompose_by_reflection_orbits(torus: ComplexTorus, group: FiniteMatrixGroup,
                                   Q=None) -> ReflectionDecomposition:
    """Split ``A`` into the subtori ``A_i`` spanned by classes of root lines.

    Two pseudoreflections are linked when their root lines are not
    ``Q``-orthogonal; the classes of the generated equivalence relation give
    the irreducible factors.  ``A_i`` is the saturation of the sum of the
    ``E_sigma`` lattices in a class, and ``delta_order`` is the index of
    the direct sum of the ``A_i`` lattices in ``Z^{2n}``.

    Raises:
        ValueError: if a nonzero vector is fixed by the whole group.
    """
    if fixed_vectors(group.generators):
        raise ValueError("the group fixes a nonzero vector; split off the fixed part first")
    d = torus.real_rank
    if Q is None:
        Q = invariant_form(group, torus)
    Q = _obj(Q)
    E = group.elements()
    from .groups import pseudoreflection_mask
    refl = E[pseudoreflection_mask(E)]
    lines = []
    seen = {}
    for g in refl:
        L = exact.saturate(LatticeBasis.from_columns((g - np.eye(d, dtype=np.int64)).astype(object)))
        if L not in seen:
            seen[L] = len(lines)
            lines.append(L)
    # union-find over root lines
    parent = list(range(len(lines)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    mats = [L.matrix() for L in lines]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if any(x != 0 for x in mats[i].T.dot(Q).dot(mats[j]).ravel()):
                parent[find(i)] = find(j)
    classes: dict[int, list[int]] = {}
    for i in range(len(lines)):
        classes.setdefault(find(i), []).append(i)
    groups_ = sorted(classes.values(), key=lambda c: lines[c[0]].cols)
    factors = []
    for cls in groups_:
        vecs = [c for i in cls for c in lines[i].cols]
        factors.append(Subtorus(torus, exact.saturate(LatticeBasis.from_vectors(vecs, d))))
    total = [c for F in factors for c in F.lattice.cols]
    S = LatticeBasis.from_vectors(total, d)
    delta = S.index_in(LatticeBasis.full(d)) if S.rank == d else 0
    return ReflectionDecomposition(factors, delta, groups_)
