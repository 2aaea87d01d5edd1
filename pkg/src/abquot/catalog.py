"""Scenario constructors: every (torus, group) configuration studied here.

A :class:`Scenario` is a torus ``A = R^{2n}/Z^{2n}`` together with a
finite group acting linearly on it.  Scenarios that arise as ``B / Delta``
for a ``G``-stable finite subgroup ``Delta`` of another torus ``B`` keep
the ``B`` picture alongside in :class:`AffineData`, so results can be
checked against the ``Delta x| G`` action on ``B``.

Coordinates on ``E_m^n`` are grouped per factor: entries ``2i, 2i+1`` are
the coordinates of the ``i``-th curve in the basis ``(1, i)`` (``m`` in
{2, 4}) or ``(1, omega)`` (``m`` in {3, 6}).
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from pathlib import Path
from typing import Sequence

import numpy as np

from . import cyclo, exact
from .exact import LatticeBasis
from .groups import (FiniteMatrixGroup, as_element, close_group, is_pseudoreflection, orbit_stabilizer,
                     pseudoreflection_mask)
from .torus import ComplexTorus, FiniteSubgroup

DATA_ENV = "ABQUOT_DATA"
PACKAGE_DATA = Path(__file__).with_name("data")


# ---------------------------------------------------------------------------
# scenarios

@dataclass
class AffineData:
    """The ``B`` picture of a scenario ``A = B / Delta``.

    Attributes:
        torus: the torus ``B``.
        group: ``G`` acting on ``B`` coordinates.
        delta: the kernel ``Delta`` as points of ``B``.
        basis: rational matrix whose columns are a basis of ``Lambda_A``
            in ``B`` coordinates.
    """

    torus: ComplexTorus
    group: FiniteMatrixGroup
    delta: FiniteSubgroup
    basis: np.ndarray = field(repr=False)


@dataclass
class Scenario:
    """One pair ``(A, G)``.

    Attributes:
        label: stable identifier used in reports and golden files.
        torus: the torus ``A``.
        group: ``G`` acting on ``A`` coordinates.
        affine: optional ``B`` picture.
        metadata: provenance (construction, basis conventions).
    """

    label: str
    torus: ComplexTorus
    group: FiniteMatrixGroup
    affine: AffineData | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.torus.real_rank

    def point_from_b(self, x) -> tuple[Fraction, ...]:
        """Image in ``A`` coordinates of a point given in ``B`` coordinates."""
        if self.affine is None:
            return exact.reduce_mod_one(x)
        Pi = exact.inverse_q(self.affine.basis)
        return exact.reduce_mod_one(Pi.dot(np.array([Fraction(v) for v in x], dtype=object)))

    def lattice_from_b(self, T: LatticeBasis) -> LatticeBasis:
        """Saturated direction lattice in ``A`` coordinates from one in ``B`` coordinates."""
        if self.affine is None or T.rank == 0:
            return T
        Pi = exact.inverse_q(self.affine.basis)
        M = Pi.dot(T.matrix())
        den = exact.lcm_denominator(M.ravel())
        return exact.saturate(LatticeBasis.from_columns(M * den, T.dim))

    def validate(self) -> None:
        """Check that every generator preserves the lattice, commutes with the
        complex structure and has finite order."""
        for g in self.group.generators:
            if not self.torus.commutes(g):
                raise ValueError(f"{self.label}: generator does not commute with the complex structure")
            if abs(exact.det_z(g.astype(object))) != 1:
                raise ValueError(f"{self.label}: generator is not unimodular")
            is_pseudoreflection(g)  # raises when the order is not finite
        if self.affine is not None:
            for g in self.affine.group.generators:
                if not self.affine.delta.is_stable(g):
                    raise ValueError(f"{self.label}: Delta is not G-stable")


def _torus_matrices(torus: ComplexTorus, gens, basis) -> tuple[ComplexTorus, list[np.ndarray]]:
    """Rewrite a torus and group in the lattice with the given (rational) basis."""
    P = np.asarray(basis, dtype=object)
    Pi = exact.inverse_q(P)
    theta = Pi.dot(torus.theta).dot(P)
    out = []
    for g in gens:
        h = Pi.dot(np.asarray(g, dtype=object)).dot(P)
        if any(Fraction(x).denominator != 1 for x in h.ravel()):
            raise ValueError("lattice is not stable under the group")
        out.append(np.array([[int(x) for x in row] for row in h.tolist()], dtype=np.int64))
    return ComplexTorus(theta, torus.c, cm=torus.cm), out


def rational_lattice_basis(vectors: Sequence, dim: int) -> np.ndarray:
    """Basis (columns, HNF-canonical) of ``Z^dim + span_Z(vectors)``."""
    vecs = [[Fraction(x) for x in v] for v in vectors]
    N = exact.lcm_denominator([x for v in vecs for x in v])
    cols = [[int(x * N) for x in v] for v in vecs] + [[N * int(i == j) for i in range(dim)] for j in range(dim)]
    L = LatticeBasis.from_vectors(cols, dim)
    return np.array([[Fraction(x, N) for x in c] for c in L.cols], dtype=object).T


def affine_scenario(label: str, b_torus: ComplexTorus, b_gens: Sequence, delta_gens: Sequence,
                    order: int | None = None, metadata: dict | None = None) -> Scenario:
    """Scenario ``A = B / Delta`` with ``Lambda_A = Z^{2n} + Delta``."""
    d = b_torus.real_rank
    delta = FiniteSubgroup(b_torus, delta_gens)
    b_group = FiniteMatrixGroup(b_gens, order=order)
    for g in b_group.generators:
        if not delta.is_stable(g):
            raise ValueError("Delta is not stable under the group")
    P = rational_lattice_basis([g.coords for g in delta.generators], d)
    a_torus, a_gens = _torus_matrices(b_torus, b_group.generators, P)
    group = FiniteMatrixGroup(a_gens, order=order)
    meta = dict(metadata or {})
    meta.setdefault("delta_order", delta.order)
    return Scenario(label, a_torus, group, AffineData(b_torus, b_group, delta, P), meta)


# ---------------------------------------------------------------------------
# the family G(m, p, n)

def diagonal_element(m: int, exponents: Sequence[int]) -> np.ndarray:
    """``(zeta_m^{a_1}, ..., zeta_m^{a_n})`` on ``E_m^n``."""
    n = len(exponents)
    g = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, a in enumerate(exponents):
        g[2 * i:2 * i + 2, 2 * i:2 * i + 2] = cyclo.zeta_power(m, a)
    return g


def permutation_element(perm: Sequence[int]) -> np.ndarray:
    """Coordinate permutation sending factor ``i`` to factor ``perm[i]``."""
    n = len(perm)
    g = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, j in enumerate(perm):
        g[2 * j:2 * j + 2, 2 * i:2 * i + 2] = np.eye(2, dtype=np.int64)
    return g


def monomial_element(m: int, exponents: Sequence[int], perm: Sequence[int] | None = None) -> np.ndarray:
    """``diag(zeta^a) * P_perm`` (permute first, then scale)."""
    g = diagonal_element(m, exponents)
    if perm is not None:
        g = g @ permutation_element(perm)
    return g


def gmpn_generators(m: int, p: int, n: int) -> list[np.ndarray]:
    if m < 2 or m not in (2, 3, 4, 6):
        raise ValueError(f"m = {m}: G(m,p,n) acts on a torus only for m in {{2, 3, 4, 6}}")
    if m % p:
        raise ValueError(f"p = {p} does not divide m = {m}")
    if n < 2:
        raise ValueError("n must be at least 2")
    gens = []
    if p < m:
        gens.append(diagonal_element(m, [p] + [0] * (n - 1)))
    gens.append(diagonal_element(m, [1, m - 1] + [0] * (n - 2)))
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(permutation_element(perm))
    return gens


def gmpn_order(m: int, p: int, n: int) -> int:
    return m ** n * factorial(n) // p


def build_gmpn(m: int, p: int, n: int) -> Scenario:
    """``G(m, p, n)`` acting on ``B = E_m^n`` coordinatewise and by permutations."""
    gens = gmpn_generators(m, p, n)
    torus = ComplexTorus.power_of_curve(m, n)
    group = FiniteMatrixGroup(gens, order=gmpn_order(m, p, n))
    return Scenario(f"gmpn-{m}-{p}-{n}", torus, group,
                    metadata={"construction": "G(m,p,n) on E_m^n", "m": m, "p": p, "n": n})


def build_example_a(m: int, n: int) -> Scenario:
    """``C^n x| S_n`` with ``C = mu_m`` acting on ``E_m^n``; this is ``G(m, 1, n)``."""
    sc = build_gmpn(m, 1, n)
    sc.label = f"example-a-{m}-{n}"
    sc.metadata["construction"] = "coordinatewise mu_m with permutations"
    return sc


def sum_zero_basis_matrix(perm: Sequence[int]) -> np.ndarray:
    """Integer matrix of a permutation of ``n+1`` letters on the sum-zero lattice.

    The basis is ``f_i = e_i - e_{n+1}`` (``i = 1..n``); the permutation
    sends ``e_i`` to ``e_{perm[i]}``.
    """
    n = len(perm) - 1
    M = np.zeros((n, n), dtype=np.int64)
    last = perm[n]
    for i in range(n):
        # f_i -> e_{perm i} - e_{perm n} = f_{perm i} - f_{perm n}, with f_{n} = 0
        if perm[i] < n:
            M[perm[i], i] += 1
        if last < n:
            M[last, i] -= 1
    return M


def example_b_generators(n: int) -> list[np.ndarray]:
    gens = []
    for i in range(n):
        perm = list(range(n + 1))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(np.kron(sum_zero_basis_matrix(perm), np.eye(2, dtype=np.int64)))
    return gens


def build_example_b(n: int, m: int = 2) -> Scenario:
    """``S_{n+1}`` permuting ``{x in E^{n+1} : sum x_i = 0}``.

    The lattice basis is ``f_i = e_i - e_{n+1}``; the curve is ``E_m``
    (square lattice by default).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    torus = ComplexTorus.power_of_curve(m, n)
    group = FiniteMatrixGroup(example_b_generators(n), order=factorial(n + 1))
    return Scenario(f"example-b-{n}", torus, group,
                    metadata={"construction": "S_{n+1} on the sum-zero subtorus of E^{n+1}",
                              "basis": "f_i = e_i - e_{n+1}", "n": n, "m": m})


# ---------------------------------------------------------------------------
# special torsion points

def invariant_point(m: int) -> tuple[Fraction, Fraction]:
    """A generator of ``E_0``, the ``zeta_m``-invariant points, for ``m`` in {3, 4}."""
    if m == 3 or m == 6:
        return (Fraction(2, 3), Fraction(1, 3))
    if m == 4:
        return (Fraction(1, 2), Fraction(1, 2))
    raise ValueError(f"no distinguished invariant point for m = {m}")


def invariant_points(m: int) -> list[tuple[Fraction, Fraction]]:
    """Generators of ``E_0``: ``E[2]`` for ``m = 2``, cyclic for ``m`` = 3, 4, trivial for 6."""
    h = Fraction(1, 2)
    if m == 2:
        return [(h, Fraction(0)), (Fraction(0), h)]
    if m in (3, 4):
        return [invariant_point(m)]
    return []


@dataclass
class WitnessSpec:
    """A stratum ``x_0 + T`` built from a proof, with the generators it lists.

    ``base`` and ``direction`` are in ``B`` coordinates; ``expected`` holds
    ``(translation, linear)`` pairs with translations in ``Delta``.
    """

    scenario: Scenario
    row: str
    base: tuple[Fraction, ...]
    direction: LatticeBasis
    expected: list[tuple[tuple[Fraction, ...], np.ndarray]]
    conditional: list[str] = field(default_factory=list)


def _pt(*pairs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for pair in pairs for x in pair)


def _curve_direction(n: int, coords: Sequence[int]) -> LatticeBasis:
    cols = []
    for i in coords:
        for k in range(2):
            v = [0] * (2 * n)
            v[2 * i + k] = 1
            cols.append(v)
    return LatticeBasis.from_vectors(cols, 2 * n) if cols else LatticeBasis.zero(2 * n)


PROP33_ROWS = [(2, 2), (3, 3), (4, 2), (4, 4), (6, 2), (6, 3), (6, 6)]


def _prop33(m: int, p: int, n: int) -> WitnessSpec:
    if (m, p) not in PROP33_ROWS:
        raise ValueError(f"(m, p) = ({m}, {p}) is not a row of the non-smooth G(m,p,n) table")
    sc = build_gmpn(m, p, n)
    zero = (Fraction(0), Fraction(0))
    if (m, p) in ((2, 2), (6, 2)):
        t = (Fraction(1, 2), Fraction(0))
    else:
        t = invariant_point(m)
    base = _pt(t, *([zero] * (n - 1)))
    direction = _curve_direction(n, range(2, n))
    rest = [0] * (n - 2)
    z = {2: 1, 3: 1, 4: 1, 6: 2}  # exponent of zeta_m giving -1, zeta_3, zeta_4 ...
    E = lambda *a: diagonal_element(m, list(a) + rest)
    table = {
        (2, 2): [E(1, 1)],
        (3, 3): [E(1, 2)],
        (4, 2): [E(1, 1), E(2, 0), E(0, 2)],
        (4, 4): [E(1, 3)],
        (6, 2): [E(3, 3), E(0, 2)],
        (6, 3): [E(2, 4), E(0, 3)],
        (6, 6): [E(2, 4)],
    }
    zero_t = tuple(Fraction(0) for _ in range(2 * n))
    return WitnessSpec(sc, f"({m},{p})", base, direction, [(zero_t, g) for g in table[(m, p)]])


def build_hyperplanar_delta(m: int, n: int, p: int | None = None) -> Scenario:
    """``Delta = {(x_i) in E_0^n : sum x_i = 0}`` with ``G(m, p, n)``, ``p = m`` by default.

    Raises:
        ValueError: for ``m = 6``, where ``Delta`` must be trivial.
    """
    if m == 6:
        raise ValueError("m = 6 admits no nontrivial kernel Delta")
    if m not in (2, 3, 4):
        raise ValueError(f"unsupported m = {m}")
    p = m if p is None else p
    b = build_gmpn(m, p, n)
    zero = (Fraction(0), Fraction(0))
    gens = []
    for t in invariant_points(m):
        for i in range(n - 1):
            pairs = [zero] * n
            pairs[i] = t
            pairs[i + 1] = tuple(-x for x in t)
            gens.append(_pt(*pairs))
    sc = affine_scenario(f"hyperplanar-{m}-{p}-{n}", b.torus, b.group.generators, gens,
                         order=gmpn_order(m, p, n),
                         metadata={"construction": "G(m,p,n) on E_m^n / hyperplanar Delta",
                                   "m": m, "p": p, "n": n})
    fixed_order = {2: 4, 3: 3, 4: 2}[m]  # |E_0|, the points fixed by the unit of order m
    expected = fixed_order ** (n - 1)
    if sc.affine.delta.order != expected:
        raise AssertionError("hyperplanar subgroup has the wrong order")
    return sc


def build_incomplete_hyperplanar(p: int, n: int) -> Scenario:
    """``m = 2`` with ``Delta`` generated by the orbit of one hyperplanar 2-torsion element."""
    b = build_gmpn(2, p, n)
    t = (Fraction(1, 2), Fraction(0))
    zero = (Fraction(0), Fraction(0))
    gens = []
    for i in range(n - 1):
        pairs = [zero] * n
        pairs[i] = t
        pairs[i + 1] = t
        gens.append(_pt(*pairs))
    return affine_scenario(f"incomplete-hyperplanar-{p}-{n}", b.torus, b.group.generators, gens,
                           order=gmpn_order(2, p, n),
                           metadata={"construction": "G(2,p,n) on E^n / one hyperplanar orbit",
                                     "t": "(1/2, 0)", "n": n, "p": p})


def build_diagonal_delta_symmetric(n: int, level: int | None = None) -> Scenario:
    """``S_{n+1}`` on the sum-zero torus ``B`` modulo a diagonal ``(t, ..., t)``.

    ``t`` has order ``level`` (default ``n + 1``) and ``(n+1) t = 0``.
    """
    level = n + 1 if level is None else level
    if (n + 1) % level:
        raise ValueError("the diagonal point must satisfy (n+1) t = 0")
    b = build_example_b(n)
    t = (Fraction(1, level), Fraction(0))
    gens = [_pt(*([t] * n))]
    return affine_scenario(f"diagonal-sym-{n}", b.torus, b.group.generators, gens,
                           order=factorial(n + 1),
                           metadata={"construction": "S_{n+1} on sum-zero E^{n+1} / diagonal Delta",
                                     "t": f"(1/{level}, 0)", "n": n})


def build_diagonal_delta_gmpn(m: int, p: int, n: int, s=None) -> Scenario:
    """``G(m,p,n)`` on ``E_m^n`` modulo the diagonal ``(s, ..., s)``."""
    b = build_gmpn(m, p, n)
    s = (Fraction(1, 2), Fraction(0)) if s is None else tuple(Fraction(x) for x in s)
    return affine_scenario(f"diagonal-{m}-{p}-{n}", b.torus, b.group.generators, [_pt(*([s] * n))],
                           order=gmpn_order(m, p, n),
                           metadata={"construction": "G(m,p,n) on E_m^n / diagonal Delta", "n": n})


PROP36_ROWS = [(2, 1, 4), (2, 2, 4), (2, 1, 3), (3, 1, 3), (3, 3, 3), (4, 1, 3), (4, 2, 3), (4, 4, 3)]


def _prop36(m: int, p: int, n: int) -> WitnessSpec:
    sc = build_hyperplanar_delta(m, n, p)
    h, q, o = Fraction(1, 2), Fraction(1, 4), Fraction(0)
    zero = (o, o)
    rest_pts = lambda k: [zero] * (n - k)
    Z = lambda pairs: _pt(*pairs)
    D = lambda *a: diagonal_element(m, list(a) + [0] * (n - len(a)))
    expected, conditional = [], []
    if m == 2:
        a, b, c = (h, o), (o, h), (h, h)
        a1, b1, c1 = (q, o), (o, q), (q, q)
        if n >= 4:
            base = Z([zero, a1, b1, c1] + rest_pts(4))
            direction = _curve_direction(n, range(4, n))
            expected.append((Z([zero, a, b, c] + rest_pts(4)), D(1, 1, 1, 1)))
            if p == 1:
                expected.append((Z([zero] * n), D(1)))
                conditional.append("exists only if p = 1")
        elif n == 3 and p == 1:
            base = Z([a1, b1, c1])
            direction = LatticeBasis.zero(6)
            expected.append((Z([a, b, c]), D(1, 1, 1)))
        else:
            raise ValueError("m = 2 needs n >= 4 or (p, n) = (1, 3)")
    elif m == 3:
        d = (Fraction(1, 3), o)
        e = invariant_point(3)
        two = lambda x: tuple(2 * v for v in x)
        base = Z([zero, d, two(d)] + rest_pts(3))
        direction = _curve_direction(n, range(3, n))
        expected.append((Z([zero, two(e), e] + rest_pts(3)), D(1, 1, 1)))
        if p == 1:
            expected.append((Z([zero] * n), D(1)))
            conditional.append("exists only if p = 1")
    elif m == 4:
        d = (h, o)
        e = invariant_point(4)
        e1 = (q, q)
        base = Z([zero, d, e1] + rest_pts(3))
        direction = _curve_direction(n, range(3, n))
        expected.append((Z([zero, e, e] + rest_pts(3)), D(1, 1, 2)))
        if p <= 2:
            expected.append((Z([zero] * n), D(2)))
            conditional.append("exists only if p <= 2")
        if p == 1:
            expected.append((Z([zero] * n), D(1)))
            conditional.append("exists only if p = 1")
    else:
        raise ValueError(f"no hyperplanar witness for m = {m}")
    return WitnessSpec(sc, f"({m},{p},{n})", base, direction, expected, conditional)


def _prop35(p: int, n: int) -> WitnessSpec:
    """Point ``(t_1, t_2, x_3, ...)`` for the incomplete hyperplanar ``m = 2`` case."""
    sc = build_incomplete_hyperplanar(p, n)
    t = (Fraction(1, 2), Fraction(0))
    t1 = (Fraction(1, 4), Fraction(0))
    s = (Fraction(0), Fraction(1, 2))
    t2 = (t1[0] + s[0], t1[1] + s[1])
    zero = (Fraction(0), Fraction(0))
    base = _pt(t1, t2, *([zero] * (n - 2)))
    direction = _curve_direction(n, range(2, n))
    tbar = _pt(t, t, *([zero] * (n - 2)))
    rho = diagonal_element(2, [1, 1] + [0] * (n - 2))
    return WitnessSpec(sc, f"(2,{p},{n})", base, direction, [(tbar, rho)])


def witness_points(m: int, p: int, n: int, which: str) -> WitnessSpec:
    """Special points or strata from the non-smoothness arguments.

    Args:
        which: ``"prop33"`` (trivial kernel, point ``(t, 0, x_3, ...)``),
            ``"prop35"`` (incomplete hyperplanar kernel, ``m = 2``) or
            ``"prop36"`` (full hyperplanar kernel).
    """
    if which == "prop33":
        return _prop33(m, p, n)
    if which == "prop35":
        if m != 2:
            raise ValueError("the incomplete hyperplanar case needs m = 2")
        return _prop35(p, n)
    if which == "prop36":
        return _prop36(m, p, n)
    raise ValueError(f"unknown witness family {which!r}")


# ---------------------------------------------------------------------------
# root lattices and the S matrix

def root_lattice(scenario: Scenario) -> tuple[LatticeBasis, Scenario]:
    """``Lambda^0``: the lattice generated by ``Lambda & L`` over all root lines ``L``.

    Returns the lattice and the scenario on ``B = C^n / Lambda^0`` (same
    group, rewritten in a basis of ``Lambda^0``).
    """
    d = scenario.dim
    E = scenario.group.elements()
    refl = E[pseudoreflection_mask(E)]
    if len(refl) == 0:
        raise ValueError("the group contains no pseudoreflection")
    eye = np.eye(d, dtype=np.int64)
    lines = {exact.saturate(LatticeBasis.from_columns((g - eye).astype(object))) for g in refl}
    vecs = [c for L in sorted(lines, key=lambda L: L.cols) for c in L.cols]
    L0 = LatticeBasis.from_vectors(vecs, d)
    if L0.rank != d:
        raise ValueError("root lattice is not of full rank; the action is reducible or degenerate")
    torus, gens = _torus_matrices(scenario.torus, scenario.group.generators, L0.matrix())
    sc = Scenario(scenario.label + "/root", torus,
                  FiniteMatrixGroup(gens, order=scenario.group.order), metadata=dict(scenario.metadata))
    return L0, sc


@dataclass
class IntermediateLattice:
    label: str
    basis: np.ndarray  # rational columns in the ambient coordinates
    index: int  # index over Lambda^0


@dataclass
class LatticeEnumeration:
    S: np.ndarray
    det_norm: int  # |det_C S|^2, the real determinant and the index of Lambda^0 in S^-1 Lambda^0
    quotient_factors: list[int]
    lattices: list[IntermediateLattice]
    action_trivial: bool


def s_matrix(reflections: Sequence[np.ndarray]) -> np.ndarray:
    """``S = n I - sum R_i`` for ``n`` designated reflections."""
    R = [as_element(r) for r in reflections]
    d = len(R[0])
    n = d // 2
    if len(R) != n:
        raise ValueError(f"need exactly n = {n} designated reflections, got {len(R)}")
    for r in R:
        if not is_pseudoreflection(r).is_pseudoreflection:
            raise ValueError("designated element is not a pseudoreflection")
    return (n * np.eye(d, dtype=np.int64) - sum(R)).astype(object)


def _subgroups(elements: list[tuple], add, zero) -> list[frozenset]:
    """All subgroups of a small finite abelian group given by its elements."""
    def span(gens):
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    found = {frozenset([zero])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for x in elements:
                if x not in H:
                    K = span(list(H) + [x])
                    if K not in found:
                        found.add(K)
                        nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def s_matrix_and_intermediate_lattices(scenario: Scenario, designated: Sequence[int] | Sequence[np.ndarray],
                                       root_basis=None, named: dict | None = None) -> LatticeEnumeration:
    """Every ``G``-invariant lattice between ``Lambda^0`` and ``S^{-1} Lambda^0``.

    Args:
        scenario: the scenario whose lattice ``Z^{2n}`` is ``Lambda^0``
            (or pass ``root_basis`` for the columns of ``Lambda^0``).
        designated: indices into the generators, or the matrices themselves.
        named: optional ``{label: rational basis}`` used to label the
            lattices found; unmatched lattices get ``L<k>`` labels.
    """
    gens = scenario.group.generators
    R = [gens[i] for i in designated] if designated and isinstance(designated[0], (int, np.integer)) \
        else [as_element(r) for r in designated]
    d = scenario.dim
    S = s_matrix(R)
    det_real = abs(exact.det_z(S))
    B0 = np.eye(d, dtype=object) if root_basis is None else np.asarray(root_basis, dtype=object)
    top = exact.inverse_q(S).dot(B0)
    N = exact.lcm_denominator(top.ravel())
    big = LatticeBasis.from_columns(top * N, d)
    small = LatticeBasis.from_columns(B0 * N, d)
    factors, reps = exact.quotient_structure(big, small)
    # reps are in the small (Lambda^0) basis; work with them as vectors mod Z
    zero = tuple(Fraction(0) for _ in range(d))
    add = lambda x, y: exact.reduce_mod_one([a + b for a, b in zip(x, y)])
    # columns of Lambda^0 in ambient coordinates (HNF order)
    small_basis = np.array([[Fraction(int(x), N) for x in row] for row in small.matrix()], dtype=object)
    # action of G on the quotient, in Lambda^0 coordinates
    Bi = exact.inverse_q(small_basis)
    gl = [Bi.dot(np.asarray(g, dtype=object)).dot(small_basis) for g in gens]
    act = lambda g, x: exact.reduce_mod_one(g.dot(np.array(x, dtype=object)))
    trivial = all(act(g, x) == x for g in gl for x in reps)
    subs = _subgroups(reps, add, zero)
    stable = [H for H in subs if all(act(g, x) in H for g in gl for x in H)]
    lattices = []
    named = named or {}
    named_lats = {}
    for lab, basis in named.items():
        M = np.asarray(basis, dtype=object)
        named_lats[LatticeBasis.from_columns(M * N, d)] = lab
    k = 1
    for H in stable:
        vecs = [small_basis.dot(np.array(x, dtype=object)) for x in H if any(x)]
        basis = rational_lattice_basis(vecs, d) if root_basis is None else \
            _rational_basis_over(small_basis, vecs)
        L = LatticeBasis.from_columns(basis * N, d)
        if L in named_lats:
            label = named_lats[L]
            basis = np.asarray(named[label], dtype=object)
        elif len(H) == 1:
            label = "L0"
        elif len(H) == len(reps):
            label = "S^-1 L0"
        else:
            label = f"L{k}"
            k += 1
        lattices.append(IntermediateLattice(label, basis, len(H)))
    lattices.sort(key=lambda L: (L.index, L.label))
    return LatticeEnumeration(S, det_real, factors, lattices, trivial)


def _rational_basis_over(base: np.ndarray, vecs) -> np.ndarray:
    d = base.shape[0]
    cols = [list(base[:, j]) for j in range(d)] + [list(v) for v in vecs]
    N = exact.lcm_denominator([x for c in cols for x in c])
    L = LatticeBasis.from_vectors([[int(Fraction(x) * N) for x in c] for c in cols], d)
    return np.array([[Fraction(x, N) for x in c] for c in L.cols], dtype=object).T


# ---------------------------------------------------------------------------
# sporadic data files

@dataclass
class SporadicData:
    """Reconstructed lattice data for one Shephard-Todd group.

    Attributes:
        st_number: Shephard-Todd number.
        n: complex dimension.
        ring: the order ``Z[tau]`` carrying the lattice.
        multipliers: ``tau_i = u_i + v_i tau`` so the basis is
            ``(e_1..e_n, tau_1 e_1..tau_n e_n)``.
        generators: complex ``n x n`` matrices as pairs ``(C0, C1)``.
        order: Shephard-Todd group order.
        designated: indices of the generators forming ``S``.
        extra_vectors: named rational vectors in the real basis.
        lattices: ``label -> {slot: expression}`` replacement rules; slots
            are 0-based here and 1-based (``e_1`` is slot 1) in the files.
        path: file the data came from.
    """

    st_number: int
    n: int
    ring: cyclo.QuadraticOrder
    multipliers: list[tuple[Fraction, Fraction]]
    generators: list[tuple[np.ndarray, np.ndarray]]
    order: int
    designated: list[int]
    extra_vectors: dict[str, tuple[Fraction, ...]]
    lattices: dict[str, dict[int, str]]
    provenance: str = ""
    path: str = ""
    real_group: bool = False

    def real_generators(self) -> list[np.ndarray]:
        P = cyclo.multiplier_change(self.multipliers, self.ring)
        Pi = exact.inverse_q(P)
        out = []
        for C0, C1 in self.generators:
            M = Pi.dot(cyclo.realify(C0, C1, self.ring)).dot(P)
            if any(Fraction(x).denominator != 1 for x in M.ravel()):
                raise ValueError(f"ST{self.st_number}: generator does not preserve the lattice")
            out.append(np.array([[int(x) for x in r] for r in M.tolist()], dtype=np.int64))
        return out

    def torus(self) -> ComplexTorus:
        P = cyclo.multiplier_change(self.multipliers, self.ring)
        theta = exact.inverse_q(P).dot(self.ring.theta(self.n)).dot(P)
        return ComplexTorus(theta, self.ring.norm_of_theta)

    def vector(self, expr: str) -> tuple[Fraction, ...]:
        """Evaluate a lattice-vector expression.

        Terms are joined by ``+`` or ``-``; each is an optional rational
        coefficient with ``*`` followed by a named extra vector or a basis
        vector ``e<k>`` (1-based), e.g. ``"d1+2*d7"`` or ``"2/3*e1+1/3*e4"``.
        """
        d = 2 * self.n
        total = [Fraction(0)] * d
        text = expr.replace(" ", "")
        terms = re.findall(r"([+-]?)(?:(\d+(?:/\d+)?)\*)?([A-Za-z]\w*)", text)
        if not terms or "".join(s + (c + "*" if c else "") + v for s, c, v in terms) != text.lstrip("+"):
            raise ValueError(f"cannot parse lattice vector {expr!r}")
        for sign, coeff, name in terms:
            k = Fraction(coeff or 1) * (-1 if sign == "-" else 1)
            if name in self.extra_vectors:
                v = self.extra_vectors[name]
            elif re.fullmatch(r"e\d+", name) and 1 <= int(name[1:]) <= d:
                v = [Fraction(int(i == int(name[1:]) - 1)) for i in range(d)]
            else:
                raise ValueError(f"unknown vector {name!r} in {expr!r}")
            total = [a + k * b for a, b in zip(total, v)]
        return tuple(total)

    def lattice_basis(self, label: str) -> np.ndarray:
        """Rational basis (columns) of a named lattice.

        A rule is either ``{slot: expression}`` (unit vectors with the given
        slots replaced) or ``{"basis": [expression, ...]}`` (a full basis).
        """
        if label not in self.lattices:
            raise KeyError(f"ST{self.st_number} has no lattice {label!r}; known: {list(self.lattices)}")
        d = 2 * self.n
        rule = self.lattices[label]
        if "basis" in rule:
            if len(rule["basis"]) != d:
                raise ValueError(f"lattice {label} needs {d} basis vectors")
            B = np.array([self.vector(e) for e in rule["basis"]], dtype=object).T
        else:
            B = np.array([[Fraction(int(i == j)) for j in range(d)] for i in range(d)], dtype=object)
            for slot, expr in rule.items():
                B[:, slot] = np.array(self.vector(expr), dtype=object)
        if exact.det_z(B * exact.lcm_denominator(B.ravel())) == 0:
            raise ValueError(f"lattice {label} basis is degenerate")
        return B

    def scenario(self, label: str | None = None, order: int | None = None) -> Scenario:
        """Scenario on ``C^n / Lambda`` for a named lattice (root lattice by default)."""
        label = label or next(iter(self.lattices))
        base = Scenario(f"st{self.st_number}", self.torus(),
                        FiniteMatrixGroup(self.real_generators(), order=order or self.order))
        B = self.lattice_basis(label)
        torus, gens = _torus_matrices(base.torus, base.group.generators, B)
        return Scenario(f"st{self.st_number}/{label}", torus,
                        FiniteMatrixGroup(gens, order=order or self.order),
                        metadata={"st_number": self.st_number, "lattice": label,
                                  "data_file": os.path.basename(self.path),
                                  "basis": "e_1..e_n, tau_i e_i with named slots replaced"})

    def root_scenario(self) -> Scenario:
        return self.scenario(next(iter(self.lattices)))


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x)


def _lattice_rule(rule: dict) -> dict:
    if "basis" in rule:
        return {"basis": list(rule["basis"])}
    return {int(slot) - 1: expr for slot, expr in rule.items()}


def _checksum(payload: dict) -> str:
    body = {k: v for k, v in payload.items() if k != "checksum"}
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(text.encode()).hexdigest()


def data_directory() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else PACKAGE_DATA


def sporadic_path(st_number: int) -> Path:
    return data_directory() / f"st{st_number}.json"


def load_sporadic(path, verify_order: bool | None = None) -> SporadicData:
    """Read and validate a sporadic-group data file.

    Checks: checksum, integrality of the realified generators, unimodularity,
    commutation with the complex structure, finite generator orders, and
    (when the group is small enough, or ``verify_order``) the closure order.

    Raises:
        ValueError: naming the violated invariant.
    """
    if isinstance(path, int):
        path = sporadic_path(path)
    path = Path(path)
    payload = json.loads(path.read_text())
    if payload.get("checksum") != _checksum(payload):
        raise ValueError(f"{path.name}: checksum mismatch")
    R = cyclo.ring(payload["ring"])
    n = int(payload["n"])
    gens = []
    for g in payload["generators"]:
        C0 = np.array([[_frac(e[0]) for e in row] for row in g], dtype=object)
        C1 = np.array([[_frac(e[1]) for e in row] for row in g], dtype=object)
        if C0.shape != (n, n):
            raise ValueError(f"{path.name}: generator is not {n}x{n}")
        gens.append((C0, C1))
    data = SporadicData(
        st_number=int(payload["st_number"]), n=n, ring=R,
        multipliers=[(_frac(u), _frac(v)) for u, v in payload["multipliers"]],
        generators=gens, order=int(payload["order"]),
        designated=[int(i) for i in payload["designated_reflections"]],
        extra_vectors={k: tuple(_frac(x) for x in v) for k, v in payload.get("extra_vectors", {}).items()},
        lattices={lab: _lattice_rule(rule) for lab, rule in payload["lattices"].items()},
        provenance=payload.get("provenance", ""), path=str(path),
        real_group=bool(payload.get("real_group", False)))
    real = data.real_generators()
    torus = data.torus()
    for g in real:
        if abs(exact.det_z(g.astype(object))) != 1:
            raise ValueError(f"{path.name}: generator is not unimodular")
        if not torus.commutes(g):
            raise ValueError(f"{path.name}: generator does not commute with the complex structure")
        is_pseudoreflection(g)
    for i in data.designated:
        if not is_pseudoreflection(real[i]).is_pseudoreflection:
            raise ValueError(f"{path.name}: designated generator {i} is not a pseudoreflection")
    for label in data.lattices:
        data.scenario(label)  # raises when a named lattice is not G-stable
    if verify_order is None:
        verify_order = data.order <= CLOSURE_ORDER_LIMIT
    if verify_order:
        if data.order <= CLOSURE_ORDER_LIMIT:
            _, k = close_group(real, cap=data.order + 1)
        else:
            k = _order_by_orbit(real, payload, path)
        if k != data.order:
            raise ValueError(f"{path.name}: group order is {k}, expected {data.order}")
    return data


CLOSURE_ORDER_LIMIT = 200_000


def _order_by_orbit(real, payload: dict, path: Path) -> int:
    """``|orbit| * |stabilizer|`` of the file's ``order_check_point``.

    Used for groups too large to close; the point must have a stabilizer
    small enough to enumerate.
    """
    x = payload.get("order_check_point")
    if x is None:
        raise ValueError(f"{path.name}: group too large to close and no order_check_point given")
    res = orbit_stabilizer(FiniteMatrixGroup(real), [_frac(v) for v in x])
    return res.orbit_size * res.stabilizer.order


def write_sporadic(path, payload: dict) -> None:
    payload = dict(payload)
    payload["checksum"] = _checksum(payload)
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# builtin registry

def builtin(label: str) -> Scenario:
    """Construct a builtin scenario from its label.

    Recognised labels: ``example-a-M-N``, ``example-b-N``,
    ``gmpn-M-P-N``, ``hyperplanar-M-P-N``, ``incomplete-hyperplanar-P-N``,
    ``diagonal-sym-N``, ``diagonal-M-P-N`` and ``stK`` or ``stK/LABEL``
    for the sporadic data files.
    """
    parts = label.split("-")
    try:
        if label.startswith("example-a-"):
            return build_example_a(int(parts[2]), int(parts[3]))
        if label.startswith("example-b-"):
            return build_example_b(int(parts[2]))
        if label.startswith("gmpn-"):
            return build_gmpn(int(parts[1]), int(parts[2]), int(parts[3]))
        if label.startswith("hyperplanar-"):
            return build_hyperplanar_delta(int(parts[1]), int(parts[3]), int(parts[2]))
        if label.startswith("incomplete-hyperplanar-"):
            return build_incomplete_hyperplanar(int(parts[2]), int(parts[3]))
        if label.startswith("diagonal-sym-"):
            return build_diagonal_delta_symmetric(int(parts[2]))
        if label.startswith("diagonal-"):
            return build_diagonal_delta_gmpn(int(parts[1]), int(parts[2]), int(parts[3]))
        m = re.fullmatch(r"st(\d+)(?:/(.+))?", label)
        if m:
            data = load_sporadic(int(m.group(1)), verify_order=False)
            return data.scenario(m.group(2))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad scenario label {label!r}: {exc}") from exc
    raise ValueError(f"unknown scenario label {label!r}")


SMALL_BUILTINS = [
    "example-a-2-3", "example-a-3-3", "example-a-4-3", "example-a-6-3",
    "example-b-2", "example-b-3",
    "gmpn-2-2-3", "gmpn-3-3-3", "gmpn-4-2-3", "gmpn-4-4-3", "gmpn-6-2-3", "gmpn-6-3-3", "gmpn-6-6-3",
    "hyperplanar-2-2-3", "hyperplanar-3-3-3", "hyperplanar-4-4-3",
    "incomplete-hyperplanar-2-3", "diagonal-sym-3",
]


# ---------------------------------------------------------------------------
# published stabilizer tables for the sporadic groups

@dataclass(frozen=True)
class TableRow:
    """One row of a sporadic stabilizer table.

    Attributes:
        table: ``"paper1"`` (groups with ``|det S| = 1``) or ``"paper2"``.
        st_number: Shephard-Todd number.
        lattice: lattice label in the data file.
        v0: the point in the basis of that lattice.
        S0, P0: published ``|S_0|`` and ``|P_0|``.
        tier: ``"small"`` (default runs), ``"large"`` (needs ``--large``) or
            ``"optional"`` (large and allowed to be missing).
    """

    table: str
    st_number: int
    lattice: str
    v0: tuple[Fraction, ...]
    S0: int
    P0: int
    tier: str = "small"

    @property
    def point_text(self) -> str:
        return "(" + ",".join(str(x) for x in self.v0) + ")"


def _v(*entries) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in entries)


def _half_at(d: int, *slots: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, 2) if i + 1 in slots else Fraction(0) for i in range(d))


_h, _t, _q = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)

TABLE_ROWS = [
    TableRow("paper1", 5, "L0", _v(_t, _t, _t, 0), 3, 1),
    TableRow("paper1", 8, "L0", _v(_t, _t, _t, 0), 3, 1),
    TableRow("paper1", 12, "L0", _v(0, 0, 0, _h), 16, 8),
    TableRow("paper1", 24, "L0", _v(_q, -_q, -_q, _h, _q, -_q), 4, 1),
    TableRow("paper1", 26, "K26_1", _v(_h, _h, _h, 0, _h, _h), 36, 18),
    TableRow("paper1", 26, "K26_2", _v(0, 0, -_t, 0, 0, _t), 72, 24),
    TableRow("paper1", 28, "alpha", _half_at(8, 1, 2, 3, 4, 5), 12, 6),
    TableRow("paper1", 28, "beta", _half_at(8, 2, 3, 7), 16, 8),
    TableRow("paper1", 28, "gamma", _half_at(8, 2, 7), 16, 8),
    TableRow("paper1", 29, "L0", _half_at(8, 1, 5), 768, 384, "large"),
    TableRow("paper1", 31, "L0", _half_at(8, 1, 2), 384, 192, "large"),
    TableRow("paper1", 32, "L0", _half_at(8, 1), 1296, 648, "large"),
    TableRow("paper1", 34, "L0", tuple(_t if i == 0 else -_t if i == 6 else Fraction(0) for i in range(12)),
             155520, 51840, "optional"),
    TableRow("paper1", 37, "L0", _half_at(16, 1, 2, 3, 4, 5, 6, 7, 9, 10, 16), 103680, 51840, "optional"),
    TableRow("paper2", 4, "L0", _v(_h, 0, 0, 0), 2, 1),
    TableRow("paper2", 4, "L1", _v(0, _h, 0, 0), 4, 1),
    TableRow("paper2", 4, "L2", _v(0, 0, _h, _h), 4, 1),
    TableRow("paper2", 4, "L3", _v(0, _h, _h, 0), 6, 3),
    TableRow("paper2", 4, "S^-1 L0", _v(0, 0, 0, _h), 8, 1),
    TableRow("paper2", 25, "L0", _v(0, -_t, 0, 0, _t, -_t), 3, 1),
    TableRow("paper2", 25, "S^-1 L0", _v(0, 0, 0, _t, 0, _t), 72, 24),
    TableRow("paper2", 33, "L0", _half_at(10, 2, 4, 5, 6, 8, 10), 108, 54),
    TableRow("paper2", 33, "L1", _half_at(10, 1), 1296, 648),
    TableRow("paper2", 33, "L2", _half_at(10, 6), 1296, 648),
    TableRow("paper2", 33, "L3", _half_at(10, 1, 6), 240, 120),
    TableRow("paper2", 33, "S^-1 L0", _half_at(10, 1, 6), 1296, 648),
    TableRow("paper2", 35, "L0", _half_at(12, 2, 4, 5, 6, 8), 72, 36),
    TableRow("paper2", 35, "L1", _v(0, _t, _t, 0, _t, 0, 0, 0, 0, 0, 0, 0), 648, 216),
    TableRow("paper2", 35, "L2", _v(0, 0, 0, 0, 0, 0, 0, _t, _t, 0, _t, 0), 648, 216),
    TableRow("paper2", 35, "L3", _v(0, _t, _t, 0, _t, 0, 0, _t, _t, 0, _t, 0), 648, 216),
    TableRow("paper2", 35, "L4", _v(0, _t, _t, 0, _t, 0, 0, -_t, -_t, 0, -_t, 0), 648, 216),
    TableRow("paper2", 35, "S^-1 L0", _v(0, _t, _t, 0, _t, 0, 0, _t, _t, 0, _t, 0), 648, 216),
    TableRow("paper2", 36, "L0", _half_at(14, 1, 2, 3, 4, 5, 6, 7, 8, 9, 14), 1440, 720),
    TableRow("paper2", 36, "L1", _half_at(14, 2), 103680, 51840, "large"),
    TableRow("paper2", 36, "L2", _half_at(14, 9), 103680, 51840, "large"),
    TableRow("paper2", 36, "L3", _half_at(14, 2, 9), 3840, 1920, "large"),
    TableRow("paper2", 36, "S^-1 L0", _half_at(14, 2, 9), 103680, 51840, "large"),
]


def table_rows(table: str, tiers: Sequence[str] = ("small",)) -> list[TableRow]:
    """Rows of ``paper1`` or ``paper2`` restricted to the given tiers."""
    if table not in ("paper1", "paper2"):
        raise ValueError(f"unknown sporadic table {table!r}")
    return [r for r in TABLE_ROWS if r.table == table and r.tier in tiers]


def enumerate_sporadic_lattices(data: SporadicData) -> LatticeEnumeration:
    """Invariant lattices between the first lattice of a data file and its ``S``-dual.

    Lattices that coincide with a named lattice of the file take its label.
    """
    first = next(iter(data.lattices))
    sc = data.scenario(first)
    B0i = exact.inverse_q(data.lattice_basis(first))
    named = {label: B0i.dot(data.lattice_basis(label)) for label in data.lattices}
    return s_matrix_and_intermediate_lattices(sc, data.designated, named=named)
