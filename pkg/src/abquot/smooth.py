"""Smoothness of ``A/G`` through the Chevalley-Shephard-Todd criterion.

The quotient is smooth at the image of ``x`` exactly when ``Stab_G(x)`` is
generated by pseudoreflections.  The auditor works with *strata*: a
translated subtorus ``x_0 + T`` together with its generic stabilizer, the
subgroup fixing it pointwise.  Starting from the components of every
fixed locus ``Fix(g)`` and repeatedly intersecting with further fixed
loci, every stabilizer that occurs on ``A`` appears as the generic
stabilizer of some stratum.  Dimensions drop at each step, so the
process ends after at most ``n`` rounds, and the verdict is then
complete.  An exhaustive scan of ``A[N]`` cross-checks the strata.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from . import exact
from .catalog import Scenario
from .exact import LatticeBasis
from .groups import (AffineElement, FiniteMatrixGroup, _batch_keys, canonical_mod_subtorus,
                     close_group, element_key, element_without_eigenvalue_one, is_pseudoreflection,
                     orbit_stabilizer, point_level, point_stabilizer_mask, point_to_ints,
                     pseudoreflection_mask, reflection_subgroup, solve_congruence, _minimal_generators)
from .torus import TorsionPoint

SAMPLE_PRIME = 97
BRUTE_FORCE_LIMIT = 200_000


# ---------------------------------------------------------------------------
# reports

@dataclass
class StabilizerReport:
    """Stabilizer of one torsion point.

    Attributes:
        point: canonical coordinates in ``[0, 1)``.
        order: ``|S_0|``.
        reflection_order: ``|P_0|``, the order of the subgroup generated by
            the pseudoreflections of ``S_0``.
        generators: a generating set of ``S_0``.
        pseudoreflections: every pseudoreflection in ``S_0``.
    """

    point: tuple[Fraction, ...]
    order: int
    reflection_order: int
    generators: list[np.ndarray] = field(repr=False)
    pseudoreflections: list[np.ndarray] = field(repr=False)
    elements: np.ndarray | None = field(default=None, repr=False)

    @property
    def smooth(self) -> bool:
        return self.order == self.reflection_order

    def to_dict(self) -> dict:
        return {"point": [str(x) for x in self.point], "S0": self.order, "P0": self.reflection_order,
                "smooth": self.smooth, "pseudoreflections": len(self.pseudoreflections),
                "generators": [g.tolist() for g in self.generators]}


def _report_from_elements(x, elems: np.ndarray, generators=None) -> StabilizerReport:
    S = FiniteMatrixGroup.from_elements(elems)
    refl = elems[pseudoreflection_mask(elems)]
    _, p0 = reflection_subgroup(S)
    gens = generators if generators is not None else _minimal_generators(elems)
    return StabilizerReport(exact.reduce_mod_one(x), len(elems), p0, list(gens), list(refl), S.elements())


def _use_closure(group: FiniteMatrixGroup) -> bool:
    return group.is_closed or group.order <= BRUTE_FORCE_LIMIT


def point_stabilizer_report(scenario: Scenario, x, method: str = "auto") -> StabilizerReport:
    """``S_0 = Stab_G(x)`` and ``P_0`` for a torsion point of ``A``.

    Args:
        x: coordinates in the lattice basis of ``A`` (a :class:`TorsionPoint`
            is accepted).
        method: ``"closure"`` scans the closed group, ``"orbit"`` uses
            orbit-stabilizer with Schreier generators, ``"auto"`` picks by size.
    """
    if isinstance(x, TorsionPoint):
        x = x.coords
    x = exact.reduce_mod_one(x)
    if len(x) != scenario.dim:
        raise ValueError(f"point has {len(x)} coordinates, the torus has real rank {scenario.dim}")
    G = scenario.group
    if method == "closure" or (method == "auto" and _use_closure(G)):
        E = G.elements()
        return _report_from_elements(x, E[point_stabilizer_mask(E, x)])
    res = orbit_stabilizer(G, x)
    S = res.stabilizer
    return _report_from_elements(x, S.elements())


def affine_stabilizer(scenario: Scenario, x_b) -> list[AffineElement]:
    """Stabilizer of ``x`` in ``Delta x| G`` acting on ``B``.

    It is ``{(x - g x, g) : (1 - g) x in Delta}``; its linear parts form the
    stabilizer of the image of ``x`` in ``A = B / Delta``.
    """
    if scenario.affine is None:
        raise ValueError("scenario has no B picture")
    aff = scenario.affine
    x = exact.reduce_mod_one(x_b)
    out = []
    for g in aff.group.elements():
        gx = [sum(int(g[i, j]) * x[j] for j in range(len(x))) for i in range(len(x))]
        t = exact.reduce_mod_one([a - b for a, b in zip(x, gx)])
        if aff.delta.contains(t):
            out.append(AffineElement(g, t))
    return out


# ---------------------------------------------------------------------------
# strata

@dataclass
class Stratum:
    """A translated subtorus ``base + T`` and the subgroup fixing it pointwise.

    Attributes:
        base: canonical representative modulo ``span(T) + Z^d``.
        direction: saturated lattice ``T`` (rank 0 for an isolated point).
        stabilizer: the generic stabilizer.
        depth: number of fixed-locus intersections that produced it.
    """

    base: tuple[Fraction, ...]
    direction: LatticeBasis
    stabilizer: FiniteMatrixGroup = field(repr=False)
    depth: int = 0
    reflection_order: int | None = None

    @property
    def dim(self) -> int:
        return self.direction.rank // 2

    @property
    def level(self) -> int:
        return point_level(self.base)

    @property
    def key(self) -> tuple:
        return (self.direction.cols, self.base)

    @property
    def sort_key(self) -> tuple:
        return (self.level, -self.direction.rank, self.base, self.direction.cols)

    @property
    def smooth(self) -> bool:
        return self.reflection_order == self.stabilizer.order

    def to_dict(self) -> dict:
        return {"base": [str(x) for x in self.base], "direction": [list(c) for c in self.direction.cols],
                "dim": self.dim, "depth": self.depth, "S0": self.stabilizer.order,
                "P0": self.reflection_order}


def _direction_matrix(T: LatticeBasis) -> np.ndarray:
    if T.rank == 0:
        return np.zeros((T.dim, 0), dtype=np.int64)
    return np.array(T.cols, dtype=np.int64).T


def _generic_mask(E: np.ndarray, x0, T: LatticeBasis) -> np.ndarray:
    mask = point_stabilizer_mask(E, x0)
    if T.rank:
        Tm = _direction_matrix(T)
        moved = E[mask] @ Tm - Tm
        sub = np.all(moved.reshape(len(moved), -1) == 0, axis=1)
        idx = np.nonzero(mask)[0]
        mask = np.zeros(len(E), dtype=bool)
        mask[idx[sub]] = True
    return mask


def stratum_generic_stabilizer(scenario: Scenario, x0, T: LatticeBasis) -> FiniteMatrixGroup:
    """``{g in G : (1 - g) x_0 in Z^d and (1 - g) T = 0}``.

    Scans the closed group when it is small enough; otherwise computes the
    point stabilizer of ``x_0`` by orbit-stabilizer and filters it.
    """
    x0 = exact.reduce_mod_one(x0)
    G = scenario.group
    if _use_closure(G):
        E = G.elements()
    else:
        E = orbit_stabilizer(G, x0).stabilizer.elements()
    return FiniteMatrixGroup.from_elements(E[_generic_mask(E, x0, T)])


def fixed_locus_components(scenario: Scenario, g) -> list[Stratum]:
    """Connected components of ``Fix(g)``, each as a stratum.

    The direction is the saturation of ``ker(1 - g)``; the components
    are the solutions of ``(1 - g) x = 0`` modulo ``span(T) + Z^d``.
    """
    g = np.asarray(g, dtype=np.int64)
    d = scenario.dim
    if np.array_equal(g, np.eye(d, dtype=np.int64)):
        raise ValueError("the identity fixes the whole torus")
    root = Stratum(tuple(Fraction(0) for _ in range(d)), LatticeBasis.full(d),
                   FiniteMatrixGroup([], dim=d, order=1), 0)
    return _refine(scenario, root, g, scenario.group.elements() if _use_closure(scenario.group) else None)


def _kernel_lattice(M: np.ndarray) -> LatticeBasis:
    K = exact.integer_kernel(M.astype(object))
    k = M.shape[1]
    if K.size == 0 or K.shape[1] == 0:
        return LatticeBasis.zero(k)
    return exact.saturate(LatticeBasis.from_columns(K, k))


_SNF_CACHE: dict[bytes, tuple] = {}


def _snf_cached(M: np.ndarray):
    key = M.tobytes() + bytes(M.shape)
    hit = _SNF_CACHE.get(key)
    if hit is None:
        if len(_SNF_CACHE) > 200_000:
            _SNF_CACHE.clear()
        D, U, V = exact._snf_rows(exact.as_int_rows(M))
        k = M.shape[1]
        diag = [D[i][i] if i < min(len(D), k) else 0 for i in range(len(D))]
        r = sum(1 for x in diag[:k] if x)
        hit = (np.array(U, dtype=np.int64), np.array(V, dtype=np.int64), diag[:r], r)
        _SNF_CACHE[key] = hit
    return hit


def _solve_scaled(M: np.ndarray, C: np.ndarray, N: int):
    """Solutions ``a`` of ``M a = C / N (mod Z^d)`` modulo ``Z^k + ker M``.

    Integer arithmetic only.  Returns ``(L, numerators, kernel)`` with each
    solution equal to ``numerator / L``, or ``None`` when there is none.
    """
    U, V, diag, r = _snf_cached(M)
    UC = U @ C
    if np.any(UC[r:] % N):
        return None
    k = M.shape[1]
    L = N
    for x in diag:
        L = L * x // gcd(L, x)
    # y_i = UC_i / (N D_i) + j_i / D_i
    base = [int(UC[i]) * (L // (N * diag[i])) for i in range(r)]
    steps = [L // diag[i] for i in range(r)]
    sols = []
    for js in np.ndindex(*diag) if r else [()]:
        y = np.zeros(k, dtype=object)
        for i in range(r):
            y[i] = base[i] + js[i] * steps[i]
        sols.append(V.astype(object).dot(y))
    kernel = V[:, r:]
    return L, sols, kernel


def _refine(scenario: Scenario, S: Stratum, g: np.ndarray, E: np.ndarray | None) -> list[Stratum]:
    """Components of ``S & Fix(g)`` as strata one level deeper."""
    d = scenario.dim
    Tm = _direction_matrix(S.direction)
    if Tm.shape[1] == 0:
        return []  # a point is either fixed (then g is in its stabilizer) or not
    A = np.eye(d, dtype=np.int64) - g
    M = A @ Tm
    N = point_level(S.base)
    u = point_to_ints(S.base, N)
    res = _solve_scaled(M, -(A @ u), N)
    if res is None:
        return []
    L, sols, kernel = res
    if kernel.shape[1]:
        Tnew = exact.saturate(LatticeBasis.from_columns((Tm @ kernel).astype(object), d))
    else:
        Tnew = LatticeBasis.zero(d)
    scale = L // N
    out = {}
    for a in sols:
        X = (u.astype(object) * scale + Tm.astype(object).dot(a)) % L
        base = canonical_mod_subtorus([Fraction(int(v), L) for v in X], Tnew)
        if (Tnew.cols, base) in out:
            continue
        stab = stratum_generic_stabilizer(scenario, base, Tnew) if E is None else \
            FiniteMatrixGroup.from_elements(E[_generic_mask(E, base, Tnew)])
        out[(Tnew.cols, base)] = Stratum(base, Tnew, stab, S.depth + 1)
    return [out[k] for k in sorted(out)]


def conjugacy_class_representatives(group: FiniteMatrixGroup) -> list[np.ndarray]:
    """One element per conjugacy class, the first in closure order."""
    E = group.elements()
    index = group.index()
    Einv = np.linalg.inv(E.astype(float)).round().astype(np.int64)
    seen = np.zeros(len(E), dtype=bool)
    reps = []
    for i in range(len(E)):
        if seen[i]:
            continue
        reps.append(E[i])
        conj = E @ E[i] @ Einv
        for k in _batch_keys(conj):
            seen[index[k]] = True
    return reps


def _coset_representatives(E: np.ndarray, index: dict, K: FiniteMatrixGroup) -> list[int]:
    """Indices of representatives of the cosets ``K g``."""
    KE = K.elements()
    if len(KE) == 1:
        return list(range(len(E)))
    seen = np.zeros(len(E), dtype=bool)
    reps = []
    for i in range(len(E)):
        if seen[i]:
            continue
        reps.append(i)
        for k in _batch_keys(KE @ E[i]):
            seen[index[k]] = True
    return reps


class _ReflectionCache:
    """``|P_0|`` per subgroup, keyed by the subgroup's element set."""

    def __init__(self):
        self._cache: dict[bytes, int] = {}

    def __call__(self, K: FiniteMatrixGroup) -> int:
        elems = K.elements()
        key = b"".join(sorted(_batch_keys(elems)))
        hit = self._cache.get(key)
        if hit is None:
            hit = reflection_subgroup(K)[1]
            self._cache[key] = hit
        return hit


def _close_strata(scenario: Scenario, roots: list[Stratum], depth: int) -> tuple[dict, bool, int]:
    """Refine strata until no new ones appear or ``depth`` is reached."""
    G = scenario.group
    E = G.elements()
    index = G.index()
    strata = {S.key: S for S in roots}
    frontier = sorted(roots, key=lambda S: S.sort_key)
    reached = max((S.depth for S in roots), default=0)
    while frontier:
        if reached >= depth:
            return strata, False, reached
        nxt = {}
        for S in frontier:
            if S.direction.rank == 0:
                continue
            for i in _coset_representatives(E, index, S.stabilizer):
                g = E[i]
                if S.stabilizer.contains(g):
                    continue
                for R in _refine(scenario, S, g, E):
                    if R.key not in strata and R.key not in nxt:
                        nxt[R.key] = R
        frontier = sorted(nxt.values(), key=lambda S: S.sort_key)
        strata.update(nxt)
        if frontier:
            reached += 1
    return strata, True, reached


def _level_one_job(args):
    scenario, g = args
    return fixed_locus_components(scenario, g)


def all_strata(scenario: Scenario, depth: int = 3, jobs: int = 1) -> tuple[list[Stratum], bool, int]:
    """Strata up to the action of ``G``.

    Level one holds the components of ``Fix(g)`` for one ``g`` per
    conjugacy class (``Fix(h g h^-1) = h Fix(g)``); deeper strata are
    found by intersecting with every fixed locus.  Every stratum of the
    full closure is a ``G``-translate of one returned here.

    Returns:
        ``(strata, closed, depth_reached)``; ``closed`` is true when the
        refinement reached a fixed point within ``depth`` levels.
    """
    G = scenario.group
    d = scenario.dim
    eye = np.eye(d, dtype=np.int64)
    reps = [g for g in conjugacy_class_representatives(G) if not np.array_equal(g, eye)]
    if jobs > 1 and len(reps) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            level1 = [S for comps in pool.map(_level_one_job, [(scenario, g) for g in reps]) for S in comps]
    else:
        level1 = [S for g in reps for S in fixed_locus_components(scenario, g)]
    uniq = {}
    for S in level1:
        uniq.setdefault(S.key, S)
    if depth < 1:
        return [], False, 0
    strata, closed, reached = _close_strata(scenario, list(uniq.values()), depth)
    return sorted(strata.values(), key=lambda S: S.sort_key), closed, max(reached, 1 if uniq else 0)


def sample_generic_point(S: Stratum, prime: int = SAMPLE_PRIME, rng: random.Random | None = None):
    """A point ``base + T a`` with random coordinates ``a`` in ``(1/prime) Z``."""
    rng = rng or random.Random(0)
    Tm = _direction_matrix(S.direction)
    a = [Fraction(rng.randrange(1, prime), prime) for _ in range(Tm.shape[1])]
    d = len(S.base)
    return exact.reduce_mod_one([S.base[i] + sum(int(Tm[i, j]) * a[j] for j in range(len(a)))
                                 for i in range(d)])


def sampled_stabilizer_check(scenario: Scenario, S: Stratum, prime: int = SAMPLE_PRIME,
                             tries: int = 5, seed: int = 0) -> StabilizerReport:
    """Stabilizer of a sampled generic point of ``S``; resamples while it is too large.

    Raises:
        AssertionError: if the sampled stabilizer does not contain the
            symbolic generic stabilizer, or never shrinks to it.
    """
    rng = random.Random(seed)
    expected = S.stabilizer.order
    rep = None
    for _ in range(tries):
        x = sample_generic_point(S, prime, rng)
        rep = point_stabilizer_report(scenario, x)
        keys = set(_batch_keys(rep.elements))
        if not all(k in keys for k in _batch_keys(S.stabilizer.elements())):
            raise AssertionError("sampled stabilizer misses an element of the generic stabilizer")
        if rep.order == expected:
            return rep
        if S.direction.rank == 0:
            break
    raise AssertionError(f"sampled stabilizer has order {rep.order}, expected {expected}")


# ---------------------------------------------------------------------------
# the audit

@dataclass
class AuditVerdict:
    """Outcome of :func:`smoothness_audit`.

    ``kind`` is ``"NotSmooth"`` or ``"SmoothAudited"``.  A ``NotSmooth``
    verdict carries the first witness (a stratum or a torsion point) and
    the stabilizer report of a concrete point realising it.
    """

    kind: str
    witness: Stratum | StabilizerReport | None
    report: StabilizerReport | None
    coverage: dict
    singular_strata: list[Stratum] = field(default_factory=list, repr=False)
    singular_points: list[StabilizerReport] = field(default_factory=list, repr=False)

    @property
    def certified(self) -> bool:
        return self.kind == "SmoothAudited" and self.coverage.get("strata_closed", False)

    def to_dict(self) -> dict:
        out = {"verdict": self.kind, "coverage": self.coverage}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


def torsion_points(d: int, N: int) -> np.ndarray:
    """All of ``(Z/N)^d`` as integer rows, ordered by (level, coordinates)."""
    grids = np.indices((N,) * d).reshape(d, -1).T.astype(np.int64)
    g = np.gcd.reduce(np.concatenate([grids, np.full((len(grids), 1), N)], axis=1), axis=1)
    levels = N // g
    order = np.lexsort(tuple(grids[:, ::-1].T) + (levels,))
    return grids[order], levels[order]


def exhaustive_torsion_check(scenario: Scenario, N: int, refl_cache=None,
                             chunk: int = 256) -> tuple[int, list[StabilizerReport], int]:
    """Test every point of ``A[N]``.

    Points with equal stabilizers are grouped so each distinct subgroup is
    tested once.

    Returns:
        ``(points checked, singular point reports in witness order, distinct stabilizers)``.
    """
    refl_cache = refl_cache or _ReflectionCache()
    E = scenario.group.elements()
    d = scenario.dim
    P, levels = torsion_points(d, N)
    verdict: dict[bytes, bool] = {}
    bad = []
    for s in range(0, len(P), chunk):
        U = P[s:s + chunk]
        imgs = np.einsum("gij,pj->pgi", E, U) % N
        masks = np.all(imgs == U[:, None, :], axis=2)
        packed = np.packbits(masks, axis=1)
        for r in range(len(U)):
            key = packed[r].tobytes()
            ok = verdict.get(key)
            if ok is None:
                K = FiniteMatrixGroup.from_elements(E[masks[r]])
                ok = refl_cache(K) == K.order
                verdict[key] = ok
            if not ok:
                x = tuple(Fraction(int(v), N) for v in U[r])
                bad.append(point_stabilizer_report(scenario, x, method="closure"))
    return len(P), bad, len(verdict)


def smoothness_audit(scenario: Scenario, depth: int = 3, torsion: Sequence[int] | int | None = (4,),
                     jobs: int = 1, verify: bool = True) -> AuditVerdict:
    """Chevalley-Shephard-Todd audit of ``A/G``.

    Args:
        depth: maximum number of fixed-locus intersection rounds.
        torsion: levels ``N`` whose points ``A[N]`` are all tested.
        jobs: worker processes for the level-one fixed loci.
        verify: re-derive the witness stabilizer at a sampled generic point.

    Returns:
        ``NotSmooth`` with the first witness in the order (torsion level,
        coordinates), or ``SmoothAudited`` with a coverage description.
        ``coverage["strata_closed"]`` says whether the stratification
        reached a fixed point, making the verdict complete.
    """
    if isinstance(torsion, int):
        torsion = (torsion,)
    torsion = tuple(torsion or ())
    refl = _ReflectionCache()
    strata, closed, reached = all_strata(scenario, depth, jobs)
    bad_strata = []
    for S in strata:
        S.reflection_order = refl(S.stabilizer)
        if not S.smooth:
            bad_strata.append(S)
    bad_points = []
    checked = {}
    for N in torsion:
        n_pts, bad, n_sub = exhaustive_torsion_check(scenario, N, refl)
        checked[N] = {"points": n_pts, "distinct_stabilizers": n_sub, "singular": len(bad)}
        bad_points.extend(bad)
    coverage = {"scenario": scenario.label, "group_order": scenario.group.order,
                "strata": len(strata), "depth_limit": depth, "depth_reached": reached,
                "strata_closed": closed, "singular_strata": len(bad_strata),
                "torsion_levels": checked}
    if closed and bad_points and not bad_strata:
        raise AssertionError("torsion scan found a singular point the closed stratification missed")
    # (level, -real rank of the direction, base point); isolated points have rank 0
    candidates = [(S.sort_key[:3], 0, S) for S in bad_strata] + \
                 [((point_level(r.point), 0, r.point), 1, r) for r in bad_points]
    if not candidates:
        return AuditVerdict("SmoothAudited", None, None, coverage)
    candidates.sort(key=lambda c: (c[0], c[1]))
    witness = candidates[0][2]
    if isinstance(witness, Stratum):
        report = sampled_stabilizer_check(scenario, witness) if verify else None
    else:
        report = witness
    if report is not None and report.smooth:
        raise AssertionError("witness does not re-verify")
    return AuditVerdict("NotSmooth", witness, report, coverage, bad_strata, bad_points)


# ---------------------------------------------------------------------------
# fixed points through the inverse of g - I, and translation witnesses

def remark_candidates(scenario: Scenario, g, Q) -> list[tuple[Fraction, ...]]:
    """Fixed points of ``g`` off the identity component of ``Fix(g)``.

    Split ``Z^d`` rationally as ``K + K^perp`` with ``K`` the saturated
    kernel of ``g - I`` and ``K^perp`` its ``Q``-orthogonal lattice.  On
    ``K^perp`` the restriction ``h`` of ``g`` has no eigenvalue one, so
    ``(h - I)^{-1}`` exists; its columns with non-integer entries, mapped
    back to ambient coordinates and reduced mod 1, are fixed points.
    """
    g = np.asarray(g, dtype=np.int64)
    d = len(g)
    eye = np.eye(d, dtype=np.int64)
    if np.array_equal(g, eye):
        return []
    Q = np.asarray(Q, dtype=object)
    K = _kernel_lattice(g - eye)
    if K.rank:
        Km = K.matrix()
        perp = exact.integer_kernel(Km.T.dot(Q))
    else:
        perp = np.eye(d, dtype=object)
    B = np.asarray(perp, dtype=object)
    r = B.shape[1]
    # restriction of g to K^perp in the basis B
    gB = np.asarray(g, dtype=object).dot(B)
    h = np.empty((r, r), dtype=object)
    BtB_inv = exact.inverse_q(B.T.dot(B))
    h[:, :] = BtB_inv.dot(B.T.dot(gB))
    if any(Fraction(x).denominator != 1 for x in h.ravel()):
        raise AssertionError("Q-orthogonal complement is not g-stable; Q is not invariant")
    inv = exact.inverse_q(h - np.eye(r, dtype=object))
    out = set()
    for j in range(r):
        col = inv[:, j]
        if all(Fraction(x).denominator == 1 for x in col):
            continue
        out.add(exact.reduce_mod_one(B.dot(col)))
    return sorted(out)


@dataclass
class TranslationWitness:
    """A point ``z`` of ``B`` with ``z - tau z = t``; ``(t, tau)`` fixes ``z``."""

    z: tuple[Fraction, ...]
    element: AffineElement
    point_a: tuple[Fraction, ...]


def solve_translation_witness(scenario: Scenario, t) -> TranslationWitness:
    """Solve ``(1 - tau) z = t`` on ``B`` for an element ``tau`` without eigenvalue one."""
    if scenario.affine is None:
        raise ValueError("scenario has no kernel Delta")
    aff = scenario.affine
    t = exact.reduce_mod_one(t)
    if not aff.delta.contains(t):
        raise ValueError("translation is not in Delta")
    tau = element_without_eigenvalue_one(aff.group)
    d = len(tau)
    sol = solve_congruence(np.eye(d, dtype=np.int64) - tau, t)
    if sol.empty:
        raise AssertionError("1 - tau is surjective; the congruence must be solvable")
    z = sol.particular[0]
    return TranslationWitness(z, AffineElement(tau, t), scenario.point_from_b(z))


# ---------------------------------------------------------------------------
# checking a stratum built from a non-smoothness argument

@dataclass
class WitnessCheck:
    """Comparison of a constructed stratum with the elements a proof lists.

    Attributes:
        row: row label of the witness.
        stratum: the stratum in ``A`` coordinates with its generic stabilizer.
        generated_by_expected: the listed linear parts generate exactly the
            generic stabilizer.
        translations_ok: every listed ``(t, g)`` fixes a sampled generic
            point of the stratum in ``B`` (``g x + t = x`` modulo ``Lambda_B``)
            and ``t`` lies in ``Delta``.
        first_rank: ``rank(g - I)`` of the first listed element.
    """

    row: str
    stratum: Stratum
    generated_by_expected: bool
    translations_ok: bool
    first_rank: int
    conditional: list[str] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.stratum.stabilizer.order

    @property
    def reflection_order(self) -> int:
        return self.stratum.reflection_order

    @property
    def ok(self) -> bool:
        return self.generated_by_expected and self.translations_ok and not self.stratum.smooth


def verify_witness(spec, prime: int = SAMPLE_PRIME, seed: int = 0) -> WitnessCheck:
    """Recompute the generic stabilizer of a :class:`~abquot.catalog.WitnessSpec`."""
    sc = spec.scenario
    d = sc.dim
    base_a = sc.point_from_b(spec.base)
    T_a = sc.lattice_from_b(spec.direction)
    K = stratum_generic_stabilizer(sc, base_a, T_a)
    S = Stratum(base_a, T_a, K, 0)
    S.reflection_order = reflection_subgroup(K)[1]
    if sc.affine is not None:
        P = sc.affine.basis
        Pi = exact.inverse_q(P)
        to_a = lambda g: np.array(Pi.dot(np.asarray(g, dtype=object)).dot(P).tolist(), dtype=np.int64)
    else:
        to_a = lambda g: np.asarray(g, dtype=np.int64)
    lin = [to_a(g) for _, g in spec.expected]
    eye = np.eye(d, dtype=np.int64)
    gen_elems, _ = close_group(lin or [eye])
    generated = sorted(_batch_keys(gen_elems)) == sorted(_batch_keys(K.elements()))
    # translations at a generic point of the stratum in B coordinates
    rng = random.Random(seed)
    Tm = _direction_matrix(spec.direction)
    a = [Fraction(rng.randrange(1, prime), prime) for _ in range(Tm.shape[1])]
    x = [spec.base[i] + sum(int(Tm[i, j]) * a[j] for j in range(len(a))) for i in range(d)]
    ok = True
    for t, g in spec.expected:
        gx = np.asarray(g, dtype=object).dot(np.array(x, dtype=object))
        if any(Fraction(v).denominator != 1 for v in (gx + np.array(t, dtype=object) - np.array(x, dtype=object))):
            ok = False
        if sc.affine is not None and not sc.affine.delta.contains(exact.reduce_mod_one(t)):
            ok = False
    first = spec.expected[0][1]
    rank = exact.rank_q(np.asarray(first, dtype=object) - np.eye(d, dtype=object))
    return WitnessCheck(spec.row, S, generated, ok, rank, list(spec.conditional))
