from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abquot import catalog, exact, groups
from abquot.groups import AffineElement, CapExceeded, FiniteMatrixGroup

from . import oracles

H = Fraction(1, 2)


def test_closure_of_signed_permutations():
    elems, order = groups.close_group(catalog.gmpn_generators(2, 1, 2))
    assert order == 8 == len(elems)
    keys = [tuple(g.ravel()) for g in elems]
    assert keys == sorted(keys)


@pytest.mark.parametrize("mpn, order", sorted(oracles.GMPN_ORDERS.items()))
def test_gmpn_orders(mpn, order):
    assert FiniteMatrixGroup(catalog.gmpn_generators(*mpn)).order == order == catalog.gmpn_order(*mpn)


def test_symmetric_group_standard_representation():
    assert FiniteMatrixGroup(catalog.example_b_generators(3)).order == 24


def test_closure_cap():
    with pytest.raises(CapExceeded):
        groups.close_group(catalog.gmpn_generators(6, 1, 3), cap=100)


def test_closure_is_independent_of_generator_order():
    gens = catalog.gmpn_generators(4, 2, 3)
    ref = groups.close_group(gens)[0]
    for perm in permutations(range(len(gens))):
        assert (groups.close_group([gens[i] for i in perm])[0] == ref).all()


def test_closed_group_is_closed_under_products_and_inverses():
    G = FiniteMatrixGroup(catalog.gmpn_generators(3, 3, 3))
    E = G.elements()
    for g in E[::7]:
        assert G.contains(groups.integer_inverse(g))
        for h in E[::11]:
            assert G.contains(g @ h)


def test_pseudoreflection_examples():
    assert not groups.is_pseudoreflection(np.eye(6, dtype=np.int64)).is_pseudoreflection
    r = groups.is_pseudoreflection(catalog.diagonal_element(2, [1, 0, 0]))
    assert r.is_pseudoreflection and r.order == 2 and r.root_line.rank == 2
    r = groups.is_pseudoreflection(catalog.diagonal_element(2, [1, 1, 0]))
    assert not r.is_pseudoreflection
    r = groups.is_pseudoreflection(catalog.permutation_element([1, 0, 2]))
    assert r.is_pseudoreflection and r.order == 2


@pytest.mark.parametrize("label", catalog.SMALL_BUILTINS)
def test_pseudoreflection_orders_are_crystallographic(label):
    sc = catalog.builtin(label)
    E = sc.group.elements()
    for g in E[groups.pseudoreflection_mask(E)]:
        assert groups.is_pseudoreflection(g).order in (2, 3, 4, 6)


def test_orbit_stabilizer_examples():
    G = FiniteMatrixGroup(catalog.gmpn_generators(2, 1, 2))
    res = groups.orbit_stabilizer(G, (0, 0, 0, 0))
    assert res.orbit_size == 1 and res.stabilizer.order == 8
    res = groups.orbit_stabilizer(G, (H, 0, 0, 0))
    assert res.orbit_size == oracles.GMPN_212_HALF_PERIOD["orbit"]
    assert res.stabilizer.order == oracles.GMPN_212_HALF_PERIOD["stabilizer"]
    assert len(groups.brute_force_stabilizer(G, (H, 0, 0, 0))) == 4


def test_orbit_cap():
    G = FiniteMatrixGroup(catalog.gmpn_generators(6, 1, 3))
    with pytest.raises(CapExceeded):
        groups.orbit_stabilizer(G, (Fraction(1, 7),) + (0,) * 5, orbit_cap=5)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 11), min_size=6, max_size=6), st.sampled_from([2, 3, 4, 6, 12]))
def test_schreier_matches_brute_force(nums, N):
    G = FiniteMatrixGroup(catalog.gmpn_generators(4, 2, 3))
    x = tuple(Fraction(v % N, N) for v in nums)
    res = groups.orbit_stabilizer(G, x)
    brute = groups.brute_force_stabilizer(G, x)
    assert (res.stabilizer.elements() == groups.sort_elements(brute)).all()
    assert res.orbit_size * res.stabilizer.order == G.order


def test_reflection_subgroup_examples():
    G = FiniteMatrixGroup(catalog.gmpn_generators(3, 1, 3))
    _, order = groups.reflection_subgroup(G)
    assert order == G.order
    S = FiniteMatrixGroup(
        [catalog.diagonal_element(2, [1, 1, 0])])
    _, order = groups.reflection_subgroup(S)
    assert order == 1


def test_affine_pseudoreflection_examples():
    r = catalog.diagonal_element(2, [1, 0, 0])
    assert groups.is_affine_pseudoreflection(AffineElement(r, (0,) * 6))
    assert groups.is_affine_pseudoreflection(AffineElement(r, (H, 0, 0, 0, 0, 0)))
    assert not groups.is_affine_pseudoreflection(AffineElement(r, (0, 0, H, 0, 0, 0)))
    assert not groups.is_affine_pseudoreflection(AffineElement(np.eye(6, dtype=np.int64), (H, 0, 0, 0, 0, 0)))


def test_diagonal_translation_is_not_an_affine_reflection():
    sc = catalog.build_diagonal_delta_symmetric(3)
    t = sc.affine.delta.generators[0].coords
    E = sc.affine.group.elements()
    for g in E[groups.pseudoreflection_mask(E)]:
        assert not groups.is_affine_pseudoreflection(AffineElement(g, t))


@pytest.mark.parametrize("label", ["hyperplanar-2-2-3", "hyperplanar-3-3-3", "incomplete-hyperplanar-2-3"])
def test_affine_reflections_fix_divisors(label):
    sc = catalog.builtin(label)
    E = sc.affine.group.elements()
    for g in E[groups.pseudoreflection_mask(E)]:
        for t in sc.affine.delta.elements():
            a = AffineElement(g, t.coords)
            if groups.is_affine_pseudoreflection(a):
                locus = groups.affine_fixed_points(a)
                assert not locus.empty and locus.codimension == 2
                for p in locus.points:
                    assert a.apply(p) == exact.reduce_mod_one(p)


def test_affine_fixed_points_examples():
    minus = -np.eye(4, dtype=np.int64)
    locus = groups.affine_fixed_points(AffineElement(minus, (Fraction(1, 3), 0, 0, 0)))
    assert len(locus.points) == 16 and locus.direction.rank == 0
    g = catalog.diagonal_element(2, [0, 0, 1])
    locus = groups.affine_fixed_points(AffineElement(g, (Fraction(1, 3), 0, 0, 0, 0, 0)))
    assert locus.empty
    locus = groups.affine_fixed_points(AffineElement(np.eye(6, dtype=np.int64), (0,) * 6))
    assert locus.codimension == 0 and not locus.empty


def test_affine_composition():
    g = catalog.permutation_element([1, 0, 2])
    a = AffineElement(g, (H, 0, 0, 0, 0, 0))
    b = AffineElement(g, (0, 0, H, 0, 0, 0))
    x = (Fraction(1, 5), 0, Fraction(2, 5), 0, 0, Fraction(1, 7))
    assert (a * b).apply(x) == a.apply(b.apply(x))


def test_element_without_eigenvalue_one():
    g = groups.element_without_eigenvalue_one(FiniteMatrixGroup(catalog.gmpn_generators(2, 1, 3)))
    assert exact.det_z((np.eye(6, dtype=np.int64) - g).astype(object)) != 0
    cycle = np.kron(catalog.sum_zero_basis_matrix([1, 2, 3, 0]), np.eye(2, dtype=np.int64))
    assert (exact.det_z((np.eye(6, dtype=np.int64) - cycle).astype(object)) != 0) \
        is oracles.CYCLE_WITHOUT_EIGENVALUE_ONE
    with pytest.raises(ValueError):
        groups.element_without_eigenvalue_one(FiniteMatrixGroup([np.eye(4, dtype=np.int64)]))
