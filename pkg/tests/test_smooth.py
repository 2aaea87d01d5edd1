import random
from fractions import Fraction

import numpy as np
import pytest

from abquot import catalog, exact, groups, smooth, torus
from abquot.catalog import Scenario
from abquot.exact import LatticeBasis
from abquot.groups import FiniteMatrixGroup

from . import oracles

H = Fraction(1, 2)


def test_report_on_reflection_group_at_origin():
    sc = catalog.builtin("example-a-3-3")
    rep = smooth.point_stabilizer_report(sc, (0,) * 6)
    assert rep.order == rep.reflection_order == sc.group.order
    assert rep.smooth


def test_report_methods_agree():
    sc = catalog.builtin("gmpn-4-2-3")
    x = (H, 0, Fraction(1, 4), Fraction(1, 4), 0, 0)
    a = smooth.point_stabilizer_report(sc, x, method="closure")
    b = smooth.point_stabilizer_report(sc, x, method="orbit")
    assert (a.order, a.reflection_order) == (b.order, b.reflection_order)
    assert a.order % a.reflection_order == 0


def test_report_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        smooth.point_stabilizer_report(catalog.builtin("example-b-2"), (0, 0))


def test_fixed_locus_of_minus_one_on_a_curve():
    sc = Scenario("minus-one", torus.ComplexTorus.power_of_curve(2, 1),
                  FiniteMatrixGroup([-np.eye(2, dtype=np.int64)]))
    comps = smooth.fixed_locus_components(sc, -np.eye(2, dtype=np.int64))
    assert sorted(c.base for c in comps) == [(0, 0), (0, H), (H, 0), (H, H)]
    assert all(c.direction.rank == 0 for c in comps)


def test_fixed_locus_of_transposition():
    sc = catalog.build_gmpn(2, 1, 3)
    g = catalog.permutation_element([1, 0, 2])
    comps = smooth.fixed_locus_components(sc, g)
    assert len(comps) == oracles.TRANSPOSITION_COMPONENTS
    assert comps[0].direction == torus.d_sigma(sc.torus, g).lattice


def test_fixed_locus_of_double_sign_change():
    sc = catalog.build_gmpn(2, 1, 3)
    g = catalog.diagonal_element(2, [1, 1, 0])
    comps = smooth.fixed_locus_components(sc, g)
    assert len(comps) == oracles.DIAG_MINUS_ONE_COMPONENTS
    third = LatticeBasis.from_vectors([(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)], 6)
    assert all(c.direction == third for c in comps)


def test_generic_stabilizer_edge_cases():
    sc = catalog.build_gmpn(2, 2, 3)
    x = (H, 0, 0, 0, Fraction(1, 3), 0)
    S = smooth.stratum_generic_stabilizer(sc, x, LatticeBasis.zero(6))
    assert S.order == smooth.point_stabilizer_report(sc, x).order
    S = smooth.stratum_generic_stabilizer(sc, (0,) * 6, LatticeBasis.full(6))
    assert S.order == 1


def test_prop33_row_22_stratum():
    sc = catalog.build_gmpn(2, 2, 3)
    third = LatticeBasis.from_vectors([(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)], 6)
    S = smooth.stratum_generic_stabilizer(sc, (H, 0, 0, 0, 0, 0), third)
    assert S.order == 2
    assert S.contains(catalog.diagonal_element(2, [1, 1, 0]))


@pytest.mark.parametrize("label", ["example-a-2-3", "hyperplanar-2-2-3"])
def test_smooth_audits(label):
    v = smooth.smoothness_audit(catalog.builtin(label), depth=3, torsion=(4,))
    assert v.kind == "SmoothAudited"
    assert v.coverage["singular_strata"] == 0


def test_g333_is_singular_with_the_listed_witness():
    sc = catalog.builtin("gmpn-3-3-3")
    v = smooth.smoothness_audit(sc, depth=3, torsion=(3,))
    assert v.kind == "NotSmooth"
    assert (v.report.order, v.report.reflection_order) == (3, 1)
    rho = catalog.diagonal_element(3, [1, 2, 0])
    S = v.witness.stabilizer if isinstance(v.witness, smooth.Stratum) else None
    assert S is not None and S.contains(rho)


def test_singular_witness_reverifies_by_brute_force():
    sc = catalog.builtin("gmpn-3-3-3")
    v = smooth.smoothness_audit(sc, depth=2, torsion=())
    x = smooth.sample_generic_point(v.witness, rng=random.Random(1))
    brute = groups.brute_force_stabilizer(sc.group, x)
    _, p0 = groups.reflection_subgroup(FiniteMatrixGroup.from_elements(brute))
    assert len(brute) > p0


@pytest.mark.parametrize("label", ["gmpn-4-2-3", "example-b-3"])
def test_strata_are_fixed_pointwise(label):
    sc = catalog.builtin(label)
    strata, _, _ = smooth.all_strata(sc, depth=2)
    rng = random.Random(7)
    for S in strata[:40]:
        for _ in range(3):
            x = smooth.sample_generic_point(S, rng=rng)
            for g in S.stabilizer.elements():
                gx = exact.reduce_mod_one(np.asarray(g, dtype=object).dot(np.array(x, dtype=object)))
                assert gx == exact.reduce_mod_one(x)


def _rebased(sc, U):
    Ui = exact.inverse_q(U)
    gens = [np.array(Ui.dot(np.asarray(g, dtype=object)).dot(U).tolist(), dtype=np.int64)
            for g in sc.group.generators]
    T = torus.ComplexTorus(Ui.dot(sc.torus.theta).dot(U), sc.torus.c)
    return Scenario(sc.label + "-rebased", T, FiniteMatrixGroup(gens, order=sc.group.order))


def test_verdict_is_invariant_under_rebasing():
    sc = catalog.builtin("gmpn-3-3-3")
    U = np.eye(6, dtype=object)
    U[0, 2], U[3, 5], U[4, 1] = 1, -2, 1
    a = smooth.smoothness_audit(sc, depth=3, torsion=())
    b = smooth.smoothness_audit(_rebased(sc, U), depth=3, torsion=())
    assert a.kind == b.kind
    summary = lambda v: sorted((S.stabilizer.order, S.reflection_order) for S in v.singular_strata)
    assert summary(a) == summary(b)


def test_remark_candidates_minus_one():
    sc = Scenario("minus-one", torus.ComplexTorus.power_of_curve(2, 1),
                  FiniteMatrixGroup([-np.eye(2, dtype=np.int64)]))
    Q = torus.invariant_form(sc.group, sc.torus)
    assert smooth.remark_candidates(sc, -np.eye(2, dtype=np.int64), Q) == [(0, H), (H, 0)]
    assert smooth.remark_candidates(sc, np.eye(2, dtype=np.int64), Q) == []


def test_remark_candidates_are_fixed():
    sc = catalog.builtin("example-a-4-3")
    Q = torus.invariant_form(sc.group, sc.torus)
    for g in smooth.conjugacy_class_representatives(sc.group):
        for x in smooth.remark_candidates(sc, g, Q):
            d = np.asarray(g, dtype=object).dot(np.array(x, dtype=object)) - np.array(x, dtype=object)
            assert all(Fraction(v).denominator == 1 for v in d)


def test_remark_candidates_without_torsion():
    # the 3-cycle on the sum-zero plane has det(1 - g) = 3; its square root of unity
    # rotation of order 6 on E_3 has det(1 - g) = 1 and gives nothing
    T = torus.ComplexTorus.power_of_curve(6, 1)
    g = catalog.diagonal_element(6, [1])
    assert exact.det_z((np.eye(2, dtype=np.int64) - g).astype(object)) in (1, -1)
    sc = Scenario("zeta6", T, FiniteMatrixGroup([g]))
    assert smooth.remark_candidates(sc, g, torus.invariant_form(sc.group, T)) == []


def test_translation_witness_for_diagonal_kernel():
    sc = catalog.build_diagonal_delta_symmetric(3)
    t = sc.affine.delta.generators[0].coords
    w = smooth.solve_translation_witness(sc, t)
    assert w.element.apply(w.z) == w.z
    rep = smooth.point_stabilizer_report(sc, w.point_a)
    assert rep.order > rep.reflection_order
    zero = smooth.solve_translation_witness(sc, (0,) * 6)
    assert w.element.linear.shape == zero.element.linear.shape


def test_translation_witness_for_undiagonal_half_period():
    sc = catalog.build_diagonal_delta_gmpn(2, 1, 3)
    t = sc.affine.delta.generators[0].coords
    w = smooth.solve_translation_witness(sc, t)
    rep = smooth.point_stabilizer_report(sc, w.point_a)
    assert rep.order > rep.reflection_order
