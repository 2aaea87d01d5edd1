import json
from fractions import Fraction

import numpy as np
import pytest

from abquot import catalog, exact, groups, smooth, torus
from abquot.exact import LatticeBasis
from abquot.groups import FiniteMatrixGroup
from abquot.torus import FiniteSubgroup

from . import oracles

DATA_FILES = sorted(catalog.PACKAGE_DATA.glob("st*.json"), key=lambda p: int(p.stem[2:]))


def test_gmpn_examples():
    assert catalog.build_gmpn(2, 1, 3).group.order == 48
    assert catalog.build_gmpn(6, 6, 3).group.order == oracles.GMPN_663_ORDER
    with pytest.raises(ValueError):
        catalog.build_gmpn(4, 3, 3)


def test_example_b():
    assert catalog.build_example_b(2).group.order == 6
    sc = catalog.build_example_b(3)
    E = sc.group.elements()
    refl = E[groups.pseudoreflection_mask(E)]
    assert len(refl) == 6
    for g in refl:
        rank = exact.rank_q((g - np.eye(6, dtype=np.int64)).astype(object))
        assert rank == oracles.EXAMPLE_B3_TRANSPOSITION_RANK
        assert groups.is_pseudoreflection(g).order == 2


def test_order_six_coordinate_reflections():
    sc = catalog.build_example_a(6, 3)
    for i in range(3):
        g = catalog.diagonal_element(6, [int(j == i) for j in range(3)])
        assert groups.is_pseudoreflection(g).is_pseudoreflection
        F = torus.subtorus_intersection_group(torus.d_sigma(sc.torus, g), torus.e_sigma(sc.torus, g))
        assert len(F) == 1


@pytest.mark.parametrize("label", catalog.SMALL_BUILTINS)
def test_builtins_validate(label):
    sc = catalog.builtin(label)
    sc.validate()
    assert all(sc.torus.commutes(g) for g in sc.group.generators)


def test_unknown_label():
    with pytest.raises(ValueError):
        catalog.builtin("nonsense-1")
    with pytest.raises(ValueError):
        catalog.builtin("example-a-2")


@pytest.mark.parametrize("m, order", [(2, 16), (3, 9), (4, 4)])
def test_hyperplanar_delta_orders(m, order):
    sc = catalog.build_hyperplanar_delta(m, 3)
    assert len(sc.affine.delta) == order
    for g in sc.affine.group.generators:
        assert sc.affine.delta.is_stable(g)


def test_hyperplanar_delta_rejects_m6():
    with pytest.raises(ValueError):
        catalog.build_hyperplanar_delta(6, 3)


@pytest.mark.parametrize("m", [3, 4])
def test_one_hyperplanar_orbit_generates(m):
    sc = catalog.build_hyperplanar_delta(m, 3)
    t = sc.affine.delta.generators[0].coords
    orbit = {exact.reduce_mod_one(np.asarray(g, dtype=object).dot(np.array(t, dtype=object)))
             for g in sc.affine.group.elements()}
    assert len(FiniteSubgroup(sc.affine.torus, sorted(orbit))) == len(sc.affine.delta)


def test_prop33_examples():
    w = smooth.verify_witness(catalog.witness_points(2, 2, 3, "prop33"))
    assert w.order == 2 and w.generated_by_expected
    spec = catalog.witness_points(6, 3, 3, "prop33")
    assert len(spec.expected) == 2
    assert smooth.verify_witness(spec).generated_by_expected


def test_prop36_three_row_contains_non_reflection():
    spec = catalog.witness_points(3, 3, 3, "prop36")
    t, g = spec.expected[0]
    assert (g == catalog.diagonal_element(3, [1, 1, 1])).all()
    assert not groups.is_pseudoreflection(g).is_pseudoreflection
    assert smooth.verify_witness(spec).translations_ok


def test_witness_parameters_are_checked():
    with pytest.raises(ValueError):
        catalog.witness_points(2, 1, 3, "prop33")
    with pytest.raises(ValueError):
        catalog.witness_points(2, 2, 3, "prop36")
    with pytest.raises(ValueError):
        catalog.witness_points(3, 1, 3, "prop35")


def test_root_lattices():
    L0, _ = catalog.root_lattice(catalog.build_example_b(3))
    assert L0 == LatticeBasis.full(6)
    for m in (2, 3, 4, 6):
        L0, _ = catalog.root_lattice(catalog.build_example_a(m, 3))
        assert L0.index_in(LatticeBasis.full(6)) == oracles.EXAMPLE_A_ROOT_INDEX


def test_root_lattice_follows_a_change_of_basis():
    sc = catalog.build_gmpn(3, 3, 3)
    L0, _ = catalog.root_lattice(sc)
    U = np.eye(6, dtype=object)
    U[0, 2], U[3, 5] = 1, -2
    Ui = exact.inverse_q(U)
    gens = [np.array(Ui.dot(np.asarray(g, dtype=object)).dot(U).tolist(), dtype=np.int64)
            for g in sc.group.generators]
    moved = catalog.Scenario("moved", torus.ComplexTorus(Ui.dot(sc.torus.theta).dot(U), sc.torus.c),
                             FiniteMatrixGroup(gens))
    L0m, _ = catalog.root_lattice(moved)
    assert L0m == LatticeBasis.from_columns(Ui.dot(L0.matrix()))
    # Lambda replaced by 2 Lambda: same matrices, so the root lattice doubles in ambient terms
    doubled = LatticeBasis.from_columns(2 * L0.matrix())
    assert doubled.index_in(L0) == 2 ** 6


def test_s_matrix_needs_reflections():
    sc = catalog.build_example_a(2, 2)
    with pytest.raises(ValueError):
        catalog.s_matrix([catalog.diagonal_element(2, [1, 1])] * 2)
    with pytest.raises(ValueError):
        catalog.s_matrix(sc.group.generators[:1])


def test_st4_file():
    data = catalog.load_sporadic(4)
    G = FiniteMatrixGroup(data.real_generators())
    assert G.order == oracles.ST4["order"]
    assert int(groups.pseudoreflection_mask(G.elements()).sum()) == oracles.ST4["pseudoreflections"]


def test_st12_has_only_the_root_lattice():
    enum = catalog.enumerate_sporadic_lattices(catalog.load_sporadic(12))
    assert enum.det_norm == 1
    assert [L.label for L in enum.lattices] == ["L0"]


@pytest.mark.parametrize("path", DATA_FILES, ids=lambda p: p.stem)
def test_data_files_validate(path):
    data = catalog.load_sporadic(path, verify_order=False)
    for label in data.lattices:
        data.scenario(label).validate()


def _rewrite(tmp_path, mutate):
    payload = json.loads((catalog.PACKAGE_DATA / "st4.json").read_text())
    mutate(payload)
    out = tmp_path / "st4.json"
    catalog.write_sporadic(out, payload)
    return out


def test_loader_rejects_non_unimodular(tmp_path):
    def scale(p):
        p["generators"][0] = [[[str(2 * Fraction(x)) for x in e] for e in row] for row in p["generators"][0]]
    with pytest.raises(ValueError):
        catalog.load_sporadic(_rewrite(tmp_path, scale))


def test_loader_rejects_unstable_lattice(tmp_path):
    def unstable(p):
        p["lattices"]["bad"] = {"1": "1/2*e1"}
    with pytest.raises(ValueError):
        catalog.load_sporadic(_rewrite(tmp_path, unstable))


def test_loader_rejects_wrong_order(tmp_path):
    def wrong(p):
        p["order"] = 48
    with pytest.raises(ValueError, match="order"):
        catalog.load_sporadic(_rewrite(tmp_path, wrong))


def test_loader_rejects_tampering(tmp_path):
    path = tmp_path / "st4.json"
    payload = json.loads((catalog.PACKAGE_DATA / "st4.json").read_text())
    payload["order"] = 25
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError, match="checksum"):
        catalog.load_sporadic(path)


def test_lattice_vector_expressions():
    data = catalog.load_sporadic(26, verify_order=False)
    v = data.vector("2/3*e1+1/3*e4")
    assert v == (Fraction(2, 3), 0, 0, Fraction(1, 3), 0, 0)
    assert data.vector("-e2") == (0, -1, 0, 0, 0, 0)
    for bad in ("e7", "q1", "2**e1", ""):
        with pytest.raises(ValueError):
            data.vector(bad)


def test_data_directory_override(tmp_path, monkeypatch):
    target = tmp_path / "st4.json"
    target.write_text((catalog.PACKAGE_DATA / "st4.json").read_text())
    monkeypatch.setenv(catalog.DATA_ENV, str(tmp_path))
    assert catalog.sporadic_path(4) == target
    assert catalog.load_sporadic(4).order == 24
