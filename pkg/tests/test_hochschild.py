import json
from pathlib import Path

import pytest

from functor_tor.crossed import FiberOrderedCategory, cyclic_operator
from functor_tor.fincat import Morph, cyclic_group_table
from functor_tor.hochschild import (
    BimoduleNotAlgebra,
    LodayModule,
    NotABimodule,
    NotAssociative,
    NotUnital,
    UnsupportedCharacteristic,
    FiberProductModule,
    algebra_as_bimodule,
    algebra_from_json,
    build_algebra,
    build_bimodule,
    commutator_quotient_dim,
    compare_homology_routes,
    connes_oracle,
    cyclic_oracle,
    cyclic_relation_report,
    cyclic_structure,
    dual_numbers,
    factor_through,
    ground_field,
    group_algebra,
    hochschild_oracle,
    moore_homology,
    restriction_report,
    simplicial_report,
)
from functor_tor.linalg import GF, QQ, Mat
from functor_tor.modules import validate_functoriality
from functor_tor.tor import MarginViolation

import oracles

DATA = Path(__file__).parent.parent / "data"

# upper triangular 2x2 matrices on (e11, e12, e22)
TRIANGULAR = [
    [[1, 0, 0], [0, 1, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 0], [0, 1, 0]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
]


def triangular(field=QQ):
    return build_algebra(TRIANGULAR, [1, 0, 1], field, name="T2")


def augmentation_module(a):
    """K over K[x]/(x²) with x acting by zero on both sides."""
    f = a.field
    acts = [Mat.identity(f, 1), Mat.zeros(f, 1, 1)]
    return build_bimodule(a, acts, acts)


# ---------------------------------------------------------------------------
# algebras


def test_algebra_validation():
    # e1 e1 = e2, e1 e2 = e1, e2 e1 = 0: (e1 e1) e1 = 0 but e1 (e1 e1) = e1
    sc = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
    ]
    with pytest.raises(NotAssociative) as err:
        build_algebra(sc, [1, 0, 0])
    assert err.value.witness == (1, 1, 1)
    with pytest.raises(NotUnital):
        build_algebra([[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 0])
    with pytest.raises(ValueError):
        build_algebra([[[1]]], [1, 0])


def test_bimodule_validation():
    a = dual_numbers()
    assert augmentation_module(a).dim == 1
    with pytest.raises(NotABimodule):
        build_bimodule(a, [Mat.identity(QQ, 1), Mat.identity(QQ, 1)], [Mat.identity(QQ, 1)] * 2)


def test_data_files_load():
    a = algebra_from_json((DATA / "dual_numbers_f2.json").read_text())
    assert a.field == GF(2) and a.dim == 2
    assert algebra_from_json(json.loads((DATA / "ground_field.json").read_text())).dim == 1
    assert algebra_from_json((DATA / "dual_numbers.json").read_text()).field == QQ


# ---------------------------------------------------------------------------
# Hochschild oracle against the raw b-differential


@pytest.mark.parametrize("p,expected", [(0, [2, 1, 1, 1]), (2, [2, 2, 2, 2]), (3, [2, 1, 1, 1])])
def test_hochschild_dual_numbers(p, expected):
    f = GF(p) if p else QQ
    a = dual_numbers(f)
    got = hochschild_oracle(a, algebra_as_bimodule(a), 3)
    assert got == oracles.hochschild_dims(oracles.DUAL_NUMBERS, 3, p) == expected


def test_hochschild_ground_field():
    a = ground_field()
    assert hochschild_oracle(a, algebra_as_bimodule(a), 3) == oracles.hochschild_dims(oracles.GROUND, 3) == [1, 0, 0, 0]


def test_hochschild_triangular_is_hereditary():
    a = triangular()
    got = hochschild_oracle(a, algebra_as_bimodule(a), 2)
    assert got == oracles.hochschild_dims(TRIANGULAR, 2) == [2, 0, 0]
    assert got[0] == commutator_quotient_dim(a, algebra_as_bimodule(a))


def test_hochschild_group_algebra_f2():
    a = group_algebra(cyclic_group_table(2), 0, GF(2))
    got = hochschild_oracle(a, algebra_as_bimodule(a), 2)
    sc = [[[1 if (i + j) % 2 == k else 0 for k in range(2)] for j in range(2)] for i in range(2)]
    assert got == oracles.hochschild_dims(sc, 2, 2)
    assert got[0] == 2


# ---------------------------------------------------------------------------
# cyclic homology


def test_cyclic_ground_field():
    a = ground_field()
    assert cyclic_oracle(a, 4) == connes_oracle(a, 4) == [1, 0, 1, 0, 1]


def test_cyclic_oracles_agree_on_dual_numbers():
    a = dual_numbers()
    assert cyclic_oracle(a, 3) == connes_oracle(a, 3)


def test_connes_needs_characteristic_zero():
    with pytest.raises(UnsupportedCharacteristic):
        connes_oracle(dual_numbers(GF(2)), 2)


# ---------------------------------------------------------------------------
# the Loday functor and its extensions


def test_loday_simplicial_identities():
    for a in (dual_numbers(), triangular(GF(3))):
        mod = LodayModule(algebra_as_bimodule(a), 3)
        assert simplicial_report(mod) == []
    assert simplicial_report(LodayModule(augmentation_module(dual_numbers()), 3)) == []


def test_moore_homology_is_hochschild():
    a = triangular()
    m = algebra_as_bimodule(a)
    assert moore_homology(LodayModule(m, 3), 2) == hochschild_oracle(a, m, 2)
    with pytest.raises(MarginViolation):
        moore_homology(LodayModule(m, 2), 2)


def test_rotation_acts_by_cycling_factors():
    a = dual_numbers()
    mod = cyclic_structure(a, 2)
    t1 = mod.matrix(cyclic_operator(1))
    assert t1 @ t1 == Mat.identity(QQ, 4)
    # a_0 ⊗ a_1 ↦ a_1 ⊗ a_0 on the basis (1⊗1, 1⊗x, x⊗1, x⊗x)
    assert t1 == Mat.from_rows(QQ, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    t2 = mod.matrix(cyclic_operator(2))
    acc = Mat.identity(QQ, 8)
    for _ in range(3):
        acc = t2 @ acc
    assert acc == Mat.identity(QQ, 8)
    assert cyclic_relation_report(mod, 2) == []


def test_cyclic_structure_relation_failure_is_reported():
    a = triangular()
    mod = cyclic_structure(a, 2)
    assert validate_functoriality(mod) == []

    class Broken(FiberProductModule):
        def _matrix(self, f):
            m = super()._matrix(f)
            return m.scale(2) if f == cyclic_operator(1) else m

    bad = cyclic_relation_report(Broken(algebra_as_bimodule(a), FiberOrderedCategory("delta_c", 2)), 2)
    assert bad[0] == "t^2 on level 1"
    assert "t^3 on level 2" not in bad


def test_fiber_order_decides_the_product():
    a = triangular()
    mod = FiberProductModule(algebra_as_bimodule(a), FiberOrderedCategory("delta_s", 1))
    forward = mod.matrix(Morph(1, 0, ((0, 1),)))
    backward = mod.matrix(Morph(1, 0, ((1, 0),)))
    assert forward.shape == backward.shape == (3, 9)
    # e11 ⊗ e12 has index 0*3 + 1
    assert forward.column(1) == {1: 1}       # e11 e12 = e12
    assert backward.column(1) == {}          # e12 e11 = 0
    assert forward != backward


@pytest.mark.parametrize("target", ["gamma", "f_as"])
def test_extensions_restrict_to_loday(target):
    a = triangular()
    ext = factor_through(a, algebra_as_bimodule(a), 2, target)
    assert restriction_report(ext, 2) == []
    assert validate_functoriality(ext) == []


def test_f_as_extension_needs_the_algebra():
    a = dual_numbers()
    with pytest.raises(BimoduleNotAlgebra):
        factor_through(a, augmentation_module(a), 2, "f_as")
    assert restriction_report(factor_through(a, augmentation_module(a), 2, "gamma"), 2) == []


# ---------------------------------------------------------------------------
# the three routes


def test_routes_ground_field():
    r = compare_homology_routes(ground_field(), None, 4, 2)
    assert r["ok"]
    assert all(v == [1, 0, 0] for v in r["routes"].values())
    assert r["stabilization"]["stable"]


def test_routes_with_nonregular_coefficients():
    a = dual_numbers()
    r = compare_homology_routes(a, augmentation_module(a), 3, 1)
    assert r["ok"], r["routes"]


def test_routes_cyclic_ground_field():
    r = compare_homology_routes(ground_field(), None, 5, 2, kind="cyclic")
    assert r["ok"]
    assert all(v == [1, 0, 1] for v in r["routes"].values())


def test_routes_margin():
    with pytest.raises(MarginViolation):
        compare_homology_routes(ground_field(), None, 3, 2)
