from math import factorial

import pytest

from functor_tor.crossed import FiberOrderedCategory, build_f_as, build_gamma_as, build_symmetric_crossed
from functor_tor.fincat import build_delta_truncated
from functor_tor.linalg import GF, QQ
from functor_tor.modules import CO, CONTRA, BaseMismatch, ZeroModule, make_trivial, validate_functoriality
from functor_tor.pseudoadj import (
    adjunction_check,
    base_change_check,
    build_b_module,
    check_cyclic_orders_are_pseudo_free,
    cokernel_dims_dense,
    pseudo_adjunction_family,
    pseudo_adjunction_iso,
    pseudo_free,
)

import oracles


def test_pseudo_free_of_trivial_on_sigma3():
    s3 = build_symmetric_crossed(3)
    lk = pseudo_free(s3, make_trivial(s3.c, CONTRA, QQ))
    # one copy of K per element of the complement Σ_2
    assert lk.dims == [s3.d.n_morphisms()] == [2]
    assert validate_functoriality(lk) == []


@pytest.mark.parametrize("build", [build_f_as, build_gamma_as])
def test_pseudo_free_of_trivial_counts_cyclic_orders(build):
    x = build(3)
    lk = pseudo_free(x, make_trivial(x.c, CONTRA, QQ))
    assert lk.dims == [oracles.cyclic_orders(n + 1) for n in range(4)] == [1, 1, 2, 6]
    assert validate_functoriality(lk) == []


def test_pseudo_free_rejects_wrong_inputs():
    s3 = build_symmetric_crossed(3)
    with pytest.raises(BaseMismatch):
        pseudo_free(s3, make_trivial(s3.c, CO, QQ))
    with pytest.raises(BaseMismatch):
        pseudo_free(build_f_as(2), make_trivial(build_delta_truncated(2), CONTRA, QQ))


# ---------------------------------------------------------------------------
# b and b̄


@pytest.mark.parametrize("kind", ["delta_s", "gamma"])
def test_b_dims_are_factorials(kind):
    cat = FiberOrderedCategory(kind, 4)
    b = build_b_module(cat, QQ)
    assert b.dims == [factorial(n) for n in range(5)]
    assert b.dims == [oracles.cyclic_orders(n + 1) for n in range(5)]
    # union-find classes against the rank of the relation matrix
    assert cokernel_dims_dense(cat, QQ, 3) == b.dims[:4]


def test_b_over_gamma_is_restriction_of_b():
    b = build_b_module(FiberOrderedCategory("delta_s", 3), GF(2))
    bbar = build_b_module(FiberOrderedCategory("gamma", 3), GF(2))
    assert b.dims == bbar.dims
    for kind in ("delta_s", "gamma"):
        assert validate_functoriality(build_b_module(FiberOrderedCategory(kind, 2), GF(2))) == []


def test_b_needs_fiber_ordered_base():
    with pytest.raises(ValueError):
        build_b_module(build_delta_truncated(2))


@pytest.mark.parametrize("build", [build_f_as, build_gamma_as])
def test_cyclic_orders_are_pseudo_free(build):
    r = check_cyclic_orders_are_pseudo_free(build(3), GF(5))
    assert r["ok"], r["violations"]
    assert r["dims"] == [[d, d] for d in (1, 1, 2, 6)]


# ---------------------------------------------------------------------------
# the explicit iso L(m) ⊗ n -> m ⊗ n|_C


def test_iso_on_sigma3_trivial():
    s3 = build_symmetric_crossed(3)
    _, r = pseudo_adjunction_iso(s3, make_trivial(s3.c, CONTRA, GF(3)), make_trivial(s3.base, CO, GF(3)))
    assert r["ok"] and r["left_dim"] == r["right_dim"] == 1


def test_iso_with_zero_module():
    s3 = build_symmetric_crossed(3)
    _, r = pseudo_adjunction_iso(s3, ZeroModule(s3.c, CONTRA, QQ), make_trivial(s3.base, CO, QQ))
    assert r["ok"] and r["left_dim"] == r["right_dim"] == 0


@pytest.mark.parametrize("build,pairs", [(build_symmetric_crossed, 4), (build_gamma_as, 2), (build_f_as, 2)])
def test_seeded_family(build, pairs):
    x = build(3) if build is build_symmetric_crossed else build(1)
    fam = pseudo_adjunction_family(x, pairs, seed=11)
    assert fam["ok"], [r for r in fam["results"] if not r["ok"]]
    for r in fam["results"]:
        assert r["squares"] == [True, True, True]
        assert r["left_dim"] == r["right_dim"]


def test_family_is_deterministic():
    x = build_symmetric_crossed(3)
    assert pseudo_adjunction_family(x, 2, seed=5) == pseudo_adjunction_family(x, 2, seed=5)


# ---------------------------------------------------------------------------
# base change of Tor


def _bar(n, top, p):
    return oracles.bar_homology(oracles.cyclic_table(n), top, p)


@pytest.mark.parametrize("p,expected", [(3, [1, 1, 1, 1]), (0, [1, 0, 0, 0])])
def test_base_change_sigma3(p, expected):
    f = GF(p) if p else QQ
    s3 = build_symmetric_crossed(3)
    r = base_change_check(s3, make_trivial(s3.c, CONTRA, f), make_trivial(s3.base, CO, f), 3)
    assert r["ok"] and r["resolutions_dd"] and all(r["tor0_is_tensor"])
    assert r["left"] == r["right"] == _bar(3, 3, p) == expected


def test_base_change_sigma4_over_f2():
    s4 = build_symmetric_crossed(4)
    r = base_change_check(s4, make_trivial(s4.c, CONTRA, GF(2)), make_trivial(s4.base, CO, GF(2)), 2)
    assert r["ok"] and r["resolutions_dd"] and all(r["tor0_is_tensor"])
    # both sides reduce to the homology of Z/4
    assert r["left"] == r["right"] == _bar(4, 2, 2) == [1, 1, 1]


# ---------------------------------------------------------------------------
# Hom adjunction through duals


def test_hom_adjunction_sigma3():
    s3 = build_symmetric_crossed(3)
    r = adjunction_check(s3, make_trivial(s3.c, CONTRA, QQ), make_trivial(s3.base, CONTRA, QQ))
    assert r["ok"]
    assert len(set(r["steps"].values())) == 1


def test_hom_adjunction_f_as_with_b():
    fa = build_f_as(2)
    r = adjunction_check(fa, make_trivial(fa.c, CONTRA, QQ), build_b_module(fa, QQ))
    assert r["ok"], r["steps"]
