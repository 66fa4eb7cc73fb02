import itertools
import json
from pathlib import Path

import pytest

from functor_tor.crossed import (
    FiberOrderedCategory,
    NotCrossed,
    act_lower,
    act_upper,
    bijection,
    build_crossed,
    build_delta_c,
    build_delta_s,
    build_f_as,
    build_gamma_as,
    build_group_crossed,
    build_symmetric_crossed,
    check_crossed_laws,
    compose_fiber_ordered,
    concatenation,
    crossed_from_json,
    crossed_to_json,
    cyclic_operator,
    delta_c_op_embedding,
    factorize,
    one_line,
    sigma,
    simplicial_face,
    transposition,
)
from functor_tor.fincat import Morph, build_delta_truncated, cyclic_group_table, validate_category

import oracles

FIXTURES = Path(__file__).parent / "fixtures"


def test_hom_counts_delta_s():
    ds = FiberOrderedCategory("delta_s", 3)
    for m in ds.objects:
        for n in ds.objects:
            assert ds.hom_size(m, n) == oracles.fiber_ordered_count(m, n)
    assert (ds.hom_size(1, 0), ds.hom_size(2, 0), ds.hom_size(1, 1)) == (2, 6, 6)


def test_hom_counts_gamma_match_factorization():
    # Γ(as) = Δ^op ⋈ Σ_•: |Hom([n],[m])| = |Hom_Δ([m],[n])| · n!
    g = FiberOrderedCategory("gamma", 4)
    for n in g.objects:
        for m in g.objects:
            assert g.hom_size(n, m) == oracles.monotone_count(m, n) * oracles.orders_starting_with_zero(n + 1)
    assert [g.hom_size(n, 0) for n in range(5)] == [1, 2, 6, 24, 120]


def test_fiber_ordered_composition_by_hand():
    # [1] -> [0] with fiber (1, 0), precomposed with the swap of [1]
    swap = transposition(1, 0).payload
    collapse = ((1, 0),)
    assert compose_fiber_ordered(collapse, swap) == ((0, 1),)


@pytest.mark.parametrize("build", [build_delta_s, build_delta_c, build_f_as, build_gamma_as])
def test_builtin_categories_valid(build):
    x = build(3)
    assert validate_category(x.base) == []
    assert check_crossed_laws(x) == []
    assert len(x.factor) == x.base.n_morphisms()


def test_symmetric_crossed():
    x = build_symmetric_crossed(3)
    assert x.c.n_morphisms() == 3 and x.d.n_morphisms() == 2
    # every one of the 6 elements is c∘d for exactly one pair
    pairs = [(c, d) for c in x.c.hom(0, 0) for d in x.d.hom(0, 0)]
    products = [x.base.compose(c, d) for c, d in pairs]
    assert sorted(products) == sorted(x.base.hom(0, 0))
    assert check_crossed_laws(x) == []


def test_z4_rejected():
    with pytest.raises(NotCrossed) as err:
        build_group_crossed(cyclic_group_table(4), [0, 2], [0, 2])
    assert err.value.count == 2
    data = json.loads((FIXTURES / "z4_broken.json").read_text())
    with pytest.raises(NotCrossed):
        build_group_crossed(data["table"], data["c"], data["d"])


def test_trivial_crossing():
    d = build_delta_truncated(2)
    ids = {d.identity(o) for o in d.objects}
    x = build_crossed(d, set(d.morphisms()), ids)
    for phi in d.morphisms():
        assert factorize(x, phi) == (phi, d.identity(phi.dom))


def test_factorize_members():
    x = build_f_as(2)
    for phi in x.c.morphisms():
        assert factorize(x, phi) == (phi, x.base.identity(phi.dom))
    for phi in x.d.morphisms():
        assert factorize(x, phi) == (x.base.identity(phi.cod), phi)


def test_factorize_reversed_collapse():
    x = build_delta_s(2)
    phi = Morph(1, 0, ((1, 0),))
    psi, f = factorize(x, phi)
    assert psi == Morph(1, 0, ((0, 1),))
    assert f == transposition(1, 0)


def test_action_identities():
    x = build_gamma_as(2)
    b = x.base
    for (f, psi), (lower, upper) in x.act.items():
        if f == b.identity(f.dom):
            assert lower == psi and upper == b.identity(psi.dom)
        if psi == b.identity(psi.dom):
            assert lower == b.identity(f.cod) and upper == f
        assert act_lower(x, f, psi) == lower and act_upper(x, psi, f) == upper


def test_symmetric_group_product_factorized():
    x = build_symmetric_crossed(3)
    perms = x.base.perms
    psi = Morph(0, 0, perms.index((1, 2, 0)))
    f = Morph(0, 0, perms.index((1, 0, 2)))
    lower, upper = x.act[(f, psi)]
    target = x.base.compose(f, psi)
    found = [(c, d) for c in x.c.hom(0, 0) for d in x.d.hom(0, 0) if x.base.compose(c, d) == target]
    assert found == [(lower, upper)]


def test_cyclic_embedding():
    t2 = cyclic_operator(2)
    assert concatenation(t2.payload) == (2, 0, 1)
    assert one_line(t2) == (1, 2, 0)
    assert t2 == bijection((1, 2, 0))
    assert simplicial_face(2, 1) == sigma(1, 1)
    assert simplicial_face(2, 2).payload == compose_fiber_ordered(sigma(1, 0).payload, t2.payload)
    assert delta_c_op_embedding(4).check() == []


def test_f_as_factors_through_bijections():
    x = build_f_as(3)
    for phi in x.base.morphisms():
        psi, s = factorize(x, phi)
        assert s.dom == s.cod == phi.dom
        assert x.base.compose(psi, s) == phi


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_symmetric_crossed_laws(n):
    assert check_crossed_laws(build_symmetric_crossed(n)) == []


def test_corrupted_act_table_reported():
    x = build_symmetric_crossed(3)
    (key, (lower, upper)) = next((k, v) for k, v in x.act.items() if k[1] != x.base.identity(0))
    x.act[key] = (next(g for g in x.c.hom(0, 0) if g != lower), upper)
    bad = check_crossed_laws(x)
    assert bad and all("law" in v for v in bad)
    assert any("defining square" in v["law"] for v in bad)


def test_json_roundtrip_and_fixture():
    x = build_gamma_as(2)
    y = crossed_from_json(json.loads(json.dumps(crossed_to_json(x))))
    assert check_crossed_laws(y) == []
    corrupted = crossed_from_json(json.loads((FIXTURES / "corrupted_crossed.json").read_text()))
    assert check_crossed_laws(corrupted)


def test_unique_factorization_exhaustive_small():
    # independent brute force on Σ_4 = Z/4 ⋈ Σ_3 using raw permutations
    x = build_symmetric_crossed(4)
    perms = x.base.perms
    cyc = {perms[g.payload] for g in x.c.hom(0, 0)}
    stab = {perms[g.payload] for g in x.d.hom(0, 0)}
    for p in itertools.permutations(range(4)):
        hits = [(c, d) for c in cyc for d in stab if tuple(c[d[i]] for i in range(4)) == p]
        assert len(hits) == 1
