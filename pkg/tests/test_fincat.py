import json

import pytest

from functor_tor.fincat import (
    Morph,
    NotAGroup,
    build_delta_truncated,
    build_group_category,
    build_symmetric_groupoid,
    category_from_json,
    category_to_json,
    cyclic_group_table,
    generated_closure,
    opposite,
    validate_category,
)

import oracles


def test_delta_hom_sizes_match_enumeration():
    d = build_delta_truncated(3)
    for m in d.objects:
        for n in d.objects:
            assert d.hom_size(m, n) == oracles.monotone_count(m, n)
    assert build_delta_truncated(1).hom_size(1, 1) == 3
    assert build_delta_truncated(2).hom_size(2, 1) == 4


def test_delta_composition_by_hand():
    d = build_delta_truncated(1)
    sigma0 = next(f for f in d.hom(1, 0))
    delta0 = next(f for f in d.hom(0, 1) if f.payload == (1,))
    assert d.compose(delta0, sigma0).payload == (1, 1)


def test_symmetric_groupoid():
    assert build_symmetric_groupoid(2, shifted=True).hom_size(2, 2) == 6
    assert build_symmetric_groupoid(2, shifted=False).hom_size(2, 2) == 2
    for shifted in (True, False):
        g = build_symmetric_groupoid(3, shifted)
        assert g.hom(0, 1) == []
        assert validate_category(g) == []


def test_group_categories():
    z2 = build_group_category(cyclic_group_table(2))
    assert z2.n_objects == 1 and z2.n_morphisms() == 2
    z3 = build_group_category(cyclic_group_table(3))
    assert z3.n_morphisms() == 3
    e = z3.identity(0)
    for g in z3.hom(0, 0):
        assert any(z3.compose(h, g) == e for h in z3.hom(0, 0))


@pytest.mark.parametrize("table", [
    [[0, 1, 2], [1, 1, 0], [2, 0, 1]],   # not associative
    [[0, 1], [1, 1]],                    # 1 has no inverse
    [[0, 1], [1]],                       # not square
    [[0, 2], [1, 0]],                    # not closed
])
def test_not_a_group(table):
    with pytest.raises(NotAGroup):
        build_group_category(table)


def test_opposite():
    d = build_delta_truncated(2)
    op = opposite(d)
    for m in d.objects:
        for n in d.objects:
            assert op.hom_size(n, m) == d.hom_size(m, n)
    assert category_to_json(opposite(op)) == category_to_json(d)
    assert validate_category(op) == []

    z3 = build_group_category(cyclic_group_table(3))
    zop = opposite(z3)
    # inversion is an isomorphism z3^op -> z3
    inv = {g: next(h for h in z3.hom(0, 0) if z3.compose(h, g) == z3.identity(0)) for g in z3.hom(0, 0)}
    for g in zop.hom(0, 0):
        for h in zop.hom(0, 0):
            assert inv[Morph(0, 0, zop.compose(g, h).payload)] == z3.compose(inv[Morph(0, 0, g.payload)],
                                                                             inv[Morph(0, 0, h.payload)])


def test_validate_category():
    assert validate_category(build_delta_truncated(3)) == []
    assert validate_category(build_delta_truncated(3), exhaustive=True) == []
    assert validate_category(build_group_category([[0]])) == []


def test_validate_names_corrupted_entry():
    data = category_to_json(build_delta_truncated(2))
    entry = next(e for e in data["compose"] if e[:3] == [0, 1, 2])
    entry[5] = (entry[5] + 1) % 3     # |Hom([0],[2])| = 3
    bad = validate_category(category_from_json(json.dumps(data)), exhaustive=True)
    assert bad
    assert any("Morph(" in b for b in bad)


def test_json_roundtrip():
    d = build_delta_truncated(2)
    back = category_from_json(json.dumps(category_to_json(d)))
    assert back.hom_table() == d.hom_table()
    assert validate_category(back) == []
    with pytest.raises(ValueError):
        category_from_json({"objects": 1})


def test_generators_generate():
    d = build_delta_truncated(3)
    assert generated_closure(d, d.generating_morphisms()) == set(d.morphisms())
