from fractions import Fraction

import pytest

from functor_tor.fincat import cyclic_group_table
from functor_tor.linalg import (
    GF,
    QQ,
    ChainComplex,
    Field,
    FieldMismatch,
    Mat,
    NotAComplex,
    cokernel_data,
    homology_dims,
    inverse,
    kernel_basis,
    rank,
    sparse_cokernel,
    sparse_kernel,
    sparse_rank,
)

import oracles


def test_field_canonical_forms():
    assert QQ(Fraction(6, -4)) == Fraction(-3, 2)
    assert GF(5)(-1) == 4
    assert GF(7)(Fraction(1, 3)) == 5
    with pytest.raises(ValueError):
        GF(9)
    assert Field.from_spec("Fp", 3) == GF(3)


def test_rank_examples():
    assert rank(Mat.identity(QQ, 2)) == 2
    assert rank(Mat.from_rows(GF(2), [[2]])) == 0


def test_kernel_examples():
    k = kernel_basis(Mat.zeros(QQ, 2, 3))
    assert k.cols == 3 and rank(k) == 3
    assert kernel_basis(Mat.identity(QQ, 4)).cols == 0
    k = kernel_basis(Mat.from_rows(QQ, [[1, 1], [1, 1]]))
    assert k.cols == 1
    assert k[0, 0] == -k[1, 0] != 0


def test_cokernel_examples():
    dim, proj = cokernel_data(Mat.zeros(QQ, 3, 2))
    assert dim == 3 and proj == Mat.identity(QQ, 3)
    dim, _ = cokernel_data(Mat.from_rows(QQ, [[1, 0, 2], [0, 1, 3]]))
    assert dim == 0


def test_projection_kills_image():
    m = Mat.from_rows(QQ, [[1, 2], [2, 4], [0, 1]])
    dim, proj = cokernel_data(m)
    assert dim == 1
    assert (proj @ m).is_zero()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Mat.identity(QQ, 2) @ Mat.identity(GF(3), 2)


def test_inverse_roundtrip():
    m = Mat.from_rows(QQ, [[2, 1], [7, 4]])
    assert m @ inverse(m) == Mat.identity(QQ, 2)


def test_homology_examples():
    c = ChainComplex(QQ, {0: 3}, {})
    assert homology_dims(c, [0]) == [3]
    c = ChainComplex(QQ, {0: 1, 1: 1}, {1: Mat.identity(QQ, 1)})
    assert homology_dims(c, [0, 1]) == [0, 0]


def test_not_a_complex():
    d1 = Mat.from_rows(QQ, [[1]])
    d2 = Mat.from_rows(QQ, [[1]])
    c = ChainComplex(QQ, {0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})
    with pytest.raises(NotAComplex):
        homology_dims(c, [1])


def _bar_complex(p: int, top: int) -> ChainComplex:
    """Normalized bar complex of Z/2 with trivial coefficients: one cell per degree."""
    f = GF(p) if p else QQ
    dims = {n: 1 for n in range(top + 2)}
    # d_n = sum_{i=0}^{n} (-1)^i on the single cell (g, ..., g); inner faces g*g = e vanish
    d = {n: Mat.from_rows(f, [[1 + (-1) ** n]]) for n in range(1, top + 2)}
    return ChainComplex(f, dims, d)


@pytest.mark.parametrize("p,expected", [(2, [1, 1, 1, 1]), (0, [1, 0, 0, 0])])
def test_bar_complex_of_z2(p, expected):
    assert homology_dims(_bar_complex(p, 3), range(4)) == expected
    assert oracles.bar_homology(cyclic_group_table(2), 3, p) == expected


def test_b_relation_matrix_ranks():
    # the relation matrix for b([2]) has 6 rows; its rank is 4, leaving 2 cyclic orders
    from functor_tor.crossed import FiberOrderedCategory
    from functor_tor.pseudoadj import cokernel_dims_dense

    assert oracles.rank(oracles.b_relation_matrix(2)) == 4
    expected = [len(m) - oracles.rank(m) for m in map(oracles.b_relation_matrix, range(4))]
    assert expected == [1, 1, 2, 6]
    assert cokernel_dims_dense(FiberOrderedCategory("delta_s", 3), QQ, 3) == expected


@pytest.mark.parametrize("field", [QQ, GF(2), GF(101)])
def test_sparse_routes_match_dense(field):
    import random

    rng = random.Random(7)
    rows = 9
    cols = [{i: rng.randint(-3, 3) for i in rng.sample(range(rows), 3)} for _ in range(12)]
    cols += [{i: 2 * v for i, v in cols[0].items()}]
    dense = Mat.from_columns(field, rows, cols)
    assert sparse_rank(field, cols) == rank(dense)
    dim, proj = sparse_cokernel(field, rows, cols)
    assert dim == rows - rank(dense)
    assert (proj @ dense).is_zero()
    kern = sparse_kernel(field, rows, cols)
    assert len(kern) == len(cols) - rank(dense)
    for v in kern:
        vec = Mat.from_columns(field, len(cols), [v])
        assert (dense @ vec).is_zero()


@pytest.mark.parametrize("field", [QQ, GF(2), GF(7)])
def test_large_rank_route_matches_dense(field, monkeypatch):
    import random

    import functor_tor.linalg as la

    rng = random.Random(3)
    rows = [[rng.choice([0, 0, 0, 0, 1, -1, 2]) for _ in range(40)] for _ in range(30)]
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    m = Mat.from_rows(field, rows)
    dense = rank(m)
    assert dense == oracles.rank([[x % field.p for x in r] if field.p else r for r in rows], field.p)
    monkeypatch.setattr(la, "DENSE_RANK_LIMIT", 10)
    assert rank(m) == rank(m.T) == dense
