"""Loday functors of an algebra, their cyclic and fiber-ordered extensions,
and classical Hochschild / cyclic homology oracles.

Tensor bases are row-major with the bimodule factor first: the basis vector
``(i_0, i_1, ..., i_n)`` of ``M ⊗ A^{⊗n}`` has index
``((i_0 * a + i_1) * a + ...) * a + i_n``.

Face convention: ``d_0 = m·a_1``, ``d_i`` multiplies ``a_i a_{i+1}``,
``d_n = a_n·m``; degeneracy ``s_i`` inserts the unit after position ``i``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .crossed import (
    CyclicEmbedding,
    FiberOrderedCategory,
    cyclic_operator,
    from_opposite_monotone,
)
from .fincat import DeltaCategory, FinCategory, Morph, build_delta_truncated, flip, opposite
from .linalg import QQ, ChainComplex, Field, FieldMismatch, Mat, cokernel_data, homology_dims, rank, right_inverse
from .modules import CO, CONTRA, CatModule, Functor, make_trivial, restrict
from .pseudoadj import build_b_module
from .tor import MarginViolation, check_margin, tor


class NotAssociative(ValueError):
    def __init__(self, witness: tuple[int, int, int]):
        super().__init__(f"(e{witness[0]} e{witness[1]}) e{witness[2]} != e{witness[0]} (e{witness[1]} e{witness[2]})")
        self.witness = witness


class NotUnital(ValueError):
    def __init__(self, witness: int):
        super().__init__(f"unit fails on basis element e{witness}")
        self.witness = witness


class NotABimodule(ValueError):
    pass


class RelationViolation(ValueError):
    def __init__(self, relation: str):
        super().__init__(f"relation {relation} fails")
        self.relation = relation


class BimoduleNotAlgebra(ValueError):
    pass


class UnsupportedCharacteristic(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebras and bimodules


def _sparse(vec: Sequence, field: Field) -> dict[int, object]:
    out = {}
    for i, v in enumerate(vec):
        v = field(v)
        if v:
            out[i] = v
    return out


def _add_into(acc: dict, vec: dict, c, p: int):
    for k, v in vec.items():
        s = acc.get(k, 0) + c * v
        if p:
            s %= p
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


@dataclass
class AlgebraData:
    """Finite-dimensional unital associative algebra on a basis ``e_0..e_{dim-1}``."""

    dim: int
    sc: list[list[dict[int, object]]]   # sc[i][j] = e_i e_j, sparse
    unit: dict[int, object]
    field: Field
    name: str = "A"

    def mul(self, u: dict, v: dict) -> dict:
        p = self.field.p
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                _add_into(out, self.sc[i][j], a * b, p)
        return out

    def product(self, factors: Sequence[int]) -> dict:
        """e_{f_0} e_{f_1} ... (the unit for an empty sequence)."""
        out = dict(self.unit)
        for i in factors:
            out = self.mul(out, {i: 1})
        return out

    def to_json(self) -> dict:
        dense = [[[str(self.sc[i][j].get(k, 0)) for k in range(self.dim)] for j in range(self.dim)]
                 for i in range(self.dim)]
        out = {"dim": self.dim, "sc": dense, "unit": [str(self.unit.get(k, 0)) for k in range(self.dim)]}
        out.update(self.field.to_json())
        return out


def build_algebra(sc: Sequence[Sequence[Sequence]], unit: Sequence, field: Field = QQ, name: str = "A") -> AlgebraData:
    """Validate structure constants ``sc[i][j][k]`` (e_i e_j = Σ_k sc[i][j][k] e_k)."""
    n = len(unit)
    if len(sc) != n or any(len(r) != n or any(len(c) != n for c in r) for r in sc):
        raise ValueError("structure constants must have shape dim x dim x dim")
    a = AlgebraData(n, [[_sparse(sc[i][j], field) for j in range(n)] for i in range(n)], _sparse(unit, field), field, name)
    for i, j, k in itertools.product(range(n), repeat=3):
        if a.mul(a.mul({i: 1}, {j: 1}), {k: 1}) != a.mul({i: 1}, a.mul({j: 1}, {k: 1})):
            raise NotAssociative((i, j, k))
    for i in range(n):
        if a.mul(a.unit, {i: 1}) != {i: 1} or a.mul({i: 1}, a.unit) != {i: 1}:
            raise NotUnital(i)
    return a


def algebra_from_json(data: dict | str) -> AlgebraData:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        field = Field.from_spec(data.get("field", "Q"), data.get("p"))
        sc = [[[Fraction(v) for v in c] for c in r] for r in data["sc"]]
        unit = [Fraction(v) for v in data["unit"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed algebra JSON: {e}") from None
    if "dim" in data and int(data["dim"]) != len(unit):
        raise ValueError("dim does not match the unit vector")
    return build_algebra(sc, unit, field, data.get("name", "A"))


def ground_field(field: Field = QQ) -> AlgebraData:
    return build_algebra([[[1]]], [1], field, name="K")


def dual_numbers(field: Field = QQ) -> AlgebraData:
    """K[x]/(x²) on the basis (1, x)."""
    sc = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return build_algebra(sc, [1, 0], field, name="K[x]/(x^2)")


def group_algebra(table: Sequence[Sequence[int]], identity: int, field: Field = QQ) -> AlgebraData:
    n = len(table)
    sc = [[[1 if table[i][j] == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    return build_algebra(sc, [1 if k == identity else 0 for k in range(n)], field, name="K[G]")


@dataclass
class BimoduleData:
    """``left[i]`` / ``right[i]``: matrices of m ↦ e_i·m and m ↦ m·e_i."""

    dim: int
    left: list[Mat]
    right: list[Mat]
    algebra: AlgebraData
    is_regular: bool = False

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act_left(self, i: int, v: dict) -> dict:
        return _apply_mat(self.left[i], v, self.field.p)

    def act_right(self, v: dict, i: int) -> dict:
        return _apply_mat(self.right[i], v, self.field.p)


def _apply_mat(m: Mat, v: dict, p: int) -> dict:
    out: dict = {}
    for j, c in v.items():
        for i in range(m.rows):
            a = m[i, j]
            if a:
                s = out.get(i, 0) + c * a
                if p:
                    s %= p
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
    return out


def _mult_matrix(a: AlgebraData, side: str, i: int) -> Mat:
    ent = {}
    for j in range(a.dim):
        v = a.sc[i][j] if side == "left" else a.sc[j][i]
        for k, c in v.items():
            ent[k, j] = c
    return Mat.from_entries(a.field, a.dim, a.dim, ent)


def algebra_as_bimodule(a: AlgebraData) -> BimoduleData:
    left = [_mult_matrix(a, "left", i) for i in range(a.dim)]
    right = [_mult_matrix(a, "right", i) for i in range(a.dim)]
    return BimoduleData(a.dim, left, right, a, is_regular=True)


def build_bimodule(a: AlgebraData, left: Sequence[Mat], right: Sequence[Mat]) -> BimoduleData:
    """Validate a bimodule given by action matrices on the algebra basis."""
    if len(left) != a.dim or len(right) != a.dim:
        raise NotABimodule("one action matrix per algebra basis element is required")
    d = left[0].rows if left else 0
    f_ = a.field
    for mats in (left, right):
        for m in mats:
            if m.field != f_:
                raise FieldMismatch(f"{m.field!r} vs {f_!r}")
            if m.shape != (d, d):
                raise NotABimodule("action matrices must be square of equal size")

    def combo(mats, vec):
        out = Mat.zeros(f_, d, d)
        for k, c in vec.items():
            out = out + mats[k].scale(c)
        return out

    ident = Mat.identity(f_, d)
    if combo(left, a.unit) != ident or combo(right, a.unit) != ident:
        raise NotABimodule("unit does not act as the identity")
    for i in range(a.dim):
        for j in range(a.dim):
            if left[i] @ left[j] != combo(left, a.sc[i][j]):
                raise NotABimodule(f"left action not associative at ({i}, {j})")
            if right[j] @ right[i] != combo(right, a.sc[i][j]):
                raise NotABimodule(f"right action not associative at ({i}, {j})")
            if left[i] @ right[j] != right[j] @ left[i]:
                raise NotABimodule(f"actions do not commute at ({i}, {j})")
    return BimoduleData(d, list(left), list(right), a)


# ---------------------------------------------------------------------------
# tensor index helpers


def _digits(idx: int, dims: Sequence[int]) -> list[int]:
    out = [0] * len(dims)
    for k in range(len(dims) - 1, -1, -1):
        idx, out[k] = divmod(idx, dims[k])
    return out


def _index(digits: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for d, n in zip(digits, dims):
        idx = idx * n + d
    return idx


def _kron_sparse(parts: Sequence[dict], dims: Sequence[int], p: int) -> dict:
    out = {0: 1}
    for part, n in zip(parts, dims):
        nxt: dict = {}
        for i, a in out.items():
            for j, b in part.items():
                k = i * n + j
                s = nxt.get(k, 0) + a * b
                nxt[k] = s % p if p else s
        out = {k: v for k, v in nxt.items() if v}
    return out


def _layer_dims(m: BimoduleData, n: int) -> list[int]:
    return [m.dim] + [m.algebra.dim] * n


# ---------------------------------------------------------------------------
# the simplicial module, built from faces and degeneracies


def _face(m: BimoduleData, n: int, i: int, digits: Sequence[int]) -> dict:
    a = m.algebra
    p = a.field.p
    rest_dims = _layer_dims(m, n - 1)
    if i == 0:
        head = m.act_right({digits[0]: 1}, digits[1])
        parts = [head] + [{x: 1} for x in digits[2:]]
    elif i == n:
        head = m.act_left(digits[n], {digits[0]: 1})
        parts = [head] + [{x: 1} for x in digits[1:n]]
    else:
        prod = a.mul({digits[i]: 1}, {digits[i + 1]: 1})
        parts = [{digits[0]: 1}] + [{x: 1} for x in digits[1:i]] + [prod] + [{x: 1} for x in digits[i + 2:]]
    return _kron_sparse(parts, rest_dims, p)


def face_matrix(m: BimoduleData, n: int, i: int) -> Mat:
    """d_i: M ⊗ A^{⊗n} -> M ⊗ A^{⊗(n-1)}."""
    src = _layer_dims(m, n)
    tot_src = m.dim * m.algebra.dim ** n
    cols = [_face(m, n, i, _digits(j, src)) for j in range(tot_src)]
    return Mat.from_columns(m.field, m.dim * m.algebra.dim ** (n - 1), cols)


def degeneracy_matrix(m: BimoduleData, n: int, i: int) -> Mat:
    """s_i: M ⊗ A^{⊗n} -> M ⊗ A^{⊗(n+1)}, the unit inserted after position i."""
    a = m.algebra
    src = _layer_dims(m, n)
    cols = []
    for j in range(m.dim * a.dim ** n):
        dg = _digits(j, src)
        parts = [{x: 1} for x in dg[: i + 1]] + [a.unit] + [{x: 1} for x in dg[i + 1:]]
        cols.append(_kron_sparse(parts, _layer_dims(m, n + 1), a.field.p))
    return Mat.from_columns(m.field, m.dim * a.dim ** (n + 1), cols)


class LodayModule(CatModule):
    """[n] ↦ M ⊗ A^{⊗n} as a covariant module over the opposite of Δ_{≤N}.

    A monotone θ acts through its factorization into faces and degeneracies.
    """

    def __init__(self, m: BimoduleData, N: int, delta_op: FinCategory | None = None):
        base = delta_op if delta_op is not None else opposite(build_delta_truncated(N))
        super().__init__(base, CO, m.field)
        self.bimodule = m
        self.N = N
        self.name = "L(A,M)"
        self._faces: dict = {}
        self._degs: dict = {}

    def dim(self, x):
        return self.bimodule.dim * self.bimodule.algebra.dim ** x

    def face(self, n: int, i: int) -> Mat:
        if (n, i) not in self._faces:
            self._faces[n, i] = face_matrix(self.bimodule, n, i)
        return self._faces[n, i]

    def degeneracy(self, n: int, i: int) -> Mat:
        if (n, i) not in self._degs:
            self._degs[n, i] = degeneracy_matrix(self.bimodule, n, i)
        return self._degs[n, i]

    def _theta(self, theta: tuple[int, ...], n: int) -> Mat:
        m = len(theta) - 1
        image = set(theta)
        missing = [i for i in range(n + 1) if i not in image]
        if missing:
            # θ = δ_i ∘ θ'  ⇒  L(θ) = L(θ') ∘ d_i
            i = missing[-1]
            inner = tuple(t if t < i else t - 1 for t in theta)
            return self._theta(inner, n - 1) @ self.face(n, i)
        for j in range(m):
            if theta[j] == theta[j + 1]:
                # θ = θ'' ∘ σ_j  ⇒  L(θ) = s_j ∘ L(θ'')
                inner = theta[: j + 1] + theta[j + 2:]
                return self.degeneracy(m - 1, j) @ self._theta(inner, n)
        return Mat.identity(self.field, self.dim(n))

    def _matrix(self, f):
        # f is θ: [f.cod] -> [f.dom] in Δ, seen as [f.dom] -> [f.cod]
        return self._theta(tuple(f.payload), f.dom)


def loday_functor(a: AlgebraData, m: BimoduleData, N: int) -> LodayModule:
    if m.algebra is not a and m.field != a.field:
        raise FieldMismatch(f"{a.field!r} vs {m.field!r}")
    return LodayModule(m, N)


def simplicial_report(mod: LodayModule) -> list[str]:
    """Simplicial identities between the face and degeneracy matrices, exhaustively up to N."""
    bad = []
    N = mod.N
    d, s = mod.face, mod.degeneracy
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                if d(n - 1, i) @ d(n, j) != d(n - 1, j - 1) @ d(n, i):
                    bad.append(f"d{i}d{j} on level {n}")
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if s(n + 1, i) @ s(n, j) != s(n + 1, j + 1) @ s(n, i):
                    bad.append(f"s{i}s{j} on level {n}")
    for n in range(N):
        ident = Mat.identity(mod.field, mod.dim(n))
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = d(n + 1, i) @ s(n, j)
                if i < j:
                    rhs = s(n - 1, j - 1) @ d(n, i)
                elif i in (j, j + 1):
                    rhs = ident
                else:
                    rhs = s(n - 1, j) @ d(n, i - 1)
                if lhs != rhs:
                    bad.append(f"d{i}s{j} on level {n}")
    return bad


# ---------------------------------------------------------------------------
# fiber-ordered actions (Γ(as), F(as) and the cyclic category)


def fiber_product_image(m: BimoduleData, fibers: Sequence[Sequence[int]], digits: Sequence[int]) -> dict:
    """Multiply the factors of each fiber in its order; position 0 carries M.

    Inside the fiber containing 0, factors listed before 0 act on the left of
    M and those after it on the right.  An empty fiber contributes the unit.
    """
    a = m.algebra
    p = a.field.p
    parts = []
    for j, fib in enumerate(fibers):
        if 0 in fib and not m.is_regular:
            if j != 0:
                raise ValueError("the bimodule factor must stay at position 0")
            k = fib.index(0)
            v = {digits[0]: 1}
            left = a.product([digits[t] for t in fib[:k]])
            acc: dict = {}
            for i, c in left.items():
                _add_into(acc, m.act_left(i, v), c, p)
            v = acc
            for t in fib[k + 1:]:
                v = m.act_right(v, digits[t])
            parts.append(v)
        else:
            parts.append(a.product([digits[t] for t in fib]))
    return _kron_sparse(parts, _layer_dims(m, len(fibers) - 1), p)


class FiberProductModule(CatModule):
    """[n] ↦ M ⊗ A^{⊗n} over a category of fiber-ordered maps (covariant)."""

    def __init__(self, m: BimoduleData, base: FinCategory, name: str = "L(A,M)"):
        super().__init__(base, CO, m.field)
        self.bimodule = m
        self.name = name

    def dim(self, x):
        return self.bimodule.dim * self.bimodule.algebra.dim ** x

    def _matrix(self, f):
        src = _layer_dims(self.bimodule, f.dom)
        cols = [fiber_product_image(self.bimodule, f.payload, _digits(j, src)) for j in range(self.dim(f.dom))]
        return Mat.from_columns(self.field, self.dim(f.cod), cols)


def delta_op_functor(delta_op: FinCategory, target: FinCategory) -> Functor:
    """Δ^op_{≤N} -> (pointed cyclic maps), θ ↦ the fiber-ordered map of θ reversed."""
    return Functor(delta_op, target, lambda x: x,
                   lambda f: Morph(f.dom, f.cod, from_opposite_monotone(f.payload, f.dom).payload),
                   name="Delta^op->fiber")


def cyclic_structure(a: AlgebraData, N: int, validate: bool = True) -> FiberProductModule:
    """L(A, A) over the cyclic maps (the image of the opposite cyclic category).

    The rotation t_n acts by a_0 ⊗ ... ⊗ a_n ↦ a_n ⊗ a_0 ⊗ ... ⊗ a_{n-1}.
    """
    mod = FiberProductModule(algebra_as_bimodule(a), FiberOrderedCategory("delta_c", N), name="L(A,A)")
    if validate:
        bad = cyclic_relation_report(mod, N)
        if bad:
            raise RelationViolation(bad[0])
    return mod


def cyclic_relation_report(mod: CatModule, N: int) -> list[str]:
    """Relations of the cyclic category, checked on generator matrices."""
    emb = CyclicEmbedding(N)
    bad = []
    for n in range(N + 1):
        t = mod.matrix(cyclic_operator(n))
        acc = Mat.identity(mod.field, mod.dim(n))
        for _ in range(n + 1):
            acc = t @ acc
        if acc != Mat.identity(mod.field, mod.dim(n)):
            bad.append(f"t^{n + 1} on level {n}")

    def word(gens):
        out = mod.matrix(emb(gens[-1]))
        for g in reversed(gens[:-1]):
            out = mod.matrix(emb(g)) @ out
        return out

    for name, lhs, rhs in emb.relations():
        if rhs is None:
            if name.startswith("t^"):
                continue
            n = lhs[-1].n
            ok = word(lhs) == Mat.identity(mod.field, mod.dim(n))
        else:
            ok = word(lhs) == word(rhs)
        if not ok:
            bad.append(name)
    return bad


def factor_through(a: AlgebraData, m: BimoduleData, N: int, target: str) -> FiberProductModule:
    """Extend L(A, M) to Γ(as)_{≤N} (``"gamma"``) or F(as)_{≤N} (``"f_as"``, needs M = A)."""
    if target == "gamma":
        return FiberProductModule(m, FiberOrderedCategory("gamma", N))
    if target == "f_as":
        if not m.is_regular or m.algebra is not a:
            raise BimoduleNotAlgebra("the F(as) extension exists only for M = A")
        return FiberProductModule(m, FiberOrderedCategory("delta_s", N), name="L(A,A)")
    raise ValueError(f"unknown target {target!r}")


def restriction_report(ext: FiberProductModule, N: int) -> list[str]:
    """Compare ext restricted along Δ^op ↪ (its base) with the face/degeneracy module."""
    lod = LodayModule(ext.bimodule, N)
    res = restrict(ext, delta_op_functor(lod.base, ext.base))
    bad = []
    for f in lod.base.morphisms():
        if res.matrix(f) != lod.matrix(f):
            bad.append(f"restriction differs at {f}")
    return bad


# ---------------------------------------------------------------------------
# classical oracles


def hochschild_complex(a: AlgebraData, m: BimoduleData, top: int) -> ChainComplex:
    """C_n = M ⊗ A^{⊗n}, b = Σ (-1)^i d_i, written out directly on index tuples."""
    f_ = a.field
    p = f_.p
    dims = {n: m.dim * a.dim ** n for n in range(top + 1)}
    d = {}
    for n in range(1, top + 1):
        src = _layer_dims(m, n)
        tgt = _layer_dims(m, n - 1)
        ent: dict = {}
        for j in range(dims[n]):
            dg = _digits(j, src)
            mm, xs = dg[0], dg[1:]
            terms = []
            # m·a_1 ⊗ a_2 ⊗ ... ⊗ a_n
            for r in range(m.dim):
                c = m.right[xs[0]][r, mm]
                if c:
                    terms.append((c, [r] + xs[1:]))
            for i in range(1, n):
                for k, c in a.sc[xs[i - 1]][xs[i]].items():
                    terms.append(((-1) ** i * c, [mm] + xs[: i - 1] + [k] + xs[i + 1:]))
            # (a_n·m) ⊗ a_1 ⊗ ... ⊗ a_{n-1}
            for r in range(m.dim):
                c = m.left[xs[-1]][r, mm]
                if c:
                    terms.append(((-1) ** n * c, [r] + xs[:-1]))
            for c, t in terms:
                key = (_index(t, tgt), j)
                v = ent.get(key, 0) + c
                ent[key] = v % p if p else v
        d[n] = Mat.from_entries(f_, dims[n - 1], dims[n], {k: v for k, v in ent.items() if v})
    return ChainComplex(f_, dims, d)


def hochschild_oracle(a: AlgebraData, m: BimoduleData, max_degree: int) -> list[int]:
    return homology_dims(hochschild_complex(a, m, max_degree + 1), range(max_degree + 1))


def commutator_quotient_dim(a: AlgebraData, m: BimoduleData) -> int:
    """dim M / span{a·x − x·a}."""
    cols = []
    for i in range(a.dim):
        diff = m.left[i] - m.right[i]
        for j in range(m.dim):
            cols.append(diff.column(j))
    return m.dim - rank(Mat.from_columns(m.field, m.dim, cols))


def _signed_rotation(a: AlgebraData, n: int) -> Mat:
    """t(a_0 ⊗ ... ⊗ a_n) = (-1)^n a_n ⊗ a_0 ⊗ ... ⊗ a_{n-1}."""
    dims = [a.dim] * (n + 1)
    sign = -1 if n % 2 else 1
    ent = {}
    for j in range(a.dim ** (n + 1)):
        dg = _digits(j, dims)
        ent[_index([dg[-1]] + dg[:-1], dims), j] = sign
    return Mat.from_entries(a.field, a.dim ** (n + 1), a.dim ** (n + 1), ent)


def _bar_prime(a: AlgebraData, reg: BimoduleData, n: int) -> Mat:
    """b' = Σ_{i<n} (-1)^i d_i on A^{⊗(n+1)}."""
    out = None
    for i in range(n):
        di = face_matrix(reg, n, i).scale((-1) ** i)
        out = di if out is None else out + di
    return out


def cyclic_bicomplex(a: AlgebraData, cols: int, rows: int) -> ChainComplex:
    """Total complex of the cyclic bicomplex CC(A), columns 0..cols, rows 0..rows.

    Even columns carry b, odd columns −b'; horizontally 1 − t leaves odd
    columns and the norm N = 1 + t + ... + t^n leaves even ones.
    """
    f_ = a.field
    reg = algebra_as_bimodule(a)
    size = {q: a.dim ** (q + 1) for q in range(rows + 1)}
    b = {q: hochschild_complex(a, reg, q).differential(q) for q in range(1, rows + 1)}
    bp = {q: _bar_prime(a, reg, q) for q in range(1, rows + 1)}
    rot = {q: _signed_rotation(a, q) for q in range(rows + 1)}
    norm = {}
    for q in range(rows + 1):
        acc = Mat.identity(f_, size[q])
        power = Mat.identity(f_, size[q])
        for _ in range(q):
            power = rot[q] @ power
            acc = acc + power
        norm[q] = acc
    top = cols + rows
    cells = {n: [(pp, n - pp) for pp in range(cols + 1) if 0 <= n - pp <= rows] for n in range(top + 1)}
    offs = {}
    dims = {}
    for n, cs in cells.items():
        o = 0
        for c in cs:
            offs[n, c] = o
            o += size[c[1]]
        dims[n] = o
    d = {}
    for n in range(1, top + 1):
        ent: dict = {}

        def put(block: Mat, r0: int, c0: int):
            for i, row in enumerate(block.tolist()):
                for j, v in enumerate(row):
                    if v:
                        ent[r0 + i, c0 + j] = ent.get((r0 + i, c0 + j), 0) + v

        for (pp, q) in cells[n]:
            c0 = offs[n, (pp, q)]
            if q >= 1:
                vert = b[q] if pp % 2 == 0 else -bp[q]
                put(vert, offs[n - 1, (pp, q - 1)], c0)
            if pp >= 1:
                ident = Mat.identity(f_, size[q])
                horiz = ident - rot[q] if pp % 2 == 1 else norm[q]
                put(horiz, offs[n - 1, (pp - 1, q)], c0)
        d[n] = Mat.from_entries(f_, dims[n - 1], dims[n], ent)
    return ChainComplex(f_, dims, d)


def cyclic_oracle(a: AlgebraData, max_degree: int, verify_window: bool = True) -> list[int]:
    """HC_0..HC_d from the cyclic bicomplex (valid in every characteristic).

    Columns and rows 0..d+1 are built; with ``verify_window`` the result is
    recomputed with one more column and row and must agree.
    """
    w = max_degree + 1
    dims = homology_dims(cyclic_bicomplex(a, w, w), range(max_degree + 1))
    if verify_window:
        again = homology_dims(cyclic_bicomplex(a, w + 1, w + 1), range(max_degree + 1))
        if again != dims:
            raise AssertionError(f"cyclic bicomplex window not stable: {dims} vs {again}")
    return dims


def connes_oracle(a: AlgebraData, max_degree: int) -> list[int]:
    """HC via Connes' quotient complex C/(1 − t) with b; characteristic 0 only."""
    if a.field.p:
        raise UnsupportedCharacteristic("the quotient complex computes cyclic homology only in characteristic 0")
    f_ = a.field
    reg = algebra_as_bimodule(a)
    top = max_degree + 1
    proj, sections, dims = {}, {}, {}
    for q in range(top + 1):
        im = Mat.identity(f_, a.dim ** (q + 1)) - _signed_rotation(a, q)
        dims[q], proj[q] = cokernel_data(im)
        sections[q] = right_inverse(proj[q])
    d = {q: proj[q - 1] @ hochschild_complex(a, reg, q).differential(q) @ sections[q] for q in range(1, top + 1)}
    return homology_dims(ChainComplex(f_, dims, d), range(max_degree + 1))


# ---------------------------------------------------------------------------
# simplicial homology of the module itself


def moore_homology(mod: CatModule, max_degree: int) -> list[int]:
    """Homology of Σ(-1)^i d_i built from the module's own face matrices.

    ``mod`` is covariant over the opposite of Δ_{≤N} with N > max_degree.
    """
    if mod.base.n_objects <= max_degree + 1:
        raise MarginViolation("need objects up to max_degree + 1")
    delta = DeltaCategory(max_degree + 1)
    dims = {n: mod.dim(n) for n in range(max_degree + 2)}
    d = {}
    for n in range(1, max_degree + 2):
        acc = Mat.zeros(mod.field, dims[n - 1], dims[n])
        for i in range(n + 1):
            acc = acc + mod.matrix(flip(delta.delta(n, i))).scale((-1) ** i)
        d[n] = acc
    return homology_dims(ChainComplex(mod.field, dims, d), range(max_degree + 1))


# ---------------------------------------------------------------------------
# comparison of the routes


def _functor_route(kind: str, a: AlgebraData, m: BimoduleData, N: int, d: int) -> list[int]:
    if kind == "hochschild":
        cat = FiberOrderedCategory("gamma", N)
        ext = FiberProductModule(m, cat)
        return tor(build_b_module(cat, a.field), ext, d, side="left")
    cat = FiberOrderedCategory("delta_s", N)
    ext = FiberProductModule(m, cat, name="L(A,A)")
    return tor(build_b_module(cat, a.field), ext, d, side="left")


def _simplicial_route(kind: str, a: AlgebraData, m: BimoduleData, N: int, d: int) -> list[int]:
    if kind == "hochschild":
        lod = LodayModule(m, N)
        return tor(make_trivial(lod.base, CONTRA, a.field), lod, d)
    cyc = cyclic_structure(a, N, validate=False)
    return tor(make_trivial(cyc.base, CONTRA, a.field), cyc, d)


def compare_homology_routes(a: AlgebraData, m: BimoduleData | None, N: int, max_degree: int,
                            kind: str = "hochschild", stabilize: bool = True) -> dict:
    """Functor Tor over Γ(as) / F(as), functor Tor over Δ^op / the cyclic maps, and the oracle.

    ``kind="cyclic"`` uses M = A.  The stabilization entry recomputes both
    functor routes at N + 1.
    """
    check_margin(N, max_degree)
    if kind not in ("hochschild", "cyclic"):
        raise ValueError(kind)
    if m is None or kind == "cyclic":
        m = algebra_as_bimodule(a)
    d = max_degree
    routes = {
        "crossed": _functor_route(kind, a, m, N, d),
        "simplicial": _simplicial_route(kind, a, m, N, d),
        "oracle": hochschild_oracle(a, m, d) if kind == "hochschild" else cyclic_oracle(a, d),
    }
    names = list(routes)
    agree = {f"{x}={y}": [u == v for u, v in zip(routes[x], routes[y])]
             for i, x in enumerate(names) for y in names[i + 1:]}
    report = {
        "kind": kind,
        "N": N,
        "degrees": [0, d],
        "routes": routes,
        "agree": agree,
        "ok": all(all(v) for v in agree.values()),
    }
    if stabilize:
        nxt = {"crossed": _functor_route(kind, a, m, N + 1, d),
               "simplicial": _simplicial_route(kind, a, m, N + 1, d)}
        report["stabilization"] = {"at_N_plus_1": nxt,
                                   "stable": all(nxt[k] == routes[k] for k in nxt)}
        report["ok"] = report["ok"] and report["stabilization"]["stable"]
    return report
