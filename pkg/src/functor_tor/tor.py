"""Tensor products, natural transformations, free resolutions and Tor over a category.

Resolutions are built for contravariant modules; a covariant module is
resolved as a contravariant module over the opposite category.  The term
``P_k`` is a sum of representables ``K[Hom(-, A_g)]``, one per generator ``g``,
and is stored only through its generators: ``z_g``, the image of ``id_{A_g}``,
lives in ``P_{k-1}(A_g)`` (or in the module itself when ``k = 0``).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .fincat import FinCategory, Morph
from .linalg import (
    CERT_PRIME,
    GF,
    QQ,
    ChainComplex,
    Field,
    FieldMismatch,
    Mat,
    SparseEchelon,
    homology_dims,
    rank,
    _apply_columns,
    sparse_cokernel,
    sparse_kernel,
    sparse_rank,
)
from .modules import (
    CO,
    CONTRA,
    BaseMismatch,
    CatModule,
    DirectSum,
    ModuleMap,
    Representable,
    as_opposite,
    hom_k_module,
)


class MarginViolation(ValueError):
    pass


def _check_pair(m: CatModule, n: CatModule):
    if m.base is not n.base:
        raise BaseMismatch(f"{m.name} lives over {m.base.name}, {n.name} over {n.base.name}")
    if m.variance != CONTRA or n.variance != CO:
        raise BaseMismatch("expected a contravariant module on the left and a covariant one on the right")
    if m.field != n.field:
        raise FieldMismatch(f"{m.field!r} vs {n.field!r}")


# ---------------------------------------------------------------------------
# tensor product over a category


@dataclass
class TensorData:
    dim: int
    projection: Mat
    offsets: dict[int, int]
    relation_rank: int

    def index(self, x: int, i: int, j: int, n_dim: int) -> int:
        return self.offsets[x] + i * n_dim + j


def _tensor_relations(m: CatModule, n: CatModule, morphs: Iterable[Morph], offsets: Mapping[int, int]):
    """Columns (sparse) of the relation map (mΦ)⊗n − m⊗(Φn)."""
    p = m.field.p
    cols = []
    for f in morphs:
        x, y = f.dom, f.cod
        nx, ny = n.dim(x), n.dim(y)
        mcols = m.columns(f)          # m(Y) -> m(X)
        ncols = n.columns(f)          # n(X) -> n(Y)
        for i in range(m.dim(y)):
            for j in range(nx):
                v: dict = {}
                for k, a in mcols[i].items():
                    key = offsets[x] + k * nx + j
                    v[key] = v.get(key, 0) + a
                for l, b in ncols[j].items():
                    key = offsets[y] + i * ny + l
                    v[key] = v.get(key, 0) - b
                if p:
                    v = {k: c % p for k, c in v.items() if c % p}
                else:
                    v = {k: c for k, c in v.items() if c}
                cols.append(v)
    return cols


def _tensor_offsets(m, n):
    offsets = {}
    tot = 0
    for x in m.base.objects:
        offsets[x] = tot
        tot += m.dim(x) * n.dim(x)
    return offsets, tot


def tensor_over_category(m: CatModule, n: CatModule, all_morphisms: bool = False) -> TensorData:
    """Cokernel of the relation map; by default only generating morphisms are imposed."""
    _check_pair(m, n)
    offsets, tot = _tensor_offsets(m, n)
    morphs = m.base.morphisms() if all_morphisms else m.base.generating_morphisms()
    d, proj = sparse_cokernel(m.field, tot, _tensor_relations(m, n, morphs, offsets))
    return TensorData(d, proj, offsets, tot - d)


def tensor_dim(m: CatModule, n: CatModule) -> int:
    """Dimension of m ⊗ n by sparse elimination (no projection)."""
    _check_pair(m, n)
    offsets, tot = _tensor_offsets(m, n)
    ech = SparseEchelon(m.field)
    for v in _tensor_relations(m, n, m.base.generating_morphisms(), offsets):
        ech.add(v)
    return tot - ech.rank


# ---------------------------------------------------------------------------
# natural transformations


def _naturality_system(m: CatModule, n: CatModule, morphs: Iterable[Morph]):
    """Sparse columns (one per unknown entry of some η_X) of the naturality equations.

    η_X is stored row-major at ``offs[X]``.  Returns ``(columns, n_equations, offs)``.
    """
    p = m.field.p
    offs = {}
    tot = 0
    for x in m.base.objects:
        offs[x] = tot
        tot += n.dim(x) * m.dim(x)
    cols: list[dict] = [dict() for _ in range(tot)]
    eq = 0

    def put(u, e, v):
        c = cols[u]
        w = c.get(e, 0) + v
        if p:
            w %= p
        if w:
            c[e] = w
        else:
            c.pop(e, None)

    for f in morphs:
        mm = m.matrix(f).tolist()
        nn = n.matrix(f).tolist()
        if m.variance == CO:
            # n(f) η_X − η_Y m(f) = 0, equations indexed by (r, c) in n(Y) x m(X)
            src, tgt = f.dom, f.cod
        else:
            # n(f) η_Y − η_X m(f) = 0, equations indexed by (r, c) in n(X) x m(Y)
            src, tgt = f.cod, f.dom
        rows_n, cols_m = n.dim(tgt), m.dim(src)
        ms_src, ms_tgt = m.dim(src), m.dim(tgt)
        for r in range(rows_n):
            for k in range(n.dim(src)):
                a = nn[r][k]
                if a:
                    for c in range(cols_m):
                        put(offs[src] + k * ms_src + c, eq + r * cols_m + c, a)
            for k in range(ms_tgt):
                for c in range(cols_m):
                    b = mm[k][c]
                    if b:
                        put(offs[tgt] + r * ms_tgt + k, eq + r * cols_m + c, -b)
        eq += rows_n * cols_m
    return cols, eq, offs


def hom_over_category(m: CatModule, n: CatModule) -> tuple[int, list[dict[int, Mat]]]:
    """Natural transformations m -> n: (dimension, basis as {object: matrix})."""
    if m.base is not n.base or m.variance != n.variance:
        raise BaseMismatch("hom needs modules of the same base and variance")
    cols, n_eq, offs = _naturality_system(m, n, m.base.generating_morphisms())
    kb = sparse_kernel(m.field, n_eq, cols)
    basis = []
    for vec in kb:
        eta = {}
        for x in m.base.objects:
            r, s_ = n.dim(x), m.dim(x)
            ent = {}
            for i in range(r):
                for j in range(s_):
                    v = vec.get(offs[x] + i * s_ + j)
                    if v:
                        ent[i, j] = v
            eta[x] = Mat.from_entries(m.field, r, s_, ent)
        basis.append(eta)
    return len(kb), basis


# ---------------------------------------------------------------------------
# the tensor/hom adjunction


def check_tensor_hom_adjunction(n: CatModule, m: CatModule, v_dim: int) -> dict:
    """Hom_K(N ⊗ M, V) ≅ Hom(N, Hom_K(M, V)) via Φ ↦ (n ↦ (m ↦ Φ[n ⊗ m])).

    The explicit map is built on the canonical bases; the report records both
    dimensions, whether every image is natural, and the rank of the map.
    """
    _check_pair(n, m)
    f_ = n.field
    t = tensor_over_category(n, m)
    hm = hom_k_module(m, v_dim)                   # contravariant
    rhs_dim, _ = hom_over_category(n, hm)
    lhs_dim = v_dim * t.dim
    # coordinates of Φ: row-major v_dim x t.dim; image lives in ⊕_X Hom(N(X), Hom(M(X), V))
    sys_cols, _, offs = _naturality_system(n, hm, n.base.generating_morphisms())
    proj = t.projection.tolist()
    images = []
    for a in range(v_dim):
        for c in range(t.dim):
            vec = {}
            for x in n.base.objects:
                nx, mx = n.dim(x), m.dim(x)
                for i in range(nx):
                    for j in range(mx):
                        v = proj[c][t.offsets[x] + i * mx + j]
                        if v:
                            # η_X has row (a, j) in Hom(M(X), V) coordinates and column i
                            vec[offs[x] + (a * mx + j) * nx + i] = v
            images.append(vec)
    natural = all(not _apply_columns(sys_cols, vec, f_.p) for vec in images)
    r = sparse_rank(f_, images)
    return {
        "lhs_dim": lhs_dim,
        "rhs_dim": rhs_dim,
        "map_rank": r,
        "images_natural": natural,
        "ok": natural and lhs_dim == rhs_dim and r == lhs_dim,
    }


check_lemma_2_2 = check_tensor_hom_adjunction


# ---------------------------------------------------------------------------
# free modules and resolutions


class FreeModule(CatModule):
    """⊕_g K[Hom(-, A_g)] (contravariant) or ⊕_g K[Hom(A_g, -)] (covariant)."""

    def __init__(self, base: FinCategory, objs: Sequence[int], variance: str, field: Field):
        super().__init__(base, variance, field)
        self.objs = list(objs)
        self.name = f"free{self.objs}"
        self._sum = DirectSum([Representable(base, a, variance, field) for a in self.objs]) if self.objs else None

    def dim(self, x):
        return self._sum.dim(x) if self._sum else 0

    def _matrix(self, f):
        if self._sum is None:
            return Mat.zeros(self.field, 0, 0)
        return self._sum.matrix(f)


def free_cover(m: CatModule) -> tuple[FreeModule, ModuleMap]:
    """Canonical cover ⊕_A K[Hom(-, A)] ⊗ m(A) with generators at every basis vector."""
    objs = []
    vecs = []
    for a in m.base.objects:
        for i in range(m.dim(a)):
            objs.append(a)
            vecs.append({i: 1})
    free = FreeModule(m.base, objs, m.variance, m.field)
    comps = {}
    for x in m.base.objects:
        cols = []
        for a, v in zip(objs, vecs):
            hs = m.base.hom(x, a) if m.variance == CONTRA else m.base.hom(a, x)
            for h in hs:
                cols.append(m.apply(h, v))
        comps[x] = Mat.from_columns(m.field, m.dim(x), cols)
    return free, ModuleMap(free, m, comps)


@dataclass
class Generator:
    obj: int
    vec: dict
    terms: list = field(default_factory=list)   # (gen index, morphism, coefficient)


class _Layout:
    """Basis of P_k(X): blocks Hom(X, A_g) in generator order."""

    def __init__(self, base: FinCategory, gens: Sequence[Generator], x: int):
        self.homs = [base.hom(x, g.obj) for g in gens]
        self.hidx = [base.hom_index(x, g.obj) for g in gens]
        self.starts = []
        tot = 0
        for h in self.homs:
            self.starts.append(tot)
            tot += len(h)
        self.dim = tot

    def decode(self, i: int) -> tuple[int, Morph]:
        g = bisect.bisect_right(self.starts, i) - 1
        return g, self.homs[g][i - self.starts[g]]


class Resolution:
    """Free resolution of a contravariant module, built degree by degree.

    ``mode="greedy"`` adds generators only where the submodule generated so far
    falls short of the kernel, then drops generators whose image is already
    generated by the others; ``mode="canonical"`` uses every kernel basis
    vector at every object.
    """

    def __init__(self, module: CatModule, mode: str = "greedy", prune_cap: int = 20000):
        if module.variance != CONTRA:
            raise ValueError("resolutions are built for contravariant modules")
        if mode not in ("greedy", "canonical"):
            raise ValueError(mode)
        self.module = module
        self.base = module.base
        self.field = module.field
        self.mode = mode
        self.prune_cap = prune_cap
        self.gens: list[list[Generator]] = []
        self.zdims: list[list[int]] = []   # zdims[k][X] = dim ker(d_k at X)
        self._layouts: dict[tuple[int, int], _Layout] = {}

    # basis bookkeeping ---------------------------------------------------------

    def layout(self, k: int, x: int) -> _Layout:
        key = (k, x)
        lay = self._layouts.get(key)
        if lay is None:
            lay = _Layout(self.base, self.gens[k], x)
            self._layouts[key] = lay
        return lay

    def term_dim(self, k: int, x: int) -> int:
        if k < 0:
            return self.module.dim(x)
        return self.layout(k, x).dim

    def term_dims(self, k: int) -> list[int]:
        return [self.term_dim(k, x) for x in self.base.objects]

    def _image(self, k: int, x: int, g: Generator, h: Morph) -> dict:
        """d_k of the basis element h ∈ Hom(X, A_g) of P_k(X)."""
        if k == 0:
            return self.module.apply(h, g.vec)
        lay = self.layout(k - 1, x)
        comp = self.base.compose
        p = self.field.p
        out: dict = {}
        for gi, hh, c in g.terms:
            i = lay.starts[gi] + lay.hidx[gi][comp(hh, h)]
            v = out.get(i, 0) + c
            if p:
                v %= p
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return out

    def _decode_terms(self, k: int, g: Generator):
        if k == 0:
            return
        lay = self.layout(k - 1, g.obj)
        g.terms = []
        for i, c in sorted(g.vec.items()):
            gi, hh = lay.decode(i)
            g.terms.append((gi, hh, c))

    def differential_columns(self, k: int, x: int) -> list[dict]:
        cols = []
        for g, hs in zip(self.gens[k], self.layout(k, x).homs):
            for h in hs:
                cols.append(self._image(k, x, g, h))
        return cols

    def differential(self, k: int, x: int) -> Mat:
        """d_k at X: P_k(X) -> P_{k-1}(X) (the augmentation when k = 0)."""
        return Mat.from_columns(self.field, self.term_dim(k - 1, x), self.differential_columns(k, x))

    def _kernel(self, k: int, x: int) -> list[dict]:
        """Basis of ker(d_{k-1} at X) (all of the module when k = 0)."""
        if k == 0:
            return [{i: 1} for i in range(self.module.dim(x))]
        return sparse_kernel(self.field, self.term_dim(k - 2, x), self.differential_columns(k - 1, x))

    # construction ----------------------------------------------------------------

    @property
    def length(self) -> int:
        return len(self.gens) - 1

    def extend(self, top: int) -> "Resolution":
        while len(self.gens) <= top:
            self._add_level()
        return self

    def _target_dims(self, k: int) -> list[int]:
        if k == 0:
            return [self.module.dim(x) for x in self.base.objects]
        return self.zdims[k - 1]

    def _add_level(self):
        k = len(self.gens)
        target = self._target_dims(k)
        self.gens.append([])
        if self.mode == "canonical":
            for x in self.base.objects:
                if target[x]:
                    for z in self._kernel(k, x):
                        self._new_gen(k, x, z)
        else:
            for x in self.base.objects:
                if target[x]:
                    self._cover_object(k, x, target[x])
            self._prune(k)
        for x in self.base.objects:
            self._layouts.pop((k, x), None)
        self.zdims.append([self.term_dim(k, x) - target[x] for x in self.base.objects])
        if any(z < 0 for z in self.zdims[-1]):
            raise AssertionError("negative kernel dimension: cover is not onto")

    def _new_gen(self, k: int, x: int, z: dict) -> Generator:
        g = Generator(x, dict(z))
        self._decode_terms(k, g)
        self.gens[k].append(g)
        return g

    def _echelon(self, exact: bool) -> SparseEchelon:
        if self.field.p or exact:
            return SparseEchelon(self.field)
        return SparseEchelon(GF(CERT_PRIME))

    def _cover_object(self, k: int, x: int, t: int, exact: bool = False):
        ech = self._echelon(exact)
        gens = self.gens[k]
        n_before = len(gens)
        for g in list(gens):
            for h in self.base.hom(x, g.obj):
                ech.add(self._image(k, x, g, h))
                if ech.rank == t:
                    return
        ends = self.base.hom(x, x)
        for z in self._kernel(k, x):
            if ech.rank == t:
                break
            if ech.contains(z):
                continue
            g = self._new_gen(k, x, z)
            for h in ends:
                ech.add(self._image(k, x, g, h))
                if ech.rank == t:
                    break
        if ech.rank < t:
            if exact:
                raise AssertionError(f"cannot cover kernel at object {x} in degree {k}")
            del gens[n_before:]
            self._cover_object(k, x, t, exact=True)

    def _prune(self, k: int):
        gens = self.gens[k]
        order = sorted(range(len(gens)), key=lambda i: (gens[i].obj, i))
        alive = [True] * len(gens)
        for i in order:
            g = gens[i]
            others = [j for j in range(len(gens)) if alive[j] and j != i]
            cost = sum(self.base.hom_size(g.obj, gens[j].obj) for j in others)
            if not others or cost > self.prune_cap:
                continue
            if self._generated_by(k, g, [gens[j] for j in others]):
                alive[i] = False
        self.gens[k] = [g for g, a in zip(gens, alive) if a]

    def _generated_by(self, k: int, g: Generator, others: Sequence[Generator]) -> bool:
        x = g.obj
        vecs = [self._image(k, x, o, h) for o in others for h in self.base.hom(x, o.obj)]
        quick = self._echelon(False)
        for v in vecs:
            quick.add(v)
        if not quick.contains(g.vec):
            return False
        if self.field.p:
            return True
        exact = SparseEchelon(QQ)
        for v in vecs:
            exact.add(v)
        return exact.contains(g.vec)

    # checks ----------------------------------------------------------------------

    def check_dd(self) -> list[str]:
        """d_{k-1}(z_g) = 0 for every generator of degree k >= 1 (hence d∘d = 0)."""
        bad = []
        p = self.field.p
        for k in range(1, len(self.gens)):
            for gi, g in enumerate(self.gens[k]):
                acc: dict = {}
                for gj, hh, c in g.terms:
                    for i, v in self._image(k - 1, g.obj, self.gens[k - 1][gj], hh).items():
                        acc[i] = acc.get(i, 0) + c * v
                if any((v % p if p else v) for v in acc.values()):
                    bad.append(f"d_{k - 1} d_{k} != 0 on generator {gi} at object {g.obj}")
        return bad

    def check_exact(self, upto: int | None = None) -> list[str]:
        """Dense rank audit of exactness at every object (small categories only)."""
        top = self.length if upto is None else upto
        bad = []
        for x in self.base.objects:
            if rank(self.differential(0, x)) != self.module.dim(x):
                bad.append(f"augmentation not onto at {x}")
            for k in range(top):
                dk = self.differential(k, x)
                dk1 = self.differential(k + 1, x)
                if not (dk @ dk1).is_zero():
                    bad.append(f"d_{k} d_{k + 1} != 0 at {x}")
                if self.term_dim(k, x) - rank(dk) != rank(dk1):
                    bad.append(f"not exact in degree {k} at object {x}")
        return bad

    def term_module(self, k: int) -> CatModule:
        return FreeModule(self.base, [g.obj for g in self.gens[k]], CONTRA, self.field)

    def augmentation(self) -> ModuleMap:
        return ModuleMap(self.term_module(0), self.module, {x: self.differential(0, x) for x in self.base.objects})

    def generator_objects(self) -> list[list[int]]:
        return [[g.obj for g in lvl] for lvl in self.gens]

    def complex(self) -> ChainComplex:
        """The resolution evaluated objectwise, as one chain complex of ⊕_X P_k(X)."""
        dims = {k: sum(self.term_dims(k)) for k in range(len(self.gens))}
        d = {}
        for k in range(1, len(self.gens)):
            ent = {}
            ro = co = 0
            for x in self.base.objects:
                for j, col in enumerate(self.differential_columns(k, x)):
                    for i, v in col.items():
                        ent[ro + i, co + j] = v
                ro += self.term_dim(k - 1, x)
                co += self.term_dim(k, x)
            d[k] = Mat.from_entries(self.field, dims[k - 1], dims[k], ent)
        return ChainComplex(self.field, dims, d)


def projective_resolution(m: CatModule, length: int, mode: str = "greedy") -> Resolution:
    """Free resolution P_0 <- ... <- P_length (a covariant module is resolved over the opposite)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    mm = m if m.variance == CONTRA else as_opposite(m)
    return Resolution(mm, mode).extend(length)


# ---------------------------------------------------------------------------
# Tor


def tensor_complex(res: Resolution, other: CatModule, top: int) -> ChainComplex:
    """P_* ⊗ other with P_k ⊗ other = ⊕_g other(A_g) by co-Yoneda."""
    f_ = res.field
    dims = {}
    offs = {}
    for k in range(top + 1):
        o = [0]
        for g in res.gens[k]:
            o.append(o[-1] + other.dim(g.obj))
        offs[k] = o
        dims[k] = o[-1]
    d = {}
    p = f_.p
    for k in range(1, top + 1):
        ent: dict = {}
        for gi, g in enumerate(res.gens[k]):
            c0 = offs[k][gi]
            for gj, hh, c in g.terms:
                r0 = offs[k - 1][gj]
                for j, col in enumerate(other.columns(hh)):
                    for i, a in col.items():
                        key = (r0 + i, c0 + j)
                        v = ent.get(key, 0) + c * a
                        ent[key] = v % p if p else v
        d[k] = Mat.from_entries(f_, dims[k - 1], dims[k], {k_: v for k_, v in ent.items() if v})
    return ChainComplex(f_, dims, d)


@dataclass
class TorResult:
    dims: list[int]
    side: str
    resolution: Resolution
    complex: ChainComplex
    generator_objects: list[list[int]]

    def to_json(self) -> dict:
        return {"tor": self.dims, "side": self.side, "generators": self.generator_objects}


def _p0_cost(res: Resolution) -> int:
    res.extend(0)
    return sum(res.term_dims(0))


def tor_full(m: CatModule, n: CatModule, max_degree: int, side: str = "auto", mode: str = "greedy") -> TorResult:
    _check_pair(m, n)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    left = lambda: (Resolution(m, mode), n)  # noqa: E731
    right = lambda: (Resolution(as_opposite(n), mode), as_opposite(m))  # noqa: E731
    if side == "auto":
        rl, ol = left()
        rr, orr = right()
        side = "left" if _p0_cost(rl) <= _p0_cost(rr) else "right"
        res, other = (rl, ol) if side == "left" else (rr, orr)
    elif side == "left":
        res, other = left()
    elif side == "right":
        res, other = right()
    else:
        raise ValueError(side)
    top = max_degree + 1
    res.extend(top)
    cx = tensor_complex(res, other, top)
    dims = homology_dims(cx, range(0, max_degree + 1))
    return TorResult(dims, side, res, cx, res.generator_objects())


def tor(m: CatModule, n: CatModule, max_degree: int, side: str = "auto", mode: str = "greedy") -> list[int]:
    """dim Tor_k(m, n) for k = 0..max_degree."""
    return tor_full(m, n, max_degree, side, mode).dims


def check_margin(N: int, max_degree: int):
    if max_degree > N - 2:
        raise MarginViolation(f"degree {max_degree} exceeds truncation margin N - 2 = {N - 2}")


def stabilization(compute, N: int, max_degree: int) -> dict:
    """Compare the first ``max_degree + 1`` values computed at N and at N + 1."""
    a = list(compute(N))[: max_degree + 1]
    b = list(compute(N + 1))[: max_degree + 1]
    return {"at_N": a, "at_N_plus_1": b, "stable": a == b}
