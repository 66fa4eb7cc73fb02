"""Pseudo-free modules over a crossed category and the checks built on them.

For ``B = C ⋈ D`` and a contravariant C-module M, the pseudo-free module is
``L(M)(X) = ⊕_A M(A) ⊗ K[Hom_D(X, A)]``.  A basis vector is a triple
``(A, g, i)``: the i-th basis vector of M(A) tensored with ``g: X -> A`` in D.
For Φ: Y -> X, factor ``g∘Φ = Ψ'∘f'`` with Ψ' in C and f' in D; then
``(m ⊗ g)·Φ = m·Ψ' ⊗ f'``.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable

from .crossed import CrossedCategory, FiberOrderedCategory
from .fincat import FinCategory, Morph
from .linalg import QQ, Field, Mat, rank, right_inverse
from .modules import (
    CO,
    CONTRA,
    BaseMismatch,
    CatModule,
    DirectSum,
    ModuleMap,
    dual,
    make_representable,
    make_trivial,
    random_twist,
    restrict,
)
from .tor import (
    TensorData,
    _tensor_relations,
    hom_over_category,
    tensor_dim,
    tensor_over_category,
    tor_full,
)


# ---------------------------------------------------------------------------
# b and b̄: cyclic orders as a cokernel


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


# the two maps [1] -> [0]: fiber (0, 1) and fiber (1, 0)
FACE_0 = Morph(1, 0, ((0, 1),))
FACE_1 = Morph(1, 0, ((1, 0),))


class CyclicOrderModule(CatModule):
    """Cokernel of post-composition with d_0 − d_1 on K[Hom(-, [0])].

    Since the relations identify two basis vectors at a time, the cokernel at
    X has one basis vector per connected component of the graph on Hom(X, [0])
    with edges d_0∘Φ ~ d_1∘Φ (Φ in Hom(X, [1])).  Components are ordered by
    their smallest member.
    """

    def __init__(self, cat: FinCategory, field: Field, name: str = "b"):
        super().__init__(cat, CONTRA, field)
        self.name = name
        self._classes: dict[int, tuple[list[int], int]] = {}

    def classes(self, x: int) -> tuple[list[int], int]:
        """(class index of each element of Hom(X, [0]), number of classes)."""
        got = self._classes.get(x)
        if got is None:
            c = self.base
            idx = c.hom_index(x, 0)
            uf = _UnionFind(len(idx))
            if c.n_objects > 1:
                for phi in c.hom(x, 1):
                    uf.union(idx[c.compose(FACE_0, phi)], idx[c.compose(FACE_1, phi)])
            roots: dict[int, int] = {}
            label = []
            for i in range(len(idx)):
                r = uf.find(i)
                if r not in roots:
                    roots[r] = len(roots)
                label.append(roots[r])
            got = (label, len(roots))
            self._classes[x] = got
        return got

    def dim(self, x):
        return self.classes(x)[1]

    def representative(self, x: int, k: int) -> Morph:
        label, _ = self.classes(x)
        return self.base.hom(x, 0)[label.index(k)]

    def class_of(self, phi: Morph) -> int:
        return self.classes(phi.dom)[0][self.base.index(phi)]

    def _matrix(self, f):
        # f: X -> Y acts b(Y) -> b(X) by [Φ] ↦ [Φ∘f]
        x, y = f.dom, f.cod
        ent = {}
        for k in range(self.dim(y)):
            ent[self.class_of(self.base.compose(self.representative(y, k), f)), k] = 1
        return Mat.from_entries(self.field, self.dim(x), self.dim(y), ent)


def build_b_module(x: CrossedCategory | FinCategory, field: Field | None = None) -> CyclicOrderModule:
    """b over F(as) (all fiber-ordered maps) or b̄ over Γ(as) (pointed maps)."""
    cat = x.base if isinstance(x, CrossedCategory) else x
    if not isinstance(cat, FiberOrderedCategory) or cat.kind not in ("delta_s", "gamma"):
        raise ValueError("b is defined over F(as) or Γ(as) truncations")
    return CyclicOrderModule(cat, field or QQ, name="b" if cat.kind == "delta_s" else "b-bar")


def cokernel_dims_dense(cat: FinCategory, field: Field, upto: int) -> list[int]:
    """dim b([n]) from the rank of the relation matrix (no union-find)."""
    out = []
    for n in range(upto + 1):
        idx = cat.hom_index(n, 0)
        cols = []
        for phi in cat.hom(n, 1) if cat.n_objects > 1 else []:
            a, b = idx[cat.compose(FACE_0, phi)], idx[cat.compose(FACE_1, phi)]
            cols.append({a: 1, b: -1} if a != b else {})
        rel = Mat.from_columns(field, len(idx), cols)
        out.append(len(idx) - rank(rel))
    return out


# ---------------------------------------------------------------------------
# the pseudo-free module


class PseudoFreeModule(CatModule):
    def __init__(self, x: CrossedCategory, m: CatModule):
        if m.variance != CONTRA:
            raise BaseMismatch("the pseudo-free construction takes a contravariant module")
        if m.base.n_objects != x.base.n_objects or not all(
                x.c.contains(f) for f in m.base.generating_morphisms()):
            raise BaseMismatch(f"{m.name} does not live over the C-part of {x.name}")
        super().__init__(x.base, CONTRA, m.field)
        self.crossed = x
        self.inner = m
        self.name = f"L({m.name})"
        self._layouts: dict[int, tuple[list, dict]] = {}

    def layout(self, x: int) -> tuple[list[tuple[int, Morph, int]], dict]:
        got = self._layouts.get(x)
        if got is None:
            basis = []
            for a in self.base.objects:
                for g in self.crossed.d.hom(x, a):
                    for i in range(self.inner.dim(a)):
                        basis.append((a, g, i))
            got = (basis, {b: k for k, b in enumerate(basis)})
            self._layouts[x] = got
        return got

    def dim(self, x):
        return len(self.layout(x)[0])

    def _matrix(self, f):
        # f: Y -> X acts L(X) -> L(Y)
        y, x = f.dom, f.cod
        src, _ = self.layout(x)
        _, tgt = self.layout(y)
        comp = self.base.compose
        ent = {}
        for col, (a, g, i) in enumerate(src):
            psi, f2 = self.crossed.factor[comp(g, f)]
            for r, c in self.inner.apply(psi, {i: 1}).items():
                key = (tgt[(psi.dom, f2, r)], col)
                ent[key] = ent.get(key, 0) + c
        return Mat.from_entries(self.field, self.dim(y), self.dim(x), ent)


def pseudo_free(x: CrossedCategory, m: CatModule) -> PseudoFreeModule:
    return PseudoFreeModule(x, m)


def pseudo_adjunction_map(x: CrossedCategory, m: CatModule, n: CatModule) -> dict:
    """The map L(m) ⊗_B n -> m ⊗_C n|_C on tensor bases, with its well-definedness data.

    The class of (m_i ⊗ g) ⊗ v at X is sent to the class of m_i ⊗ n(g)v at A.
    """
    lm = pseudo_free(x, m)
    nr = restrict(n, x.c)
    lt = tensor_over_category(lm, n)
    rt = tensor_over_category(m, nr)
    f_ = m.field
    ent = {}
    for X in x.base.objects:
        basis, _ = lm.layout(X)
        nx = n.dim(X)
        for k, (a, g, i) in enumerate(basis):
            na = n.dim(a)
            for j in range(nx):
                col = lt.offsets[X] + k * nx + j
                for l, c in n.apply(g, {j: 1}).items():
                    row = rt.offsets[a] + i * na + l
                    ent[row, col] = ent.get((row, col), 0) + c
    tot_l = sum(lm.dim(X) * n.dim(X) for X in x.base.objects)
    tot_r = sum(m.dim(X) * nr.dim(X) for X in x.base.objects)
    raw = Mat.from_entries(f_, tot_r, tot_l, ent)
    return {"left": lm, "right_module": nr, "lt": lt, "rt": rt, "raw": raw}


def _relations_matrix(m: CatModule, n: CatModule, t: TensorData) -> Mat:
    tot = sum(m.dim(X) * n.dim(X) for X in m.base.objects)
    return Mat.from_columns(m.field, tot, _tensor_relations(m, n, m.base.generating_morphisms(), t.offsets))


def pseudo_adjunction_iso(x: CrossedCategory, m: CatModule, n: CatModule,
                          maps: Iterable[tuple[ModuleMap | None, ModuleMap | None]] = ()) -> tuple[Mat, dict]:
    """Explicit iso L(m) ⊗_B n -> m ⊗_C n|_C and its checks.

    ``maps`` supplies pairs (α: m -> m', β: n -> n') for the naturality
    squares; either entry may be None for the identity.
    """
    iso, report, data = _iso_with_data(x, m, n)
    report["naturality"] = [_naturality_square(x, m, n, iso, data, alpha, beta) for alpha, beta in maps]
    report["ok"] = report["ok"] and all(s["ok"] for s in report["naturality"])
    return iso, report


def _iso_with_data(x: CrossedCategory, m: CatModule, n: CatModule) -> tuple[Mat, dict, dict]:
    data = pseudo_adjunction_map(x, m, n)
    lt, rt, raw = data["lt"], data["rt"], data["raw"]
    rel = _relations_matrix(data["left"], n, lt)
    well_defined = (rt.projection @ raw @ rel).is_zero()
    iso = rt.projection @ raw @ right_inverse(lt.projection)
    invertible = iso.rows == iso.cols and rank(iso) == iso.rows
    report = {
        "left_dim": lt.dim,
        "right_dim": rt.dim,
        "well_defined": well_defined,
        "invertible": invertible,
        "naturality": [],
        "ok": well_defined and invertible,
    }
    return iso, report, data


def _induced_on_tensor(src_m: CatModule, src_n: CatModule, src_t: TensorData,
                       tgt_m: CatModule, tgt_n: CatModule, tgt_t: TensorData,
                       alpha: ModuleMap | None, beta: ModuleMap | None) -> Mat:
    """α ⊗ β on ⊗-quotients, as (projection) · (α_X ⊗ β_X) · (section)."""
    f_ = src_m.field
    ent = {}
    for X in src_m.base.objects:
        a = alpha.component(X) if alpha is not None else Mat.identity(f_, src_m.dim(X))
        b = beta.component(X) if beta is not None else Mat.identity(f_, src_n.dim(X))
        al, bl = a.tolist(), b.tolist()
        sm, sn, tn = src_m.dim(X), src_n.dim(X), tgt_n.dim(X)
        for i in range(sm):
            for j in range(sn):
                col = src_t.offsets[X] + i * sn + j
                for r in range(tgt_m.dim(X)):
                    if not al[r][i]:
                        continue
                    for s in range(tn):
                        if bl[s][j]:
                            row = tgt_t.offsets[X] + r * tn + s
                            ent[row, col] = ent.get((row, col), 0) + al[r][i] * bl[s][j]
    rows = sum(tgt_m.dim(X) * tgt_n.dim(X) for X in src_m.base.objects)
    cols = sum(src_m.dim(X) * src_n.dim(X) for X in src_m.base.objects)
    raw = Mat.from_entries(f_, rows, cols, ent)
    return tgt_t.projection @ raw @ right_inverse(src_t.projection)


def pseudo_free_map(x: CrossedCategory, alpha: ModuleMap) -> ModuleMap:
    """L(α): (m_i ⊗ g) ↦ α_A(m_i) ⊗ g."""
    ls, lt = pseudo_free(x, alpha.source), pseudo_free(x, alpha.target)
    comps = {}
    for X in x.base.objects:
        sb, _ = ls.layout(X)
        _, tidx = lt.layout(X)
        ent = {}
        for col, (a, g, i) in enumerate(sb):
            for r, c in alpha.component(a).column(i).items():
                ent[tidx[(a, g, r)], col] = c
        comps[X] = Mat.from_entries(alpha.source.field, lt.dim(X), ls.dim(X), ent)
    return ModuleMap(ls, lt, comps)


def _naturality_square(x, m, n, iso, data, alpha, beta) -> dict:
    m2 = alpha.target if alpha is not None else m
    n2 = beta.target if beta is not None else n
    iso2, rep2, data2 = _iso_with_data(x, m2, n2)
    lm, lm2 = data["left"], data2["left"]
    l_alpha = pseudo_free_map(x, alpha) if alpha is not None else None
    if l_alpha is not None:
        l_alpha = ModuleMap(lm, lm2, l_alpha.components)
    left = _induced_on_tensor(lm, n, data["lt"], lm2, n2, data2["lt"], l_alpha, beta)
    nr, nr2 = data["right_module"], data2["right_module"]
    beta_r = ModuleMap(nr, nr2, beta.components) if beta is not None else None
    right = _induced_on_tensor(m, nr, data["rt"], m2, nr2, data2["rt"], alpha, beta_r)
    ok = (iso2 @ left) == (right @ iso)
    return {"ok": ok and rep2["ok"], "alpha": alpha is not None, "beta": beta is not None}


# ---------------------------------------------------------------------------
# base change of Tor


def base_change_check(x: CrossedCategory, a: CatModule, b: CatModule, max_degree: int,
                      truncated: bool = False) -> dict:
    """Tor^B(L(a), b) against Tor^C(a, b|_C), computed independently."""
    left = tor_full(pseudo_free(x, a), b, max_degree)
    right = tor_full(a, restrict(b, x.c), max_degree)
    agree = [u == v for u, v in zip(left.dims, right.dims)]
    report = {
        "category": x.name,
        "left": left.dims,
        "right": right.dims,
        "agree": agree,
        "ok": all(agree),
        "resolutions_dd": not left.resolution.check_dd() and not right.resolution.check_dd(),
        "tor0_is_tensor": [left.dims[0] == tensor_dim(pseudo_free(x, a), b),
                           right.dims[0] == tensor_dim(a, restrict(b, x.c))],
    }
    if not report["ok"] and truncated:
        report["note"] = "mismatch on a truncated category"
    return report


# ---------------------------------------------------------------------------
# b ≅ L_Σ(K)


def _basepoint_map(n: int) -> Morph:
    return Morph(n, 0, (tuple(range(n + 1)),))


def cyclic_order_iso(x: CrossedCategory, b: CyclicOrderModule, field: Field) -> dict:
    """α(1 ⊗ g) = [u∘g] from L_D(K) to b, with u the monotone map [n] -> [0].

    Checks that every component is a bijection of bases (hence invertible)
    and that α intertwines the actions of every morphism of the base.
    """
    k = make_trivial(x.c, CONTRA, field)
    lk = pseudo_free(x, k)
    comps = {}
    bad = []
    dims = []
    for X in x.base.objects:
        basis, _ = lk.layout(X)
        targets = [b.class_of(x.base.compose(_basepoint_map(a), g)) for (a, g, _i) in basis]
        dims.append([len(basis), b.dim(X)])
        if sorted(targets) != list(range(b.dim(X))):
            bad.append(f"component at {X} is not a bijection")
        comps[X] = Mat.from_entries(field, b.dim(X), len(basis), {(t, c): 1 for c, t in enumerate(targets)})
    alpha = ModuleMap(lk, b, comps)
    if not bad:
        bad += alpha.naturality_report()
    return {"dims": dims, "violations": bad, "ok": not bad, "map": alpha}


def check_cyclic_orders_are_pseudo_free(x: CrossedCategory, field: Field | None = None) -> dict:
    field = field or QQ
    b = build_b_module(x, field)
    rep = cyclic_order_iso(x, b, field)
    rep.pop("map")
    rep["b_dims"] = b.dims
    return rep


# ---------------------------------------------------------------------------
# Hom adjunction through duals


def overline_right(r: Callable[[CatModule], CatModule]) -> Callable[[CatModule], CatModule]:
    """R̄ = ∗ ∘ R ∘ ∗."""
    return lambda mod: dual(r(dual(mod)))


def adjunction_check(x: CrossedCategory, n: CatModule, m: CatModule) -> dict:
    """Hom_B(L(N), M) against Hom_C(N, R̄(M)) with R the restriction to C.

    The intermediate tensor dimensions of the chain
    (L(N) ⊗_B M*)* ≅ (N ⊗_C R(M*))* are logged too.
    """
    ln = pseudo_free(x, n)
    rbar = overline_right(lambda mod: restrict(mod, x.c))(m)
    steps = {
        "hom_B(L(N), M)": hom_over_category(ln, m)[0],
        "(L(N) ⊗_B M*)*": tensor_dim(ln, dual(m)),
        "(N ⊗_C R(M*))*": tensor_dim(n, restrict(dual(m), x.c)),
        "hom_C(N, R̄(M))": hom_over_category(n, rbar)[0],
    }
    vals = list(steps.values())
    return {"steps": steps, "ok": all(v == vals[0] for v in vals)}


# ---------------------------------------------------------------------------
# seeded families of modules and maps


def random_module(c: FinCategory, variance: str, field: Field, rng: random.Random, max_parts: int = 2,
                  max_object: int = 1) -> CatModule:
    """A random sum of trivial and representable modules, twisted by random bases.

    Representables sit at objects ``<= max_object`` so that sizes stay small.
    """
    parts = []
    top = min(max_object, c.n_objects - 1)
    for _ in range(rng.randint(1, max_parts)):
        if rng.random() < 0.35:
            parts.append(make_trivial(c, variance, field))
        else:
            parts.append(make_representable(c, rng.randint(0, top), variance, field))
    mod = parts[0] if len(parts) == 1 else DirectSum(parts)
    return random_twist(mod, rng)


def random_module_map(src: CatModule, tgt: CatModule, rng: random.Random) -> ModuleMap:
    """A random combination of a basis of natural transformations src -> tgt."""
    dim, basis = hom_over_category(src, tgt)
    f_ = src.field
    comps = {X: Mat.zeros(f_, tgt.dim(X), src.dim(X)) for X in src.base.objects}
    for eta in basis:
        c = rng.randint(-2, 2)
        if c:
            for X in comps:
                comps[X] = comps[X] + eta[X].scale(c)
    return ModuleMap(src, tgt, comps)


def pseudo_adjunction_family(x: CrossedCategory, pairs: int, seed: int, field: Field = QQ,
                             max_parts: int = 2) -> dict:
    """The explicit iso on ``pairs`` seeded (m, n), each with three naturality squares.

    For every pair, random maps α: m -> m' and β: n -> n' are drawn from the
    spaces of natural transformations; the squares tested are for (α, id),
    (id, β) and (α, β).
    """
    rng = random.Random(seed)
    results = []
    for k in range(pairs):
        m = random_module(x.c, CONTRA, field, rng, max_parts)
        n = random_module(x.base, CO, field, rng, max_parts)
        m2 = random_module(x.c, CONTRA, field, rng, max_parts)
        n2 = random_module(x.base, CO, field, rng, max_parts)
        alpha = random_module_map(m, m2, rng)
        beta = random_module_map(n, n2, rng)
        natural = not alpha.naturality_report() and not beta.naturality_report()
        _, rep = pseudo_adjunction_iso(x, m, n, [(alpha, None), (None, beta), (alpha, beta)])
        results.append({
            "pair": k,
            "m_dims": m.dims,
            "n_dims": n.dims,
            "left_dim": rep["left_dim"],
            "right_dim": rep["right_dim"],
            "well_defined": rep["well_defined"],
            "invertible": rep["invertible"],
            "squares": [sq["ok"] for sq in rep["naturality"]],
            "maps_natural": natural,
            "ok": rep["ok"] and natural,
        })
    return {"category": x.name, "pairs": pairs, "seed": seed, "field": repr(field),
            "results": results, "ok": all(r["ok"] for r in results)}
