"""Crossed categories B = C ⋈ D and the fiber-ordered instances.

A fiber-ordered map ``[n] -> [m]`` is stored as a tuple of ``m + 1`` tuples:
entry ``j`` lists the preimage of ``j`` in its chosen order.  Composition
concatenates blocks: the fiber of ``g∘f`` over ``z`` is the concatenation of
the ``f``-fibers over the points of ``g``'s fiber of ``z``, in ``g``'s order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .fincat import (
    FinCategory,
    Morph,
    NotComposable,
    build_group_category,
    category_from_json,
    category_to_json,
    permutation_group_table,
    subcategory,
)

Fibers = tuple[tuple[int, ...], ...]


class NotCrossed(ValueError):
    def __init__(self, morph: Morph, count: int):
        super().__init__(f"{morph} has {count} factorizations (need exactly 1)")
        self.morph = morph
        self.count = count


# ---------------------------------------------------------------------------
# fiber-ordered maps


def compose_fiber_ordered(g: Fibers, f: Fibers) -> Fibers:
    return tuple(tuple(itertools.chain.from_iterable(f[y] for y in gz)) for gz in g)


def fiber_identity(n: int) -> Fibers:
    return tuple((i,) for i in range(n + 1))


def fiber_source_size(p: Fibers) -> int:
    return sum(len(b) for b in p)


def underlying(p: Fibers) -> tuple[int, ...]:
    """Image vector of the underlying set map."""
    out = [0] * fiber_source_size(p)
    for j, b in enumerate(p):
        for i in b:
            out[i] = j
    return tuple(out)


def concatenation(p: Fibers) -> tuple[int, ...]:
    return tuple(itertools.chain.from_iterable(p))


def split(seq: Sequence[int], sizes: Sequence[int]) -> Fibers:
    out = []
    pos = 0
    for s in sizes:
        out.append(tuple(seq[pos:pos + s]))
        pos += s
    return tuple(out)


@dataclass(frozen=True)
class FiberOrderedMap:
    """Convenience view of a payload: underlying map plus fiber orders."""

    fibers: Fibers

    @property
    def source(self) -> int:
        return fiber_source_size(self.fibers) - 1

    @property
    def target(self) -> int:
        return len(self.fibers) - 1

    @property
    def underlying(self) -> tuple[int, ...]:
        return underlying(self.fibers)

    def __post_init__(self):
        flat = sorted(concatenation(self.fibers))
        if flat != list(range(len(flat))):
            raise ValueError("fibers must partition [n]")

    def morph(self) -> Morph:
        return Morph(self.source, self.target, self.fibers)


def is_monotone(p: Fibers) -> bool:
    return concatenation(p) == tuple(range(fiber_source_size(p)))


def is_bijection(p: Fibers) -> bool:
    return all(len(b) == 1 for b in p)


def is_cyclic(p: Fibers) -> bool:
    c = concatenation(p)
    if not c:
        return False
    n1 = len(c)
    r = c[0]
    return all(c[i] == (r + i) % n1 for i in range(n1))


def is_pointed(p: Fibers) -> bool:
    return 0 in p[0]


def _compositions(total: int, parts: int):
    """Sizes of ``parts`` possibly empty consecutive blocks summing to ``total``."""
    for cuts in itertools.combinations_with_replacement(range(total + 1), parts - 1):
        prev = 0
        sizes = []
        for c in cuts:
            sizes.append(c - prev)
            prev = c
        sizes.append(total - prev)
        yield sizes


_KINDS = {
    # name: (description, predicate)
    "delta_s": "all fiber-ordered maps (= F(as))",
    "delta": "monotone maps, increasing fibers",
    "sym_plus": "bijections of [n]",
    "sym": "bijections of [n] fixing 0",
    "delta_c": "cyclic maps (concatenated fibers form a rotation)",
    "cyclic": "rotations of [n]",
    "gamma": "maps sending 0 into the fiber over 0",
    "delta_op": "pointed cyclic maps (image of the opposite simplicial category)",
}

_PRED: dict[str, Callable[[Fibers], bool]] = {
    "delta_s": lambda p: True,
    "delta": is_monotone,
    "sym_plus": is_bijection,
    "sym": lambda p: is_bijection(p) and p[0] == (0,),
    "delta_c": is_cyclic,
    "cyclic": lambda p: is_bijection(p) and is_cyclic(p),
    "gamma": is_pointed,
    "delta_op": lambda p: is_pointed(p) and is_cyclic(p),
}


class FiberOrderedCategory(FinCategory):
    """A truncation of ΔS or one of its wide subcategories."""

    def __init__(self, kind: str, N: int):
        super().__init__()
        if kind not in _KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        if N < 0:
            raise ValueError("N must be >= 0")
        self.kind = kind
        self.N = N
        self.n_objects = N + 1
        self.name = f"{kind}<={N}"
        self.pred = _PRED[kind]

    def _orders(self, n: int):
        k = self.kind
        ident = tuple(range(n + 1))
        if k == "delta":
            return [ident]
        if k in ("delta_c", "cyclic", "delta_op"):
            return [ident[r:] + ident[:r] for r in range(n + 1)]
        if k == "sym":
            return [(0,) + q for q in itertools.permutations(range(1, n + 1))]
        return itertools.permutations(ident)

    def _payloads(self, x, y):
        bij = self.kind in ("sym", "sym_plus", "cyclic")
        if bij and x != y:
            return []
        size_list = [[1] * (y + 1)] if bij else list(_compositions(x + 1, y + 1))
        pred = self.pred
        out = []
        for order in self._orders(x):
            for sizes in size_list:
                p = split(order, sizes)
                if pred(p):
                    out.append(p)
        return out

    def contains(self, f: Morph) -> bool:
        p = f.payload
        if not isinstance(p, tuple) or not all(isinstance(b, tuple) for b in p):
            return False
        if len(p) != f.cod + 1 or fiber_source_size(p) != f.dom + 1:
            return False
        if not (0 <= f.dom <= self.N and 0 <= f.cod <= self.N):
            return False
        return self.pred(p)

    def _compose(self, g, f, x, y, z):
        return compose_fiber_ordered(g, f)

    def _identity(self, x):
        return fiber_identity(x)

    def _generators(self):
        k = self.kind
        N = self.N
        mono = [s for n in range(N) for i in range(n + 1) for s in (sigma(n, i), delta(n + 1, i))]
        mono += [delta(n + 1, n + 1) for n in range(N)]
        if k == "delta":
            return mono
        if k == "sym_plus":
            return [transposition(n, i) for n in range(N + 1) for i in range(n)]
        if k == "sym":
            return [transposition(n, i) for n in range(N + 1) for i in range(1, n)]
        if k == "cyclic":
            return [cyclic_operator(n) for n in range(1, N + 1)]
        if k == "delta_s":
            return mono + [transposition(n, i) for n in range(N + 1) for i in range(n)]
        if k == "delta_c":
            return mono + [cyclic_operator(n) for n in range(1, N + 1)]
        simp = [simplicial_face(n, i) for n in range(1, N + 1) for i in range(n + 1)]
        simp += [simplicial_degeneracy(n, i) for n in range(N) for i in range(n + 1)]
        if k == "delta_op":
            return simp
        if k == "gamma":
            return simp + [transposition(n, i) for n in range(N + 1) for i in range(1, n)]
        raise AssertionError(k)


# named morphisms of ΔS ----------------------------------------------------


def sigma(n: int, i: int) -> Morph:
    """Monotone [n+1] -> [n] merging i and i+1."""
    fib = [(j,) if j < i else (j + 1,) for j in range(n + 1)]
    fib[i] = (i, i + 1)
    return Morph(n + 1, n, tuple(fib))


def delta(n: int, i: int) -> Morph:
    """Monotone [n-1] -> [n] whose image omits i."""
    fib = []
    for j in range(n + 1):
        if j < i:
            fib.append((j,))
        elif j == i:
            fib.append(())
        else:
            fib.append((j - 1,))
    return Morph(n - 1, n, tuple(fib))


def transposition(n: int, i: int) -> Morph:
    """The bijection of [n] swapping i and i+1."""
    fib = [(j,) for j in range(n + 1)]
    fib[i], fib[i + 1] = fib[i + 1], fib[i]
    return Morph(n, n, tuple(fib))


def cyclic_operator(n: int) -> Morph:
    """The rotation j -> j+1 mod n+1 (concatenated fibers read (n, 0, ..., n-1))."""
    return Morph(n, n, tuple(((j - 1) % (n + 1),) for j in range(n + 1)))


def bijection(perm: Sequence[int]) -> Morph:
    """Fiber-ordered form of the one-line permutation ``perm`` (i -> perm[i])."""
    n = len(perm) - 1
    fib = [None] * (n + 1)
    for i, j in enumerate(perm):
        fib[j] = (i,)
    return Morph(n, n, tuple(fib))


def one_line(f: Morph) -> tuple[int, ...]:
    return underlying(f.payload)


def from_monotone(image: Sequence[int], m: int) -> Morph:
    """Monotone map [len-1] -> [m] given by its image vector."""
    fib = [[] for _ in range(m + 1)]
    for i, j in enumerate(image):
        fib[j].append(i)
    return Morph(len(image) - 1, m, tuple(tuple(b) for b in fib))


def from_opposite_monotone(theta: Sequence[int], n: int) -> Morph:
    """The fiber-ordered map [n] -> [m] representing monotone θ: [m] -> [n] reversed.

    For j >= 1 the fiber of j is the interval (θ(j-1), θ(j)]; the fiber of 0
    wraps around: the elements above θ(m) followed by 0..θ(0).
    """
    m = len(theta) - 1
    fib = [tuple(range(theta[m] + 1, n + 1)) + tuple(range(theta[0] + 1))]
    for j in range(1, m + 1):
        fib.append(tuple(range(theta[j - 1] + 1, theta[j] + 1)))
    return Morph(n, m, tuple(fib))


def simplicial_face(n: int, i: int) -> Morph:
    """Image of the face d_i: [n] -> [n-1] of the opposite simplicial category."""
    if i < n:
        return sigma(n - 1, i)
    return compose_morph(sigma(n - 1, 0), cyclic_operator(n))


def simplicial_degeneracy(n: int, i: int) -> Morph:
    """Image of the degeneracy s_i: [n] -> [n+1]; an empty fiber at i+1."""
    return delta(n + 1, i + 1)


def compose_morph(g: Morph, f: Morph) -> Morph:
    if f.cod != g.dom:
        raise NotComposable(f"cannot compose {g} after {f}")
    return Morph(f.dom, g.cod, compose_fiber_ordered(g.payload, f.payload))


def cyclic_order_key(p: Fibers) -> tuple[int, ...]:
    """Canonical rotation of the single fiber of a map to [0] (starts at 0)."""
    (c,) = p
    k = c.index(0)
    return c[k:] + c[:k]


# ---------------------------------------------------------------------------
# the cyclic category inside ΔS


@dataclass(frozen=True)
class CyclicGenerator:
    kind: str  # "d", "s" or "t"
    n: int     # source object
    i: int = 0

    @property
    def target(self) -> int:
        return {"d": self.n - 1, "s": self.n + 1, "t": self.n}[self.kind]


class CyclicEmbedding:
    """Images in ΔS of the generators of the opposite cyclic category."""

    def __init__(self, N: int):
        self.N = N

    def __call__(self, g: CyclicGenerator) -> Morph:
        if g.kind == "d":
            return simplicial_face(g.n, g.i)
        if g.kind == "s":
            return simplicial_degeneracy(g.n, g.i)
        if g.kind == "t":
            return cyclic_operator(g.n)
        raise ValueError(g.kind)

    def generators(self) -> list[CyclicGenerator]:
        gens = []
        for n in range(self.N + 1):
            if n >= 1:
                gens += [CyclicGenerator("d", n, i) for i in range(n + 1)]
            if n + 1 <= self.N:
                gens += [CyclicGenerator("s", n, i) for i in range(n + 1)]
            gens.append(CyclicGenerator("t", n))
        return gens

    def word(self, *gens: CyclicGenerator) -> Morph:
        """Image of the composite ``gens[0] ∘ gens[1] ∘ ...``."""
        out = self(gens[-1])
        for g in reversed(gens[:-1]):
            out = compose_morph(self(g), out)
        return out

    def relations(self) -> list[tuple[str, tuple, tuple]]:
        """The cyclic-object relations up to level N, as pairs of words."""
        d = lambda n, i: CyclicGenerator("d", n, i)  # noqa: E731
        s = lambda n, i: CyclicGenerator("s", n, i)  # noqa: E731
        t = lambda n: CyclicGenerator("t", n)  # noqa: E731
        N = self.N
        rels = []
        for n in range(2, N + 1):
            for j in range(n + 1):
                for i in range(j):
                    rels.append((f"d{i}d{j}@{n}", (d(n - 1, i), d(n, j)), (d(n - 1, j - 1), d(n, i))))
        for n in range(N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    rels.append((f"s{i}s{j}@{n}", (s(n + 1, i), s(n, j)), (s(n + 1, j + 1), s(n, i))))
        for n in range(N):
            # d_i s_j on [n] -> [n+1] -> [n]
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = (d(n + 1, i), s(n, j))
                    if i < j:
                        rhs = (s(n - 1, j - 1), d(n, i))
                    elif i in (j, j + 1):
                        rhs = None
                    else:
                        rhs = (s(n - 1, j), d(n, i - 1))
                    rels.append((f"d{i}s{j}@{n}", lhs, rhs))
        for n in range(N + 1):
            rels.append((f"t^{n + 1}@{n}", tuple(t(n) for _ in range(n + 1)), None))
        for n in range(1, N + 1):
            for i in range(1, n + 1):
                rels.append((f"d{i}t@{n}", (d(n, i), t(n)), (t(n - 1), d(n, i - 1))))
            rels.append((f"d0t@{n}", (d(n, 0), t(n)), (d(n, n),)))
        for n in range(N):
            for i in range(1, n + 1):
                rels.append((f"s{i}t@{n}", (s(n, i), t(n)), (t(n + 1), s(n, i - 1))))
            rels.append((f"s0t@{n}", (s(n, 0), t(n)), (t(n + 1), t(n + 1), s(n, n))))
        return rels

    def check(self) -> list[str]:
        bad = []
        for name, lhs, rhs in self.relations():
            if rhs is None:
                ok = self.word(*lhs).payload == fiber_identity(lhs[-1].n)
            else:
                ok = self.word(*lhs) == self.word(*rhs)
            if not ok:
                bad.append(name)
        return bad


def delta_c_op_embedding(N: int) -> CyclicEmbedding:
    return CyclicEmbedding(N)


# ---------------------------------------------------------------------------
# crossed categories


@dataclass
class CrossedCategory:
    """``base = c ⋈ d`` with exhaustive factorization and action tables.

    ``factor[Φ] = (Ψ, f)`` with Φ = Ψ∘f; ``act[(f, Ψ)] = (f_*(Ψ), Ψ^*(f))``.
    """

    base: FinCategory
    c: FinCategory
    d: FinCategory
    factor: dict[Morph, tuple[Morph, Morph]]
    act: dict[tuple[Morph, Morph], tuple[Morph, Morph]] = field(default_factory=dict)
    name: str = "crossed"

    def __repr__(self):
        return f"<crossed {self.name}: {len(self.factor)} morphisms>"


def build_crossed(b: FinCategory, c_members, d_members, name: str | None = None) -> CrossedCategory:
    """Exhaustive factorization audit; raises NotCrossed unless every Φ = Ψ∘f uniquely."""
    c = subcategory(b, c_members, "C")
    d = subcategory(b, d_members, "D")
    for x in b.objects:
        if not (c.contains(b.identity(x)) and d.contains(b.identity(x))):
            raise NotCrossed(b.identity(x), 0)
    hits: dict[Morph, list[tuple[Morph, Morph]]] = {}
    for x in b.objects:
        for y in b.objects:
            ds = d.hom(x, y)
            if not ds:
                continue
            for z in b.objects:
                for psi in c.hom(y, z):
                    for f in ds:
                        hits.setdefault(b.compose(psi, f), []).append((psi, f))
    factor = {}
    for phi in b.morphisms():
        h = hits.get(phi, [])
        if len(h) != 1:
            raise NotCrossed(phi, len(h))
        factor[phi] = h[0]
    if len(hits) != len(factor):
        stray = next(k for k in hits if k not in factor)
        raise NotCrossed(stray, len(hits[stray]))
    x = CrossedCategory(b, c, d, factor, name=name or b.name)
    for y in b.objects:
        for z in b.objects:
            for f in d.hom(y, z):
                for w in b.objects:
                    for psi in c.hom(w, y):
                        x.act[(f, psi)] = factor[b.compose(f, psi)]
    return x


def factorize(x: CrossedCategory, phi: Morph) -> tuple[Morph, Morph]:
    return x.factor[phi]


def act_lower(x: CrossedCategory, f: Morph, psi: Morph) -> Morph:
    """f_*(Ψ)."""
    if psi.cod != f.dom:
        raise NotComposable(f"{f} after {psi}")
    return x.act[(f, psi)][0]


def act_upper(x: CrossedCategory, psi: Morph, f: Morph) -> Morph:
    """Ψ^*(f)."""
    if psi.cod != f.dom:
        raise NotComposable(f"{f} after {psi}")
    return x.act[(f, psi)][1]


# ---------------------------------------------------------------------------
# law checker (vectorized over integer-indexed tables)


class _Indexed:
    def __init__(self, cat: FinCategory):
        self.cat = cat
        self.morphs = list(cat.morphisms())
        self.idx = {f: i for i, f in enumerate(self.morphs)}
        self.dom = np.array([f.dom for f in self.morphs], dtype=np.int64)
        self.cod = np.array([f.cod for f in self.morphs], dtype=np.int64)
        n = len(self.morphs)
        self.ident = np.array([self.idx[cat.identity(o)] for o in cat.objects], dtype=np.int64)
        self.by_cod = {o: np.flatnonzero(self.cod == o) for o in cat.objects}
        self.by_dom = {o: np.flatnonzero(self.dom == o) for o in cat.objects}
        self.comp = np.full((n, n), -1, dtype=np.int64)
        for g in self.morphs:
            gi = self.idx[g]
            for fi in self.by_cod[g.dom]:
                self.comp[gi, fi] = self.idx[cat.compose(g, self.morphs[fi])]


def check_crossed_laws(x: CrossedCategory, limit: int = 10) -> list[dict]:
    """All six action identities plus the defining square, exhaustively."""
    C = _Indexed(x.c)
    D = _Indexed(x.d)
    nd, nc = len(D.morphs), len(C.morphs)
    low = np.full((nd, nc), -1, dtype=np.int64)
    up = np.full((nd, nc), -1, dtype=np.int64)
    report: list[dict] = []

    def fail(law, tup):
        if len(report) < limit:
            report.append({"law": law, "tuple": [repr(t) for t in tup]})

    for (f, psi), (a, b) in x.act.items():
        fi, pi = D.idx[f], C.idx[psi]
        if a not in C.idx or b not in D.idx:
            fail("membership", (f, psi))
            continue
        low[fi, pi] = C.idx[a]
        up[fi, pi] = D.idx[b]
        if x.base.compose(f, psi) != x.base.compose(a, b):
            fail("defining square f∘Ψ = f_*(Ψ)∘Ψ^*(f)", (f, psi))
    # every composable pair must be tabulated
    for f in D.morphs:
        for pi in C.by_cod[f.dom]:
            if low[D.idx[f], pi] < 0:
                fail("missing action", (f, C.morphs[pi]))

    def witness(law, mask, *cols):
        for k in np.flatnonzero(~mask)[: max(0, limit - len(report))]:
            fail(law, tuple(src.morphs[int(col[k])] for src, col in cols))

    for y in x.base.objects:
        # triples (f1, f2, Ψ): Ψ ends at y, f2 starts at y
        psis = C.by_cod[y]
        f2s = D.by_dom[y]
        if len(psis) and len(f2s):
            P, F2 = np.meshgrid(psis, f2s, indexing="ij")
            P, F2 = P.ravel(), F2.ravel()
            for z in x.base.objects:
                sel = D.cod[F2] == z
                if not sel.any():
                    continue
                p, f2 = P[sel], F2[sel]
                f1s = D.by_dom[z]
                if not len(f1s):
                    continue
                p3 = np.repeat(p, len(f1s))
                f23 = np.repeat(f2, len(f1s))
                f13 = np.tile(f1s, len(p))
                f12 = D.comp[f13, f23]
                lo2 = low[f23, p3]
                lhs = low[f12, p3]
                rhs = low[f13, lo2]
                witness("(f1∘f2)_*(Ψ) = f1_*(f2_*(Ψ))", lhs == rhs, (D, f13), (D, f23), (C, p3))
                lhs = up[f12, p3]
                rhs = D.comp[up[f13, lo2], up[f23, p3]]
                witness("Ψ^*(f1∘f2) = (f2_*(Ψ))^*(f1) ∘ Ψ^*(f2)", lhs == rhs, (D, f13), (D, f23), (C, p3))
        # triples (f, Ψ1, Ψ2): Ψ2 ends at y, Ψ1 starts at y
        p2s = C.by_cod[y]
        p1s = C.by_dom[y]
        if len(p2s) and len(p1s):
            for zz in x.base.objects:
                p1 = p1s[C.cod[p1s] == zz]
                fs = D.by_dom[zz]
                if not (len(p1) and len(fs)):
                    continue
                A, B = np.meshgrid(fs, p1, indexing="ij")
                A, B = A.ravel(), B.ravel()
                f3 = np.repeat(A, len(p2s))
                q1 = np.repeat(B, len(p2s))
                q2 = np.tile(p2s, len(A))
                q12 = C.comp[q1, q2]
                u1 = up[f3, q1]
                lhs = up[f3, q12]
                rhs = up[u1, q2]
                witness("(Ψ1∘Ψ2)^*(f) = Ψ2^*(Ψ1^*(f))", lhs == rhs, (D, f3), (C, q1), (C, q2))
                lhs = low[f3, q12]
                rhs = C.comp[low[f3, q1], low[u1, q2]]
                witness("f_*(Ψ1∘Ψ2) = f_*(Ψ1) ∘ (Ψ1^*(f))_*(Ψ2)", lhs == rhs, (D, f3), (C, q1), (C, q2))
    # unit laws
    fs = np.arange(nd)
    idc = C.ident[D.dom[fs]]
    witness("id^*(f) = f", up[fs, idc] == fs, (D, fs))
    witness("f_*(id) = id", low[fs, idc] == C.ident[D.cod[fs]], (D, fs))
    ps = np.arange(nc)
    idd = D.ident[C.cod[ps]]
    witness("id_*(Ψ) = Ψ", low[idd, ps] == ps, (C, ps))
    witness("Ψ^*(id) = id", up[idd, ps] == D.ident[C.dom[ps]], (C, ps))
    return report


# ---------------------------------------------------------------------------
# built-in crossed categories


def build_delta_s(N: int) -> CrossedCategory:
    """ΔS = Δ ⋊ Σ_{•+1}."""
    b = FiberOrderedCategory("delta_s", N)
    return build_crossed(b, FiberOrderedCategory("delta", N), FiberOrderedCategory("sym_plus", N),
                         name=f"DeltaS<={N}")


def build_delta_c(N: int) -> CrossedCategory:
    """ΔC = Δ ⋊ cyclic groups, as a subcategory of ΔS."""
    b = FiberOrderedCategory("delta_c", N)
    return build_crossed(b, FiberOrderedCategory("delta", N), FiberOrderedCategory("cyclic", N),
                         name=f"DeltaC<={N}")


def build_f_as(N: int) -> CrossedCategory:
    """F(as) crossed by the cyclic maps and Σ_• (bijections fixing 0)."""
    b = FiberOrderedCategory("delta_s", N)
    return build_crossed(b, FiberOrderedCategory("delta_c", N), FiberOrderedCategory("sym", N),
                         name=f"F(as)<={N}")


def build_gamma_as(N: int) -> CrossedCategory:
    """Γ(as): pointed maps, crossed by the pointed cyclic maps and Σ_•."""
    b = FiberOrderedCategory("gamma", N)
    return build_crossed(b, FiberOrderedCategory("delta_op", N), FiberOrderedCategory("sym", N),
                         name=f"Gamma(as)<={N}")


def build_symmetric_crossed(n: int) -> CrossedCategory:
    """Σ_n = ⟨n-cycle⟩ ⋈ Stab(n-1) on a single object."""
    perms = sorted(itertools.permutations(range(n)))
    b = build_group_category(permutation_group_table(perms), name=f"Sigma_{n}")
    b.perms = perms
    cyc = tuple((i + 1) % n for i in range(n)) if n > 0 else ()
    rot = set()
    p = tuple(range(n))
    for _ in range(max(n, 1)):
        rot.add(p)
        p = tuple(cyc[i] for i in p)
    c_members = {Morph(0, 0, i) for i, q in enumerate(perms) if q in rot}
    d_members = {Morph(0, 0, i) for i, q in enumerate(perms) if n == 0 or q[n - 1] == n - 1}
    return build_crossed(b, c_members, d_members, name=f"Z/{n} x Sigma_{max(n - 1, 0)}")


def build_group_crossed(table: Sequence[Sequence[int]], c_elems: Iterable[int], d_elems: Iterable[int],
                        name: str = "group") -> CrossedCategory:
    b = build_group_category(table, name=name)
    return build_crossed(b, {Morph(0, 0, i) for i in c_elems}, {Morph(0, 0, i) for i in d_elems}, name=name)


def crossed_to_json(x: CrossedCategory) -> dict:
    data = category_to_json(x.base)
    data["c_members"] = [[f.dom, f.cod, x.base.index(f)] for f in x.c.morphisms()]
    data["d_members"] = [[f.dom, f.cod, x.base.index(f)] for f in x.d.morphisms()]
    return data


def crossed_from_json(data: dict) -> CrossedCategory:
    """Load and audit; an optional ``"act"`` list overrides computed action entries.

    Each ``act`` entry is ``[f, Ψ, f_*(Ψ), Ψ^*(f)]`` with morphisms given as
    ``[dom, cod, index]`` triples.
    """
    b = category_from_json(data)

    def m(t):
        return b.hom(t[0], t[1])[t[2]]

    try:
        cm = {m(t) for t in data["c_members"]}
        dm = {m(t) for t in data["d_members"]}
    except (KeyError, IndexError, TypeError) as e:
        raise ValueError(f"malformed crossed JSON: {e}") from None
    x = build_crossed(b, cm, dm, name=data.get("name", "json"))
    for f, psi, a, bb in data.get("act", []):
        x.act[(m(f), m(psi))] = (m(a), m(bb))
    return x
