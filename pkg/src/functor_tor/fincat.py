"""Finite small categories with enumerated, canonically ordered hom-sets.

Objects are the integers ``0..n_objects-1``.  A morphism is a :class:`Morph`
``(dom, cod, payload)`` whose payload is a hashable canonical description;
every hom-list is sorted by payload.  Hom-sets are enumerated lazily and
cached, so large truncations only pay for the hom-sets actually touched.
"""

from __future__ import annotations

import itertools
import json
from typing import Any, Callable, Hashable, Iterable, NamedTuple, Sequence


class Morph(NamedTuple):
    dom: int
    cod: int
    payload: Hashable


class NotComposable(ValueError):
    pass


class NotAGroup(ValueError):
    def __init__(self, axiom: str, witness=None):
        super().__init__(f"{axiom} fails" + (f" at {witness}" if witness is not None else ""))
        self.axiom = axiom
        self.witness = witness


class NotASubcategory(ValueError):
    pass


class FinCategory:
    """Base class.  Subclasses supply enumeration and payload composition."""

    name = "category"
    n_objects: int

    def __init__(self):
        self._homs: dict[tuple[int, int], list[Morph]] = {}
        self._index: dict[tuple[int, int], dict[Morph, int]] = {}
        self._gen_cache: list[Morph] | None = None

    # to override ---------------------------------------------------------

    def _payloads(self, x: int, y: int) -> Iterable[Hashable]:
        raise NotImplementedError

    def _compose(self, g: Hashable, f: Hashable, x: int, y: int, z: int) -> Hashable:
        raise NotImplementedError

    def _identity(self, x: int) -> Hashable:
        raise NotImplementedError

    def _generators(self) -> list[Morph]:
        """Morphisms generating the category under composition.

        Greedy: a morphism is kept when it is not a composite of those kept
        before it.
        """
        gens: list[Morph] = []
        reached = generated_closure(self, gens)
        for x in self.objects:
            for y in self.objects:
                for f in self.hom(x, y):
                    if f not in reached:
                        gens.append(f)
                        reached = generated_closure(self, gens)
        return gens

    # public API ------------------------------------------------------------

    @property
    def objects(self) -> range:
        return range(self.n_objects)

    def _check_obj(self, x: int):
        if not 0 <= x < self.n_objects:
            raise IndexError(f"object {x} not in {self.name}")

    def hom(self, x: int, y: int) -> list[Morph]:
        key = (x, y)
        h = self._homs.get(key)
        if h is None:
            self._check_obj(x)
            self._check_obj(y)
            h = [Morph(x, y, p) for p in sorted(self._payloads(x, y))]
            self._homs[key] = h
        return h

    def hom_size(self, x: int, y: int) -> int:
        return len(self.hom(x, y))

    def hom_index(self, x: int, y: int) -> dict[Morph, int]:
        key = (x, y)
        d = self._index.get(key)
        if d is None:
            d = {f: i for i, f in enumerate(self.hom(x, y))}
            self._index[key] = d
        return d

    def index(self, f: Morph) -> int:
        """Position of ``f`` in its canonical hom-list."""
        try:
            return self.hom_index(f.dom, f.cod)[f]
        except KeyError:
            raise KeyError(f"{f} is not a morphism of {self.name}") from None

    def contains(self, f: Morph) -> bool:
        if not (0 <= f.dom < self.n_objects and 0 <= f.cod < self.n_objects):
            return False
        return f in self.hom_index(f.dom, f.cod)

    def compose(self, g: Morph, f: Morph) -> Morph:
        """``g ∘ f``."""
        if f.cod != g.dom:
            raise NotComposable(f"cannot compose {g} after {f}")
        return Morph(f.dom, g.cod, self._compose(g.payload, f.payload, f.dom, f.cod, g.cod))

    def compose_all(self, *fs: Morph) -> Morph:
        """``fs[0] ∘ fs[1] ∘ ...``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def identity(self, x: int) -> Morph:
        return Morph(x, x, self._identity(x))

    def generating_morphisms(self) -> list[Morph]:
        gens = self._gen_cache
        if gens is None:
            gens = self._gen_cache = self._generators()
        return list(gens)

    def morphisms(self) -> Iterable[Morph]:
        for x in self.objects:
            for y in self.objects:
                yield from self.hom(x, y)

    def n_morphisms(self) -> int:
        return sum(self.hom_size(x, y) for x in self.objects for y in self.objects)

    def hom_table(self) -> list[list[int]]:
        return [[self.hom_size(x, y) for y in self.objects] for x in self.objects]

    def __repr__(self):
        return f"<{self.name}>"


# ---------------------------------------------------------------------------
# explicit tables


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(v) for v in x]
    return x


class TableCategory(FinCategory):
    """Category given by explicit hom-lists and a composition table.

    ``compose_table[(x, y, z)][(i, j)] = k`` means hom(y,z)[i] ∘ hom(x,y)[j]
    is hom(x,z)[k].
    """

    def __init__(self, n_objects: int, homs: dict[tuple[int, int], Sequence[Hashable]],
                 identities: Sequence[int], compose_table: dict, name: str = "table"):
        super().__init__()
        self.n_objects = n_objects
        self.name = name
        self._raw = {k: list(v) for k, v in homs.items()}
        self._ids = list(identities)
        self._table = compose_table
        # hom-lists are kept in the given order, which must be canonical
        for (x, y), ps in self._raw.items():
            self._homs[(x, y)] = [Morph(x, y, p) for p in ps]

    def hom(self, x: int, y: int) -> list[Morph]:
        self._check_obj(x)
        self._check_obj(y)
        return self._homs.setdefault((x, y), [])

    def _identity(self, x):
        return self.hom(x, x)[self._ids[x]].payload

    def compose(self, g: Morph, f: Morph) -> Morph:
        if f.cod != g.dom:
            raise NotComposable(f"cannot compose {g} after {f}")
        x, y, z = f.dom, f.cod, g.cod
        k = self._table[(x, y, z)][(self.index(g), self.index(f))]
        return self.hom(x, z)[k]

    def to_json(self) -> dict:
        return category_to_json(self)


def category_to_json(c: FinCategory) -> dict:
    homs = []
    for x in c.objects:
        for y in c.objects:
            h = c.hom(x, y)
            if h:
                homs.append({"dom": x, "cod": y, "payloads": [_thaw(f.payload) for f in h]})
    comp = []
    for x in c.objects:
        for y in c.objects:
            for z in c.objects:
                for j, f in enumerate(c.hom(x, y)):
                    for i, g in enumerate(c.hom(y, z)):
                        comp.append([x, y, z, i, j, c.index(c.compose(g, f))])
    return {
        "name": c.name,
        "objects": c.n_objects,
        "homs": homs,
        "identities": [c.index(c.identity(x)) for x in c.objects],
        "compose": comp,
    }


def category_from_json(data: dict | str) -> TableCategory:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = int(data["objects"])
        homs = {(int(h["dom"]), int(h["cod"])): [_freeze(p) for p in h["payloads"]] for h in data["homs"]}
        ids = [int(i) for i in data["identities"]]
        table: dict = {}
        for x, y, z, i, j, k in data["compose"]:
            table.setdefault((x, y, z), {})[(i, j)] = k
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed category JSON: {e}") from None
    if len(ids) != n:
        raise ValueError("one identity index per object required")
    return TableCategory(n, homs, ids, table, name=data.get("name", "table"))


def tabulate(c: FinCategory) -> TableCategory:
    """Freeze any category into an explicit table."""
    return category_from_json(category_to_json(c))


# ---------------------------------------------------------------------------
# Δ


class DeltaCategory(FinCategory):
    """Δ truncated at [N]; payload is the image vector of a monotone map."""

    def __init__(self, N: int):
        super().__init__()
        if N < 0:
            raise ValueError("N must be >= 0")
        self.N = N
        self.n_objects = N + 1
        self.name = f"Delta<={N}"

    def _payloads(self, x, y):
        return itertools.combinations_with_replacement(range(y + 1), x + 1)

    def _compose(self, g, f, x, y, z):
        return tuple(g[i] for i in f)

    def _identity(self, x):
        return tuple(range(x + 1))

    def sigma(self, n: int, i: int) -> Morph:
        """[n+1] -> [n] hitting i twice."""
        if not 0 <= i <= n:
            raise ValueError("need 0 <= i <= n")
        return Morph(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))

    def delta(self, n: int, i: int) -> Morph:
        """[n-1] -> [n] missing i."""
        if not 0 <= i <= n or n < 1:
            raise ValueError("need 0 <= i <= n, n >= 1")
        return Morph(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))

    def _generators(self):
        gens = []
        for n in range(self.N):
            gens += [self.sigma(n, i) for i in range(n + 1)]
            gens += [self.delta(n + 1, i) for i in range(n + 2)]
        return gens


def build_delta_truncated(N: int) -> DeltaCategory:
    return DeltaCategory(N)


# ---------------------------------------------------------------------------
# symmetric groupoids


class SymmetricGroupoid(FinCategory):
    """Σ_{n+1} (shifted) or Σ_n fixing 0 (unshifted) at each [n], one-line payloads."""

    def __init__(self, N: int, shifted: bool):
        super().__init__()
        if N < 0:
            raise ValueError("N must be >= 0")
        self.N = N
        self.shifted = shifted
        self.n_objects = N + 1
        self.name = f"Sigma{'+1' if shifted else ''}<={N}"

    def _payloads(self, x, y):
        if x != y:
            return []
        if self.shifted:
            return itertools.permutations(range(x + 1))
        return ((0,) + p for p in itertools.permutations(range(1, x + 1)))

    def _compose(self, g, f, x, y, z):
        return tuple(g[i] for i in f)

    def _identity(self, x):
        return tuple(range(x + 1))

    def _generators(self):
        gens = []
        lo = 0 if self.shifted else 1
        for n in self.objects:
            for i in range(lo, n):
                p = list(range(n + 1))
                p[i], p[i + 1] = p[i + 1], p[i]
                gens.append(Morph(n, n, tuple(p)))
        return gens


def build_symmetric_groupoid(N: int, shifted: bool) -> SymmetricGroupoid:
    return SymmetricGroupoid(N, shifted)


# ---------------------------------------------------------------------------
# groups


class GroupCategory(FinCategory):
    """One object; morphism payloads are element indices, g∘f = table[g][f]."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int, name: str = "group"):
        super().__init__()
        self.n_objects = 1
        self.table = [list(r) for r in table]
        self.order = len(self.table)
        self.e = identity
        self.name = name

    def _payloads(self, x, y):
        return range(self.order)

    def _compose(self, g, f, x, y, z):
        return self.table[g][f]

    def _identity(self, x):
        return self.e

    def element(self, i: int) -> Morph:
        return Morph(0, 0, i)

    def inverse(self, i: int) -> int:
        for j in range(self.order):
            if self.table[i][j] == self.e:
                return j
        raise NotAGroup("inverses", i)


def build_group_category(mult_table: Sequence[Sequence[int]], name: str = "group") -> GroupCategory:
    """Validate a Cayley table and wrap it as a one-object category."""
    n = len(mult_table)
    if n == 0:
        raise NotAGroup("nonempty")
    for row in mult_table:
        if len(row) != n:
            raise NotAGroup("square table")
        for v in row:
            if not (isinstance(v, int) and 0 <= v < n):
                raise NotAGroup("closure", v)
    t = mult_table
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    raise NotAGroup("associativity", (a, b, c))
    ids = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
    if not ids:
        raise NotAGroup("identity")
    e = ids[0]
    for a in range(n):
        if not any(t[a][b] == e and t[b][a] == e for b in range(n)):
            raise NotAGroup("inverses", a)
    return GroupCategory(t, e, name)


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def permutation_group_table(perms: Sequence[tuple[int, ...]]) -> list[list[int]]:
    """Cayley table of a list of one-line permutations under (g∘f)(i) = g(f(i))."""
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[tuple(g[i] for i in f)] for f in perms] for g in perms]


def build_symmetric_group(n: int) -> GroupCategory:
    perms = sorted(itertools.permutations(range(n)))
    c = build_group_category(permutation_group_table(perms), name=f"Sigma_{n}")
    c.perms = perms
    return c


# ---------------------------------------------------------------------------
# opposite and subcategories


class Opposite(FinCategory):
    def __init__(self, base: FinCategory):
        super().__init__()
        self.base = base
        self.n_objects = base.n_objects
        self.name = f"({base.name})^op"

    def hom(self, x, y):
        key = (x, y)
        h = self._homs.get(key)
        if h is None:
            h = [Morph(x, y, f.payload) for f in self.base.hom(y, x)]
            self._homs[key] = h
        return h

    def _compose(self, g, f, x, y, z):
        return self.base._compose(f, g, z, y, x)

    def compose(self, g, f):
        if f.cod != g.dom:
            raise NotComposable(f"cannot compose {g} after {f}")
        h = self.base.compose(flip(f), flip(g))
        return Morph(f.dom, g.cod, h.payload)

    def identity(self, x):
        return self.base.identity(x)

    def _generators(self):
        return [flip(f) for f in self.base.generating_morphisms()]


def flip(f: Morph) -> Morph:
    """The same arrow seen in the opposite category."""
    return Morph(f.cod, f.dom, f.payload)


def opposite(c: FinCategory) -> FinCategory:
    if isinstance(c, Opposite):
        return c.base
    return Opposite(c)


class SubCategory(FinCategory):
    """Wide subcategory of ``base`` cut out by a membership predicate."""

    def __init__(self, base: FinCategory, member: Callable[[Morph], bool], name: str = "sub",
                 generators: Sequence[Morph] | None = None):
        super().__init__()
        self.base = base
        self.member = member
        self.n_objects = base.n_objects
        self.name = name
        self._gens = list(generators) if generators is not None else None

    def hom(self, x, y):
        key = (x, y)
        h = self._homs.get(key)
        if h is None:
            h = [f for f in self.base.hom(x, y) if self.member(f)]
            self._homs[key] = h
        return h

    def compose(self, g, f):
        return self.base.compose(g, f)

    def identity(self, x):
        return self.base.identity(x)

    def _generators(self):
        if self._gens is not None:
            return list(self._gens)
        return super()._generators()


def subcategory(base: FinCategory, members, name: str = "sub") -> FinCategory:
    """Accept a predicate, a collection of morphisms, or a FinCategory."""
    if isinstance(members, FinCategory):
        return members
    if callable(members):
        return SubCategory(base, members, name)
    s = frozenset(members)
    return SubCategory(base, s.__contains__, name)


# ---------------------------------------------------------------------------
# validation


def validate_category(c: FinCategory, limit: int = 20, exhaustive: bool | None = None) -> list[str]:
    """Identity/associativity/closure audit; empty list on success.

    Associativity h(gf) = (hg)f for every h follows from the case where h is a
    generator, so large categories only run the outer loop over generators
    unless ``exhaustive`` is set.
    """
    out: list[str] = []
    if exhaustive is None:
        exhaustive = c.n_morphisms() <= 400

    def note(msg):
        if len(out) < limit:
            out.append(msg)

    objs = list(c.objects)
    for x in objs:
        for y in objs:
            ps = [f.payload for f in c.hom(x, y)]
            if ps != sorted(ps):
                note(f"hom({x},{y}) not canonically sorted")
    for x in objs:
        if not c.contains(c.identity(x)):
            note(f"identity of {x} missing")
    for x in objs:
        for y in objs:
            for f in c.hom(x, y):
                if c.compose(c.identity(y), f) != f:
                    note(f"left identity fails for {f}")
                if c.compose(f, c.identity(x)) != f:
                    note(f"right identity fails for {f}")
    # every composite is computed once and numbered; triples are then lookups
    ids: dict[Morph, int] = {}
    for f in c.morphisms():
        ids[f] = len(ids)
    after: list[dict[int, int]] = [{} for _ in ids]   # after[g][f] = id of g∘f
    for g, gi in ids.items():
        row = after[gi]
        for x in objs:
            for f in c.hom(x, g.dom):
                gf = c.compose(g, f)
                k = ids.get(gf)
                if k is None:
                    note(f"composite {g} o {f} not in hom({x},{g.cod})")
                    continue
                row[ids[f]] = k
    outer = c.generating_morphisms() if not exhaustive else list(ids)
    for h in outer:
        hrow = after[ids[h]]
        for gi, hgi in hrow.items():
            hg_row = after[hgi]
            for fi, gfi in after[gi].items():
                if hrow.get(gfi) != hg_row.get(fi):
                    note(f"associativity fails at ({h}, #{gi}, #{fi})")
    return out


def generated_closure(c: FinCategory, gens: Iterable[Morph]) -> set[Morph]:
    """All composites of ``gens`` and identities (within the truncation)."""
    seen = {c.identity(x) for x in c.objects}
    frontier = list(seen)
    gens = list(gens)
    by_dom: dict[int, list[Morph]] = {}
    for g in gens:
        by_dom.setdefault(g.dom, []).append(g)
    while frontier:
        nxt = []
        for f in frontier:
            for g in by_dom.get(f.cod, ()):
                h = c.compose(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def hom_size_table_text(c: FinCategory) -> str:
    objs = list(c.objects)
    w = max(4, max((len(str(c.hom_size(x, y))) for x in objs for y in objs), default=1) + 1)
    head = "dom\\cod".ljust(8) + "".join(f"[{y}]".rjust(w) for y in objs)
    rows = [head]
    for x in objs:
        rows.append(f"[{x}]".ljust(8) + "".join(str(c.hom_size(x, y)).rjust(w) for y in objs))
    return "\n".join(rows)


def describe(f: Morph) -> dict[str, Any]:
    return {"dom": f.dom, "cod": f.cod, "payload": _thaw(f.payload)}
