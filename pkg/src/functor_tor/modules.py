"""Modules over a small category.

A covariant module sends ``f: X -> Y`` to a ``dim(Y) x dim(X)`` matrix; a
contravariant one sends it to a ``dim(X) x dim(Y)`` matrix (a right action).
Matrices are computed lazily and cached.  ``apply`` pushes a sparse vector
(``{basis index: scalar}``) along a morphism and is what the Tor engine uses.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .fincat import FinCategory, Morph, NotASubcategory, Opposite, flip, opposite
from .linalg import Field, Mat, kron

CO = "co"
CONTRA = "contra"


class BaseMismatch(ValueError):
    pass


def _flip_variance(v: str) -> str:
    return CONTRA if v == CO else CO


def _small(x):
    """Integral rationals become ints (cheaper arithmetic)."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


class CatModule:
    """Abstract finite-dimensional module; subclasses implement ``dim`` and ``_matrix``."""

    base: FinCategory
    variance: str
    field: Field
    name = "module"

    def __init__(self, base: FinCategory, variance: str, field: Field):
        if variance not in (CO, CONTRA):
            raise ValueError(f"variance must be 'co' or 'contra', not {variance!r}")
        self.base = base
        self.variance = variance
        self.field = field
        self._mcache: dict[Morph, Mat] = {}
        self._ccache: dict[Morph, list[dict]] = {}

    # to override -----------------------------------------------------------

    def dim(self, x: int) -> int:
        raise NotImplementedError

    def _matrix(self, f: Morph) -> Mat:
        raise NotImplementedError

    # derived -------------------------------------------------------------------

    @property
    def dims(self) -> list[int]:
        return [self.dim(x) for x in self.base.objects]

    def source_dim(self, f: Morph) -> int:
        return self.dim(f.dom) if self.variance == CO else self.dim(f.cod)

    def target_dim(self, f: Morph) -> int:
        return self.dim(f.cod) if self.variance == CO else self.dim(f.dom)

    def matrix(self, f: Morph) -> Mat:
        m = self._mcache.get(f)
        if m is None:
            m = self._matrix(f)
            if m.shape != (self.target_dim(f), self.source_dim(f)):
                raise ValueError(f"{self.name}: action of {f} has shape {m.shape}")
            self._mcache[f] = m
        return m

    def columns(self, f: Morph) -> list[dict]:
        cols = self._ccache.get(f)
        if cols is None:
            rows = self.matrix(f).tolist()
            nt, ns = self.target_dim(f), self.source_dim(f)
            cols = [{i: _small(rows[i][j]) for i in range(nt) if rows[i][j]} for j in range(ns)]
            self._ccache[f] = cols
        return cols

    def apply(self, f: Morph, vec: Mapping[int, object]) -> dict:
        """Image of a sparse vector under the action of ``f``."""
        cols = self.columns(f)
        out: dict = {}
        p = self.field.p
        for j, c in vec.items():
            for i, a in cols[j].items():
                v = out.get(i, 0) + c * a
                if p:
                    v %= p
                if v:
                    out[i] = v
                else:
                    out.pop(i, None)
        return out

    def __repr__(self):
        return f"<{self.name} over {self.base.name} ({self.variance}), dims {self.dims}>"


class FunctionModule(CatModule):
    def __init__(self, base, variance, field, dims: Sequence[int] | Callable[[int], int],
                 action: Callable[[Morph], Mat], name: str = "module"):
        super().__init__(base, variance, field)
        self._dims = dims
        self._action = action
        self.name = name

    def dim(self, x):
        return self._dims(x) if callable(self._dims) else self._dims[x]

    def _matrix(self, f):
        return self._action(f)


class ExplicitModule(CatModule):
    """Matrices supplied for every morphism (small categories, JSON input)."""

    def __init__(self, base, variance, field, dims: Sequence[int], action: Mapping[Morph, Mat], name="explicit"):
        super().__init__(base, variance, field)
        self._dims = list(dims)
        self._action = dict(action)
        self.name = name

    def dim(self, x):
        return self._dims[x]

    def _matrix(self, f):
        try:
            return self._action[f]
        except KeyError:
            if f.dom == f.cod and f == self.base.identity(f.dom):
                return Mat.identity(self.field, self.dim(f.dom))
            raise KeyError(f"no action given for {f}") from None


class Representable(CatModule):
    """K[Hom(-, a)] (contravariant) or K[Hom(a, -)] (covariant) on canonical hom bases."""

    def __init__(self, base, a: int, variance: str, field: Field):
        super().__init__(base, variance, field)
        self.a = a
        self.name = f"K[Hom({'-,' + str(a) if variance == CONTRA else str(a) + ',-'})]"

    def dim(self, x):
        return self.base.hom_size(x, self.a) if self.variance == CONTRA else self.base.hom_size(self.a, x)

    def _image(self, f: Morph, h: Morph) -> Morph:
        c = self.base
        return c.compose(h, f) if self.variance == CONTRA else c.compose(f, h)

    def _basis(self, f: Morph):
        c = self.base
        if self.variance == CONTRA:
            return c.hom(f.cod, self.a), c.hom_index(f.dom, self.a)
        return c.hom(self.a, f.dom), c.hom_index(self.a, f.cod)

    def columns(self, f):
        cols = self._ccache.get(f)
        if cols is None:
            src, tgt = self._basis(f)
            cols = [{tgt[self._image(f, h)]: 1} for h in src]
            self._ccache[f] = cols
        return cols

    def apply(self, f, vec):
        src, tgt = self._basis(f)
        out: dict = {}
        p = self.field.p
        for j, c in vec.items():
            i = tgt[self._image(f, src[j])]
            v = out.get(i, 0) + c
            if p:
                v %= p
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return out

    def _matrix(self, f):
        cols = self.columns(f)
        return Mat.from_entries(self.field, self.target_dim(f), self.source_dim(f),
                                {(i, j): 1 for j, c in enumerate(cols) for i in c})


def make_representable(c: FinCategory, a: int, variance: str, field: Field) -> Representable:
    return Representable(c, a, variance, field)


class Trivial(CatModule):
    name = "K"

    def dim(self, x):
        return 1

    def _matrix(self, f):
        return Mat.identity(self.field, 1)

    def apply(self, f, vec):
        return dict(vec)


def make_trivial(c: FinCategory, variance: str, field: Field) -> Trivial:
    return Trivial(c, variance, field)


class ZeroModule(CatModule):
    name = "0"

    def dim(self, x):
        return 0

    def _matrix(self, f):
        return Mat.zeros(self.field, 0, 0)


class Dual(CatModule):
    def __init__(self, m: CatModule):
        super().__init__(m.base, _flip_variance(m.variance), m.field)
        self.inner = m
        self.name = f"({m.name})*"

    def dim(self, x):
        return self.inner.dim(x)

    def _matrix(self, f):
        return self.inner.matrix(f).T


def dual(m: CatModule) -> CatModule:
    if isinstance(m, Dual):
        return m.inner
    return Dual(m)


class OppositeView(CatModule):
    """The same data seen over the opposite category with the other variance."""

    def __init__(self, m: CatModule):
        super().__init__(opposite(m.base), _flip_variance(m.variance), m.field)
        self.inner = m
        self.name = m.name

    def dim(self, x):
        return self.inner.dim(x)

    def _matrix(self, f):
        return self.inner.matrix(flip(f))

    def columns(self, f):
        return self.inner.columns(flip(f))

    def apply(self, f, vec):
        return self.inner.apply(flip(f), vec)


def as_opposite(m: CatModule) -> CatModule:
    if isinstance(m, OppositeView):
        return m.inner
    return OppositeView(m)


class Functor:
    """A functor between categories, given on objects and morphisms."""

    def __init__(self, source: FinCategory, target: FinCategory,
                 on_objects: Callable[[int], int], on_morphisms: Callable[[Morph], Morph], name="F"):
        self.source = source
        self.target = target
        self.on_objects = on_objects
        self.on_morphisms = on_morphisms
        self.name = name

    def __call__(self, f: Morph) -> Morph:
        return self.on_morphisms(f)

    def check(self, morphs: Iterable[Morph] | None = None) -> list[str]:
        """Composition and identity preservation on the given (default: all) morphisms."""
        s, t = self.source, self.target
        bad = []
        for x in s.objects:
            if self(s.identity(x)) != t.identity(self.on_objects(x)):
                bad.append(f"identity at {x}")
        fs = list(morphs) if morphs is not None else list(s.morphisms())
        for f in fs:
            if not t.contains(self(f)):
                bad.append(f"{f} maps outside target")
                continue
            for z in s.objects:
                for g in s.hom(f.cod, z):
                    if self(s.compose(g, f)) != t.compose(self(g), self(f)):
                        bad.append(f"composition at ({g}, {f})")
        return bad


def inclusion(sub: FinCategory, base: FinCategory) -> Functor:
    return Functor(sub, base, lambda x: x, lambda f: f, name=f"{sub.name}->{base.name}")


class Restricted(CatModule):
    def __init__(self, m: CatModule, functor: Functor):
        super().__init__(functor.source, m.variance, m.field)
        self.inner = m
        self.functor = functor
        self.name = f"{m.name}|{functor.source.name}"

    def dim(self, x):
        return self.inner.dim(self.functor.on_objects(x))

    def _image(self, f):
        g = self.functor(f)
        if not self.inner.base.contains(g):
            raise NotASubcategory(f"{f} maps to {g}, not a morphism of {self.inner.base.name}")
        return g

    def _matrix(self, f):
        return self.inner.matrix(self._image(f))

    def columns(self, f):
        return self.inner.columns(self._image(f))

    def apply(self, f, vec):
        return self.inner.apply(self._image(f), vec)


def restrict(m: CatModule, sub: FinCategory | Functor) -> CatModule:
    """Restrict along a subcategory (same payloads) or an explicit functor."""
    if isinstance(sub, Functor):
        if sub.target is not m.base and sub.target.n_objects != m.base.n_objects:
            raise NotASubcategory("functor target differs from the module's base")
        return Restricted(m, sub)
    if sub is m.base:
        return m
    if sub.n_objects != m.base.n_objects:
        raise NotASubcategory("object sets differ")
    for x in sub.objects:
        if not m.base.contains(sub.identity(x)):
            raise NotASubcategory(f"identity of {x} is not in {m.base.name}")
    for f in sub.generating_morphisms():
        if not m.base.contains(f):
            raise NotASubcategory(f"{f} is not in {m.base.name}")
    return Restricted(m, inclusion(sub, m.base))


class DirectSum(CatModule):
    def __init__(self, parts: Sequence[CatModule]):
        if not parts:
            raise ValueError("empty direct sum")
        p0 = parts[0]
        for p in parts[1:]:
            if p.base is not p0.base or p.variance != p0.variance or p.field != p0.field:
                raise BaseMismatch("summands must share base, variance and field")
        super().__init__(p0.base, p0.variance, p0.field)
        self.parts = list(parts)
        self.name = " + ".join(p.name for p in parts)

    def dim(self, x):
        return sum(p.dim(x) for p in self.parts)

    def offsets(self, x) -> list[int]:
        out = [0]
        for p in self.parts:
            out.append(out[-1] + p.dim(x))
        return out

    def _matrix(self, f):
        ent = {}
        r = c = 0
        for p in self.parts:
            for i, row in enumerate(p.matrix(f).tolist()):
                for j, v in enumerate(row):
                    if v:
                        ent[r + i, c + j] = v
            r += p.target_dim(f)
            c += p.source_dim(f)
        return Mat.from_entries(self.field, r, c, ent)


class Twisted(CatModule):
    """Same module in new bases: action becomes T_target · m(f) · T_source^{-1}."""

    def __init__(self, m: CatModule, change: Mapping[int, Mat]):
        super().__init__(m.base, m.variance, m.field)
        self.inner = m
        self.change = dict(change)
        self.inverse = {x: Mat(m.field, t._m.inv()) if t.rows else t for x, t in self.change.items()}
        self.name = f"twist({m.name})"

    def dim(self, x):
        return self.inner.dim(x)

    def _matrix(self, f):
        s, t = (f.dom, f.cod) if self.variance == CO else (f.cod, f.dom)
        return self.change[t] @ self.inner.matrix(f) @ self.inverse[s]


def random_invertible(field: Field, n: int, rng: random.Random, density: float = 0.3) -> Mat:
    """A random unimodular integer matrix (permuted product of unitriangular factors).

    Both it and its inverse have integer entries, which keeps twisted modules
    cheap to work with over Q.
    """
    lower = {(i, i): 1 for i in range(n)}
    upper = {(i, i): 1 for i in range(n)}
    for i in range(n):
        for j in range(i):
            if rng.random() < density:
                lower[i, j] = rng.choice((-1, 1))
            if rng.random() < density:
                upper[j, i] = rng.choice((-1, 1))
    perm = list(range(n))
    rng.shuffle(perm)
    pm = Mat.from_entries(field, n, n, {(perm[i], i): 1 for i in range(n)})
    return pm @ Mat.from_entries(field, n, n, lower) @ Mat.from_entries(field, n, n, upper)


def random_twist(m: CatModule, rng: random.Random) -> Twisted:
    return Twisted(m, {x: random_invertible(m.field, m.dim(x), rng) for x in m.base.objects})


# ---------------------------------------------------------------------------
# module maps


class ModuleMap:
    def __init__(self, source: CatModule, target: CatModule, components: Mapping[int, Mat]):
        if source.base is not target.base or source.variance != target.variance:
            raise BaseMismatch("module map between modules of different shape")
        self.source = source
        self.target = target
        self.components = dict(components)

    def component(self, x: int) -> Mat:
        c = self.components.get(x)
        if c is None:
            return Mat.zeros(self.source.field, self.target.dim(x), self.source.dim(x))
        return c

    def naturality_report(self, morphs: Iterable[Morph] | None = None) -> list[str]:
        bad = []
        fs = morphs if morphs is not None else self.source.base.morphisms()
        for f in fs:
            if self.source.variance == CO:
                lhs = self.target.matrix(f) @ self.component(f.dom)
                rhs = self.component(f.cod) @ self.source.matrix(f)
            else:
                lhs = self.target.matrix(f) @ self.component(f.cod)
                rhs = self.component(f.dom) @ self.source.matrix(f)
            if lhs != rhs:
                bad.append(f"naturality square fails at {f}")
        return bad


def compose_maps(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    return ModuleMap(f.source, g.target, {x: g.component(x) @ f.component(x) for x in f.source.base.objects})


# ---------------------------------------------------------------------------
# validation


def validate_functoriality(m: CatModule, morphs: Iterable[Morph] | None = None, limit: int = 20) -> list[str]:
    """Identity and composition laws over every composable pair starting in ``morphs``."""
    c = m.base
    out: list[str] = []
    for x in c.objects:
        if m.matrix(c.identity(x)) != Mat.identity(m.field, m.dim(x)):
            out.append(f"identity at object {x} not sent to the identity")
    fs = list(morphs) if morphs is not None else list(c.morphisms())
    for f in fs:
        mf = m.matrix(f)
        for z in c.objects:
            for g in c.hom(f.cod, z):
                gf = c.compose(g, f)
                expect = m.matrix(g) @ mf if m.variance == CO else mf @ m.matrix(g)
                if m.matrix(gf) != expect:
                    if len(out) < limit:
                        out.append(f"composition fails for pair ({g}, {f})")
    return out


# ---------------------------------------------------------------------------
# JSON


def _mid(c: FinCategory, f: Morph) -> str:
    return f"{f.dom},{f.cod},{c.index(f)}"


def module_to_json(m: CatModule, category_ref: str | None = None) -> dict:
    return {
        "category": category_ref or m.base.name,
        "variance": m.variance,
        "field": m.field.to_json(),
        "dims": m.dims,
        "action": {_mid(m.base, f): m.matrix(f).to_json() for f in m.base.morphisms()},
    }


def module_from_json(data: dict | str, base: FinCategory, field: Field | None = None) -> ExplicitModule:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        variance = data["variance"]
        if field is None:
            fj = data.get("field", {"field": "Q"})
            field = Field.from_spec(fj["field"], fj.get("p"))
        dims = [int(d) for d in data["dims"]]
        action = {}
        for key, rows in data["action"].items():
            x, y, i = (int(t) for t in key.split(","))
            f = base.hom(x, y)[i]
            r, c = (dims[y], dims[x]) if variance == CO else (dims[x], dims[y])
            vals = [[Fraction(v) for v in row] for row in rows]
            action[f] = Mat.from_rows(field, vals, c) if r else Mat.zeros(field, 0, c)
    except (KeyError, ValueError, IndexError, TypeError) as e:
        raise ValueError(f"malformed module JSON: {e}") from None
    if len(dims) != base.n_objects:
        raise ValueError("dims length must equal the number of objects")
    return ExplicitModule(base, variance, field, dims, action, name=data.get("name", "json"))


def is_opposite_of(a: FinCategory, b: FinCategory) -> bool:
    return (isinstance(a, Opposite) and a.base is b) or (isinstance(b, Opposite) and b.base is a)


def hom_k_module(m: CatModule, v_dim: int) -> CatModule:
    """Hom_K(m, K^v): opposite variance, basis = row-major v x dim(m(X)) matrices."""
    f_ = m.field
    ident = Mat.identity(f_, v_dim)

    def act(f):
        # λ ↦ λ · m(f)  (row-major vec: λ·A  ->  (I ⊗ A^T) vec λ)
        return kron(ident, m.matrix(f).T)

    return FunctionModule(m.base, _flip_variance(m.variance), f_, lambda x: v_dim * m.dim(x), act,
                          name=f"Hom_K({m.name}, K^{v_dim})")
