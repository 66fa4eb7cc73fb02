"""Exact linear algebra over Q and prime fields.

Dense matrices are backed by python-flint (``fmpq_mat`` / ``nmod_mat``).
Large sparse spans are handled by :class:`SparseEchelon`, a pure-Python
semi-echelon accumulator, which is what the resolution engine leans on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint


class NotAComplex(ValueError):
    """A consecutive pair of differentials does not compose to zero."""


class FieldMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# fields


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return bool(flint.fmpz(p).is_prime())


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field of order ``p``."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def char(self) -> int:
        return self.p

    @property
    def tag(self) -> str:
        return "Q" if self.p == 0 else "Fp"

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __call__(self, x):
        """Canonical representative of ``x`` (an int, Fraction or flint scalar)."""
        if self.p == 0:
            if isinstance(x, flint.fmpq):
                return Fraction(int(x.p), int(x.q))
            return Fraction(x)
        if isinstance(x, Fraction):
            return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if self.p == 0:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def to_json(self) -> dict:
        return {"field": self.tag} if self.p == 0 else {"field": "Fp", "p": self.p}

    @classmethod
    def from_spec(cls, name: str, p: int | None = None) -> "Field":
        if name in ("Q", "QQ"):
            return QQ
        if name in ("Fp", "GF"):
            if p is None:
                raise ValueError("prime field requires p")
            return GF(p)
        raise ValueError(f"unknown field {name!r}")


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# dense matrices


def _to_flint_scalar(field: Field, x):
    if field.p:
        return int(field(x))
    if isinstance(x, flint.fmpq):
        return x
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


class Mat:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "_m")

    def __init__(self, field: Field, m):
        self.field = field
        self._m = m

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        if field.p:
            return cls(field, flint.nmod_mat(rows, cols, field.p))
        return cls(field, flint.fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls.from_entries(field, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        flat = [_to_flint_scalar(field, x) for row in rows for x in row]
        if len(flat) != r * c:
            raise ValueError("ragged rows")
        if field.p:
            return cls(field, flint.nmod_mat(r, c, flat, field.p))
        return cls(field, flint.fmpq_mat(r, c, flat))

    @classmethod
    def from_entries(cls, field: Field, rows: int, cols: int, entries: Mapping) -> "Mat":
        """Build from a ``{(i, j): value}`` mapping; absent entries are zero."""
        flat = [0] * (rows * cols)
        for (i, j), v in entries.items():
            flat[i * cols + j] = _to_flint_scalar(field, v)
        if field.p:
            return cls(field, flint.nmod_mat(rows, cols, flat, field.p))
        return cls(field, flint.fmpq_mat(rows, cols, flat))

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence[Mapping[int, object]]) -> "Mat":
        """Columns given as sparse ``{row: value}`` dicts."""
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in col.items()}
        return cls.from_entries(field, rows, len(columns), ent)

    # shape / access ---------------------------------------------------

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.field(self._m[i, j])

    def tolist(self) -> list[list]:
        f = self.field
        return [[f(x) for x in row] for row in self._m.tolist()]

    def column(self, j: int) -> dict[int, object]:
        return {i: self[i, j] for i in range(self.rows) if self._m[i, j] != 0}

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.tolist()]

    def __repr__(self):
        return f"Mat({self.field!r}, {self.tolist()})"

    # arithmetic -------------------------------------------------------

    def _check(self, other: "Mat"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field, self._m * other._m)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat(self.field, self._m + other._m)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat(self.field, self._m - other._m)

    def __neg__(self) -> "Mat":
        return Mat(self.field, -self._m)

    def scale(self, c) -> "Mat":
        return Mat(self.field, self._m * _to_flint_scalar(self.field, c))

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self._m.transpose())

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._m == other._m

    __hash__ = None

    def is_zero(self) -> bool:
        if self.rows == 0 or self.cols == 0:
            return True
        return self._m == Mat.zeros(self.field, self.rows, self.cols)._m

    def rref(self) -> tuple["Mat", int]:
        if self.rows == 0 or self.cols == 0:
            return self, 0
        r, k = self._m.rref()
        return Mat(self.field, r), int(k)


def hstack(field: Field, rows: int, mats: Sequence[Mat]) -> Mat:
    ent = {}
    off = 0
    for m in mats:
        for i, row in enumerate(m.tolist()):
            for j, v in enumerate(row):
                if v:
                    ent[i, off + j] = v
        off += m.cols
    return Mat.from_entries(field, rows, off, ent)


def vstack(field: Field, cols: int, mats: Sequence[Mat]) -> Mat:
    return hstack(field, cols, [m.T for m in mats]).T


def block_matrix(field: Field, row_dims: Sequence[int], col_dims: Sequence[int],
                 blocks: Mapping[tuple[int, int], Mat]) -> Mat:
    """Assemble a block matrix; missing blocks are zero."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    ent = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_dims[bi], col_dims[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {m.shape}")
        for i, row in enumerate(m.tolist()):
            for j, v in enumerate(row):
                if v:
                    key = (roff[bi] + i, coff[bj] + j)
                    ent[key] = ent.get(key, 0) + v
    return Mat.from_entries(field, roff[-1], coff[-1], ent)


def kron(a: Mat, b: Mat) -> Mat:
    a._check(b)
    al, bl = a.tolist(), b.tolist()
    ent = {}
    for i, arow in enumerate(al):
        for j, x in enumerate(arow):
            if not x:
                continue
            for k, brow in enumerate(bl):
                for l, y in enumerate(brow):
                    if y:
                        ent[i * b.rows + k, j * b.cols + l] = x * y
    return Mat.from_entries(a.field, a.rows * b.rows, a.cols * b.cols, ent)


# ---------------------------------------------------------------------------
# the primitives


# above this many entries flint's dense rank can exhaust memory
DENSE_RANK_LIMIT = 4_000_000


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.rows * m.cols <= DENSE_RANK_LIMIT:
        return int(m._m.rank())
    # exact sparse elimination over the shorter side
    a = m._m if m.rows <= m.cols else m._m.transpose()
    r, c = a.nrows(), a.ncols()
    ech = SparseEchelon(m.field)
    modular = bool(m.field.p)
    for i in range(r):
        vec = {}
        for j in range(c):
            x = a[i, j]
            if x != 0:
                vec[j] = int(x) if modular else x
        ech.add(vec)
    return ech.rank


def _pivots(r: Mat, k: int) -> list[int]:
    piv = []
    rows = r._m.tolist()
    for i in range(k):
        row = rows[i]
        for j, v in enumerate(row):
            if v != 0:
                piv.append(j)
                break
    return piv


def kernel_basis(m: Mat) -> Mat:
    """Columns form the canonical (RREF-derived) basis of ker m."""
    f = m.field
    n = m.cols
    if m.rows == 0:
        return Mat.identity(f, n)
    r, k = m.rref()
    piv = _pivots(r, k)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    rl = r._m.tolist()
    ent = {}
    for c, fj in enumerate(free):
        ent[fj, c] = 1
        for i, pj in enumerate(piv):
            v = rl[i][fj]
            if v:
                ent[pj, c] = -v
    return Mat.from_entries(f, n, len(free), ent)


def cokernel_data(m: Mat) -> tuple[int, Mat]:
    """``(dim, projection)`` with ``projection @ m == 0`` and full row rank."""
    p = kernel_basis(m.T).T
    return p.rows, p


def image_basis(m: Mat) -> Mat:
    """Pivot columns of ``m`` (a basis of its column space)."""
    if m.rows == 0 or m.cols == 0:
        return Mat.zeros(m.field, m.rows, 0)
    r, k = m.rref()
    piv = _pivots(r, k)
    cols = m.tolist()
    ent = {(i, c): cols[i][j] for c, j in enumerate(piv) for i in range(m.rows) if cols[i][j]}
    return Mat.from_entries(m.field, m.rows, len(piv), ent)


def solve_left_inverse_columns(basis: Mat, vectors: Mat) -> Mat:
    """Coordinates of ``vectors`` (columns) in the column basis ``basis``.

    Raises ``ValueError`` when some column is not in the span.
    """
    f = basis.field
    aug = hstack(f, basis.rows, [basis, vectors])
    r, k = aug.rref()
    piv = _pivots(r, k)
    if any(p >= basis.cols for p in piv):
        raise ValueError("vector outside span")
    rl = r._m.tolist()
    ent = {}
    for i, pj in enumerate(piv):
        for c in range(vectors.cols):
            v = rl[i][basis.cols + c]
            if v:
                ent[pj, c] = v
    return Mat.from_entries(f, basis.cols, vectors.cols, ent)


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    return solve_left_inverse_columns(m, Mat.identity(m.field, m.rows))


def right_inverse(p: Mat) -> Mat:
    """A matrix ``s`` with ``p @ s == 1``, supported on the pivot columns of ``p``."""
    f = p.field
    if p.rows == 0:
        return Mat.zeros(f, p.cols, 0)
    r, k = p.rref()
    if k != p.rows:
        raise ValueError("right inverse needs full row rank")
    piv = _pivots(r, k)
    rows = p.tolist()
    square = Mat.from_rows(f, [[row[j] for j in piv] for row in rows])
    coords = inverse(square).tolist()
    ent = {(j, c): coords[i][c] for i, j in enumerate(piv) for c in range(p.rows) if coords[i][c]}
    return Mat.from_entries(f, p.cols, p.rows, ent)


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class ChainComplex:
    """Degrees ``lo..hi`` with ``d[n]: C_n -> C_{n-1}``.

    ``dims[n]`` is the dimension of ``C_n``; ``d`` may omit degrees whose
    differential is zero.
    """

    field: Field
    dims: Mapping[int, int]
    d: Mapping[int, Mat]

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def differential(self, n: int) -> Mat:
        m = self.d.get(n)
        if m is None:
            return Mat.zeros(self.field, self.dim(n - 1), self.dim(n))
        if m.shape != (self.dim(n - 1), self.dim(n)):
            raise ValueError(f"d_{n} has shape {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
        return m

    def check(self, degrees: Iterable[int]) -> None:
        for n in degrees:
            if not (self.differential(n) @ self.differential(n + 1)).is_zero():
                raise NotAComplex(f"d_{n} d_{n + 1} != 0")


def homology_dims(complex: ChainComplex, degrees: Iterable[int]) -> list[int]:
    degrees = list(degrees)
    complex.check(degrees)
    out = []
    for n in degrees:
        out.append(complex.dim(n) - rank(complex.differential(n)) - rank(complex.differential(n + 1)))
    return out


# ---------------------------------------------------------------------------
# sparse accumulation


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


class SparseEchelon:
    """Semi-echelon basis of a growing span of sparse vectors.

    Vectors are ``{index: value}`` dicts with canonical field values.  Each
    stored row has a distinct leading (smallest) index, normalised to 1.
    Over GF(2) rows are packed into Python ints.
    """

    def __init__(self, field: Field):
        self.field = field
        self._gf2 = field.p == 2
        # rationals are held as flint scalars: much cheaper than Fraction
        self._conv = field if field.p else _to_fmpq
        self.pivots: dict[int, object] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    # GF(2) bitset path
    @staticmethod
    def _pack(vec: Mapping[int, object]) -> int:
        x = 0
        for i, v in vec.items():
            if int(v) & 1:
                x ^= 1 << i
        return x

    def _reduce2(self, x: int) -> int:
        piv = self.pivots
        while x:
            lead = (x & -x).bit_length() - 1
            row = piv.get(lead)
            if row is None:
                return x
            x ^= row
        return 0

    def _reduce(self, v: dict) -> dict:
        piv = self.pivots
        p = self.field.p
        while v:
            lead = min(v)
            row = piv.get(lead)
            if row is None:
                return v
            c = v[lead]
            if p:
                for i, a in row.items():
                    nv = (v.get(i, 0) - c * a) % p
                    if nv:
                        v[i] = nv
                    else:
                        v.pop(i, None)
            else:
                for i, a in row.items():
                    nv = v.get(i, 0) - c * a
                    if nv:
                        v[i] = nv
                    else:
                        v.pop(i, None)
        return v

    def add(self, vec: Mapping[int, object]) -> bool:
        """Insert ``vec``; return True iff it was independent of the span."""
        if self._gf2:
            x = self._reduce2(self._pack(vec))
            if not x:
                return False
            self.pivots[(x & -x).bit_length() - 1] = x
            return True
        f = self.field
        conv = self._conv
        v = {i: conv(a) for i, a in vec.items() if a}
        v = self._reduce(v)
        if not v:
            return False
        lead = min(v)
        inv = f.inv(v[lead]) if f.p else 1 / v[lead]
        if f.p:
            row = {i: a * inv % f.p for i, a in v.items()}
        else:
            row = {i: a * inv for i, a in v.items()}
        self.pivots[lead] = row
        return True

    def contains(self, vec: Mapping[int, object]) -> bool:
        if self._gf2:
            return self._reduce2(self._pack(vec)) == 0
        conv = self._conv
        v = {i: conv(a) for i, a in vec.items() if a}
        return not self._reduce({i: a for i, a in v.items() if a})

    def full_reduce(self, vec: Mapping[int, object]) -> dict:
        """Remainder of ``vec`` with every pivot coordinate eliminated."""
        f = self.field
        if self._gf2:
            x = self._pack(vec)
            out = 0
            while x:
                low = x & -x
                lead = low.bit_length() - 1
                row = self.pivots.get(lead)
                if row is None:
                    out |= low
                    x ^= low
                else:
                    x ^= row
            res = {}
            while out:
                low = out & -out
                res[low.bit_length() - 1] = 1
                out ^= low
            return res
        conv = self._conv
        v = {i: conv(a) for i, a in vec.items() if a}
        v = {i: a for i, a in v.items() if a}
        out = {}
        while v:
            lead = min(v)
            c = v.pop(lead)
            row = self.pivots.get(lead)
            if row is None:
                out[lead] = c
                continue
            for i, a in row.items():
                if i == lead:
                    continue
                nv = v.get(i, 0) - c * a
                if f.p:
                    nv %= f.p
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)
        return out


    def row(self, lead: int) -> dict:
        r = self.pivots[lead]
        if not self._gf2:
            return dict(r)
        out = {}
        while r:
            low = r & -r
            out[low.bit_length() - 1] = 1
            r ^= low
        return out


#: entry count below which sparse inputs are handed to dense flint routines
DENSE_LIMIT = 12_000_000


def sparse_cokernel(field: Field, rows: int, columns: Iterable[Mapping[int, object]]) -> tuple[int, Mat]:
    """``(dim, projection)`` for the cokernel of a matrix given by sparse columns.

    The quotient basis is the set of non-pivot coordinates of an echelon form
    of the column span; a pivot coordinate is rewritten through its fully
    reduced row.
    """
    columns = list(columns)
    if rows * len(columns) <= DENSE_LIMIT:
        # left kernel of the matrix, by dense elimination modulo a prime
        transposed: list[dict] = [{} for _ in range(rows)]
        for j, c in enumerate(columns):
            for i, v in c.items():
                if v:
                    transposed[i][j] = v
        basis = _modular_kernel(field, len(columns), transposed)
        if basis is None:
            kb = kernel_basis(Mat.from_columns(field, rows, columns).T)
            basis = [kb.column(j) for j in range(kb.cols)]
        ent = {(k, i): v for k, vec in enumerate(basis) for i, v in vec.items()}
        return len(basis), Mat.from_entries(field, len(basis), rows, ent)
    ech = SparseEchelon(field)
    for c in columns:
        ech.add(c)
    free = [i for i in range(rows) if i not in ech.pivots]
    pos = {i: k for k, i in enumerate(free)}
    ent = {(k, i): 1 for k, i in enumerate(free)}
    for lead in ech.pivots:
        r = ech.row(lead)
        r.pop(lead)
        for i, v in ech.full_reduce(r).items():
            ent[pos[i], lead] = -v
    return len(free), Mat.from_entries(field, len(free), rows, ent)


def sparse_rank(field: Field, vectors: Iterable[Mapping[int, object]]) -> int:
    vectors = list(vectors)
    if vectors and field.p != 2:
        rows = 1 + max((max(v) for v in vectors if v), default=0)
        if rows * len(vectors) <= DENSE_LIMIT:
            return rank(Mat.from_columns(field, rows, vectors))
    ech = SparseEchelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


#: Mersenne prime used to bound ranks of integral matrices from below.
CERT_PRIME = (1 << 61) - 1


def integral(vec: Mapping[int, Fraction]) -> dict[int, int]:
    """Clear denominators of a rational vector (same span)."""
    vec = {i: _as_fraction(v) for i, v in vec.items() if v}
    den = 1
    for v in vec.values():
        den = den * v.denominator // _gcd(den, v.denominator)
    return {i: int(v * den) for i, v in vec.items()}


def _as_fraction(x) -> Fraction:
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# kernels of sparse columns


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """The fraction r/s ≡ a (mod m) with |r|, s <= sqrt(m/2), if it exists."""
    a %= m
    bound = int((m // 2) ** 0.5)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if _gcd(abs(r1), s1) != 1:
        return None
    return Fraction(r1, s1)


def _apply_columns(columns: Sequence[Mapping[int, object]], vec: Mapping[int, object], p: int) -> dict:
    out: dict = {}
    for j, c in vec.items():
        for i, a in columns[j].items():
            v = out.get(i, 0) + c * a
            if p:
                v %= p
            out[i] = v
    return {i: v for i, v in out.items() if v}


def sparse_kernel(field: Field, rows: int, columns: Sequence[Mapping[int, object]]) -> list[dict]:
    """Basis of the kernel of the matrix with the given sparse columns.

    The basis is the RREF-derived one (identity on free columns), scaled to
    integers over Q.  Over Q it is found modulo a 61-bit prime, lifted by
    rational reconstruction and verified exactly; on any failure the exact
    dense elimination is used instead.
    """
    vecs = _modular_kernel(field, rows, columns)
    if vecs is None:
        return _dense_kernel(field, rows, columns)
    if field.p:
        return vecs
    return [integral(v) for v in vecs]


def _kernel_mod(rows: int, columns: Sequence[Mapping[int, object]], p: int) -> list[dict]:
    """RREF kernel basis modulo ``p`` (entries of ``columns`` are ints or rationals)."""
    ncols = len(columns)
    mat = flint.nmod_mat(rows, ncols, p)
    for j, col in enumerate(columns):
        for i, v in col.items():
            if isinstance(v, int):
                mat[i, j] = v % p
            else:
                v = _as_fraction(v)
                mat[i, j] = v.numerator * pow(v.denominator, -1, p) % p
    # flint puts the basis (identity on the free columns) in the first `nullity` columns
    null, nullity = mat.nullspace()
    out = []
    for c in range(nullity):
        vec = {}
        for j in range(ncols):
            v = int(null[j, c])
            if v:
                vec[j] = v
        out.append(vec)
    return out


def _lift_primes():
    p = CERT_PRIME
    while True:
        yield p
        p -= 2
        while not flint.fmpz(p).is_prime():
            p -= 2


def _modular_kernel(field: Field, rows: int, columns: Sequence[Mapping[int, object]],
                    max_primes: int = 8) -> list[dict] | None:
    """RREF kernel basis, or None when no lift from a few primes verifies.

    Over Q the residues for successive 61-bit primes are combined by CRT until
    rational reconstruction gives vectors that lie in the kernel exactly.
    """
    ncols = len(columns)
    if ncols == 0:
        return []
    if rows == 0:
        return [{j: 1} for j in range(ncols)]
    if field.p:
        cols = [{i: int(field(v)) for i, v in col.items()} for col in columns]
        return _kernel_mod(rows, cols, field.p)
    # exact check in integers: rows of the matrix are scaled to clear denominators
    row_den: dict[int, int] = {}
    for col in columns:
        for i, v in col.items():
            if not isinstance(v, int):
                d = _as_fraction(v).denominator
                row_den[i] = row_den.get(i, 1) * d // _gcd(row_den.get(i, 1), d)
    int_cols = columns
    if row_den or any(not isinstance(v, int) for col in columns for v in col.values()):
        int_cols = [{i: int(_as_fraction(v) * row_den.get(i, 1)) for i, v in col.items()} for col in columns]
    acc: list[dict] | None = None
    modulus = 1
    for p, _ in zip(_lift_primes(), range(max_primes)):
        res = _kernel_mod(rows, int_cols, p)
        if acc is None:
            acc = res
        else:
            if [max(v) for v in res] != [max(v) for v in acc]:
                # a prime dividing some pivot: its free columns differ
                continue
            inv = pow(modulus, -1, p)
            for a, b in zip(acc, res):
                for j in set(a) | set(b):
                    x = a.get(j, 0)
                    a[j] = x + modulus * ((b.get(j, 0) - x) * inv % p)
        modulus *= p
        lifted = _reconstruct_all(acc, modulus)
        if lifted is not None and _is_kernel(rows, int_cols, lifted):
            return lifted
    return None


def _reconstruct_all(vecs: list[dict], modulus: int) -> list[dict] | None:
    out = []
    for vec in vecs:
        q = {}
        for j, v in vec.items():
            fr = rational_reconstruct(v, modulus)
            if fr is None:
                return None
            if fr:
                q[j] = fr
        out.append(q)
    return out


def _is_kernel(rows: int, int_cols: Sequence[Mapping[int, int]], vecs: list[dict]) -> bool:
    """Exact test that ``int_cols @ v == 0`` for every ``v``, as one integer product."""
    a = flint.fmpz_mat(rows, len(int_cols))
    for j, col in enumerate(int_cols):
        for i, v in col.items():
            a[i, j] = v
    b = flint.fmpz_mat(len(int_cols), len(vecs))
    for c, vec in enumerate(vecs):
        for j, v in integral(vec).items():
            b[j, c] = v
    return (a * b).is_zero()


def _dense_kernel(field: Field, rows: int, columns: Sequence[Mapping[int, object]]) -> list[dict]:
    m = Mat.from_columns(field, rows, columns)
    kb = kernel_basis(m)
    out = []
    for j in range(kb.cols):
        vec = kb.column(j)
        out.append(integral(vec) if field.p == 0 else vec)
    return out


def sparse_rank_certified(field: Field, vectors: Iterable[Mapping[int, object]], stop_at: int | None = None) -> int:
    """Rank of integral vectors; over Q the rank mod a 61-bit prime (a lower bound)."""
    ech = SparseEchelon(field if field.p else GF(CERT_PRIME))
    for v in vectors:
        ech.add(v)
        if stop_at is not None and ech.rank >= stop_at:
            break
    return ech.rank
