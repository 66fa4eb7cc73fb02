"""Independent reference computations for the tests.

Nothing here imports the package: ranks are plain Gaussian elimination over
Fractions or integers mod p, and every complex is written out from its
textbook formula.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial


def rank(rows: list[list[int]], p: int = 0) -> int:
    m = [[Fraction(v) if not p else v % p for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = (1 / m[r][c]) if not p else pow(m[r][c], p - 2, p)
        m[r] = [v * inv if not p else v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if not p else (a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def homology(dims: list[int], diffs: dict[int, list[list[int]]], degrees, p: int = 0) -> list[int]:
    """dims[n] = dim C_n; diffs[n] is the matrix of d_n: C_n -> C_{n-1} (rows C_{n-1})."""
    out = []
    for n in degrees:
        rn = rank(diffs[n], p) if n in diffs else 0
        rn1 = rank(diffs[n + 1], p) if n + 1 in diffs else 0
        out.append(dims[n] - rn - rn1)
    return out


# ---------------------------------------------------------------------------
# group homology with trivial coefficients, normalized bar complex


def bar_homology(table: list[list[int]], top: int, p: int = 0) -> list[int]:
    n = len(table)
    e = next(i for i in range(n) if all(table[i][x] == x for x in range(n)))
    nonid = [g for g in range(n) if g != e]
    cells = {k: list(itertools.product(nonid, repeat=k)) for k in range(top + 2)}
    index = {k: {c: i for i, c in enumerate(v)} for k, v in cells.items()}
    diffs = {}
    for k in range(1, top + 2):
        mat = [[0] * len(cells[k]) for _ in cells[k - 1]]
        for j, c in enumerate(cells[k]):
            faces = [c[1:]]
            for i in range(k - 1):
                faces.append(c[:i] + (table[c[i]][c[i + 1]],) + c[i + 2:])
            faces.append(c[:-1])
            for s, f in enumerate(faces):
                if e in f:
                    continue
                mat[index[k - 1][f]][j] += (-1) ** s
        diffs[k] = mat
    dims = [len(cells[k]) for k in range(top + 2)]
    return homology(dims, diffs, range(top + 1), p)


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Hochschild homology from the raw b-differential


def _mult(sc, u: dict, v: dict) -> dict:
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in enumerate(sc[i][j]):
                if c:
                    out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def hochschild_dims(sc, top: int, p: int = 0) -> list[int]:
    """HH_n(A, A) for A with structure constants sc[i][j][k], via C_n = A^{⊗ n+1}."""
    d = len(sc)
    cells = {n: list(itertools.product(range(d), repeat=n + 1)) for n in range(top + 2)}
    index = {n: {c: i for i, c in enumerate(v)} for n, v in cells.items()}
    diffs = {}
    for n in range(1, top + 2):
        mat = [[0] * len(cells[n]) for _ in cells[n - 1]]
        for j, c in enumerate(cells[n]):
            for i in range(n + 1):
                if i < n:
                    prod = _mult(sc, {c[i]: 1}, {c[i + 1]: 1})
                    for k, v in prod.items():
                        mat[index[n - 1][c[:i] + (k,) + c[i + 2:]]][j] += (-1) ** i * v
                else:
                    prod = _mult(sc, {c[n]: 1}, {c[0]: 1})
                    for k, v in prod.items():
                        mat[index[n - 1][(k,) + c[1:n]]][j] += (-1) ** n * v
        diffs[n] = mat
    dims = [len(cells[n]) for n in range(top + 2)]
    return homology(dims, diffs, range(top + 1), p)


DUAL_NUMBERS = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
GROUND = [[[1]]]


# ---------------------------------------------------------------------------
# counting morphisms


def monotone_count(m: int, n: int) -> int:
    """Monotone maps {0..m} -> {0..n}, by enumeration."""
    return sum(1 for f in itertools.product(range(n + 1), repeat=m + 1)
               if all(f[i] <= f[i + 1] for i in range(m)))


def fiber_ordered_count(m: int, n: int) -> int:
    """Set maps {0..m} -> {0..n} with a total order on each fiber."""
    total = 0
    for f in itertools.product(range(n + 1), repeat=m + 1):
        prod = 1
        for y in range(n + 1):
            prod *= factorial(f.count(y))
        total += prod
    return total


def cyclic_orders(k: int) -> int:
    """Cyclic orders on k labelled points, by enumeration of rotation classes."""
    seen = set()
    for perm in itertools.permutations(range(k)):
        r = perm.index(0)
        seen.add(perm[r:] + perm[:r])
    return len(seen)


def orders_starting_with_zero(k: int) -> int:
    return sum(1 for perm in itertools.permutations(range(k)) if perm[0] == 0)


def b_relation_matrix(n: int) -> list[list[int]]:
    """Rows: total orders of {0..n}; one column per pair of ordered blocks (F0, F1)
    with F0 ∪ F1 = {0..n}, relating the concatenations F0F1 and F1F0."""
    perms = list(itertools.permutations(range(n + 1)))
    row = {p: i for i, p in enumerate(perms)}
    cols = []
    for perm in perms:
        for cut in range(n + 2):
            a, b = perm[:cut], perm[cut:]
            col = [0] * len(perms)
            col[row[a + b]] += 1
            col[row[b + a]] -= 1
            cols.append(col)
    return [list(r) for r in zip(*cols)]
