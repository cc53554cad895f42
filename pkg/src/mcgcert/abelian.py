"""Abelian invariants of finite presentations through integer Smith normal form.

Matrices are plain lists of lists of Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import McgError, Word


class UnknownGenerator(McgError):
    def __init__(self, symbol, relation: str = ""):
        where = f" in {relation}" if relation else ""
        super().__init__(f"generator {symbol}{where} is not in the generator list")
        self.symbol = symbol


@dataclass(frozen=True)
class AbelianInvariants:
    torsion: tuple
    free_rank: int

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list, b: list) -> list:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def relator_row(w: Word, index: dict, label: str = "") -> list:
    row = [0] * len(index)
    for letter in w:
        j = index.get(letter.symbol)
        if j is None:
            raise UnknownGenerator(letter.symbol, label)
        row[j] += letter.exponent
    return row


def relation_matrix(presentation, generators) -> list:
    """Exponent sums of each relator lhs rhs^-1 (rows) over ``generators`` (columns).

    ``presentation`` holds relation instances or bare relator words.
    """
    index = {s: j for j, s in enumerate(generators)}
    rows = []
    for rel in presentation:
        if isinstance(rel, Word):
            rows.append(relator_row(rel, index))
        else:
            rows.append(relator_row(rel.relator(), index, getattr(rel, "id", "")))
    return rows


def smith_normal_form(m: list):
    """Return (U, D, V) with U m V = D, U and V unimodular, D diagonal with d1 | d2 | ..."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(r) for r in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(rows, cols)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                q = d[i][t] // d[t][t]
                if q:
                    add_row(t, i, -q)
                if d[i][t]:
                    swap_rows(t, i)
                    done = False
            for j in range(t + 1, cols):
                q = d[t][j] // d[t][t]
                if q:
                    add_col(t, j, -q)
                if d[t][j]:
                    swap_cols(t, j)
                    done = False
            if not done:
                continue
            # the pivot must divide everything below and to the right
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            negate_row(t)
    return u, d, v


def diagonal(d: list) -> list:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def invariants_of_matrix(m: list, cols: int | None = None) -> AbelianInvariants:
    if cols is None:
        cols = len(m[0]) if m else 0
    if not m:
        return AbelianInvariants((), cols)
    _, d, _ = smith_normal_form(m)
    diag = [x for x in diagonal(d) if x]
    return AbelianInvariants(tuple(x for x in diag if x > 1), cols - len(diag))


def abelian_invariants(presentation, generators) -> AbelianInvariants:
    generators = list(generators)
    return invariants_of_matrix(relation_matrix(presentation, generators), len(generators))


def format_invariants(inv: AbelianInvariants) -> str:
    return str(inv)
