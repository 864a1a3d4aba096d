"""Polynomials in z over a finite field, and matrices of them.

Covers encoder degree theory (column/external/internal degrees), unimodular
tests, exact products, module membership, and minimal kernel bases computed by
a degree sweep over constant block-convolution systems.

The zero polynomial's degree is the sentinel NEG_INF (never -1), so degree
sums stay well defined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import FieldElement, FieldSpec
from .matrices import Matrix

__all__ = [
    "NEG_INF",
    "Poly",
    "PolyMatrix",
    "column_degrees",
    "external_degree",
    "internal_degree",
    "is_unimodular",
    "minimal_kernel_basis",
    "column_reduce",
    "module_contains",
    "modules_equal",
]

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial, little-endian coefficients, no trailing zeros."""

    spec: FieldSpec
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1].is_zero():
            raise ValueError("trailing zero coefficient")

    @classmethod
    def from_elements(cls, spec: FieldSpec, coeffs: Sequence[FieldElement]) -> Poly:
        c = list(coeffs)
        while c and c[-1].is_zero():
            c.pop()
        return cls(spec, tuple(c))

    @classmethod
    def from_ints(cls, spec: FieldSpec, coeffs: Sequence[int | Sequence[int]]) -> Poly:
        return cls.from_elements(spec, [spec.element(c) for c in coeffs])

    @classmethod
    def zero(cls, spec: FieldSpec) -> Poly:
        return cls(spec, ())

    @classmethod
    def constant(cls, value: FieldElement) -> Poly:
        return cls.from_elements(value.spec, [value])

    @classmethod
    def z(cls, spec: FieldSpec) -> Poly:
        return cls(spec, (spec.zero(), spec.one()))

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.spec.zero()

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.from_elements(self.spec, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.from_elements(self.spec, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self) -> Poly:
        return Poly(self.spec, tuple(-c for c in self.coeffs))

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.spec)
        zero = self.spec.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly.from_elements(self.spec, out)

    def scale(self, s: FieldElement) -> Poly:
        return Poly.from_elements(self.spec, [s * c for c in self.coeffs])

    def shift(self, k: int) -> Poly:
        """Multiply by z^k (negative k demands divisibility)."""
        if k == 0 or self.is_zero():
            return self
        if k < 0:
            return self._shift_down(-k)
        zero = self.spec.zero()
        return Poly(self.spec, (zero,) * k + self.coeffs)

    def _shift_down(self, k: int) -> Poly:
        if any(not c.is_zero() for c in self.coeffs[:k]):
            raise ValueError("not divisible by z^k")
        return Poly(self.spec, self.coeffs[k:])

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        zero = self.spec.zero()
        q = [zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = other.coeffs[-1].inverse()
        while len(rem) >= len(other.coeffs) and rem:
            f = rem[-1] * inv_lead
            s = len(rem) - len(other.coeffs)
            q[s] = f
            for i, b in enumerate(other.coeffs):
                rem[s + i] = rem[s + i] - f * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly.from_elements(self.spec, q), Poly.from_elements(self.spec, rem)

    def reversed(self, at_degree: int) -> Poly:
        """Coefficient reversal z^at_degree * p(1/z); requires deg <= at_degree."""
        if self.coeffs and len(self.coeffs) - 1 > at_degree:
            raise ValueError("reversal degree smaller than the polynomial degree")
        zero = self.spec.zero()
        padded = list(self.coeffs) + [zero] * (at_degree + 1 - len(self.coeffs))
        return Poly.from_elements(self.spec, padded[::-1])

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = repr(c)
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append(f"{cs}*z" if not c.is_one() else "z")
            else:
                parts.append(f"{cs}*z^{i}" if not c.is_one() else f"z^{i}")
        return " + ".join(parts)


@dataclass(frozen=True)
class PolyMatrix:
    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared dimensions")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[Poly]]) -> PolyMatrix:
        entries = tuple(tuple(row) for row in rows)
        return cls(spec, len(entries), len(entries[0]) if entries else 0, entries)

    @classmethod
    def from_int_grid(cls, spec: FieldSpec, rows: Sequence[Sequence[Sequence]]) -> PolyMatrix:
        """Grid of little-endian coefficient lists."""
        return cls.from_rows(spec, [[Poly.from_ints(spec, e) for e in row] for row in rows])

    @classmethod
    def from_constant(cls, m: Matrix) -> PolyMatrix:
        return cls.from_rows(
            m.spec, [[Poly.constant(e) for e in row] for row in m.entries]
        )

    @classmethod
    def zero(cls, spec: FieldSpec, rows: int, cols: int) -> PolyMatrix:
        z = Poly.zero(spec)
        return cls(spec, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> PolyMatrix:
        z, o = Poly.zero(spec), Poly.constant(spec.one())
        return cls(spec, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        return self.entries[ij[0]][ij[1]]

    def column(self, j: int) -> list[Poly]:
        return [self.entries[i][j] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        return PolyMatrix(
            self.spec, self.rows, self.cols,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + PolyMatrix(
            other.spec, other.rows, other.cols,
            tuple(tuple(-e for e in row) for row in other.entries),
        )

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly.zero(self.spec)
                for t in range(self.cols):
                    if not self.entries[i][t].is_zero() and not other.entries[t][j].is_zero():
                        acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(tuple(row))
        return PolyMatrix(self.spec, self.rows, other.cols, tuple(out))

    def scale_poly(self, p: Poly) -> PolyMatrix:
        return PolyMatrix(
            self.spec, self.rows, self.cols,
            tuple(tuple(p * e for e in row) for row in self.entries),
        )

    def hstack(self, other: PolyMatrix) -> PolyMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts disagree")
        return PolyMatrix(
            self.spec, self.rows, self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.entries, other.entries)),
        )

    def select_columns(self, col_idx: Sequence[int]) -> PolyMatrix:
        return PolyMatrix(
            self.spec, self.rows, len(col_idx),
            tuple(tuple(row[j] for j in col_idx) for row in self.entries),
        )

    def permute_rows(self, perm: Sequence[int]) -> PolyMatrix:
        """Row i of the result is row perm[i] of the input."""
        if sorted(perm) != list(range(self.rows)):
            raise ValueError("not a permutation of the row indices")
        return PolyMatrix(
            self.spec, self.rows, self.cols, tuple(self.entries[perm[i]] for i in range(self.rows))
        )

    def max_degree(self) -> int | float:
        return max((e.degree for row in self.entries for e in row), default=NEG_INF)

    def coefficient_matrix(self, i: int) -> Matrix:
        return Matrix.from_rows(
            self.spec, [[e.coeff(i) for e in row] for row in self.entries]
        )

    def det(self) -> Poly:
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        n = self.rows
        if n == 0:
            return Poly.constant(self.spec.one())
        memo: dict[tuple[int, ...], Poly] = {(): Poly.constant(self.spec.one())}

        def rec(cols: tuple[int, ...]) -> Poly:
            got = memo.get(cols)
            if got is not None:
                return got
            i = n - len(cols)
            acc = Poly.zero(self.spec)
            for idx, c in enumerate(cols):
                e = self.entries[i][c]
                if not e.is_zero():
                    term = e * rec(cols[:idx] + cols[idx + 1 :])
                    acc = acc - term if idx % 2 else acc + term
            memo[cols] = acc
            return acc

        return rec(tuple(range(n)))

    def rank(self) -> int:
        """Rank over the rational function field, by fraction-free elimination."""
        work = [[e for e in row] for row in self.entries]
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not work[i][c].is_zero()), None)
            if piv is None:
                continue
            work[r], work[piv] = work[piv], work[r]
            for i in range(r + 1, self.rows):
                if not work[i][c].is_zero():
                    f1, f2 = work[r][c], work[i][c]
                    work[i] = [f1 * work[i][j] - f2 * work[r][j] for j in range(self.cols)]
            r += 1
        return r


# ---------------------------------------------------------------------------
# encoder degree theory
# ---------------------------------------------------------------------------

def column_degrees(g: PolyMatrix) -> list[int | float]:
    """Per-column maxima of entry degrees; a zero column reports NEG_INF."""
    return [
        max((g.entries[i][j].degree for i in range(g.rows)), default=NEG_INF)
        for j in range(g.cols)
    ]


def external_degree(g: PolyMatrix) -> int | float:
    return sum(column_degrees(g))


def internal_degree(g: PolyMatrix) -> int | float:
    """Highest degree over the full-size (cols x cols) minors."""
    if g.cols > g.rows:
        raise ValueError("internal degree needs cols <= rows")
    best: int | float = NEG_INF
    for rows in itertools.combinations(range(g.rows), g.cols):
        sub = PolyMatrix(g.spec, g.cols, g.cols, tuple(g.entries[r] for r in rows))
        best = max(best, sub.det().degree)
    return best


def is_unimodular(u: PolyMatrix) -> bool:
    if u.rows != u.cols:
        raise ValueError("unimodularity needs a square matrix")
    d = u.det()
    return d.degree == 0


# ---------------------------------------------------------------------------
# minimal kernel bases
# ---------------------------------------------------------------------------

def _kernel_space_at_degree(p: PolyMatrix, d: int) -> list[list[Poly]]:
    """F-basis of {g : p @ g = 0, deg g <= d} via one constant linear system."""
    dp = int(p.max_degree()) if p.max_degree() != NEG_INF else 0
    c = p.cols
    n_unknowns = c * (d + 1)
    rows_sys: list[list[FieldElement]] = []
    zero = p.spec.zero()
    for row in range(p.rows):
        for t in range(dp + d + 1):
            eq = [zero] * n_unknowns
            for col in range(c):
                pe = p.entries[row][col]
                for i in range(d + 1):
                    j = t - i
                    if 0 <= j < len(pe.coeffs):
                        eq[col * (d + 1) + i] = eq[col * (d + 1) + i] + pe.coeffs[j]
            rows_sys.append(eq)
    sys_m = Matrix.from_rows(p.spec, rows_sys) if rows_sys else Matrix.zero(p.spec, 0, n_unknowns)
    out = []
    for v in sys_m.nullspace():
        g = [
            Poly.from_elements(p.spec, [v[col * (d + 1) + i] for i in range(d + 1)])
            for col in range(c)
        ]
        out.append(g)
    return out


def minimal_kernel_basis(p: PolyMatrix, max_degree: int | None = None) -> PolyMatrix:
    """Minimal basis of the right kernel module of p.

    Degree sweep: for d = 0, 1, ... collect kernel vectors of degree <= d,
    greedily keeping those independent over the rational function field of the
    ones already kept.  Greedy-by-degree selection yields minimal column
    degrees; the result is column reduced.
    """
    target = p.cols - p.rank()
    if target == 0:
        return PolyMatrix.zero(p.spec, p.cols, 0)
    dp = int(p.max_degree()) if p.max_degree() != NEG_INF else 0
    cap = max_degree if max_degree is not None else (dp + 1) * min(p.rows, p.cols) + 1
    chosen: list[list[Poly]] = []
    for d in range(cap + 1):
        if len(chosen) == target:
            break
        for g in _kernel_space_at_degree(p, d):
            cand = chosen + [g]
            cand_m = PolyMatrix.from_rows(
                p.spec, [[col[i] for col in cand] for i in range(p.cols)]
            )
            if cand_m.rank() == len(cand):
                chosen.append(g)
                if len(chosen) == target:
                    break
    if len(chosen) != target:
        raise ArithmeticError(
            f"kernel basis incomplete at degree cap {cap}: found {len(chosen)} of {target}"
        )
    basis = PolyMatrix.from_rows(p.spec, [[col[i] for col in chosen] for i in range(p.cols)])
    return column_reduce(basis)


def _leading_coefficient_matrix(g: PolyMatrix) -> Matrix:
    degs = column_degrees(g)
    cols = []
    for j, d in enumerate(degs):
        if d == NEG_INF:
            cols.append([g.spec.zero()] * g.rows)
        else:
            cols.append([g.entries[i][j].coeff(int(d)) for i in range(g.rows)])
    return Matrix.from_rows(g.spec, [[cols[j][i] for j in range(g.cols)] for i in range(g.rows)])


def column_reduce(g: PolyMatrix) -> PolyMatrix:
    """Unimodular column operations until the leading-coefficient matrix has
    full column rank.  Deterministic: the reduced column is always the one of
    highest degree among a dependent set, lowest column index first; columns
    are finally sorted by (degree, index)."""
    work = [g.column(j) for j in range(g.cols)]
    spec = g.spec
    if any(all(e.is_zero() for e in col) for col in work):
        raise ValueError("zero column: not a basis")

    def col_degree(col: list[Poly]) -> int | float:
        return max((e.degree for e in col), default=NEG_INF)

    while True:
        degs = [col_degree(c) for c in work]
        lead_rows = []
        for j, c in enumerate(work):
            if degs[j] == NEG_INF:
                lead_rows.append([spec.zero()] * g.rows)
            else:
                lead_rows.append([e.coeff(int(degs[j])) for e in c])
        lead = Matrix.from_rows(spec, [[lead_rows[j][i] for j in range(len(work))] for i in range(g.rows)])
        null = lead.nullspace()
        if not null:
            break
        v = null[0]
        support = [j for j, x in enumerate(v) if not x.is_zero()]
        jmax = max(support, key=lambda j: (degs[j], -j))
        vmax_inv = v[jmax].inverse()
        for j in support:
            if j == jmax:
                continue
            factor = Poly.constant(v[j] * vmax_inv).shift(int(degs[jmax]) - int(degs[j]))
            work[jmax] = [a + factor * b for a, b in zip(work[jmax], work[j])]
    order = sorted(range(len(work)), key=lambda j: (col_degree(work[j]), j))
    work = [work[j] for j in order]
    return PolyMatrix.from_rows(spec, [[work[j][i] for j in range(len(work))] for i in range(g.rows)])


# ---------------------------------------------------------------------------
# module membership
# ---------------------------------------------------------------------------

def module_contains(g: PolyMatrix, v: Sequence[Poly]) -> bool:
    """Is the vector v an F[z]-combination of the columns of g?

    Requires g to have full column rank over the function field; the candidate
    combination is then unique and found by Cramer's rule on a nonsingular
    row selection, followed by verification on every row.
    """
    if len(v) != g.rows:
        raise ValueError("vector length disagrees with the row count")
    k = g.cols
    if k == 0:
        return all(e.is_zero() for e in v)
    for rows in itertools.combinations(range(g.rows), k):
        sub = PolyMatrix(g.spec, k, k, tuple(g.entries[r] for r in rows))
        den = sub.det()
        if den.is_zero():
            continue
        ws = []
        for i in range(k):
            rep = PolyMatrix(
                g.spec, k, k,
                tuple(
                    tuple(v[rows[r]] if j == i else sub.entries[r][j] for j in range(k))
                    for r in range(k)
                ),
            )
            num = rep.det()
            if num.is_zero():
                ws.append(Poly.zero(g.spec))
                continue
            quot, rem = num.divmod(den)
            if not rem.is_zero():
                return False
            ws.append(quot)
        for r in range(g.rows):
            acc = Poly.zero(g.spec)
            for i in range(k):
                acc = acc + g.entries[r][i] * ws[i]
            if not (acc - v[r]).is_zero():
                return False
        return True
    raise ValueError("columns are dependent over the function field")


def modules_equal(g1: PolyMatrix, g2: PolyMatrix) -> bool:
    """Mutual membership of all columns: same generated F[z]-module."""
    if g1.rows != g2.rows:
        raise ValueError("ambient ranks disagree")
    return all(module_contains(g2, g1.column(j)) for j in range(g1.cols)) and all(
        module_contains(g1, g2.column(j)) for j in range(g2.cols)
    )
