"""Dense exact linear algebra over a finite field.

Matrices are immutable; all operations return new values.  Pivoting picks the
first nonzero entry (arithmetic is exact, so there is no numerical concern).
Minor enumeration is bounded by an explicit budget instead of hanging on
large inputs.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .fields import FieldElement, FieldSpec

__all__ = [
    "Matrix",
    "SupportPattern",
    "SolveResult",
    "SuperregularReport",
    "MinorBudgetExceeded",
    "nontrivial_minor_indices",
    "is_superregular",
    "DEFAULT_MINOR_BUDGET",
]

DEFAULT_MINOR_BUDGET = 10_000_000
_BUDGET_ENV = "ISOCONV_MINOR_BUDGET"


def minor_budget() -> int:
    raw = os.environ.get(_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_MINOR_BUDGET


class MinorBudgetExceeded(RuntimeError):
    """Raised when a minor enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class Matrix:
    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared dimensions")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[FieldElement]]) -> Matrix:
        entries = tuple(tuple(row) for row in rows)
        return cls(spec, len(entries), len(entries[0]) if entries else 0, entries)

    @classmethod
    def from_ints(cls, spec: FieldSpec, rows: Sequence[Sequence[int | Sequence[int]]]) -> Matrix:
        return cls.from_rows(spec, [[spec.element(v) for v in row] for row in rows])

    @classmethod
    def zero(cls, spec: FieldSpec, rows: int, cols: int) -> Matrix:
        z = spec.zero()
        return cls(spec, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> Matrix:
        z, o = spec.zero(), spec.one()
        return cls(spec, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        return self.entries[ij[0]][ij[1]]

    def row(self, i: int) -> tuple[FieldElement, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def to_ints(self) -> list[list[int | list[int]]]:
        if self.spec.r == 1:
            return [[e.coeffs[0] for e in row] for row in self.entries]
        return [[list(e.coeffs) for e in row] for row in self.entries]

    # -- algebra ----------------------------------------------------------------

    def _same_field(self, other: Matrix) -> None:
        if self.spec is not other.spec and self.spec != other.spec:
            raise ValueError("matrices over different fields")

    def __add__(self, other: Matrix) -> Matrix:
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        return Matrix(
            self.spec,
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: Matrix) -> Matrix:
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in subtraction")
        return Matrix(
            self.spec,
            self.rows,
            self.cols,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self) -> Matrix:
        return Matrix(
            self.spec, self.rows, self.cols,
            tuple(tuple(-a for a in row) for row in self.entries),
        )

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        zero = self.spec.zero()
        out = []
        for i in range(self.rows):
            row = []
            left = self.entries[i]
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    lt = left[t]
                    if not lt.is_zero():
                        acc = acc + lt * other.entries[t][j]
                row.append(acc)
            out.append(tuple(row))
        return Matrix(self.spec, self.rows, other.cols, tuple(out))

    def scale(self, s: FieldElement) -> Matrix:
        return Matrix(
            self.spec, self.rows, self.cols,
            tuple(tuple(s * a for a in row) for row in self.entries),
        )

    def transpose(self) -> Matrix:
        return Matrix(
            self.spec, self.cols, self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def hstack(self, other: Matrix) -> Matrix:
        self._same_field(other)
        if self.rows != other.rows:
            raise ValueError("row counts disagree")
        return Matrix(
            self.spec, self.rows, self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.entries, other.entries)),
        )

    def vstack(self, other: Matrix) -> Matrix:
        self._same_field(other)
        if self.cols != other.cols:
            raise ValueError("column counts disagree")
        return Matrix(self.spec, self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
        return Matrix(
            self.spec, len(row_idx), len(col_idx),
            tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx),
        )

    def select_columns(self, col_idx: Sequence[int]) -> Matrix:
        return self.submatrix(range(self.rows), col_idx)

    # -- elimination ------------------------------------------------------------

    def _echelon(self, augment: Matrix | None = None) -> tuple[list[list[FieldElement]], list[int], list[list[FieldElement]] | None]:
        work = [list(row) for row in self.entries]
        aug = [list(row) for row in augment.entries] if augment is not None else None
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not work[i][c].is_zero()), None)
            if piv is None:
                continue
            work[r], work[piv] = work[piv], work[r]
            if aug is not None:
                aug[r], aug[piv] = aug[piv], aug[r]
            inv = work[r][c].inverse()
            work[r] = [inv * x for x in work[r]]
            if aug is not None:
                aug[r] = [inv * x for x in aug[r]]
            for i in range(self.rows):
                if i != r and not work[i][c].is_zero():
                    f = work[i][c]
                    work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                    if aug is not None:
                        aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return work, pivots, aug

    def rank(self) -> int:
        _, pivots, _ = self._echelon()
        return len(pivots)

    def inverse(self) -> Matrix:
        if self.rows != self.cols:
            raise ValueError("only square matrices invert")
        work, pivots, aug = self._echelon(Matrix.identity(self.spec, self.rows))
        if len(pivots) != self.rows:
            raise ZeroDivisionError("matrix is singular")
        assert aug is not None
        return Matrix.from_rows(self.spec, aug)

    def det(self) -> FieldElement:
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        n = self.rows
        if n == 0:
            return self.spec.one()
        if n <= 8:
            return _det_laplace(self)
        work = [list(row) for row in self.entries]
        det = self.spec.one()
        for c in range(n):
            piv = next((i for i in range(c, n) if not work[i][c].is_zero()), None)
            if piv is None:
                return self.spec.zero()
            if piv != c:
                work[c], work[piv] = work[piv], work[c]
                det = -det
            det = det * work[c][c]
            inv = work[c][c].inverse()
            for i in range(c + 1, n):
                if not work[i][c].is_zero():
                    f = work[i][c] * inv
                    work[i] = [x - f * y for x, y in zip(work[i], work[c])]
        return det

    def nullspace(self) -> list[tuple[FieldElement, ...]]:
        """Basis vectors of the right kernel, deterministic order."""
        work, pivots, _ = self._echelon()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        zero, one = self.spec.zero(), self.spec.one()
        for fc in free:
            v = [zero] * self.cols
            v[fc] = one
            for i, pc in enumerate(pivots):
                v[pc] = -work[i][fc]
            basis.append(tuple(v))
        return basis


def _det_laplace(m: Matrix) -> FieldElement:
    """Division-free determinant by column-subset dynamic programming."""
    n = m.rows
    zero = m.spec.zero()
    memo: dict[tuple[int, ...], FieldElement] = {(): m.spec.one()}

    def rec(cols: tuple[int, ...]) -> FieldElement:
        got = memo.get(cols)
        if got is not None:
            return got
        i = n - len(cols)
        acc = zero
        sign_flip = False
        for idx, c in enumerate(cols):
            e = m.entries[i][c]
            if not e.is_zero():
                term = e * rec(cols[:idx] + cols[idx + 1 :])
                acc = acc - term if sign_flip else acc + term
            sign_flip = not sign_flip
        memo[cols] = acc
        return acc

    return rec(tuple(range(n)))


@dataclass(frozen=True)
class SolveResult:
    """Exact solution set of M x = rhs."""

    consistent: bool
    particular: Matrix | None
    kernel: list[tuple[FieldElement, ...]]

    @property
    def unique(self) -> bool:
        return self.consistent and not self.kernel


def solve(m: Matrix, rhs: Matrix) -> SolveResult:
    if m.rows != rhs.rows:
        raise ValueError("rhs row count disagrees with the matrix")
    work, pivots, aug = m._echelon(rhs)
    assert aug is not None
    # rows beyond the pivot count must have zero right-hand side
    for i in range(len(pivots), m.rows):
        if any(not x.is_zero() for x in aug[i]):
            return SolveResult(False, None, [])
    zero = m.spec.zero()
    part = [[zero] * rhs.cols for _ in range(m.cols)]
    for i, pc in enumerate(pivots):
        part[pc] = list(aug[i])
    return SolveResult(True, Matrix.from_rows(m.spec, part) if m.cols else
                       Matrix(m.spec, 0, rhs.cols, ()), m.nullspace())


# ---------------------------------------------------------------------------
# support patterns, structural minors, superregularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportPattern:
    """True where an entry is structurally free, False where the matrix class
    forces a zero."""

    rows: int
    cols: int
    mask: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        if len(self.mask) != self.rows or any(len(r) != self.cols for r in self.mask):
            raise ValueError("mask does not match declared dimensions")

    @classmethod
    def full(cls, rows: int, cols: int) -> SupportPattern:
        return cls(rows, cols, tuple(tuple(True for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_mask(cls, mask: Sequence[Sequence[bool]]) -> SupportPattern:
        t = tuple(tuple(bool(x) for x in row) for row in mask)
        return cls(len(t), len(t[0]) if t else 0, t)

    def has_transversal(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> bool:
        """Bipartite perfect matching of the chosen rows into the chosen
        columns inside the support: exists iff the minor is not identically
        zero as a polynomial in the free entries."""
        match: dict[int, int] = {}

        def augment(ri: int, seen: set[int]) -> bool:
            for cj in col_idx:
                if self.mask[ri][cj] and cj not in seen:
                    seen.add(cj)
                    if cj not in match or augment(match[cj], seen):
                        match[cj] = ri
                        return True
            return False

        return all(augment(ri, set()) for ri in row_idx)


def nontrivial_minor_indices(
    pattern: SupportPattern, size: int, budget: int | None = None
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All size x size index pairs whose minor is not trivially zero, in
    lexicographic order (row set, then column set)."""
    if size > min(pattern.rows, pattern.cols):
        raise ValueError("size exceeds the matrix dimensions")
    limit = budget if budget is not None else minor_budget()
    seen = 0
    for row_idx in itertools.combinations(range(pattern.rows), size):
        for col_idx in itertools.combinations(range(pattern.cols), size):
            seen += 1
            if seen > limit:
                raise MinorBudgetExceeded(
                    f"minor enumeration exceeded budget of {limit} candidates"
                )
            if pattern.has_transversal(row_idx, col_idx):
                yield row_idx, col_idx


@dataclass(frozen=True)
class SuperregularReport:
    ok: bool
    witness: tuple[int, tuple[int, ...], tuple[int, ...]] | None
    minors_checked: int

    def __bool__(self) -> bool:
        return self.ok


def is_superregular(
    m: Matrix, pattern: SupportPattern | None = None, budget: int | None = None
) -> SuperregularReport:
    """Check that every non-trivially-zero minor of every size is nonzero.

    On failure the witness is the smallest offender: (size, row set, column
    set), with sets in lexicographic order.
    """
    if pattern is None:
        pattern = SupportPattern.full(m.rows, m.cols)
    if (pattern.rows, pattern.cols) != (m.rows, m.cols):
        raise ValueError("pattern does not match the matrix dimensions")
    limit = budget if budget is not None else minor_budget()
    examined = 0
    checked = 0
    for size in range(1, min(m.rows, m.cols) + 1):
        for row_idx in itertools.combinations(range(m.rows), size):
            for col_idx in itertools.combinations(range(m.cols), size):
                examined += 1
                if examined > limit:
                    raise MinorBudgetExceeded(
                        f"superregularity check exceeded budget of {limit} candidates"
                    )
                if not pattern.has_transversal(row_idx, col_idx):
                    continue
                checked += 1
                if m.submatrix(row_idx, col_idx).det().is_zero():
                    return SuperregularReport(False, (size, row_idx, col_idx), checked)
    return SuperregularReport(True, None, checked)
