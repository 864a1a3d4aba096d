"""Windowed decoding matrices, output observability, GDP, MDP and distances.

The window parameter defaults to L = floor(delta/k) + floor(delta/(n-k)).
Every check accepts an explicit override, because bench fixtures for small
systems are often stated at a different L than the formula value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .matrices import (
    Matrix,
    MinorBudgetExceeded,
    SupportPattern,
    is_superregular,
    minor_budget,
)
from .fields import FieldSpec
from .polys import NEG_INF, Poly, PolyMatrix
from .systems import (
    CodeHandle,
    CompletionError,
    IsoSystem,
    encode,
    forward_trajectory,
    observability_matrix,
)

__all__ = [
    "window_length",
    "WindowMatrices",
    "build_windows",
    "toeplitz_support",
    "window_support",
    "is_output_observable",
    "GdpResult",
    "is_gdp",
    "is_mdp_minors",
    "column_distance",
    "FreeDistanceEstimate",
    "free_distance_estimate",
    "singleton_bound",
    "column_bound",
    "is_mds",
    "is_mdp_distances",
    "DistanceProfile",
    "distance_profile",
    "BudgetExceeded",
]


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


def window_length(n: int, k: int, delta: int) -> int:
    """floor(delta/k) + floor(delta/(n-k))."""
    if not 0 < k < n or delta < 1:
        raise ValueError("need 0 < k < n and delta >= 1")
    return delta // k + delta // (n - k)


def default_window(system: IsoSystem) -> int:
    return max(1, window_length(system.n, system.k, system.delta))


@dataclass(frozen=True)
class WindowMatrices:
    """Omega_{L+1}(A, C), the block-Toeplitz F_L, their concatenation T_L,
    and alpha = (L+1)(n-k) - delta."""

    L: int
    omega: Matrix
    f: Matrix
    t: Matrix
    alpha: int


def build_windows(system: IsoSystem, L: int) -> WindowMatrices:
    if L < 1:
        raise ValueError("window parameter must be >= 1")
    spec = system.spec
    nk, k = system.n - system.k, system.k
    omega = observability_matrix(system.A, system.C, L + 1)
    # F blocks: D on the diagonal, C A^(i-j-1) B below, zero above
    blocks = [system.D]
    cur = system.B
    for _ in range(L):
        blocks.append(system.C @ cur)
        cur = system.A @ cur
    rows = []
    zero = spec.zero()
    for bi in range(L + 1):
        for i in range(nk):
            row = []
            for bj in range(L + 1):
                if bj > bi:
                    row.extend([zero] * k)
                else:
                    row.extend(blocks[bi - bj].row(i))
            rows.append(tuple(row))
    f = Matrix(spec, (L + 1) * nk, (L + 1) * k, tuple(rows))
    return WindowMatrices(L, omega, f, omega.hstack(f), (L + 1) * nk - system.delta)


def toeplitz_support(nk: int, k: int, L: int) -> SupportPattern:
    """Structural support of F_L: free on and below the block diagonal."""
    mask = [
        [j // k <= i // nk for j in range((L + 1) * k)]
        for i in range((L + 1) * nk)
    ]
    return SupportPattern.from_mask(mask)


def window_support(delta: int, nk: int, k: int, L: int) -> SupportPattern:
    """Structural support of T_L = [Omega | F_L]: Omega columns fully free."""
    f = toeplitz_support(nk, k, L)
    mask = [
        [True] * delta + list(f.mask[i])
        for i in range((L + 1) * nk)
    ]
    return SupportPattern.from_mask(mask)


def is_output_observable(system: IsoSystem, L: int) -> bool:
    """rank(T_l) maximal for every l = 1..L."""
    if L < 1:
        raise ValueError("window parameter must be >= 1")
    for l in range(1, L + 1):
        t = build_windows(system, l).t
        if t.rank() != min(t.rows, t.cols):
            return False
    return True


@dataclass(frozen=True)
class GdpResult:
    ok: bool
    alpha: int
    witness: tuple[int, ...] | None
    subsets_checked: int

    def __bool__(self) -> bool:
        return self.ok


def _column_block(col: int, nk: int, k: int, L: int) -> int:
    """Window block of a stacked column of [-I | F_L]: parity columns come
    first ((L+1)(n-k) of them), then the information columns."""
    split = (L + 1) * nk
    return col // nk if col < split else (col - split) // k


def _admissible(erased: Sequence[int], nk: int, k: int, L: int) -> bool:
    """Erasure-density filter: every window suffix of w blocks holds at most
    w * (n - k) erasures."""
    blocks = [_column_block(e, nk, k, L) for e in erased]
    for w in range(1, L + 1):
        if sum(1 for b in blocks if b >= L + 1 - w) > w * nk:
            return False
    return True


def is_gdp(
    system: IsoSystem,
    L: int | None = None,
    restricted: bool = False,
    budget: int | None = None,
) -> GdpResult:
    """Good Decodable Property: every admissible alpha-subset of columns of
    [-I | F_L], adjoined to Omega_{L+1}, gives a full-row-rank matrix.

    `restricted=False` (default) checks all subsets, which is stronger and
    never wrong; `restricted=True` applies the erasure-density filter.
    Returns the lexicographically first violating subset on failure.
    """
    L = L if L is not None else default_window(system)
    win = build_windows(system, L)
    if win.alpha < 0:
        raise ValueError(f"window too short: alpha = {win.alpha} < 0")
    if win.alpha == 0:
        return GdpResult(True, 0, None, 0)
    nk = system.n - system.k
    full = (L + 1) * nk
    neg_ident = -Matrix.identity(system.spec, full)
    m_if = neg_ident.hstack(win.f)
    limit = budget if budget is not None else minor_budget()
    checked = 0
    for cols in itertools.combinations(range((L + 1) * system.n), win.alpha):
        if restricted and not _admissible(cols, nk, system.k, L):
            continue
        checked += 1
        if checked > limit:
            raise BudgetExceeded(f"GDP enumeration exceeded budget of {limit} subsets")
        stacked = win.omega.hstack(m_if.select_columns(cols))
        if stacked.rank() != full:
            return GdpResult(False, win.alpha, cols, checked)
    return GdpResult(True, win.alpha, None, checked)


def is_mdp_minors(system: IsoSystem, L: int | None = None, budget: int | None = None) -> bool:
    """Structural MDP test: every non-trivially-zero minor of F_L is nonzero."""
    if system.D.is_zero():
        raise ValueError("MDP requires D != 0")
    L = L if L is not None else default_window(system)
    win = build_windows(system, L)
    pattern = toeplitz_support(system.n - system.k, system.k, L)
    return bool(is_superregular(win.f, pattern, budget))


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def _weight(m: Matrix) -> int:
    return sum(1 for row in m.entries for e in row if not e.is_zero())


def _all_input_blocks(spec: FieldSpec, k: int) -> list[Matrix]:
    return [
        Matrix.from_rows(spec, [[e] for e in tup])
        for tup in itertools.product(spec.elements(), repeat=k)
    ]


def _int_grid(m: Matrix) -> list[list[int]]:
    return [[e.coeffs[0] for e in row] for row in m.entries]


def _prime_truncation_blocks(system: IsoSystem, j: int) -> list[list[list[int]]]:
    """blocks[m] = D for m = 0 else C A^(m-1) B, as int grids (prime field)."""
    out = [_int_grid(system.D)]
    cur = system.B
    for _ in range(j):
        out.append(_int_grid(system.C @ cur))
        cur = system.A @ cur
    return out


def _column_distance_prime(system: IsoSystem, j: int) -> int:
    """Fast integer path for GF(p): weight of (u-stack, F_j u-stack)."""
    p = system.spec.p
    k, nk = system.k, system.n - system.k
    blocks = _prime_truncation_blocks(system, j)
    all_u = [tuple(t) for t in itertools.product(range(p), repeat=k)]
    nonzero_u = [u for u in all_u if any(u)]
    best: int | None = None
    for u0 in nonzero_u:
        for rest in itertools.product(all_u, repeat=j):
            inputs = (u0, *rest)
            w = sum(1 for blk in inputs for c in blk if c)
            for t in range(j + 1):
                for row in range(nk):
                    acc = 0
                    for m in range(t + 1):
                        brow = blocks[m][row]
                        ublk = inputs[t - m]
                        for c in range(k):
                            acc += brow[c] * ublk[c]
                    if acc % p:
                        w += 1
            if best is None or w < best:
                best = w
    assert best is not None
    return best


def column_distance(code: CodeHandle, j: int, budget: int | None = None) -> int:
    """j-th column distance by exhaustive enumeration of input truncations
    u_0 .. u_j with u_0 != 0 (the truncated word depends on nothing else).

    With a system attached the truncation runs through the state recursion;
    encoder-only handles convolve the encoder coefficients causally.
    """
    if j < 0:
        raise ValueError("column index must be >= 0")
    spec = code.spec
    k = code.k
    limit = budget if budget is not None else minor_budget()
    count = spec.q ** (k * (j + 1))
    if count > limit:
        raise BudgetExceeded(
            f"column distance enumeration of {count} inputs exceeds budget {limit}"
        )
    if code.system is not None and spec.r == 1:
        return _column_distance_prime(code.system, j)
    blocks = _all_input_blocks(spec, k)
    nonzero_blocks = [b for b in blocks if not b.is_zero()]
    best: int | None = None
    if code.system is not None:
        system = code.system
        for u0 in nonzero_blocks:
            for rest in itertools.product(blocks, repeat=j):
                inputs = [u0, *rest]
                outputs, _ = forward_trajectory(system, inputs)
                w = sum(_weight(u) + _weight(y) for u, y in zip(inputs, outputs))
                if best is None or w < best:
                    best = w
        assert best is not None
        return best
    g = code.encoder
    deg = int(g.max_degree()) if g.max_degree() != NEG_INF else 0
    coeff_mats = [g.coefficient_matrix(i) for i in range(deg + 1)]
    for u0 in nonzero_blocks:
        for rest in itertools.product(blocks, repeat=j):
            inputs = [u0, *rest]
            w = 0
            for t in range(j + 1):
                acc = Matrix.zero(spec, code.n, 1)
                for i, gm in enumerate(coeff_mats):
                    if i <= t:
                        acc = acc + gm @ inputs[t - i]
                w += _weight(acc)
            if best is None or w < best:
                best = w
    assert best is not None
    return best


@dataclass(frozen=True)
class FreeDistanceEstimate:
    value: int
    horizon: int
    converged: bool


def _free_distance_prime_minima(system: IsoSystem, horizon: int) -> list[int | None]:
    """Per-horizon running minima over completable inputs, integer fast path."""
    spec = system.spec
    p = spec.p
    delta, k, nk = system.delta, system.k, system.n - system.k
    ai, bi, ci, di = (
        _int_grid(system.A),
        _int_grid(system.B),
        _int_grid(system.C),
        _int_grid(system.D),
    )
    all_u = [tuple(t) for t in itertools.product(range(p), repeat=k)]
    best: int | None = None
    minima: list[int | None] = []
    for h in range(horizon + 1):
        for tup in itertools.product(all_u, repeat=h + 1):
            if h > 0 and not any(tup[-1]):
                continue
            if not any(any(b) for b in tup):
                continue
            x = (0,) * delta
            w = 0
            for ub in tup:
                w += sum(1 for c in ub if c)
                for r in range(nk):
                    acc = sum(ci[r][s] * x[s] for s in range(delta))
                    acc += sum(di[r][c] * ub[c] for c in range(k))
                    if acc % p:
                        w += 1
                x = tuple(
                    (
                        sum(ai[r][s] * x[s] for s in range(delta))
                        + sum(bi[r][c] * ub[c] for c in range(k))
                    )
                    % p
                    for r in range(delta)
                )
            pad = 0
            completable = True
            while any(x):
                if pad >= delta:
                    completable = False
                    break
                for r in range(nk):
                    if sum(ci[r][s] * x[s] for s in range(delta)) % p:
                        w += 1
                x = tuple(
                    sum(ai[r][s] * x[s] for s in range(delta)) % p for r in range(delta)
                )
                pad += 1
            if not completable:
                continue
            if best is None or w < best:
                best = w
        minima.append(best)
    return minima


def free_distance_estimate(
    code: CodeHandle, horizon: int, budget: int | None = None
) -> FreeDistanceEstimate:
    """Minimum weight over nonzero codewords generated by inputs of degree up
    to the horizon.  The converged flag is set when the running minimum was
    stable over the last two horizons and matches a stabilized column
    distance."""
    spec = code.spec
    k = code.k
    limit = budget if budget is not None else minor_budget()
    count = spec.q ** (k * (horizon + 1))
    if count > limit:
        raise BudgetExceeded(
            f"free distance enumeration of {count} inputs exceeds budget {limit}"
        )
    system = code.system
    if system is not None and spec.r == 1:
        per_horizon = _free_distance_prime_minima(system, horizon)
        best = per_horizon[-1]
        if best is None:
            raise ArithmeticError("no completable nonzero input up to this horizon")
        return _with_convergence(code, best, per_horizon, horizon, budget)
    blocks = _all_input_blocks(spec, k)
    best = None
    per_horizon = []
    for h in range(horizon + 1):
        for tup in itertools.product(blocks, repeat=h + 1):
            if h > 0 and tup[-1].is_zero():
                continue  # already covered at a smaller horizon
            if all(b.is_zero() for b in tup):
                continue
            u_vec = PolyMatrix.from_rows(
                spec,
                [
                    [Poly.from_elements(spec, [tup[t][i, 0] for t in range(h + 1)])]
                    for i in range(k)
                ],
            )
            if system is not None:
                try:
                    word = encode(system, u_vec)
                except CompletionError:
                    continue
            else:
                word = code.encoder @ u_vec
            w = _poly_weight(word)
            if best is None or w < best:
                best = w
        per_horizon.append(best)
    assert best is not None
    return _with_convergence(code, best, per_horizon, horizon, budget)


def _with_convergence(
    code: CodeHandle,
    best: int,
    per_horizon: list[int | None],
    horizon: int,
    budget: int | None,
) -> FreeDistanceEstimate:
    converged = False
    if horizon >= 1 and per_horizon[-1] == per_horizon[-2]:
        # compare against a stabilized column distance when affordable
        try:
            prev = None
            for j in range(horizon + 1):
                d = column_distance(code, j, budget)
                if prev is not None and d == prev == best:
                    converged = True
                    break
                prev = d
        except BudgetExceeded:
            converged = False
    return FreeDistanceEstimate(best, horizon, converged)


def _poly_weight(word: PolyMatrix) -> int:
    return sum(
        sum(1 for c in e.coeffs if not c.is_zero())
        for row in word.entries
        for e in row
    )


def singleton_bound(n: int, k: int, delta: int) -> int:
    """(n-k)(floor(delta/k) + 1) + delta + 1."""
    return (n - k) * (delta // k + 1) + delta + 1


def column_bound(n: int, k: int, j: int) -> int:
    """(n-k)(j+1) + 1."""
    return (n - k) * (j + 1) + 1


def is_mds(code: CodeHandle, horizon: int | None = None, budget: int | None = None) -> bool:
    system = code.system
    if system is None:
        raise ValueError("MDS test needs a system-backed code")
    bound = singleton_bound(system.n, system.k, system.delta)
    h = horizon if horizon is not None else default_window(system) + system.delta
    est = free_distance_estimate(code, h, budget)
    return est.converged and est.value == bound


def is_mdp_distances(code: CodeHandle, budget: int | None = None) -> bool:
    system = code.system
    if system is None:
        raise ValueError("MDP-by-distances needs a system-backed code")
    L = window_length(system.n, system.k, system.delta)
    for j in range(L + 1):
        if column_distance(code, j, budget) != column_bound(system.n, system.k, j):
            return False
    return True


@dataclass(frozen=True)
class DistanceProfile:
    dfree_upper: int
    dfree_estimate: int
    dfree_horizon: int
    dfree_converged: bool
    column_distances: tuple[int, ...]
    is_mds: bool
    is_mdp: bool


def distance_profile(
    code: CodeHandle, horizon: int | None = None, budget: int | None = None
) -> DistanceProfile:
    system = code.system
    if system is None:
        raise ValueError("distance profile needs a system-backed code")
    n, k, delta = system.n, system.k, system.delta
    L = window_length(n, k, delta)
    h = horizon if horizon is not None else max(L, delta) + 1
    cds = tuple(column_distance(code, j, budget) for j in range(L + 1))
    est = free_distance_estimate(code, h, budget)
    bound = singleton_bound(n, k, delta)
    return DistanceProfile(
        dfree_upper=bound,
        dfree_estimate=est.value,
        dfree_horizon=est.horizon,
        dfree_converged=est.converged,
        column_distances=cds,
        is_mds=est.converged and est.value == bound,
        is_mdp=all(cds[j] == column_bound(n, k, j) for j in range(L + 1)),
    )
