"""Erasure channel model and the sliding-window decoder.

The decoder walks the received stream one block (n symbols) at a time.  At
each step it solves the windowed equation

    Omega_{L+1}(A, C) x_t + [-I | F_L] (y-stack; u-stack) = 0

for the erased symbol values, using the state entering the window (known from
x_0 = 0 and the recursion).  A window whose system is underdetermined is
recorded as a failure; the slide continues while the leading block is known,
and when the state itself is lost the decoder scans ahead for L+1 fully known
blocks and recomputes the state from them (possible for observable systems).

Erasure positions are channel metadata, never inferred; recovered values at
non-erased positions always equal the received values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .analysis import build_windows
from .fields import FieldElement, FieldSpec
from .matrices import Matrix, solve
from .systems import IsoSystem

__all__ = [
    "ErasedWord",
    "ChannelModel",
    "DecodeReport",
    "DecodeInconsistency",
    "channel_erase",
    "decode_window",
    "decode_stream",
]


class DecodeInconsistency(RuntimeError):
    """The windowed system is inconsistent: erasure channels never corrupt
    symbols, so this signals a wrong system or a software defect."""


@dataclass(frozen=True)
class ErasedWord:
    """Received symbol stream; None marks an erased position."""

    n: int
    symbols: tuple[FieldElement | None, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.symbols) % self.n:
            raise ValueError("symbol count must be a positive multiple of n")

    @property
    def blocks(self) -> int:
        return len(self.symbols) // self.n

    def block(self, t: int) -> tuple[FieldElement | None, ...]:
        return self.symbols[t * self.n : (t + 1) * self.n]

    def erased_positions(self) -> list[int]:
        return [i for i, s in enumerate(self.symbols) if s is None]


@dataclass(frozen=True)
class ChannelModel:
    """iid: each symbol erased independently with probability epsilon.
    burst: periodic bursts of `burst_len` erased symbols separated by `gap`
    known symbols, with a seed-determined phase."""

    kind: str
    epsilon: float = 0.0
    burst_len: int = 0
    gap: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("iid", "burst"):
            raise ValueError(f"unknown channel model {self.kind!r}")
        if self.kind == "iid" and not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("erasure probability must lie in [0, 1]")
        if self.kind == "burst" and (self.burst_len < 1 or self.gap < 0):
            raise ValueError("burst model needs burst_len >= 1 and gap >= 0")


def channel_erase(
    symbols: Sequence[FieldElement], n: int, model: ChannelModel, seed: int
) -> ErasedWord:
    """Apply the channel; reproducible via Python's Mersenne Twister
    (random.Random) seeded explicitly."""
    rng = random.Random(seed)
    out: list[FieldElement | None] = list(symbols)
    if model.kind == "iid":
        for i in range(len(out)):
            if rng.random() < model.epsilon:
                out[i] = None
    else:
        period = model.burst_len + model.gap
        phase = rng.randrange(period) if period > 0 else 0
        for i in range(len(out)):
            if (i + phase) % period < model.burst_len:
                out[i] = None
    return ErasedWord(n, tuple(out))


@dataclass(frozen=True)
class DecodeReport:
    recovered: tuple[FieldElement | None, ...]
    failures: tuple[int, ...]
    states: tuple[Matrix | None, ...]
    erased_count: int
    recovered_count: int
    windows_processed: int

    @property
    def unresolved(self) -> list[int]:
        return [i for i, s in enumerate(self.recovered) if s is None]


def _window_column(n: int, nk: int, blocks: int, b: int, i: int) -> int:
    """Stream position (block b, offset i) -> column of [-I | F] whose
    stacked order is all parity rows first, then all information rows."""
    if i < nk:
        return b * nk + i
    return blocks * nk + b * (n - nk) + (i - nk)


class _WindowCache:
    def __init__(self, system: IsoSystem):
        self.system = system
        self._cache: dict[int, tuple[Matrix, Matrix]] = {}

    def get(self, L: int) -> tuple[Matrix, Matrix]:
        """(Omega_{L+1}, [-I | F_L]); L = 0 covers truncated tail windows."""
        hit = self._cache.get(L)
        if hit is None:
            if L == 0:
                omega, f = self.system.C, self.system.D
            else:
                win = build_windows(self.system, L)
                omega, f = win.omega, win.f
            neg_i = -Matrix.identity(self.system.spec, omega.rows)
            hit = (omega, neg_i.hstack(f))
            self._cache[L] = hit
        return hit


def decode_window(
    system: IsoSystem,
    L: int,
    x_t: Matrix,
    window: Sequence[FieldElement | None],
    _cache: _WindowCache | None = None,
) -> tuple[list[FieldElement], Matrix] | None:
    """Recover one window of (L+1)*n symbols given the entering state.

    Returns (recovered symbols, state after the first block) on success, or
    None when the erased columns are underdetermined.  Raises
    DecodeInconsistency when the known symbols contradict the system.
    """
    n = system.n
    if len(window) % n:
        raise ValueError("window length must be a multiple of n")
    blocks = len(window) // n
    if blocks != L + 1:
        raise ValueError("window must hold exactly (L+1) blocks")
    filled = _solve_window(system, L, x_t, window, _cache)
    if filled is None:
        return None
    u_first = Matrix.from_rows(system.spec, [[filled[n - system.k + i]] for i in range(system.k)])
    x_next = system.A @ x_t + system.B @ u_first
    return filled, x_next


def _solve_window(
    system: IsoSystem,
    L: int,
    x_t: Matrix,
    window: Sequence[FieldElement | None],
    cache: _WindowCache | None,
) -> list[FieldElement] | None:
    spec = system.spec
    n, nk = system.n, system.n - system.k
    blocks = len(window) // n
    omega, m_if = (cache or _WindowCache(system)).get(blocks - 1)
    erased: list[int] = []
    known_contrib = omega @ x_t
    rhs = [known_contrib[i, 0] for i in range(omega.rows)]
    for b in range(blocks):
        for i in range(n):
            s = window[b * n + i]
            col = _window_column(n, nk, blocks, b, i)
            if s is None:
                erased.append(col)
            else:
                for r in range(omega.rows):
                    rhs[r] = rhs[r] + m_if[r, col] * s
    if not erased:
        return [s for s in window]  # type: ignore[misc]
    m_e = m_if.select_columns(erased)
    rhs_m = Matrix.from_rows(spec, [[-v] for v in rhs])
    result = solve(m_e, rhs_m)
    if not result.consistent:
        raise DecodeInconsistency(
            "window equations are inconsistent with the received symbols"
        )
    if result.kernel:
        return None
    assert result.particular is not None
    filled: list[FieldElement] = []
    values = {col: result.particular[idx, 0] for idx, col in enumerate(erased)}
    for b in range(blocks):
        for i in range(n):
            s = window[b * n + i]
            if s is None:
                filled.append(values[_window_column(n, nk, blocks, b, i)])
            else:
                filled.append(s)
    return filled


def _reanchor_state(
    system: IsoSystem, L: int, known_blocks: Sequence[Sequence[FieldElement]],
    cache: _WindowCache,
) -> Matrix | None:
    """Solve Omega_{L+1} x = y-stack - F_L u-stack from L+1 fully known
    blocks; unique for observable systems."""
    n, nk = system.n, system.n - system.k
    omega, m_if = cache.get(len(known_blocks) - 1)
    rows = omega.rows
    rhs = [system.spec.zero()] * rows
    for b, block in enumerate(known_blocks):
        for i in range(n):
            col = _window_column(n, nk, len(known_blocks), b, i)
            for r in range(rows):
                rhs[r] = rhs[r] + m_if[r, col] * block[i]
    rhs_m = Matrix.from_rows(system.spec, [[-v] for v in rhs])
    result = solve(omega, rhs_m)
    if not result.consistent:
        raise DecodeInconsistency("clean blocks are inconsistent with the system")
    if result.kernel:
        return None
    return result.particular


def decode_stream(
    system: IsoSystem,
    L: int,
    received: ErasedWord,
    full_window_jump: bool = False,
) -> DecodeReport:
    """Decode a whole stream, sliding the (L+1)-block window one block per
    step (or a full window per step when `full_window_jump` is set)."""
    if received.n != system.n:
        raise ValueError("block size disagrees with the system")
    n = system.n
    total = received.blocks
    symbols: list[FieldElement | None] = list(received.symbols)
    states: list[Matrix | None] = [None] * (total + 1)
    failures: list[int] = []
    windows = 0
    cache = _WindowCache(system)
    x: Matrix | None = Matrix.zero(system.spec, system.delta, 1)
    t = 0
    step = (L + 1) if full_window_jump else 1
    while t < total:
        if x is None:
            # state lost: scan ahead for L+1 consecutive fully known blocks
            anchor = None
            for s in range(t, total - L):
                span = symbols[s * n : (s + L + 1) * n]
                if all(v is not None for v in span):
                    anchor = s
                    break
            if anchor is None:
                break
            blocks = [symbols[b * n : (b + 1) * n] for b in range(anchor, anchor + L + 1)]
            x = _reanchor_state(system, L, blocks, cache)  # type: ignore[arg-type]
            if x is None:
                break  # observability shortfall: nothing more can be anchored
            t = anchor
            continue
        upper = min(t + L + 1, total)
        span = symbols[t * n : upper * n]
        if any(v is None for v in span):
            windows += 1
            filled = _solve_window_var(system, x, span, upper - t, cache)
            if filled is None:
                failures.append(t)
            else:
                symbols[t * n : upper * n] = filled
        advanced = False
        for _ in range(step):
            if t >= total:
                break
            block = symbols[t * n : (t + 1) * n]
            if any(v is None for v in block):
                break
            u_t = Matrix.from_rows(
                system.spec, [[block[n - system.k + i]] for i in range(system.k)]
            )
            states[t] = x
            x = system.A @ x + system.B @ u_t
            t += 1
            advanced = True
        if not advanced:
            # the leading block stays unknown, so the state after it is lost
            states[t] = x
            x = None
            t += 1
    if x is not None and t == total:
        states[total] = x
    recovered = tuple(symbols)
    erased_count = len(received.erased_positions())
    recovered_count = sum(
        1
        for i in received.erased_positions()
        if recovered[i] is not None
    )
    return DecodeReport(
        recovered=recovered,
        failures=tuple(failures),
        states=tuple(states[: total + 1]),
        erased_count=erased_count,
        recovered_count=recovered_count,
        windows_processed=windows,
    )


def _solve_window_var(
    system: IsoSystem,
    x_t: Matrix,
    span: Sequence[FieldElement | None],
    blocks: int,
    cache: _WindowCache,
) -> list[FieldElement] | None:
    """Window solve tolerating a truncated tail window (fewer equations)."""
    if blocks < 1:
        return None
    return _solve_window(system, blocks - 1, x_t, span, cache)
