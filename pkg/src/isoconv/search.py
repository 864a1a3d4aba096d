"""Randomized discovery of systems, code families via group actions,
code-equivalence testing, and empirical probing of the diagonal-subgroup
question for MDP preservation.

Every randomized routine is driven by an explicitly seeded random.Random
(Mersenne Twister) and logs (seed, candidate index) so discoveries replay.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .actions import ActionSpec, apply_action
from .analysis import (
    build_windows,
    default_window,
    is_gdp,
    is_mdp_minors,
    is_output_observable,
    toeplitz_support,
    window_support,
)
from .fields import FieldSpec
from .matrices import Matrix, is_superregular
from .polys import PolyMatrix, module_contains
from .systems import CodeHandle, IsoSystem, is_observable, is_reachable

__all__ = [
    "SearchCriteria",
    "SUPPORTED_FLAGS",
    "random_system",
    "random_invertible",
    "generate_family",
    "EquivalenceVerdict",
    "are_equivalent",
    "conjecture_probe",
    "FlagRegression",
]

SUPPORTED_FLAGS = (
    "reachable",
    "observable",
    "output_observable",
    "gdp",
    "mdp_minors",
    "superregular_TL",
)


class FlagRegression(AssertionError):
    """A proposition-backed invariant failed after a group action: this is a
    software defect, not a data condition."""


@dataclass(frozen=True)
class SearchCriteria:
    field: FieldSpec
    n: int
    k: int
    delta: int
    flags: frozenset[str] = frozenset()
    budget: int = 1000
    seed: int = 0
    window: int | None = None

    def __post_init__(self) -> None:
        unknown = self.flags - set(SUPPORTED_FLAGS)
        if unknown:
            raise ValueError(f"unsupported flags: {sorted(unknown)}")
        if not 0 < self.k < self.n or self.delta < 1:
            raise ValueError("need 0 < k < n and delta >= 1")


def check_flag(system: IsoSystem, flag: str, L: int | None = None) -> bool:
    L = L if L is not None else default_window(system)
    if flag == "reachable":
        return is_reachable(system)
    if flag == "observable":
        return is_observable(system)
    if flag == "output_observable":
        return is_output_observable(system, L)
    if flag == "gdp":
        return bool(is_gdp(system, L))
    if flag == "mdp_minors":
        return not system.D.is_zero() and is_mdp_minors(system, L)
    if flag == "superregular_TL":
        win = build_windows(system, L)
        pattern = window_support(system.delta, system.n - system.k, system.k, L)
        return bool(is_superregular(win.t, pattern))
    raise ValueError(f"unknown flag {flag!r}")


def _random_matrix(spec: FieldSpec, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix.from_rows(
        spec, [[spec.random_element(rng) for _ in range(cols)] for _ in range(rows)]
    )


def random_invertible(spec: FieldSpec, size: int, rng: random.Random) -> Matrix:
    while True:
        m = _random_matrix(spec, size, size, rng)
        if m.rank() == size:
            return m


def random_system(criteria: SearchCriteria) -> Iterator[tuple[int, IsoSystem]]:
    """Deterministic seeded stream of (candidate index, system) pairs passing
    the criteria flags; at most `budget` candidates are drawn."""
    rng = random.Random(criteria.seed)
    spec = criteria.field
    delta, k, nk = criteria.delta, criteria.k, criteria.n - criteria.k
    for idx in range(criteria.budget):
        system = IsoSystem(
            A=_random_matrix(spec, delta, delta, rng),
            B=_random_matrix(spec, delta, k, rng),
            C=_random_matrix(spec, nk, delta, rng),
            D=_random_matrix(spec, nk, k, rng),
        )
        if all(check_flag(system, f, criteria.window) for f in sorted(criteria.flags)):
            yield idx, system


# flags whose ranks are provably preserved by every action kind
_PROPOSITION_FLAGS = ("reachable", "observable", "output_observable")


def generate_family(
    system: IsoSystem,
    actions: Sequence[ActionSpec],
    L: int | None = None,
) -> list[tuple[ActionSpec, IsoSystem, dict[str, bool]]]:
    """Apply each action and re-verify the flags.

    Rank-based flags (reachability, observability, output observability) are
    invariant by proposition; a regression there raises FlagRegression.  The
    subset-based gdp and minor-based mdp flags are re-computed and reported,
    since non-diagonal actions may legitimately change them.
    """
    if not (is_reachable(system) and is_observable(system)):
        raise ValueError("family generation starts from a reachable, observable system")
    L = L if L is not None else default_window(system)
    base = {f: check_flag(system, f, L) for f in _PROPOSITION_FLAGS}
    out = []
    for act in actions:
        transformed = apply_action(system, act)
        flags = {f: check_flag(transformed, f, L) for f in _PROPOSITION_FLAGS}
        for f in _PROPOSITION_FLAGS:
            if base[f] and not flags[f]:
                raise FlagRegression(
                    f"{f} regressed under a {act.kind} action; this violates a "
                    "proved invariance and indicates an implementation bug"
                )
        flags["gdp"] = bool(is_gdp(transformed, L))
        flags["mdp_minors"] = (
            not transformed.D.is_zero() and is_mdp_minors(transformed, L)
        )
        out.append((act, transformed, flags))
    return out


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    permutation: tuple[int, ...] | None = None
    separating_word: PolyMatrix | None = None
    separating_from: str | None = None  # which code the word belongs to

    def __bool__(self) -> bool:
        return self.equivalent


def _permuted(g: PolyMatrix, perm: Sequence[int]) -> PolyMatrix:
    """Row i of the result is row perm[i] of g (coordinate relabeling)."""
    return g.permute_rows(list(perm))


def are_equivalent(c1: CodeHandle, c2: CodeHandle, max_n: int = 6) -> EquivalenceVerdict:
    """Equivalence under coordinate permutations, by mutual module membership.

    Returns the first working permutation, else a separating codeword: a word
    of one code no permutation of which belongs to the other.
    """
    if (c1.n, c1.k) != (c2.n, c2.k):
        raise ValueError("codes must share (n, k)")
    n = c1.n
    if n > max_n:
        raise ValueError(f"exact permutation enumeration capped at n = {max_n}")
    g1, g2 = c1.encoder, c2.encoder
    for perm in itertools.permutations(range(n)):
        pg1 = _permuted(g1, perm)
        inv = [0] * n
        for i, s in enumerate(perm):
            inv[s] = i
        pg2 = _permuted(g2, inv)
        if all(module_contains(g2, pg1.column(j)) for j in range(g1.cols)) and all(
            module_contains(g1, pg2.column(j)) for j in range(g2.cols)
        ):
            return EquivalenceVerdict(True, perm, None, None)
    # separating word: try the generators of each code
    for src_name, src, dst in (("second", g2, g1), ("first", g1, g2)):
        for j in range(src.cols):
            col = src.column(j)
            vec = PolyMatrix.from_rows(src.spec, [[p] for p in col])
            if all(
                not module_contains(dst, _permuted(vec, perm).column(0))
                for perm in itertools.permutations(range(n))
            ):
                return EquivalenceVerdict(False, None, vec, src_name)
    return EquivalenceVerdict(False, None, None, None)


def conjecture_probe(
    system: IsoSystem,
    trials: int,
    seed: int,
    kind: str = "parity",
    L: int | None = None,
    diagonal_control: bool = False,
    closure_cap: int = 512,
) -> dict:
    """Empirical evidence only: sample random invertible non-diagonal action
    matrices and tally how often the transformed F_L stays superregular.

    Any surviving matrix is recorded as a candidate together with a closure
    check over the cyclic subgroup it generates (capped).  Survivors do not
    refute the diagonal-subgroup conjecture unless a strictly larger subgroup
    survives en bloc.
    """
    if kind not in ("parity", "information"):
        raise ValueError("probe kinds are parity and information")
    L = L if L is not None else default_window(system)
    if not is_mdp_minors(system, L):
        raise ValueError("probe starts from a system whose F_L is superregular")
    spec = system.spec
    size = system.k if kind == "parity" else system.n - system.k
    rng = random.Random(seed)
    pattern = toeplitz_support(system.n - system.k, system.k, L)

    def survives(m: Matrix) -> bool:
        transformed = apply_action(system, ActionSpec(kind, m))
        win = build_windows(transformed, L)
        return bool(is_superregular(win.f, pattern))

    samples = []
    survivors = []
    for idx in range(trials):
        if diagonal_control:
            m = Matrix.from_rows(
                spec,
                [
                    [
                        _nonzero_element(spec, rng) if i == j else spec.zero()
                        for j in range(size)
                    ]
                    for i in range(size)
                ],
            )
        else:
            m = random_invertible(spec, size, rng)
            if size > 1:
                while _is_diagonal(m):
                    m = random_invertible(spec, size, rng)
        ok = survives(m)
        samples.append({"index": idx, "survives": ok, "matrix": m})
        if ok and not _is_diagonal(m):
            order, closure_ok, truncated = _cyclic_closure(m, survives, closure_cap)
            survivors.append(
                {
                    "index": idx,
                    "matrix": m,
                    "cyclic_order": order,
                    "cyclic_closure_survives": closure_ok,
                    "closure_truncated": truncated,
                }
            )
    return {
        "note": "empirical evidence only; a survivor refutes nothing by itself",
        "kind": kind,
        "L": L,
        "seed": seed,
        "trials": trials,
        "diagonal_control": diagonal_control,
        "survived": sum(1 for s in samples if s["survives"]),
        "samples": samples,
        "candidates": survivors,
    }


def _nonzero_element(spec: FieldSpec, rng: random.Random):
    while True:
        e = spec.random_element(rng)
        if not e.is_zero():
            return e


def _is_diagonal(m: Matrix) -> bool:
    return all(
        m[i, j].is_zero() for i in range(m.rows) for j in range(m.cols) if i != j
    )


def _cyclic_closure(m: Matrix, survives, cap: int) -> tuple[int | None, bool, bool]:
    """Walk the cyclic group generated by m; report (order, all powers
    survive, truncated-at-cap)."""
    ident = Matrix.identity(m.spec, m.rows)
    cur = m
    power = 1
    while power <= cap:
        if cur == ident:
            return power, True, False
        if not survives(cur):
            return None, False, False
        cur = cur @ m
        power += 1
    return None, True, True
