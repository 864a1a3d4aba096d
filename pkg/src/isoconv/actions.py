"""Group actions on I/S/O representations.

Three kinds act on a system (A, B, C, D):

  state        S:  (S^-1 A S, S^-1 B, C S, D)
  parity       Q:  (A, B Q, C, D Q)
  information  H:  (A, B, H^-1 C, H^-1 D)

The user supplies the matrix as written in the formulas; inverses are taken
internally, so applying an action followed by its inverse restores the system
exactly.  Actions of different kinds commute; same-kind actions compose by
the matrix product in application order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .matrices import Matrix
from .systems import IsoSystem

__all__ = ["ActionSpec", "apply_action", "compose_actions", "invert_action", "KINDS"]

KINDS = ("state", "parity", "information")


@dataclass(frozen=True)
class ActionSpec:
    kind: str
    matrix: Matrix

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.matrix.rows != self.matrix.cols:
            raise ValueError("action matrix must be square")
        if self.matrix.rank() != self.matrix.rows:
            raise ValueError("action matrix must be invertible")


def _expected_size(system: IsoSystem, kind: str) -> int:
    return {
        "state": system.delta,
        "parity": system.k,
        "information": system.n - system.k,
    }[kind]


def apply_action(system: IsoSystem, act: ActionSpec) -> IsoSystem:
    if act.matrix.rows != _expected_size(system, act.kind):
        raise ValueError(
            f"{act.kind} action needs a {_expected_size(system, act.kind)}-square matrix"
        )
    m = act.matrix
    if act.kind == "state":
        m_inv = m.inverse()
        return IsoSystem(m_inv @ system.A @ m, m_inv @ system.B, system.C @ m, system.D)
    if act.kind == "parity":
        return IsoSystem(system.A, system.B @ m, system.C, system.D @ m)
    m_inv = m.inverse()
    return IsoSystem(system.A, system.B, m_inv @ system.C, m_inv @ system.D)


def compose_actions(actions: Sequence[ActionSpec]) -> list[ActionSpec]:
    """Normalize a sequence of actions applied left to right into at most one
    action per kind, ordered (state, parity, information).

    Same-kind actions multiply in application order for every kind: applying
    M1 then M2 acts like the single matrix M1 @ M2 (for information actions
    the inverses compose as (M1 M2)^-1 = M2^-1 M1^-1 on the left).
    Cross-kind actions commute, so the normalized order is equivalent.
    """
    merged: dict[str, Matrix] = {}
    for act in actions:
        if act.kind in merged:
            merged[act.kind] = merged[act.kind] @ act.matrix
        else:
            merged[act.kind] = act.matrix
    return [ActionSpec(kind, merged[kind]) for kind in KINDS if kind in merged]


def invert_action(act: ActionSpec) -> ActionSpec:
    return ActionSpec(act.kind, act.matrix.inverse())
