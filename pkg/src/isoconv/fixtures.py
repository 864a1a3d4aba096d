"""Bundled benchmark systems.

`ex1`: the (3, 2, 3) system over GF(3) used throughout the test suite.
`lieb`: the (5, 3, 2) system over GF(2^331) whose window matrix T_1 is
superregular; its matrices are polynomial expressions in a degree-331 field
generator a, so any element outside the prime field works and the bundled
file fixes the deterministic default modulus with a = x.
"""

from __future__ import annotations

import json
from importlib import resources

from .fields import FieldSpec, field_create
from .matrices import Matrix
from .systems import IsoSystem

__all__ = ["build_ex1", "build_lieb", "load_fixture", "fixture_path"]


def build_ex1() -> IsoSystem:
    spec = field_create(3)
    return IsoSystem(
        A=Matrix.from_ints(spec, [[0, 1, 0], [2, 1, 0], [2, 1, 0]]),
        B=Matrix.from_ints(spec, [[0, 0], [0, 2], [1, 0]]),
        C=Matrix.from_ints(spec, [[1, 1, 2]]),
        D=Matrix.from_ints(spec, [[1, 1]]),
    )


def build_lieb(spec: FieldSpec | None = None, a=None) -> IsoSystem:
    """(5, 3, 2) system over GF(2^N), N = 331 by default.

    A = (a^8 - 1)^-1 [[a^64 - a^112, a^128 - a^240], [a^104 - a^48, a^232 - a^112]]
    B = [[1, 0, -a^32 (a^8 + 1)], [0, 1, a^16 (a^16 + a^8 + 1)]]
    C = [[a^8, a^16], [a^16, a^32]]
    D = [[a, a^2, a^4], [a^2, a^4, a^8]]
    """
    if spec is None:
        spec = field_create(2, 331)
    if a is None:
        a = spec.generator() if spec.r > 1 else spec.element(2)
    one = spec.one()

    def ap(e: int):
        return a**e

    den_inv = (ap(8) - one).inverse()
    A = Matrix.from_rows(
        spec,
        [
            [den_inv * (ap(64) - ap(112)), den_inv * (ap(128) - ap(240))],
            [den_inv * (ap(104) - ap(48)), den_inv * (ap(232) - ap(112))],
        ],
    )
    B = Matrix.from_rows(
        spec,
        [
            [one, spec.zero(), -(ap(32) * (ap(8) + one))],
            [spec.zero(), one, ap(16) * (ap(16) + ap(8) + one)],
        ],
    )
    C = Matrix.from_rows(spec, [[ap(8), ap(16)], [ap(16), ap(32)]])
    D = Matrix.from_rows(spec, [[a, ap(2), ap(4)], [ap(2), ap(4), ap(8)]])
    return IsoSystem(A, B, C, D)


def fixture_path(name: str):
    """Traversable path of a bundled fixture file (ex1 or lieb)."""
    return resources.files("isoconv").joinpath("data").joinpath(f"{name}.json")


def load_fixture(name: str) -> IsoSystem:
    from .serial import system_from_json

    with fixture_path(name).open("r", encoding="utf-8") as fh:
        return system_from_json(json.load(fh))
