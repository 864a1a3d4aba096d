"""Input/state/output representations and the convolutional codes they carry.

A system is the quadruple (A, B, C, D) with state dimension delta, k inputs
and n - k outputs.  Codewords are the polynomial vectors v = (y; u) admitting
a polynomial state trajectory x with

    z * x(z) = A x(z) + B u(z),        y(z) = C x(z) + D u(z).

Reading coefficient sequences from the highest degree down, this is exactly
the usual state recursion x_{t+1} = A x_t + B u_t started at zero: a word
belongs to the code iff its reversal is a valid finite trajectory.  Encoders
extracted from the kernel of [zK' + L' | M'] and the transfer-function
identity Y(z) = T(z) U(z) both live in this convention, and the windowed
erasure decoder consumes the forward trajectories directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fields import FieldElement, FieldSpec
from .matrices import Matrix
from .polys import NEG_INF, Poly, PolyMatrix, minimal_kernel_basis

__all__ = [
    "IsoSystem",
    "CodeHandle",
    "CompletionError",
    "controllability_matrix",
    "observability_matrix",
    "first_order_form",
    "extract_encoder",
    "encode",
    "membership",
    "transfer_function",
    "forward_trajectory",
]


class CompletionError(ValueError):
    """The input cannot be completed to a finite-support codeword."""


@dataclass(frozen=True)
class IsoSystem:
    """The tuple (A, B, C, D) with shapes delta x delta, delta x k,
    (n-k) x delta, (n-k) x k."""

    A: Matrix
    B: Matrix
    C: Matrix
    D: Matrix

    def __post_init__(self) -> None:
        delta = self.A.rows
        if self.A.cols != delta or delta < 1:
            raise ValueError("A must be square with delta >= 1")
        if self.B.rows != delta:
            raise ValueError("B row count must match delta")
        if self.C.cols != delta:
            raise ValueError("C column count must match delta")
        if (self.D.rows, self.D.cols) != (self.C.rows, self.B.cols):
            raise ValueError("D shape must be (n-k) x k")
        if self.C.rows < 1 or self.B.cols < 1:
            raise ValueError("need 0 < k < n")

    @property
    def spec(self) -> FieldSpec:
        return self.A.spec

    @property
    def delta(self) -> int:
        return self.A.rows

    @property
    def k(self) -> int:
        return self.B.cols

    @property
    def n(self) -> int:
        return self.B.cols + self.C.rows

    def split_word(self, v: Sequence) -> tuple[list, list]:
        """Split a length-n stack into (y, u): parity first, information last."""
        nk = self.n - self.k
        return list(v[:nk]), list(v[nk:])


def controllability_matrix(a: Matrix, b: Matrix, steps: int) -> Matrix:
    """[B | AB | ... | A^(steps-1) B]."""
    if a.rows != a.cols or a.rows != b.rows:
        raise ValueError("A must be square and compatible with B")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = b
    cur = b
    for _ in range(steps - 1):
        cur = a @ cur
        out = out.hstack(cur)
    return out


def observability_matrix(a: Matrix, c: Matrix, steps: int) -> Matrix:
    """[C; CA; ...; C A^(steps-1)] stacked."""
    if a.rows != a.cols or c.cols != a.rows:
        raise ValueError("A must be square and compatible with C")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = c
    cur = c
    for _ in range(steps - 1):
        cur = cur @ a
        out = out.vstack(cur)
    return out


def is_reachable(system: IsoSystem) -> bool:
    return controllability_matrix(system.A, system.B, system.delta).rank() == system.delta


def is_observable(system: IsoSystem) -> bool:
    return observability_matrix(system.A, system.C, system.delta).rank() == system.delta


def first_order_form(system: IsoSystem) -> tuple[Matrix, Matrix, Matrix]:
    """The normal form K' = [-I; 0], L' = [A; C], M' = [[0, B], [-I, D]]."""
    spec = system.spec
    delta, k, nk = system.delta, system.k, system.n - system.k
    k_top = -Matrix.identity(spec, delta)
    k_bot = Matrix.zero(spec, nk, delta)
    kp = k_top.vstack(k_bot)
    lp = system.A.vstack(system.C)
    m_top = Matrix.zero(spec, delta, nk).hstack(system.B)
    m_bot = (-Matrix.identity(spec, nk)).hstack(system.D)
    mp = m_top.vstack(m_bot)
    return kp, lp, mp


def _pencil(system: IsoSystem) -> PolyMatrix:
    """[z K' + L' | M'] as a polynomial matrix."""
    kp, lp, mp = first_order_form(system)
    spec = system.spec
    z = Poly.z(spec)
    rows = []
    for i in range(kp.rows):
        row = [
            Poly.constant(lp[i, j]) + z * Poly.constant(kp[i, j])
            for j in range(kp.cols)
        ]
        row += [Poly.constant(mp[i, j]) for j in range(mp.cols)]
        rows.append(row)
    return PolyMatrix.from_rows(spec, rows)


def extract_encoder(system: IsoSystem) -> PolyMatrix:
    """Minimal encoder: last n rows of a minimal kernel basis of
    [z K' + L' | M'].  Requires a reachable system (minimality)."""
    if not is_reachable(system):
        raise ValueError("system is not reachable; encoder extraction needs minimality")
    basis = minimal_kernel_basis(_pencil(system))
    n, delta = system.n, system.delta
    rows = [basis.entries[delta + i] for i in range(n)]
    return PolyMatrix.from_rows(system.spec, rows)


@dataclass
class CodeHandle:
    """A convolutional code, carried by its system and/or an encoder.

    The encoder cache is write-once; recomputation is idempotent.
    """

    system: IsoSystem | None = None
    _encoder: PolyMatrix | None = field(default=None, repr=False)

    @classmethod
    def from_encoder(cls, encoder: PolyMatrix) -> CodeHandle:
        return cls(system=None, _encoder=encoder)

    @property
    def n(self) -> int:
        return self.system.n if self.system is not None else self._encoder.rows  # type: ignore[union-attr]

    @property
    def k(self) -> int:
        return self.system.k if self.system is not None else self._encoder.cols  # type: ignore[union-attr]

    @property
    def spec(self) -> FieldSpec:
        return self.system.spec if self.system is not None else self._encoder.spec  # type: ignore[union-attr]

    @property
    def encoder(self) -> PolyMatrix:
        if self._encoder is None:
            assert self.system is not None
            self._encoder = extract_encoder(self.system)
        return self._encoder


# ---------------------------------------------------------------------------
# simulation: encode / membership
# ---------------------------------------------------------------------------

def forward_trajectory(
    system: IsoSystem, inputs: Sequence[Matrix], x0: Matrix | None = None
) -> tuple[list[Matrix], list[Matrix]]:
    """Run x_{t+1} = A x_t + B u_t, y_t = C x_t + D u_t over the given input
    blocks.  Returns (outputs y_t, states x_0 .. x_T+1)."""
    x = x0 if x0 is not None else Matrix.zero(system.spec, system.delta, 1)
    states = [x]
    outputs = []
    for u in inputs:
        outputs.append(system.C @ x + system.D @ u)
        x = system.A @ x + system.B @ u
        states.append(x)
    return outputs, states


def _columns_to_polyvec(spec: FieldSpec, cols: list[list[FieldElement]]) -> list[Poly]:
    """cols[t][i] -> vector of polynomials sum_t cols[t][i] z^t."""
    height = len(cols[0]) if cols else 0
    return [
        Poly.from_elements(spec, [cols[t][i] for t in range(len(cols))])
        for i in range(height)
    ]


def encode(system: IsoSystem, u: PolyMatrix, max_padding: int | None = None) -> PolyMatrix:
    """The codeword determined by the information word u (k x 1).

    Simulates the state recursion from x_0 = 0 on the time-reversed input,
    keeps feeding zero input until the state dies out, and returns the
    reversal of the whole run, so the result always passes `membership`.
    If the trailing state never reaches zero the input has no finite-support
    completion for this system and a CompletionError is raised.  The returned
    information part is z^m * u when m > 0 padding steps were needed.
    """
    if u.cols != 1 or u.rows != system.k:
        raise ValueError("input must be a k x 1 polynomial vector")
    spec = system.spec
    if u.is_zero():
        return PolyMatrix.zero(spec, system.n, 1)
    deg = int(u.max_degree())
    rev_inputs = [
        Matrix.from_rows(spec, [[u.entries[i][0].coeff(deg - t)] for i in range(system.k)])
        for t in range(deg + 1)
    ]
    outputs, states = forward_trajectory(system, rev_inputs)
    # zero-input continuation: the state orbit reaches zero within delta steps
    # if it ever does (kernels of A^j stabilize at j = delta)
    x = states[-1]
    bound = max_padding if max_padding is not None else system.delta
    padding = 0
    zero_u = Matrix.zero(spec, system.k, 1)
    while not x.is_zero():
        if padding >= bound:
            raise CompletionError(
                "state does not return to zero: input is not completable to a "
                "finite-support codeword for this system"
            )
        outputs.append(system.C @ x)
        rev_inputs.append(zero_u)
        x = system.A @ x
        padding += 1
    total = len(outputs)
    y_cols = [[outputs[t][i, 0] for i in range(system.n - system.k)] for t in range(total)]
    u_cols = [[rev_inputs[t][i, 0] for i in range(system.k)] for t in range(total)]
    y_rev = _columns_to_polyvec(spec, y_cols[::-1])
    u_rev = _columns_to_polyvec(spec, u_cols[::-1])
    return PolyMatrix.from_rows(spec, [[p] for p in y_rev + u_rev])


def membership(system: IsoSystem, v: PolyMatrix) -> bool:
    """Exact membership of the n x 1 word v in the system's code.

    The word is reversed at its overall degree and the state recursion is run
    from x_0 = 0; membership holds iff every output coefficient matches and
    the final state is zero.  The reconstructed trajectory is unique, so the
    check is exact for every system.
    """
    if v.cols != 1 or v.rows != system.n:
        raise ValueError("candidate must be an n x 1 polynomial vector")
    if v.is_zero():
        return True
    spec = system.spec
    deg = int(v.max_degree())
    nk = system.n - system.k
    u_blocks = [
        Matrix.from_rows(
            spec, [[v.entries[nk + i][0].coeff(deg - t)] for i in range(system.k)]
        )
        for t in range(deg + 1)
    ]
    outputs, states = forward_trajectory(system, u_blocks)
    for t in range(deg + 1):
        for i in range(nk):
            if outputs[t][i, 0] != v.entries[i][0].coeff(deg - t):
                return False
    return states[-1].is_zero()


def transfer_function(system: IsoSystem) -> tuple[PolyMatrix, Poly]:
    """(numerator, denominator) with numerator = C adj(zI - A) B + det(zI - A) D
    and denominator = det(zI - A); no cancellation is performed."""
    spec = system.spec
    delta = system.delta
    z = Poly.z(spec)
    zia = PolyMatrix.from_rows(
        spec,
        [
            [
                (z if i == j else Poly.zero(spec)) - Poly.constant(system.A[i, j])
                for j in range(delta)
            ]
            for i in range(delta)
        ],
    )
    den = zia.det()
    adj = _adjugate(zia)
    cbig = PolyMatrix.from_constant(system.C)
    bbig = PolyMatrix.from_constant(system.B)
    dbig = PolyMatrix.from_constant(system.D)
    num = cbig @ adj @ bbig + dbig.scale_poly(den)
    return num, den


def _adjugate(m: PolyMatrix) -> PolyMatrix:
    n = m.rows
    if n == 1:
        return PolyMatrix.identity(m.spec, 1)
    out = [[Poly.zero(m.spec)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = PolyMatrix(
                m.spec,
                n - 1,
                n - 1,
                tuple(
                    tuple(m.entries[r][c] for c in range(n) if c != j)
                    for r in range(n)
                    if r != i
                ),
            )
            cof = sub.det()
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof
    return PolyMatrix.from_rows(m.spec, out)
