"""Exact arithmetic in GF(p) and GF(p^r).

Elements of GF(p^r) are coefficient vectors over GF(p) modulo a fixed monic
irreducible polynomial, little-endian (constant term first).  This stays exact
for arbitrarily large extension degrees; the binary case (p = 2) is backed by
Python integers used as bit vectors, which keeps fields like GF(2^331) fast
enough for dense linear algebra.

Everything here is immutable and pure, so values can be shared freely across
threads.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "FieldSpec",
    "FieldElement",
    "PrimitivityCertificate",
    "field_create",
    "arith",
    "primitive_element",
    "lexicographically_smallest_irreducible",
    "is_irreducible_poly",
]

# Byte -> bits interleaved with zeros, for fast squaring of binary polynomials.
_SPREAD = [0] * 256
for _b in range(256):
    _v = 0
    for _i in range(8):
        if _b >> _i & 1:
            _v |= 1 << (2 * _i)
    _SPREAD[_b] = _v


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3 * 10^24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int, rho_budget: int = 200_000) -> list[int] | None:
    """Distinct prime factors of n, or None if factoring exceeds the budget."""
    if n <= 1:
        return []
    factors: set[int] = set()
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            factors.add(m)
            continue
        for p in (2, 3, 5, 7, 11, 13):
            if m % p == 0:
                factors.add(p)
                while m % p == 0:
                    m //= p
                break
        else:
            d = _pollard_rho(m, rho_budget)
            if d is None:
                return None
            stack.extend((d, m // d))
            continue
        if m > 1:
            stack.append(m)
    return sorted(factors)


def _pollard_rho(n: int, budget: int) -> int | None:
    rng = random.Random(0xC0FFEE ^ n)
    for _ in range(24):
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        steps = 0
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _gcd(abs(x - y), n)
            steps += 1
            if steps > budget:
                return None
        if d != n:
            return d
    return None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficient lists little-endian
# ---------------------------------------------------------------------------

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_rem(out, mod, p)


def _poly_rem(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            f = c * inv_lead % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * mod[j]) % p
    del a[dm:]
    while len(a) < dm:
        a.append(0)
    return [x % p for x in a]


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim([x % p for x in a]), _poly_trim([x % p for x in b])
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        for i in range(len(r) - 1, len(b) - 2, -1):
            c = r[i] % p
            if c:
                f = c * inv_lead % p
                for j in range(len(b)):
                    r[i - len(b) + 1 + j] = (r[i - len(b) + 1 + j] - f * b[j]) % p
        a, b = b, _poly_trim(r[: len(b) - 1])
    return a


def is_irreducible_poly(coeffs: Sequence[int], p: int) -> bool:
    """Test irreducibility of a monic polynomial over GF(p).

    Uses the standard criterion: f of degree r is irreducible iff
    x^(p^r) = x (mod f) and gcd(x^(p^(r/t)) - x, f) = 1 for every prime t | r.
    """
    coeffs = [c % p for c in coeffs]
    r = len(coeffs) - 1
    if r < 1 or coeffs[-1] != 1:
        return False
    if r == 1:
        return True
    if coeffs[0] == 0:  # divisible by x
        return False
    x = [0, 1]

    def frob_iterate(start: list[int], times: int) -> list[int]:
        cur = list(start)
        for _ in range(times):
            cur = _poly_pow_mod(cur, p, coeffs, p)
        return cur

    primes = _prime_factors(r)
    assert primes is not None  # degrees are small integers
    for t in primes:
        g = frob_iterate(x, r // t)
        diff = _poly_trim([(gi - xi) % p for gi, xi in itertools.zip_longest(g, x, fillvalue=0)])
        if len(_poly_gcd(coeffs, diff, p)) - 1 != 0:
            return False
    top = frob_iterate(x, r)
    return _poly_trim([(ti - xi) % p for ti, xi in itertools.zip_longest(top, x, fillvalue=0)]) == []


def _poly_pow_mod(a: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_rem(a, mod, p)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod, p)
        base = _poly_mul_mod(base, base, mod, p)
        e >>= 1
    return result


def _is_irreducible_gf2(f: int, r: int) -> bool:
    """Fast path for binary polynomials given as bit masks, prime degree or not."""
    if not f & 1:
        return False
    # x^(2^(r/t)) == x checks via repeated squaring of the bit-vector residue
    def frob(times: int) -> int:
        cur = 2
        for _ in range(times):
            out = 0
            shift = 0
            a = cur
            while a:
                out |= _SPREAD[a & 0xFF] << shift
                a >>= 8
                shift += 16
            bl = out.bit_length()
            while bl > r:
                out ^= f << (bl - 1 - r)
                bl = out.bit_length()
            cur = out
        return cur

    primes = _prime_factors(r)
    assert primes is not None
    for t in primes:
        g = frob(r // t) ^ 2  # x^(2^(r/t)) - x
        if _gf2_poly_gcd(f, g) != 1:
            return False
    return frob(r) == 2


def _gf2_poly_gcd(a: int, b: int) -> int:
    while b:
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def lexicographically_smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Deterministic modulus choice: the monic irreducible of degree r over
    GF(p) whose non-leading coefficient word (read most-significant-first) is
    smallest, i.e. candidates are tried in increasing base-p value of
    (c_{r-1}, ..., c_1, c_0)."""
    if p == 2:
        c = 1
        while True:
            f = (1 << r) | c
            if _is_irreducible_gf2(f, r):
                return tuple((f >> i) & 1 for i in range(r + 1))
            c += 2  # constant term must be 1
    for value in range(p**r):
        digits = []
        v = value
        for _ in range(r):
            digits.append(v % p)
            v //= p
        coeffs = digits + [1]
        if coeffs[0] != 0 and is_irreducible_poly(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible of degree {r} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------
# FieldSpec / FieldElement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(p^r).

    `modulus` is the monic irreducible used for r > 1, little-endian with
    r + 1 coefficients; it is None exactly when r == 1.
    """

    p: int
    r: int
    modulus: tuple[int, ...] | None = None
    _mod_mask: int = field(default=0, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.r < 1:
            raise ValueError("extension degree must be >= 1")
        if self.r == 1:
            if self.modulus is not None:
                raise ValueError("prime fields take no modulus")
        else:
            if self.modulus is None:
                raise ValueError("extension fields need a modulus")
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.r + 1:
                raise ValueError(f"modulus must have {self.r + 1} coefficients")
            if mod[-1] != 1:
                raise ValueError("modulus must be monic")
            object.__setattr__(self, "modulus", mod)
            if self.p == 2:
                mask = 0
                for i, c in enumerate(mod):
                    if c:
                        mask |= 1 << i
                object.__setattr__(self, "_mod_mask", mask)
                if not _is_irreducible_gf2(mask, self.r):
                    raise ValueError("modulus is reducible over the prime field")
            elif not is_irreducible_poly(mod, self.p):
                raise ValueError("modulus is reducible over the prime field")

    @property
    def q(self) -> int:
        return self.p**self.r

    @property
    def is_binary_extension(self) -> bool:
        return self.p == 2 and self.r > 1

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Sequence[int] | int) -> FieldElement:
        if isinstance(coeffs, int):
            coeffs = (coeffs,) + (0,) * (self.r - 1)
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.r:
            raise ValueError(f"expected {self.r} coordinates, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.r)

    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.r - 1))

    def generator(self) -> FieldElement:
        """The class of x (only meaningful for r > 1)."""
        if self.r == 1:
            raise ValueError("prime field has no adjoined generator")
        return FieldElement(self, (0, 1) + (0,) * (self.r - 2))

    def elements(self) -> Iterable[FieldElement]:
        """All field elements in coordinate-lex order (first coordinate most
        significant).  Only sensible for small q."""
        for tup in itertools.product(range(self.p), repeat=self.r):
            yield FieldElement(self, tup)

    def random_element(self, rng: random.Random) -> FieldElement:
        return FieldElement(self, tuple(rng.randrange(self.p) for _ in range(self.r)))

    # -- raw arithmetic on coefficient tuples ---------------------------------

    def _add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        return tuple((-x) % p for x in a)

    def _pack(self, a: tuple[int, ...]) -> int:
        v = 0
        for i, c in enumerate(a):
            if c:
                v |= 1 << i
        return v

    def _unpack(self, v: int) -> tuple[int, ...]:
        return tuple((v >> i) & 1 for i in range(self.r))

    def _gf2_reduce(self, a: int) -> int:
        f = self._mod_mask
        r = self.r
        bl = a.bit_length()
        while bl > r:
            a ^= f << (bl - 1 - r)
            bl = a.bit_length()
        return a

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        if self.r == 1:
            return ((a[0] * b[0]) % self.p,)
        if self.p == 2:
            x, y = self._pack(a), self._pack(b)
            out = 0
            while y:
                lsb = y & -y
                out ^= x << (lsb.bit_length() - 1)
                y ^= lsb
            return self._unpack(self._gf2_reduce(out))
        prod = [0] * (2 * self.r - 1)
        p = self.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _poly_rem(prod, self.modulus, p)  # type: ignore[arg-type]
        return tuple(red)

    def _inv(self, a: tuple[int, ...]) -> tuple[int, ...]:
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inversion of zero field element")
        if self.r == 1:
            return (pow(a[0], self.p - 2, self.p),)
        if self.p == 2:
            r0, r1 = self._mod_mask, self._pack(a)
            s0, s1 = 0, 1
            while r1:
                d = r0.bit_length() - r1.bit_length()
                if d < 0:
                    r0, r1, s0, s1 = r1, r0, s1, s0
                    continue
                r0 ^= r1 << d
                s0 ^= s1 << d
            # gcd lives in r0 and equals 1 because the modulus is irreducible
            return self._unpack(self._gf2_reduce(s0))
        # extended Euclid over GF(p)[x]
        p = self.p
        r0, r1 = list(self.modulus), _poly_trim(list(a))  # type: ignore[arg-type]
        s0, s1 = [0], [1]
        while r1:
            q, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(
                [
                    (x - y) % p
                    for x, y in itertools.zip_longest(s0, _poly_mul(q, s1, p), fillvalue=0)
                ]
            )
        lead_inv = pow(r0[-1], p - 2, p)
        inv = [c * lead_inv % p for c in s0]
        inv = _poly_rem(inv, self.modulus, p)  # type: ignore[arg-type]
        return tuple(inv)

    def _pow(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        if e < 0:
            a = self._inv(a)
            e = -e
        if self.p == 2 and self.r > 1:
            base = self._pack(a)
            result = 1
            while e:
                if e & 1:
                    out = 0
                    y = base
                    while y:
                        lsb = y & -y
                        out ^= result << (lsb.bit_length() - 1)
                        y ^= lsb
                    result = self._gf2_reduce(out)
                # square base via bit spreading
                out = 0
                shift = 0
                y = base
                while y:
                    out |= _SPREAD[y & 0xFF] << shift
                    y >>= 8
                    shift += 16
                base = self._gf2_reduce(out)
                e >>= 1
            return self._unpack(result)
        result = (1,) + (0,) * (self.r - 1)
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def __str__(self) -> str:
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and a:
        f = a[-1] * inv_lead % p
        s = len(a) - len(b)
        q[s] = f
        for i in range(len(b)):
            a[s + i] = (a[s + i] - f * b[i]) % p
        a = _poly_trim(a)
    return _poly_trim(q), a


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(p^r): little-endian coordinates in the power basis."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def _check(self, other: FieldElement) -> None:
        if self.spec is not other.spec and self.spec != other.spec:
            raise ValueError("elements belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec._add(self.coeffs, other.coeffs))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec._sub(self.coeffs, other.coeffs))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec._mul(self.coeffs, other.coeffs))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.spec, self.spec._neg(self.coeffs))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec._mul(self.coeffs, self.spec._inv(other.coeffs)))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec._inv(self.coeffs))

    def __pow__(self, e: int) -> FieldElement:
        if e < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return FieldElement(self.spec, self.spec._pow(self.coeffs, e))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        if self.spec.r == 1:
            return f"{self.coeffs[0]}"
        return f"({','.join(map(str, self.coeffs))})"


# ---------------------------------------------------------------------------
# public spec-level operations
# ---------------------------------------------------------------------------

def field_create(p: int, r: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated GF(p^r) description.

    When r > 1 and no modulus is given, the lexicographically smallest monic
    irreducible of degree r is selected, so serialized data is reproducible
    across runs and machines.
    """
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    if r == 1:
        return FieldSpec(p, 1, None)
    if modulus is None:
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        modulus = lexicographically_smallest_irreducible(p, r)
    return FieldSpec(p, r, tuple(int(c) for c in modulus))


_ARITH_BINARY = {"add", "sub", "mul", "div"}


def arith(op: str, a: FieldElement, b: FieldElement | int | None = None) -> FieldElement:
    """Dispatch table over the element operations; `pow` takes an int exponent."""
    if op in _ARITH_BINARY:
        if not isinstance(b, FieldElement):
            raise TypeError(f"{op} needs a field element on the right")
        return {
            "add": FieldElement.__add__,
            "sub": FieldElement.__sub__,
            "mul": FieldElement.__mul__,
            "div": FieldElement.__truediv__,
        }[op](a, b)
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("pow needs an integer exponent")
        return a**b
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class PrimitivityCertificate:
    """What was actually verified about the returned generator's order."""

    certified: bool
    order_lower_bound: int
    note: str


# By policy, fields beyond this size are not fully certified: factoring q - 1
# is out of budget there and the toolkit only needs many distinct powers.
_CERTIFY_BIT_LIMIT = 64


def primitive_element(spec: FieldSpec) -> tuple[FieldElement, PrimitivityCertificate]:
    """Smallest multiplicative generator in coordinate-lex order.

    For q - 1 up to 64 bits the order q - 1 is certified against the full
    factorization of q - 1.  For larger fields the returned element is the
    smallest non-scalar candidate; the certificate carries `certified=False`
    plus the partial checks that were run (full factoring is out of scope).
    """
    q1 = spec.q - 1
    if q1 == 1:
        return spec.one(), PrimitivityCertificate(True, 1, "trivial group")
    if q1.bit_length() <= _CERTIFY_BIT_LIMIT:
        primes = _prime_factors(q1)
        if primes is not None:
            for cand in spec.elements():
                if cand.is_zero():
                    continue
                if all(not (cand ** (q1 // t)).is_one() for t in primes):
                    return cand, PrimitivityCertificate(
                        True, q1, f"order q-1 certified via prime factors {primes}"
                    )
            raise ArithmeticError("no generator found (impossible for a field)")
    # Large field: take x itself (degree-r element outside every proper
    # subfield when r is prime) and report what was verified.
    cand = spec.generator() if spec.r > 1 else spec.element(2)
    checks = []
    bound = 1
    if (cand**q1).is_one():
        checks.append("a^(q-1) = 1")
    smooth, rest = 1, q1
    for t in range(2, 10_000):
        while rest % t == 0:
            smooth *= t
            rest //= t
    if rest > 1 and not (cand**smooth).is_one():
        # the order has a prime factor exceeding the trial bound
        bound = 10_000
        checks.append("a^(smooth part of q-1) != 1, so ord(a) > 10^4")
    return cand, PrimitivityCertificate(
        False,
        bound,
        "uncertified: factoring q-1 is out of budget for this field size; "
        + "; ".join(checks),
    )
