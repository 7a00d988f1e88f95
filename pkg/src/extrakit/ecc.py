"""Concatenated Reed-Solomon/Hadamard codes with brute-force list decoding.

Messages are packed into GF(2^t) symbols, read as the coefficients of a
polynomial, evaluated at every field point (Reed-Solomon), and each
resulting symbol is expanded to all 2^t inner products with its index
(Hadamard).  The codeword length is 2^t * 2^t = 2^(2t), a power of two,
so a codeword doubles as the truth table of a function on 2t bits.

The field exponent t is the least one making the outer code's relative
distance large enough that a Johnson-style bound caps the number of
codewords in any ball of relative radius 1/2 - delta at 1/delta^2; the
brute-force decoder simply tries every message, which at desk scale is
both the oracle and the only decoder needed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .bits import BitString
from .dist import as_fraction
from .errors import BudgetExceededError, DimensionError

__all__ = [
    "PINNED_POLYNOMIALS",
    "GField",
    "Code",
    "build_code",
    "encode",
    "brute_list_decode",
]

#: Fixed irreducible (indeed primitive) polynomial per field exponent t,
#: encoded as an integer bit mask including the leading term.  The table
#: is part of the external interface (see docs/fields.md); changing an
#: entry changes every codeword.
PINNED_POLYNOMIALS = {
    1: 0b11,                # x + 1
    2: 0b111,               # x^2 + x + 1
    3: 0b1011,              # x^3 + x + 1
    4: 0b10011,             # x^4 + x + 1
    5: 0b100101,            # x^5 + x^2 + 1
    6: 0b1000011,           # x^6 + x + 1
    7: 0b10001001,          # x^7 + x^3 + 1
    8: 0b100011101,         # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,        # x^9 + x^4 + 1
    10: 0b10000001001,      # x^10 + x^3 + 1
    11: 0b100000000101,     # x^11 + x^2 + 1
    12: 0b1000001010011,    # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,   # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,  # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011, # x^15 + x + 1
    16: 0b10001000000001011,  # x^16 + x^12 + x^3 + x + 1
}


class GField:
    """GF(2^t) with log/antilog tables over the pinned polynomial."""

    def __init__(self, t: int):
        if t not in PINNED_POLYNOMIALS:
            raise DimensionError(f"no pinned polynomial for t={t} (have 1..16)")
        self.t = t
        self.order = 1 << t
        self.poly = PINNED_POLYNOMIALS[t]
        exp = [1]
        v = 1
        for _ in range(self.order - 2):
            v <<= 1
            if v & self.order:
                v ^= self.poly
            exp.append(v)
        # primitivity check: x must generate the full multiplicative group
        v <<= 1
        if v & self.order:
            v ^= self.poly
        if v != 1 or len(set(exp)) != self.order - 1:
            raise DimensionError(f"polynomial {self.poly:#x} is not primitive for t={t}")
        self.exp = exp
        self.log = [0] * self.order
        for i, val in enumerate(exp):
            self.log[val] = i

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def poly_eval(self, coeffs: list[int], xi: int) -> int:
        """Horner evaluation of sum coeffs[j] * xi^j (coeffs[0] = constant)."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, xi) ^ c
        return acc


class Code:
    """A concatenated code instance: message bits n, margin delta, field 2^t."""

    def __init__(self, n: int, delta, t: int):
        if n < 1:
            raise DimensionError(f"message length n={n} must be positive")
        self.n = n
        self.delta = as_fraction(delta)
        self.t = t
        self.field = GField(t)
        self.symbols = -(-n // t)  # ceil(n/t): outer polynomial coefficients
        if self.symbols > self.field.order:
            raise DimensionError(
                f"{self.symbols} coefficients exceed {self.field.order} field points"
            )
        # inner Hadamard blocks: block(v) packs parity(v & z) for z ascending
        width = self.field.order
        self._inner = []
        for v in range(width):
            block = 0
            for z in range(width):
                block = (block << 1) | ((v & z).bit_count() & 1)
            self._inner.append(block)
        self._codebook: dict[int, int] = {}

    @property
    def nbar(self) -> int:
        """Codeword length 2^(2t), a power of two."""
        return 1 << (2 * self.t)

    @property
    def l(self) -> int:
        """log2 of the codeword length; codewords are truth tables on l bits."""
        return 2 * self.t

    def __repr__(self) -> str:
        return f"Code(n={self.n}, delta={self.delta}, t={self.t}, nbar={self.nbar})"

    def _symbols_of(self, x: BitString) -> list[int]:
        """Split the message into t-bit symbols; a short last chunk keeps its
        value (zero bits implied on the high side)."""
        syms = []
        for j in range(self.symbols):
            lo = j * self.t
            hi = min(lo + self.t, self.n)
            syms.append(x.slice(lo, hi).value)
        return syms

    def _encode_value(self, xv: int) -> int:
        cw = self._codebook.get(xv)
        if cw is None:
            syms = self._symbols_of(BitString(self.n, xv))
            width = self.field.order
            cw = 0
            for p in range(width):
                cw = (cw << width) | self._inner[self.field.poly_eval(syms, p)]
            self._codebook[xv] = cw
        return cw


def build_code(n: int, delta) -> Code:
    """Smallest field making the ball-counting bound work at margin delta.

    Chooses the least t with 2^t >= ceil(n/t) / (2*delta^2), compared as
    exact rationals.  Larger t only pads with zero coefficients, so this
    also guarantees enough evaluation points.
    """
    delta = as_fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise DimensionError(f"margin delta={delta} outside (0, 1/2)")
    t = 1
    while True:
        need = Fraction(-(-n // t), 1) / (2 * delta * delta)
        if (1 << t) >= need:
            return Code(n, delta, t)
        t += 1
        if t > 16:
            raise DimensionError(
                f"n={n}, delta={delta} needs a field beyond the pinned t <= 16 table"
            )


def encode(code: Code, x: BitString) -> BitString:
    """Codeword of x: Reed-Solomon over GF(2^t), each symbol Hadamard-expanded.

    Bit p*2^t + z of the output is parity(P(p) & z) where P is the
    polynomial with the message's symbols as coefficients (first symbol =
    constant term) and p runs over all field points in integer order.
    """
    if x.length != code.n:
        raise DimensionError(f"message has {x.length} bits, code expects {code.n}")
    return BitString(code.nbar, code._encode_value(x.value))


def brute_list_decode(
    code: Code,
    center: BitString,
    radius=None,
    max_message_bits: int = 14,
) -> list[BitString]:
    """All messages whose codewords lie within relative ``radius`` of center.

    Default radius is 1/2 - delta, i.e. agreement on at least a
    (1/2 + delta) fraction of positions; the comparison is exact over
    rationals and inclusive.  Tries every one of the 2^n messages, so n
    is capped (default 14).  Output sorted by message value.
    """
    if center.length != code.nbar:
        raise DimensionError(
            f"center has {center.length} bits, codewords have {code.nbar}"
        )
    if code.n > max_message_bits:
        raise BudgetExceededError(
            f"2^{code.n} messages exceed the enumeration budget 2^{max_message_bits}"
        )
    radius = (
        Fraction(1, 2) - code.delta if radius is None else as_fraction(radius)
    )
    out = []
    nbar = code.nbar
    for xv in range(1 << code.n):
        distance = (code._encode_value(xv) ^ center.value).bit_count()
        if distance * radius.denominator <= radius.numerator * nbar:
            out.append(BitString(code.n, xv))
    return out
