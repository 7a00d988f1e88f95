"""Fixed-length bit strings.

A :class:`BitString` is an immutable sequence of bits with an explicit
length.  It is the common currency of the whole package: source words,
seeds, extractor outputs, hash descriptions and codewords are all
``BitString`` values.

Bits are ordered most-significant-first: bit 0 is the leftmost bit, and
the integer value of ``BitString(n, v)`` is ``v`` read as an ``n``-bit
big-endian number.  The text form is ``"<length>:<hex>"`` with the bits
packed most-significant-first and the final nibble zero-padded.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import DimensionError, FormatError

__all__ = ["BitString", "concat"]


class BitString:
    """An immutable ``length``-bit word backed by a Python integer.

    Parameters
    ----------
    length:
        Number of bits (``>= 0``).
    value:
        Integer in ``[0, 2**length)``; its big-endian binary expansion,
        left-padded with zeros to ``length`` bits, gives the bit sequence.
    """

    __slots__ = ("length", "value")

    def __init__(self, length: int, value: int = 0):
        if length < 0:
            raise DimensionError(f"negative bit length {length}")
        if not 0 <= value < (1 << length) and not (length == 0 and value == 0):
            raise DimensionError(f"value {value} does not fit in {length} bits")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("BitString is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(length, 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        """Build from an iterable of 0/1 values, first element = bit 0 (MSB)."""
        value = 0
        length = 0
        for b in bits:
            if b not in (0, 1):
                raise FormatError(f"bit value {b!r} is not 0 or 1")
            value = (value << 1) | b
            length += 1
        return cls(length, value)

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        """Parse the ``"<length>:<hex>"`` form (inverse of :meth:`to_text`)."""
        head, sep, hexpart = text.strip().partition(":")
        if not sep:
            raise FormatError(f"bit string {text!r} lacks the ':' separator")
        try:
            length = int(head)
        except ValueError:
            raise FormatError(f"bad bit-string length {head!r}") from None
        if length < 0:
            raise FormatError(f"negative bit-string length {length}")
        ndigits = (length + 3) // 4
        if len(hexpart) != ndigits:
            raise FormatError(
                f"bit string of length {length} needs {ndigits} hex digits, got {len(hexpart)}"
            )
        try:
            packed = int(hexpart, 16) if ndigits else 0
        except ValueError:
            raise FormatError(f"bad hex digits in {text!r}") from None
        pad = 4 * ndigits - length
        if packed & ((1 << pad) - 1):
            raise FormatError(f"nonzero padding bits in {text!r}")
        return cls(length, packed >> pad)

    # -- inspection ---------------------------------------------------

    def __len__(self) -> int:
        return self.length

    def bit(self, i: int) -> int:
        """Bit at position ``i`` (0 = most significant)."""
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return (self.value >> (self.length - 1 - i)) & 1

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(self.length)
            if step != 1:
                raise DimensionError("BitString slices must be contiguous")
            return self.slice(start, stop)
        return self.bit(i)

    def __iter__(self) -> Iterator[int]:
        return (self.bit(i) for i in range(self.length))

    def slice(self, start: int, stop: int) -> "BitString":
        """Bits ``start .. stop-1`` as a new BitString."""
        if not 0 <= start <= stop <= self.length:
            raise DimensionError(f"bad slice [{start}:{stop}] of {self.length} bits")
        width = stop - start
        return BitString(width, (self.value >> (self.length - stop)) & ((1 << width) - 1))

    def prefix(self, q: int) -> "BitString":
        """The first ``q`` bits."""
        return self.slice(0, q)

    def suffix(self, q: int) -> "BitString":
        """The last ``q`` bits."""
        return self.slice(self.length - q, self.length)

    # -- algebra ------------------------------------------------------

    def __xor__(self, other: "BitString") -> "BitString":
        if self.length != other.length:
            raise DimensionError(
                f"xor of mismatched lengths {self.length} and {other.length}"
            )
        return BitString(self.length, self.value ^ other.value)

    def __add__(self, other: "BitString") -> "BitString":
        """Concatenation: ``self`` supplies the leading bits."""
        return BitString(
            self.length + other.length, (self.value << other.length) | other.value
        )

    def pad_to(self, length: int) -> "BitString":
        """Zero-pad on the most-significant side up to ``length`` bits.

        Padding is always prepended (low index side), so the original bits
        keep their values and move to the tail of the result.
        """
        if length < self.length:
            raise DimensionError(f"cannot pad {self.length} bits down to {length}")
        return BitString(length, self.value)

    def parity(self) -> int:
        return self.value.bit_count() & 1

    # -- text ---------------------------------------------------------

    def to_text(self) -> str:
        ndigits = (self.length + 3) // 4
        pad = 4 * ndigits - self.length
        return f"{self.length}:{(self.value << pad):0{ndigits}x}" if ndigits else f"{self.length}:"

    def to01(self) -> str:
        """Plain 0/1 rendering, most significant bit first."""
        return format(self.value, f"0{self.length}b") if self.length else ""

    @classmethod
    def from01(cls, text: str) -> "BitString":
        stripped = text.strip()
        if stripped and set(stripped) - {"0", "1"}:
            raise FormatError(f"bad 0/1 string {text!r}")
        return cls(len(stripped), int(stripped, 2) if stripped else 0)

    # -- dunder plumbing ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitString)
            and self.length == other.length
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.length, self.value))

    def __lt__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (self.length, self.value) < (other.length, other.value)

    def __le__(self, other: "BitString") -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return (self.length, self.value) <= (other.length, other.value)

    def __repr__(self) -> str:
        return f"BitString({self.length}, 0b{self.to01()})" if self.length else "BitString(0)"


def concat(*parts: BitString) -> BitString:
    """Concatenate any number of bit strings, left part first."""
    length = 0
    value = 0
    for p in parts:
        length += p.length
        value = (value << p.length) | p.value
    return BitString(length, value)
