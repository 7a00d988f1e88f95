"""Distributions over fixed-length bit strings.

:class:`Dist` stores one probability per string in ``{0,1}^n`` (dense),
with a choice of numeric backing:

* exact — a list of :class:`fractions.Fraction`, used by the oracle and
  verification paths so that pass/fail comparisons carry no float noise;
* float — a numpy array of float64 for larger instances.

On top of it live the quantities the rest of the package works with:
min-entropy, statistical distance, flat sources (uniform on a support
set), the decomposition of any high-min-entropy distribution into flat
components, and the push-forward of a source through a seeded map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TextIO, Union

import numpy as np

from .bits import BitString
from .errors import (
    DimensionError,
    EntropyDeficitError,
    FormatError,
    InvalidDistributionError,
)

__all__ = [
    "MAX_LENGTH",
    "MAX_EXACT_LENGTH",
    "Dist",
    "FlatSource",
    "SeededFunction",
    "min_entropy",
    "stat_dist",
    "flat_decompose",
    "push_forward",
    "as_fraction",
    "read_dist",
    "write_dist",
]

#: Hard cap on the bit length of any dense distribution (2^24 entries).
MAX_LENGTH = 24
#: Cap for the exact (Fraction-backed) representation.
MAX_EXACT_LENGTH = 16

Number = Union[int, float, Fraction]


def as_fraction(x: Number | str) -> Fraction:
    """Coerce a number to an exact Fraction.

    Accepts Fraction, int, strings like ``"3/10"``, and floats (converted
    to their exact binary value, which keeps later comparisons exact).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class Dist:
    """A probability assignment over all strings of a fixed bit length."""

    __slots__ = ("length", "_probs", "exact")

    def __init__(self, length: int, probs, exact: bool | None = None, tol: float = 1e-9):
        if length < 0 or length > MAX_LENGTH:
            raise InvalidDistributionError(
                f"bit length {length} outside supported range 0..{MAX_LENGTH}"
            )
        size = 1 << length
        if exact is None:
            exact = any(isinstance(p, Fraction) for p in probs)
        if exact and length > MAX_EXACT_LENGTH:
            raise InvalidDistributionError(
                f"exact backing supported only up to n = {MAX_EXACT_LENGTH}"
            )
        if exact:
            vals = [Fraction(p) for p in probs]
            if len(vals) != size:
                raise InvalidDistributionError(
                    f"expected {size} probabilities, got {len(vals)}"
                )
            if any(p < 0 for p in vals):
                raise InvalidDistributionError("negative probability")
            total = sum(vals)
            if total != 1:
                raise InvalidDistributionError(f"probabilities sum to {total}, not 1")
            self._probs = vals
        else:
            arr = np.asarray(probs, dtype=np.float64)
            if arr.shape != (size,):
                raise InvalidDistributionError(
                    f"expected {size} probabilities, got shape {arr.shape}"
                )
            if np.any(arr < 0):
                raise InvalidDistributionError("negative probability")
            total = float(arr.sum())
            if abs(total - 1.0) > tol:
                raise InvalidDistributionError(
                    f"probabilities sum to {total}, outside 1 +/- {tol}"
                )
            self._probs = arr
        self.length = length
        self.exact = exact

    # -- constructors -------------------------------------------------

    @classmethod
    def uniform(cls, length: int, exact: bool = True) -> "Dist":
        size = 1 << length
        if exact and length <= MAX_EXACT_LENGTH:
            return cls(length, [Fraction(1, size)] * size, exact=True)
        return cls(length, np.full(size, 1.0 / size), exact=False)

    @classmethod
    def point(cls, x: BitString, exact: bool = True) -> "Dist":
        size = 1 << x.length
        if exact:
            probs = [Fraction(0)] * size
            probs[x.value] = Fraction(1)
            return cls(x.length, probs, exact=True)
        arr = np.zeros(size)
        arr[x.value] = 1.0
        return cls(x.length, arr, exact=False)

    # -- access -------------------------------------------------------

    @property
    def probs(self):
        """The underlying probability vector (list of Fractions or ndarray)."""
        return self._probs

    def prob(self, x: Union[BitString, int]):
        idx = x.value if isinstance(x, BitString) else x
        return self._probs[idx]

    def support(self) -> list[int]:
        """Indices with positive probability, ascending."""
        if self.exact:
            return [i for i, p in enumerate(self._probs) if p > 0]
        return [int(i) for i in np.nonzero(self._probs)[0]]

    def to_exact(self) -> "Dist":
        """Exact copy; floats become their exact binary rationals."""
        if self.exact:
            return self
        probs = [Fraction(float(p)) for p in self._probs]
        total = sum(probs)
        if total == 0:
            raise InvalidDistributionError("all-zero distribution")
        return Dist(self.length, [p / total for p in probs], exact=True)

    def to_float(self) -> "Dist":
        if not self.exact:
            return self
        return Dist(
            self.length, np.array([float(p) for p in self._probs]), exact=False
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dist) or self.length != other.length:
            return False
        if self.exact and other.exact:
            return self._probs == other._probs
        return bool(
            np.array_equal(
                np.asarray(self.to_float()._probs), np.asarray(other.to_float()._probs)
            )
        )

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"Dist(n={self.length}, {kind})"


@dataclass(frozen=True)
class FlatSource:
    """The uniform distribution on a chosen set of length-``n`` strings."""

    length: int
    support: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.support:
            raise InvalidDistributionError("flat source needs a nonempty support")
        object.__setattr__(self, "support", frozenset(int(s) for s in self.support))
        size = 1 << self.length
        bad = [s for s in self.support if not 0 <= s < size]
        if bad:
            raise InvalidDistributionError(
                f"support element {bad[0]} outside [0, 2^{self.length})"
            )

    @classmethod
    def from_strings(cls, strings: Iterable[BitString]) -> "FlatSource":
        strings = list(strings)
        lengths = {s.length for s in strings}
        if len(lengths) > 1:
            raise DimensionError("mixed lengths in flat-source support")
        return cls(lengths.pop(), frozenset(s.value for s in strings))

    @property
    def size(self) -> int:
        return len(self.support)

    def dist(self, exact: bool = True) -> Dist:
        k = len(self.support)
        size = 1 << self.length
        if exact and self.length <= MAX_EXACT_LENGTH:
            probs = [Fraction(0)] * size
            w = Fraction(1, k)
            for s in self.support:
                probs[s] = w
            return Dist(self.length, probs, exact=True)
        arr = np.zeros(size)
        arr[sorted(self.support)] = 1.0 / k
        return Dist(self.length, arr, exact=False)


@dataclass(frozen=True)
class SeededFunction:
    """A total map ``(n) x (d) -> (m)``: source word plus seed to output.

    Wraps a plain callable together with its three bit lengths so that
    downstream code (push-forward, graph construction, composition) can
    check dimensions without extra bookkeeping.
    """

    n: int
    d: int
    m: int
    fn: Callable[[BitString, BitString], BitString]
    name: str = ""

    def __call__(self, x: BitString, y: BitString) -> BitString:
        if x.length != self.n:
            raise DimensionError(f"source has {x.length} bits, expected {self.n}")
        if y.length != self.d:
            raise DimensionError(f"seed has {y.length} bits, expected {self.d}")
        out = self.fn(x, y)
        if out.length != self.m:
            raise DimensionError(
                f"map produced {out.length} bits, declared output is {self.m}"
            )
        return out

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"SeededFunction(({self.n})x({self.d})->({self.m}){tag})"


# ---------------------------------------------------------------------------
# quantities


def min_entropy(X: Dist) -> float:
    """Min-entropy in bits: the smallest ``-log2 X(a)`` over the support."""
    support = X.support()
    if not support:
        raise InvalidDistributionError("all-zero distribution has no min-entropy")
    if X.exact:
        best = max(X.probs[i] for i in support)
        return math.log2(best.denominator) - math.log2(best.numerator)
    return float(-np.log2(np.max(np.asarray(X.probs)[support])))


def stat_dist(X: Dist, Y: Dist):
    """Statistical distance: half the L1 distance between the two vectors.

    Exact (Fraction) when both inputs are exact, float otherwise.  Equals
    the largest probability gap ``|X(S) - Y(S)|`` over events ``S``.
    """
    if X.length != Y.length:
        raise DimensionError(
            f"statistical distance between lengths {X.length} and {Y.length}"
        )
    if X.exact and Y.exact:
        return sum(abs(p - q) for p, q in zip(X.probs, Y.probs)) / 2
    xp = np.asarray(X.to_float().probs)
    yp = np.asarray(Y.to_float().probs)
    return float(np.abs(xp - yp).sum() / 2)


def flat_decompose(X: Dist, K: int) -> list[tuple[Fraction, FlatSource]]:
    """Write ``X`` as a convex combination of flat sources of size ``K``.

    Requires min-entropy at least ``log2 K`` (equivalently every probability
    at most ``1/K``).  Works in exact arithmetic regardless of the input
    backing and produces at most ``2^n`` components.

    The procedure repeatedly picks the ``K`` largest remaining entries
    (ties broken by ascending string order) and removes the largest mass
    that keeps every remaining entry at most ``1/K`` of the remaining
    total; each removal step emits one flat component.
    """
    if K < 1:
        raise EntropyDeficitError(f"component size K={K} must be at least 1")
    Xe = X.to_exact()
    size = 1 << Xe.length
    if K > size:
        raise EntropyDeficitError(f"K={K} exceeds the 2^{Xe.length} strings available")
    rem = list(Xe.probs)
    cap = Fraction(1, K)
    worst = max(rem)
    if worst > cap:
        raise EntropyDeficitError(
            f"min-entropy {math.log2(worst.denominator) - math.log2(worst.numerator):.6f}"
            f" below log2 K = {math.log2(K):.6f}"
        )
    components: list[tuple[Fraction, FlatSource]] = []
    total = Fraction(1)
    for _ in range(2 * size + 2):
        if total == 0:
            break
        order = sorted(range(size), key=lambda i: (-rem[i], i))
        chosen = order[:K]
        v = min(rem[i] for i in chosen)
        if K < size:
            u = rem[order[K]]
            v = min(v, total / K - u)
        if v <= 0:  # pragma: no cover - excluded by the entropy precondition
            raise InvalidDistributionError("decomposition stalled; invariant broken")
        for i in chosen:
            rem[i] -= v
        total -= K * v
        components.append((K * v, FlatSource(Xe.length, frozenset(chosen))))
    else:  # pragma: no cover
        raise InvalidDistributionError("decomposition did not terminate")
    return components


def push_forward(F: SeededFunction, X: Dist) -> Dist:
    """Distribution of ``F(X, U_d)``: the source ``X`` with a uniform seed.

    Exact backing in, exact backing out (total mass is preserved exactly);
    float backing falls back to float accumulation.
    """
    if X.length != F.n:
        raise DimensionError(f"source length {X.length} but map expects {F.n}")
    seeds = [BitString(F.d, y) for y in range(1 << F.d)]
    out_size = 1 << F.m
    if X.exact:
        acc = [Fraction(0)] * out_size
        seed_w = Fraction(1, 1 << F.d)
        for xi in X.support():
            px = X.probs[xi] * seed_w
            xw = BitString(F.n, xi)
            for y in seeds:
                acc[F(xw, y).value] += px
        return Dist(F.m, acc, exact=True)
    acc = np.zeros(out_size)
    seed_w = 1.0 / (1 << F.d)
    probs = np.asarray(X.probs)
    for xi in X.support():
        px = float(probs[xi]) * seed_w
        xw = BitString(F.n, xi)
        for y in seeds:
            acc[F(xw, y).value] += px
    return Dist(F.m, acc, exact=False)


# ---------------------------------------------------------------------------
# text format: header line `n`, then 2^n lines `bitstring weight`


def write_dist(X: Dist, fp: TextIO) -> None:
    fp.write(f"{X.length}\n")
    for i in range(1 << X.length):
        bs = BitString(X.length, i)
        p = X.probs[i]
        token = str(p) if X.exact else repr(float(p))
        fp.write(f"{bs.to_text()} {token}\n")


def _parse_weight(token: str):
    if "." in token or "e" in token or "E" in token:
        return float(token)
    try:
        return Fraction(token)
    except ValueError:
        raise FormatError(f"bad weight {token!r}") from None


def read_dist(fp: TextIO) -> Dist:
    header = fp.readline()
    try:
        n = int(header.strip())
    except ValueError:
        raise FormatError(f"bad distribution header {header!r}", line=1) from None
    size = 1 << n
    weights: list = [None] * size
    exact = True
    for lineno in range(2, size + 2):
        line = fp.readline()
        if not line:
            raise FormatError("unexpected end of distribution file", line=lineno)
        try:
            bs_text, w_text = line.split()
        except ValueError:
            raise FormatError(f"expected 'bitstring weight', got {line!r}", line=lineno)
        try:
            bs = BitString.from_text(bs_text)
        except FormatError as exc:
            raise FormatError(str(exc), line=lineno) from None
        if bs.length != n:
            raise FormatError(f"bit string of length {bs.length}, header says {n}", line=lineno)
        if weights[bs.value] is not None:
            raise FormatError(f"duplicate entry for {bs_text}", line=lineno)
        w = _parse_weight(w_text)
        exact = exact and isinstance(w, Fraction)
        weights[bs.value] = w
    missing = [i for i, w in enumerate(weights) if w is None]
    if missing:
        raise FormatError(f"missing entry for string index {missing[0]}")
    if exact:
        return Dist(n, [Fraction(w) for w in weights], exact=True)
    return Dist(n, np.array([float(w) for w in weights]), exact=False)
