"""Composing extractors: serial composition, mergers, and the DP evaluator.

Serial composition feeds one extractor's output to another's seed input
and eats a two-block source.  A merger takes several blocks of which at
least one is (nearly) uniform — a somewhere-random source — plus a short
seed, and outputs an almost-uniform string.  The n-fold composition of
a chain of extractors through mergers is evaluated with the dynamic
program over suffix cells, which reuses each row instead of recomputing
the exponential recursion tree.

Everything here is exact bit pushing; the statistical guarantees are
measured by the tests on dense toy sources, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .bits import BitString, concat
from .dist import Dist, SeededFunction, as_fraction, min_entropy, stat_dist
from .errors import DimensionError, InvalidDistributionError, Verdict

__all__ = [
    "compose_serial",
    "BlockSource",
    "check_block_source",
    "SomewhereRandomSource",
    "check_somewhere_random",
    "Merger",
    "two_block_merger",
    "recursive_merger",
    "merger_compose",
    "iterated_compose_dp",
    "merger_output_dist",
]


def compose_serial(F1: SeededFunction, F2: SeededFunction) -> SeededFunction:
    """Chain two seeded maps: F(x1 || x2, y) = F1(x1, F2(x2, y))."""
    if F2.m != F1.d:
        raise DimensionError(
            f"inner map outputs {F2.m} bits, outer seed needs {F1.d}"
        )
    n1, n2 = F1.n, F2.n

    def fn(x: BitString, y: BitString) -> BitString:
        return F1(x.prefix(n1), F2(x.suffix(n2), y))

    return SeededFunction(n1 + n2, F2.d, F1.m, fn, name="serial")


# ---------------------------------------------------------------------------
# structured sources


@dataclass(frozen=True)
class BlockSource:
    """Joint source (X1, X2) claiming k1 bits in X1 and k2 in X2 given X1."""

    n1: int
    n2: int
    joint: Dist
    k1: int
    k2: int

    def __post_init__(self):
        if self.joint.length != self.n1 + self.n2:
            raise DimensionError(
                f"joint over {self.joint.length} bits, blocks say {self.n1}+{self.n2}"
            )

    def marginal1(self) -> Dist:
        """Distribution of the first block."""
        size1, size2 = 1 << self.n1, 1 << self.n2
        if self.joint.exact:
            probs = [
                sum(self.joint.probs[(x1 << self.n2) | x2] for x2 in range(size2))
                for x1 in range(size1)
            ]
            return Dist(self.n1, probs, exact=True)
        arr = np.asarray(self.joint.probs).reshape(size1, size2).sum(axis=1)
        return Dist(self.n1, arr, exact=False)

    def conditional2(self, x1: int) -> Dist:
        """Distribution of the second block given a first-block value."""
        size2 = 1 << self.n2
        if self.joint.exact:
            row = [self.joint.probs[(x1 << self.n2) | x2] for x2 in range(size2)]
            total = sum(row)
            if total == 0:
                raise InvalidDistributionError(f"first block never takes value {x1}")
            return Dist(self.n2, [p / total for p in row], exact=True)
        row = np.asarray(self.joint.probs).reshape(1 << self.n1, size2)[x1]
        total = float(row.sum())
        if total == 0:
            raise InvalidDistributionError(f"first block never takes value {x1}")
        return Dist(self.n2, row / total, exact=False)


def check_block_source(s: BlockSource) -> Verdict:
    """Exact check of both entropy claims; witness names the first failure.

    Witness ``("marginal", None)`` means the first block falls short of
    k1; ``("conditional", x1)`` names the first conditioning value whose
    second block falls short of k2.
    """
    marg = s.marginal1()
    if not _meets_min_entropy(marg, s.k1):
        return Verdict(False, witness=("marginal", None))
    for x1 in marg.support():
        if not _meets_min_entropy(s.conditional2(x1), s.k2):
            return Verdict(False, witness=("conditional", x1))
    return Verdict(True, note=f"k1={s.k1}, k2={s.k2} verified")


def _meets_min_entropy(X: Dist, k) -> bool:
    if X.exact and isinstance(k, int):
        bound = Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)
        return max(X.probs) <= bound
    return min_entropy(X) >= float(k) - 1e-12


@dataclass(frozen=True)
class SomewhereRandomSource:
    """b blocks of k bits with an explicit selector Y in {0..b}.

    ``probs[y][z]`` is the joint mass of selector value y and block
    contents z (z packs Z_1..Z_b, first block most significant).  Y = i
    >= 1 claims block i is eps-close to uniform under that conditioning;
    Y = 0 ("no good block") carries at most eta mass.
    """

    b: int
    k: int
    probs: tuple
    eps: Fraction = Fraction(0)
    eta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eps", as_fraction(self.eps))
        object.__setattr__(self, "eta", as_fraction(self.eta))
        size = 1 << (self.b * self.k)
        rows = tuple(tuple(Fraction(p) for p in row) for row in self.probs)
        if len(rows) != self.b + 1 or any(len(r) != size for r in rows):
            raise DimensionError(
                f"need {self.b + 1} selector rows of {size} entries each"
            )
        if any(p < 0 for r in rows for p in r):
            raise InvalidDistributionError("negative mass in somewhere-random source")
        if sum(p for r in rows for p in r) != 1:
            raise InvalidDistributionError("somewhere-random masses must sum to 1")
        object.__setattr__(self, "probs", rows)

    def selector_mass(self, y: int) -> Fraction:
        return sum(self.probs[y])

    def block_given_selector(self, i: int) -> Dist:
        """Distribution of block Z_i conditioned on Y = i (1-based block)."""
        mass = self.selector_mass(i)
        if mass == 0:
            raise InvalidDistributionError(f"selector never takes value {i}")
        acc = [Fraction(0)] * (1 << self.k)
        shift = (self.b - i) * self.k
        maskk = (1 << self.k) - 1
        for z, p in enumerate(self.probs[i]):
            if p:
                acc[(z >> shift) & maskk] += p / mass
        return Dist(self.k, acc, exact=True)

    def contents_dist(self) -> Dist:
        """Marginal distribution of the block contents (selector dropped)."""
        size = 1 << (self.b * self.k)
        acc = [Fraction(0)] * size
        for row in self.probs:
            for z, p in enumerate(row):
                if p:
                    acc[z] += p
        return Dist(self.b * self.k, acc, exact=True)


def check_somewhere_random(s: SomewhereRandomSource) -> Verdict:
    """Exact check of the selector guarantees; witness is the block index."""
    if s.selector_mass(0) > s.eta:
        return Verdict(False, witness=0, note="no-good-block mass exceeds eta")
    uniform = Dist.uniform(s.k)
    for i in range(1, s.b + 1):
        if s.selector_mass(i) == 0:
            continue
        if stat_dist(s.block_given_selector(i), uniform) > s.eps:
            return Verdict(False, witness=i, note=f"block {i} too far from uniform")
    return Verdict(True)


# ---------------------------------------------------------------------------
# mergers


@dataclass(frozen=True)
class Merger:
    """A map from `arity` blocks of k bits plus a d-bit seed to m bits."""

    arity: int
    k: int
    d: int
    m: int
    fn: Callable[[Sequence[BitString], BitString], BitString]
    name: str = ""

    def __call__(self, blocks: Sequence[BitString], y: BitString) -> BitString:
        blocks = list(blocks)
        if len(blocks) != self.arity:
            raise DimensionError(f"got {len(blocks)} blocks, merger takes {self.arity}")
        for i, z in enumerate(blocks):
            if z.length != self.k:
                raise DimensionError(
                    f"block {i} has {z.length} bits, merger blocks are {self.k}"
                )
        if y.length != self.d:
            raise DimensionError(f"seed has {y.length} bits, expected {self.d}")
        out = self.fn(blocks, y)
        if out.length != self.m:
            raise DimensionError(
                f"merger produced {out.length} bits, declared {self.m}"
            )
        return out

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"Merger(({self.k})^{self.arity} x ({self.d}) -> ({self.m}){tag})"


def two_block_merger(E: SeededFunction, k: Optional[int] = None) -> Merger:
    """View an extractor on 2k input bits as a merger of two k-bit blocks."""
    if k is None:
        if E.n % 2:
            raise DimensionError(f"extractor input {E.n} is odd; need n = 2k")
        k = E.n // 2
    if E.n != 2 * k:
        raise DimensionError(f"extractor input {E.n} != 2k for k={k}")
    return Merger(
        2, k, E.d, E.m, lambda blocks, y: E(blocks[0] + blocks[1], y),
        name="two-block",
    )


def recursive_merger(factory: Callable[[int], Merger], l: int, k: int) -> Merger:
    """Merge 2^l blocks by l rounds of pairwise merging.

    ``factory(k_i)`` must supply a 2-block merger for block length k_i;
    all levels must share one seed length d and one shrinkage
    mu = k_i - output length, so the result maps (k)^(2^l) with an
    l*d-bit seed to k - l*mu bits.  The seed is consumed back to front:
    the first merging round (2^l -> 2^(l-1) blocks) uses the last d-bit
    segment.  l = 0 returns the identity on one block.
    """
    if l < 0:
        raise DimensionError(f"negative level count {l}")
    if l == 0:
        return Merger(1, k, 0, k, lambda blocks, y: blocks[0], name="identity")
    base = factory(k)
    if base.arity != 2 or base.k != k:
        raise DimensionError(f"factory({k}) returned {base!r}, not a 2-block merger")
    mu = k - base.m
    d = base.d
    levels = [base]
    for i in range(1, l):
        ki = k - i * mu
        Mi = factory(ki)
        if Mi.arity != 2 or Mi.k != ki or Mi.d != d or Mi.m != ki - mu:
            raise DimensionError(
                f"factory({ki}) returned {Mi!r}; need blocks {ki}, seed {d},"
                f" output {ki - mu}"
            )
        levels.append(Mi)

    def fn(blocks: Sequence[BitString], y: BitString) -> BitString:
        cur = list(blocks)
        for round_idx in range(l):  # round 0 merges 2^l blocks using segment l
            seg = y.slice((l - 1 - round_idx) * d, (l - round_idx) * d)
            M = levels[round_idx]
            cur = [
                M([cur[2 * i], cur[2 * i + 1]], seg) for i in range(len(cur) // 2)
            ]
        return cur[0]

    return Merger(1 << l, k, l * d, k - l * mu, fn, name=f"recursive l={l}")


# ---------------------------------------------------------------------------
# composition of an extractor pair through a merger


def _padded(bs: BitString, length: int) -> BitString:
    """Zero-pad on the low-index (most significant) side, per the fixed rule."""
    return bs.pad_to(length)


def merger_compose(
    E1: SeededFunction,
    E2: SeededFunction,
    M: Merger,
    a: BitString,
    r1: BitString,
    r2: BitString,
) -> BitString:
    """Compose two extractors through a merger on one source word.

    For each position i (1-based): q_i = E1 on the suffix a[i..n],
    z_i = E2 on the prefix a[1..i-1] seeded with q_i; the merger combines
    z_1..z_n with seed r2.  Short substrings are zero-padded on the
    low-index side.
    """
    n = a.length
    if E1.n != n or E2.n != n:
        raise DimensionError(
            f"extractors take {E1.n}/{E2.n} bits, source has {n}"
        )
    if E2.d != E1.m:
        raise DimensionError(
            f"second extractor's seed is {E2.d} bits, first outputs {E1.m}"
        )
    if M.arity != n or M.k != E2.m:
        raise DimensionError(
            f"merger {M!r} does not take {n} blocks of {E2.m} bits"
        )
    blocks = []
    for i in range(1, n + 1):
        q_i = E1(_padded(a.slice(i - 1, n), n), r1)
        z_i = E2(_padded(a.slice(0, i - 1), n), q_i)
        blocks.append(z_i)
    return M(blocks, r2)


def iterated_compose_dp(
    extractors: Sequence[SeededFunction],
    mergers: Sequence[Merger],
    x: BitString,
    y: BitString,
    merger_seeds: Sequence[BitString],
) -> BitString:
    """Evaluate the t-fold composition via the suffix-cell dynamic program.

    Row 1 holds E_1 on every suffix of x with seed y; row j+1 at column i
    re-seeds E_{j+1} on prefixes x[i..l-1] with row j's cells and merges
    the resulting blocks (appending zero blocks up to full arity) with
    merger j's seed.  The answer is the top row's first cell; t = 1 is a
    plain E_1 evaluation and t = 2 agrees with merger_compose bit for
    bit.
    """
    t = len(extractors)
    if len(mergers) != t - 1 or len(merger_seeds) != t - 1:
        raise DimensionError(
            f"{t} extractors need {t - 1} mergers and seeds, got"
            f" {len(mergers)}/{len(merger_seeds)}"
        )
    n = x.length
    E1 = extractors[0]
    if E1.n != n:
        raise DimensionError(f"first extractor takes {E1.n} bits, source has {n}")
    row = [E1(_padded(x.slice(i - 1, n), n), y) for i in range(1, n + 1)]
    for j in range(1, t):
        Ej, Mj, yj = extractors[j], mergers[j - 1], merger_seeds[j - 1]
        if Ej.n != n:
            raise DimensionError(f"extractor {j + 1} takes {Ej.n} bits, source has {n}")
        if Ej.d != row[0].length:
            raise DimensionError(
                f"extractor {j + 1} seed is {Ej.d} bits, previous row cells have"
                f" {row[0].length}"
            )
        if Mj.arity != n or Mj.k != Ej.m:
            raise DimensionError(
                f"merger {j} is {Mj!r}, need {n} blocks of {Ej.m} bits"
            )
        zero_block = BitString.zeros(Ej.m)
        new_row = []
        for i in range(1, n + 1):
            blocks = [
                Ej(_padded(x.slice(i - 1, l - 1), n), row[l - 1])
                for l in range(i, n + 1)
            ]
            blocks.extend([zero_block] * (i - 1))
            new_row.append(Mj(blocks, yj))
        row = new_row
    return row[0]


def merger_output_dist(M: Merger, s: SomewhereRandomSource) -> Dist:
    """Exact output distribution of a merger on a somewhere-random source
    with an independent uniform seed."""
    if M.arity != s.b or M.k != s.k:
        raise DimensionError(
            f"merger {M!r} does not fit {s.b} blocks of {s.k} bits"
        )
    acc = [Fraction(0)] * (1 << M.m)
    seed_w = Fraction(1, 1 << M.d)
    maskk = (1 << s.k) - 1
    for row in s.probs:
        for z, p in enumerate(row):
            if p == 0:
                continue
            blocks = [
                BitString(s.k, (z >> ((s.b - 1 - i) * s.k)) & maskk)
                for i in range(s.b)
            ]
            w = p * seed_w
            for yv in range(1 << M.d):
                out = M(blocks, BitString(M.d, yv))
                acc[out.value] += w
    return Dist(M.m, acc, exact=True)
