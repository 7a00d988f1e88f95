"""The Nisan-Wigderson generator and the Trevisan extractor.

The generator turns one hard-looking function f on l bits into m output
bits: bit i is f evaluated on the seed restricted to the i-th set of a
combinatorial design.  The extractor instantiates f with the codeword
of the source word x under the concatenated code (ecc module), whose
2^(2t) truth-table length matches l = 2t, and keeps overlaps small with
a weak design (design module).

Desk-scale parameters almost never satisfy the quality theorem's
feasibility inequality, so the gated builder refuses them; the
structural surface (restriction order, prefix behavior, locality) is
exact at any size and is what the tests pin down.  Parameter objects
can also be assembled by hand for structural experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .bits import BitString
from .design import DesignFamily, greedy_weak_design, verify_design
from .dist import SeededFunction, as_fraction
from .ecc import Code, build_code, encode
from .errors import DimensionError, FeasibilityError
from .graph import BipartiteGraph

__all__ = [
    "nw_generate",
    "TrevisanParams",
    "trevisan_build",
    "trevisan_eval",
    "trevisan_map",
    "trevisan_graph",
]


def nw_generate(f: BitString, design: DesignFamily, y: BitString) -> BitString:
    """Generator output: bit i is f applied to y restricted to set i.

    ``f`` is a truth table on design.l bits (bit v = value on input v);
    restrictions read the seed positions of each set in increasing order.
    """
    if f.length != 1 << design.l:
        raise DimensionError(
            f"truth table has {f.length} entries, design sets need 2^{design.l}"
        )
    if y.length != design.d:
        raise DimensionError(f"seed has {y.length} bits, design universe is {design.d}")
    out = 0
    for s in design.sets:
        v = 0
        for pos in s:  # sets are stored sorted ascending
            v = (v << 1) | y.bit(pos)
        out = (out << 1) | f.bit(v)
    return BitString(design.m, out)


@dataclass(frozen=True)
class TrevisanParams:
    """Everything needed to evaluate one extractor instance.

    ``rho_budget`` is the overlap allowance implied by the quality claim,
    present only when the instance came through the gated builder; hand
    assembled structural instances leave it None.
    """

    n: int
    k: int
    m: int
    eps: Fraction
    code: Code
    design: DesignFamily
    rho_budget: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if self.code.n != self.n:
            raise DimensionError(
                f"code encodes {self.code.n} bits, extractor takes {self.n}"
            )
        if self.design.l != self.code.l:
            raise DimensionError(
                f"design sets have {self.design.l} elements, codeword truth table"
                f" needs {self.code.l}"
            )
        if self.design.m != self.m:
            raise DimensionError(
                f"design has {self.design.m} sets, extractor outputs {self.m} bits"
            )

    @property
    def d(self) -> int:
        """Seed length: the design's universe size."""
        return self.design.d

    @property
    def delta(self) -> Fraction:
        return self.code.delta

    def __repr__(self) -> str:
        return (
            f"TrevisanParams(n={self.n}, k={self.k}, m={self.m}, eps={self.eps},"
            f" d={self.d}, t={self.code.t})"
        )


def _pow2(c: int) -> Fraction:
    return Fraction(1 << c) if c >= 0 else Fraction(1, 1 << -c)


def _ceil_log2(v: Fraction) -> int:
    """Exact log2 for powers of two, ceiling otherwise (v > 0); no floats."""
    p, q = v.numerator, v.denominator
    if p & (p - 1) == 0 and q & (q - 1) == 0:
        return p.bit_length() - q.bit_length()
    c = p.bit_length() - q.bit_length()
    while _pow2(c) < v:
        c += 1
    while _pow2(c - 1) >= v:
        c -= 1
    return c


def trevisan_build(n: int, k: int, m: int, eps) -> TrevisanParams:
    """Gated builder: code at delta = eps/4m, greedy weak design, budget check.

    Refuses when the implied overlap budget
    (k - 3*log2(m/eps) - d - 3)/m drops below 1, naming the inequality.
    """
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise DimensionError(f"error bound {eps} outside (0, 1)")
    if not m <= k <= n:
        raise DimensionError(f"need m <= k <= n, got m={m}, k={k}, n={n}")
    delta = eps / (4 * m)
    code = build_code(n, delta)
    design = greedy_weak_design(code.l, m, rho=1)
    assert verify_design(design, "weak", 1)
    log_term = _ceil_log2(Fraction(m) / eps)
    budget = Fraction(k - 3 * log_term - design.d - 3, m)
    if budget < 1:
        raise FeasibilityError(
            f"infeasible: k - 3*log2(m/eps) - d - 3 >= m fails "
            f"({k} - 3*{log_term} - {design.d} - 3 = {k - 3 * log_term - design.d - 3}"
            f" < {m})"
        )
    return TrevisanParams(
        n=n, k=k, m=m, eps=eps, code=code, design=design, rho_budget=budget
    )


def trevisan_eval(p: TrevisanParams, x: BitString, y: BitString) -> BitString:
    """Extract: encode x, use the codeword as the generator's truth table."""
    if x.length != p.n:
        raise DimensionError(f"source has {x.length} bits, expected {p.n}")
    return nw_generate(encode(p.code, x), p.design, y)


def trevisan_map(p: TrevisanParams, strong: bool = False) -> SeededFunction:
    """The extractor as a checked seeded map; strong mode prepends the seed."""
    if strong:
        return SeededFunction(
            p.n,
            p.d,
            p.d + p.m,
            lambda x, y: y + trevisan_eval(p, x, y),
            name=f"trevisan-strong n={p.n} m={p.m}",
        )
    return SeededFunction(
        p.n,
        p.d,
        p.m,
        lambda x, y: trevisan_eval(p, x, y),
        name=f"trevisan n={p.n} m={p.m}",
    )


def _truth_table_array(f: BitString) -> np.ndarray:
    """Truth table as a uint8 array indexed by input value."""
    if f.length % 8 == 0:
        raw = f.value.to_bytes(f.length // 8, "big")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
    return np.array([f.bit(i) for i in range(f.length)], dtype=np.uint8)


def trevisan_graph(p: TrevisanParams, strong: bool = False) -> BipartiteGraph:
    """Whole-graph tabulation, vectorized over seeds.

    Equals graph_of_function(trevisan_map(p)) bit for bit but runs in
    numpy: the design restrictions of every seed are gathered once, then
    each source word is a table lookup.
    """
    D = 1 << p.d
    seeds = np.arange(D, dtype=np.int64)
    # seed bit at position pos (MSB-first) for every seed value
    restr = []
    for s in p.design.sets:
        v = np.zeros(D, dtype=np.int64)
        for pos in s:
            v = (v << 1) | ((seeds >> (p.d - 1 - pos)) & 1)
        restr.append(v)
    N = 1 << p.n
    adj = np.zeros((N, D), dtype=np.int64)
    for xv in range(N):
        table = _truth_table_array(encode(p.code, BitString(p.n, xv)))
        out = np.zeros(D, dtype=np.int64)
        for v in restr:
            out = (out << 1) | table[v]
        adj[xv] = out
    if strong:
        adj = (seeds[np.newaxis, :] << p.m) | adj
        return BipartiteGraph(N, 1 << (p.d + p.m), D, adj)
    return BipartiteGraph(N, 1 << p.m, D, adj)
