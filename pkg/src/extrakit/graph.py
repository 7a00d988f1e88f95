"""Bipartite multigraphs and exact extractor/disperser verification.

A seeded map on bit strings is viewed as a bipartite multigraph: left
vertices are the ``N`` source values, right vertices the ``M`` outputs,
and each left vertex carries ``D`` ordered edges, one per seed.  The
verifiers here are exact at desk scale: all arithmetic on the pass/fail
boundary is done with integers (the error bound is taken as a rational),
enumeration is exhaustive, and budgets fail loudly instead of sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, TextIO, Union

import numpy as np

from .bits import BitString
from .dist import SeededFunction, as_fraction
from .errors import (
    BudgetExceededError,
    DimensionError,
    FormatError,
    Verdict,
)

__all__ = [
    "DEFAULT_SUBSET_BUDGET",
    "BipartiteGraph",
    "ExtractorSpec",
    "graph_of_function",
    "function_of_graph",
    "prefix_graph",
    "extractor_scan_range",
    "verify_disperser",
    "verify_extractor",
    "verify_prefix_extractor",
    "worst_flat_distance",
    "read_graph",
    "write_graph",
]

#: Default ceiling on the number of subsets a verifier may enumerate.
DEFAULT_SUBSET_BUDGET = 1 << 20


class BipartiteGraph:
    """Left part of size N, right part of size M, D ordered edges per left vertex.

    ``adjacency[x]`` lists the right endpoints of x's edges in seed order;
    repeated entries are genuine multi-edges.  Edge counts ``E(A, B)``
    respect multiplicity, neighbor sets ``Γ(a)`` do not.
    """

    __slots__ = ("N", "M", "D", "adjacency", "_hist", "_masks")

    def __init__(self, N: int, M: int, D: int, adjacency):
        if N < 0 or M <= 0 or D < 0:
            raise DimensionError(f"bad graph dimensions N={N}, M={M}, D={D}")
        adj = np.asarray(adjacency, dtype=np.int64).reshape(N, D) if N else np.zeros(
            (0, D), dtype=np.int64
        )
        if adj.size and (adj.min() < 0 or adj.max() >= M):
            raise DimensionError(
                f"adjacency entry outside [0, {M}): saw {int(adj.min())}..{int(adj.max())}"
            )
        self.N = N
        self.M = M
        self.D = D
        self.adjacency = adj
        self.adjacency.setflags(write=False)
        self._hist = None
        self._masks = None

    @property
    def hist(self) -> np.ndarray:
        """(N, M) matrix: hist[x, z] = number of edges from x to z."""
        if self._hist is None:
            h = np.zeros((self.N, self.M), dtype=np.int64)
            for x in range(self.N):
                h[x] = np.bincount(self.adjacency[x], minlength=self.M)
            h.setflags(write=False)
            self._hist = h
        return self._hist

    @property
    def neighbor_masks(self) -> list[int]:
        """Per left vertex, the set Γ(x) packed as a bitmask over [M]."""
        if self._masks is None:
            masks = []
            for x in range(self.N):
                m = 0
                for z in self.adjacency[x]:
                    m |= 1 << int(z)
                masks.append(m)
            self._masks = masks
        return self._masks

    def neighbors(self, x: int) -> frozenset[int]:
        return frozenset(int(z) for z in self.adjacency[x])

    def edge_count(self, A, B) -> int:
        """Number of edges from A into B, with multiplicity."""
        Bset = set(int(b) for b in B)
        total = 0
        for x in A:
            for z in self.adjacency[x]:
                if int(z) in Bset:
                    total += 1
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.N == other.N
            and self.M == other.M
            and self.D == other.D
            and np.array_equal(self.adjacency, other.adjacency)
        )

    def __repr__(self) -> str:
        return f"BipartiteGraph(N={self.N}, M={self.M}, D={self.D})"


@dataclass(frozen=True)
class ExtractorSpec:
    """Bit-level parameters (n, d, m) plus the claimed guarantee (k, eps)."""

    n: int
    d: int
    m: int
    k: int
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if not 0 < self.k <= self.n:
            raise DimensionError(f"need 0 < k <= n, got k={self.k}, n={self.n}")
        if self.d < 0 or self.m < 0:
            raise DimensionError(f"negative bit length in {self}")
        if not 0 < self.eps < 1:
            raise DimensionError(f"error bound {self.eps} outside (0, 1)")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def D(self) -> int:
        return 1 << self.d

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def K(self) -> int:
        return 1 << self.k


def graph_of_function(F, n: int | None = None, d: int | None = None, m: int | None = None) -> BipartiteGraph:
    """Tabulate a seeded map into its graph: row x lists F(x, y) in seed order.

    ``F`` may be a :class:`SeededFunction` (bit lengths taken from it) or a
    plain callable on (BitString, BitString), in which case n, d, m are
    required.
    """
    if isinstance(F, SeededFunction):
        n, d, m = F.n, F.d, F.m
    if n is None or d is None or m is None:
        raise DimensionError("plain callables need explicit n, d, m")
    N, D, M = 1 << n, 1 << d, 1 << m
    adj = np.empty((N, D), dtype=np.int64)
    for x in range(N):
        xw = BitString(n, x)
        for y in range(D):
            out = F(xw, BitString(d, y))
            if out.length != m:
                raise DimensionError(
                    f"map produced {out.length} bits, expected {m}"
                )
            adj[x, y] = out.value
    return BipartiteGraph(N, M, D, adj)


def function_of_graph(G: BipartiteGraph, name: str = "") -> SeededFunction:
    """Inverse of :func:`graph_of_function`; needs power-of-two N, M, D."""
    n, d, m = (_exact_log2(G.N, "N"), _exact_log2(G.D, "D"), _exact_log2(G.M, "M"))
    adj = G.adjacency

    def fn(x: BitString, y: BitString) -> BitString:
        return BitString(m, int(adj[x.value, y.value]))

    return SeededFunction(n, d, m, fn, name=name or "graph-lookup")


def _exact_log2(v: int, label: str) -> int:
    b = v.bit_length() - 1
    if v <= 0 or (1 << b) != v:
        raise DimensionError(f"{label}={v} is not a power of two")
    return b


def prefix_graph(G: BipartiteGraph, drop: int) -> BipartiteGraph:
    """Graph of the output-prefix map: keep the high bits, drop ``drop`` low bits."""
    m = _exact_log2(G.M, "M")
    if not 0 <= drop <= m:
        raise DimensionError(f"cannot drop {drop} of {m} output bits")
    if drop == 0:
        return G
    return BipartiteGraph(G.N, G.M >> drop, G.D, G.adjacency >> drop)


# ---------------------------------------------------------------------------
# verifiers


def verify_disperser(
    G: BipartiteGraph,
    K: int,
    eps,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> Verdict:
    """Exact disperser check.

    Pass iff no set Y of L = ceil(eps*M) right vertices is avoided by K or
    more left vertices (avoided: no edge lands in Y).  Equivalent to every
    K-subset A of the left side having |Γ(A)| >= (1-eps)M.  On failure the
    witness is ``(A, Y)`` with A the K smallest-index avoiding vertices and
    Y the first failing set in lexicographic order.
    """
    eps = as_fraction(eps)
    if K > G.N:
        raise DimensionError(f"K={K} exceeds left size N={G.N}")
    L = math.ceil(eps * G.M)
    if L > G.M:
        return Verdict(True, note=f"L={L} exceeds M={G.M}; condition vacuous")
    if math.comb(G.M, L) > max_subsets:
        raise BudgetExceededError(
            f"C({G.M},{L}) = {math.comb(G.M, L)} subsets exceed budget {max_subsets}"
        )
    masks = G.neighbor_masks
    for Y in combinations(range(G.M), L):
        ymask = 0
        for z in Y:
            ymask |= 1 << z
        avoiding = [x for x in range(G.N) if masks[x] & ymask == 0]
        if len(avoiding) >= K:
            return Verdict(False, witness=(tuple(avoiding[:K]), Y))
    return Verdict(True, note=f"checked all C({G.M},{L}) right sets")


def extractor_scan_range(G: BipartiteGraph, K: int, eps, lo: int, hi: int):
    """Least failing right-event bitmask in [lo, hi), or None if all pass.

    The shared inner loop of :func:`verify_extractor`; callers may split
    the bitmask space into ranges (e.g. across threads) and take the
    minimum failing bitmask over ranges — the result is identical to a
    single full scan.  Returns ``(bmask, B_indices, top_K_lefts)``.
    """
    eps = as_fraction(eps)
    p, q = eps.numerator, eps.denominator
    H = G.hist
    M, D = G.M, G.D
    rhs_const = K * D
    for bmask in range(lo, hi):
        cols = [z for z in range(M) if bmask >> z & 1]
        sB = len(cols)
        if sB == 0:
            continue
        c = H[:, cols].sum(axis=1)
        if K < G.N:
            topsum = int(np.partition(c, G.N - K)[G.N - K :].sum())
        else:
            topsum = int(c.sum())
        if topsum * M * q >= rhs_const * (sB * q + p * M):
            order = sorted(range(G.N), key=lambda x: (-int(c[x]), x))
            return bmask, tuple(cols), tuple(order[:K])
    return None


def verify_extractor(
    G: BipartiteGraph,
    K: int,
    eps,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> Verdict:
    """Exact one-sided extractor check over all right-side events.

    Pass iff for every B subseteq [M], the K left vertices with the most
    edges into B satisfy  |E(A, B)| < K*D*(|B|/M + eps)  (strict).  Checking
    the top-K set suffices: among size-K left sets it maximizes |E(A, B)|,
    and flat sources of size K are the extreme points of the sources the
    guarantee quantifies over.  The comparison is exact: with eps = p/q the
    test is  |E|*M*q < K*D*(|B|*q + p*M)  over Python integers.

    On failure the witness is ``(B, A)``: B the least failing subset in
    indicator-bitmask order, A the top-K lefts for that B (ties by index).
    """
    if K > G.N:
        raise DimensionError(f"K={K} exceeds left size N={G.N}")
    if 1 << G.M > max_subsets:
        raise BudgetExceededError(
            f"2^{G.M} right subsets exceed budget {max_subsets}"
        )
    hit = extractor_scan_range(G, K, eps, 1, 1 << G.M)
    if hit is not None:
        _, cols, top = hit
        return Verdict(False, witness=(cols, top))
    return Verdict(True, note=f"checked all 2^{G.M} right events")


def verify_prefix_extractor(
    F,
    spec: ExtractorSpec,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> Verdict:
    """Check the extractor condition for every output prefix simultaneously.

    For each i in 0..k the map that keeps the top m-i output bits must be
    a (k-i, eps) extractor (graph form: K = 2^(k-i)).  ``F`` is a seeded
    map or a :class:`BipartiteGraph` with power-of-two sides.  Failure
    witness: ``(i, inner)`` with ``inner`` the failing prefix's (B, A).
    """
    if spec.k > spec.m:
        raise DimensionError(f"prefix check needs k <= m, got k={spec.k}, m={spec.m}")
    if isinstance(F, BipartiteGraph):
        G = F
    else:
        G = graph_of_function(F, n=spec.n, d=spec.d, m=spec.m)
    if (G.N, G.D, G.M) != (spec.N, spec.D, spec.M):
        raise DimensionError(
            f"graph ({G.N},{G.M},{G.D}) does not match spec ({spec.N},{spec.M},{spec.D})"
        )
    for i in range(spec.k + 1):
        Gi = prefix_graph(G, i)
        verdict = verify_extractor(Gi, 1 << (spec.k - i), spec.eps, max_subsets)
        if not verdict:
            return Verdict(False, witness=(i, verdict.witness), note=f"prefix drop {i}")
    return Verdict(True, note=f"all {spec.k + 1} prefixes pass")


def worst_flat_distance(
    G: BipartiteGraph,
    K: int,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> tuple[tuple[int, ...], Fraction]:
    """Exhaustively find the size-K left set whose output is farthest from uniform.

    The induced distribution of a flat set A puts mass E(A,{z})/(K*D) on
    each right vertex z; the value returned is the statistical distance to
    uniform over [M], as an exact Fraction.  Ties resolve to the first set
    in lexicographic order.
    """
    if K > G.N:
        raise DimensionError(f"K={K} exceeds left size N={G.N}")
    if math.comb(G.N, K) > max_subsets:
        raise BudgetExceededError(
            f"C({G.N},{K}) = {math.comb(G.N, K)} subsets exceed budget {max_subsets}"
        )
    H = G.hist
    KD = K * G.D
    best: tuple[int, ...] = ()
    best_val = Fraction(-1)
    for A in combinations(range(G.N), K):
        counts = H[list(A)].sum(axis=0)
        # sum_z |E/KD - 1/M| / 2, cleared to integers: sum_z |M*E_z - KD| / (2*M*KD)
        num = int(np.abs(counts * G.M - KD).sum())
        val = Fraction(num, 2 * G.M * KD)
        if val > best_val:
            best, best_val = A, val
    return best, best_val


# ---------------------------------------------------------------------------
# text format: line 1 `N M D`, then N lines of D space-separated indices


def write_graph(G: BipartiteGraph, fp: TextIO) -> None:
    fp.write(f"{G.N} {G.M} {G.D}\n")
    for x in range(G.N):
        fp.write(" ".join(str(int(z)) for z in G.adjacency[x]) + "\n")


def read_graph(fp: TextIO) -> BipartiteGraph:
    header = fp.readline()
    parts = header.split()
    if len(parts) != 3:
        raise FormatError(f"expected 'N M D' header, got {header!r}", line=1)
    try:
        N, M, D = (int(t) for t in parts)
    except ValueError:
        raise FormatError(f"non-integer in header {header!r}", line=1) from None
    rows = []
    for lineno in range(2, N + 2):
        line = fp.readline()
        if not line:
            raise FormatError("unexpected end of graph file", line=lineno)
        toks = line.split()
        if len(toks) != D:
            raise FormatError(f"expected {D} indices, got {len(toks)}", line=lineno)
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise FormatError(f"non-integer edge index in {line!r}", line=lineno) from None
        bad = [z for z in row if not 0 <= z < M]
        if bad:
            raise FormatError(f"edge index {bad[0]} outside [0, {M})", line=lineno)
        rows.append(row)
    return BipartiteGraph(N, M, D, rows)
