"""Set families with bounded overlap: designs, weak designs, verification.

A family S_1..S_m of l-subsets of [d] seeds the Nisan-Wigderson
generator; what matters is how much the sets overlap.  Three exact
checks are provided (strict design, weak design, uniform weak design)
plus a deterministic greedy construction of weak designs whose universe
grows like l^2 * log m.

The construction works in blocks of halving size, largest first.  Sets
in different blocks live on disjoint sub-universes, so each cross-block
pair contributes only 2^0 = 1 to the overlap sum; within a block the
elements are picked greedily to minimize the running potential.  Early
blocks face many same-block neighbors but have most of the budget
rho*(m-1) available; late blocks have little budget left but few
same-block neighbors.  A block whose greedy pass cannot meet the bound
restarts with its sub-universe doubled, which terminates because l*m_t
fresh elements always suffice for pairwise-disjoint sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

from .dist import as_fraction
from .errors import DimensionError, FeasibilityError, FormatError, Verdict

__all__ = [
    "DesignFamily",
    "verify_design",
    "greedy_weak_design",
    "read_design",
    "write_design",
]

KINDS = ("design", "weak", "uniform-weak")


@dataclass(frozen=True)
class DesignFamily:
    """m sets of size l over universe [d]; each set stored sorted ascending."""

    d: int
    l: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        norm = tuple(tuple(sorted(int(e) for e in s)) for s in self.sets)
        object.__setattr__(self, "sets", norm)
        for idx, s in enumerate(norm):
            if len(set(s)) != self.l:
                raise DimensionError(
                    f"set {idx} has {len(set(s))} distinct elements, expected {self.l}"
                )
            if s and (s[0] < 0 or s[-1] >= self.d):
                raise DimensionError(
                    f"set {idx} leaves the universe [0, {self.d})"
                )

    @property
    def m(self) -> int:
        return len(self.sets)

    def __repr__(self) -> str:
        return f"DesignFamily(d={self.d}, l={self.l}, m={self.m})"


def _overlap(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    return len(set(a) & set(b))


def verify_design(family: DesignFamily, kind: str, rho) -> Verdict:
    """Exact overlap check; witness is the first violating index.

    design:        every pair i<j has 2^|S_i n S_j| <= rho  (witness (i, j))
    weak:          every j has sum_{i<j} 2^|S_i n S_j| <= rho*(m-1)  (witness j)
    uniform-weak:  every j has sum_{i<j} 2^|S_i n S_j| <= rho*(j-1)  (witness j)

    Indices in witnesses are 1-based to match the S_1..S_m naming.
    """
    if kind not in KINDS:
        raise DimensionError(f"kind {kind!r} not one of {KINDS}")
    rho = as_fraction(rho)
    sets, m = family.sets, family.m
    if kind == "design":
        for j in range(1, m):
            for i in range(j):
                if (1 << _overlap(sets[i], sets[j])) > rho:
                    return Verdict(False, witness=(i + 1, j + 1))
        return Verdict(True, note=f"all {m * (m - 1) // 2} pairs within 2^|overlap| <= {rho}")
    for j in range(1, m):
        total = sum(1 << _overlap(sets[i], sets[j]) for i in range(j))
        budget = rho * (m - 1) if kind == "weak" else rho * (j)
        # uniform-weak budget uses the 1-based position: rho * (j_1based - 1) = rho * j
        if total > budget:
            return Verdict(False, witness=j + 1, note=f"sum {total} > {budget}")
    return Verdict(True, note=f"all {m} running sums within budget")


def _build_block(
    count: int,
    l: int,
    universe: list[int],
) -> list[tuple[int, ...]]:
    """Greedily pick `count` l-sets from `universe`, minimizing potential.

    Each element choice minimizes the resulting sum over earlier
    same-block sets of 2^|overlap with the partial set|; ties go to the
    smallest element.  Returns the block's sets (sorted tuples).
    """
    sets: list[tuple[int, ...]] = []
    containing: dict[int, list[int]] = {e: [] for e in universe}
    for _ in range(count):
        chosen: list[int] = []
        inter = [0] * len(sets)  # overlap of each earlier set with `chosen`
        for _pick in range(l):
            best_e, best_cost = None, None
            for e in universe:
                if e in chosen:
                    continue
                cost = sum(1 << inter[i] for i in containing[e])
                if best_cost is None or cost < best_cost:
                    best_e, best_cost = e, cost
            chosen.append(best_e)
            for i in containing[best_e]:
                inter[i] += 1
        new = tuple(sorted(chosen))
        for e in new:
            containing[e].append(len(sets))
        sets.append(new)
    return sets


def greedy_weak_design(l: int, m: int, rho=1) -> DesignFamily:
    """Deterministic weak (l, rho)-design with universe O(l^2 log m).

    Output always passes ``verify_design(kind="weak", rho=rho)``; the
    universe is compacted to the elements actually used.
    """
    if l < 1 or m < 1:
        raise DimensionError(f"need l, m >= 1, got l={l}, m={m}")
    rho = as_fraction(rho)
    if rho < 1 and m > 1:
        # even pairwise-disjoint sets give a running sum of m-1 > rho*(m-1)
        raise FeasibilityError(f"no weak design with rho={rho} < 1 exists for m={m}")
    budget = rho * (m - 1)
    # halving block sizes, largest first: e.g. m=11 -> 6, 3, 1, 1
    sizes = []
    rest = m
    while rest > 0:
        take = (rest + 1) // 2 if rest > 1 else 1
        sizes.append(take)
        rest -= take
    all_sets: list[tuple[int, ...]] = []
    next_elem = 0
    for bsize in sizes:
        placed = len(all_sets)  # sets in earlier blocks: each contributes 2^0
        u = max(l, min(l * bsize, (3 * l * l + 1) // 2))
        while True:
            universe = list(range(next_elem, next_elem + u))
            block = _build_block(bsize, l, universe)
            ok = True
            for t, s in enumerate(block):
                within = sum(1 << _overlap(block[i], s) for i in range(t))
                if placed + within > budget:
                    ok = False
                    break
            if ok:
                break
            if u >= l * bsize:
                # unreachable for rho >= 1: at u = l*bsize the greedy picks
                # disjoint sets, whose running sum j-1 fits rho*(m-1)
                raise FeasibilityError(
                    f"greedy block failed even on a disjoint universe (l={l}, m={m})"
                )
            u = min(2 * u, l * bsize)
        all_sets.extend(block)
        next_elem += u
    # compact the universe to the elements actually used
    used = sorted({e for s in all_sets for e in s})
    remap = {e: i for i, e in enumerate(used)}
    sets = tuple(tuple(remap[e] for e in s) for s in all_sets)
    return DesignFamily(d=len(used), l=l, sets=sets)


# ---------------------------------------------------------------------------
# text format: line 1 `d l m`, then m lines of l sorted indices


def write_design(family: DesignFamily, fp: TextIO) -> None:
    fp.write(f"{family.d} {family.l} {family.m}\n")
    for s in family.sets:
        fp.write(" ".join(str(e) for e in s) + "\n")


def read_design(fp: TextIO) -> DesignFamily:
    header = fp.readline()
    parts = header.split()
    if len(parts) != 3:
        raise FormatError(f"expected 'd l m' header, got {header!r}", line=1)
    try:
        d, l, m = (int(t) for t in parts)
    except ValueError:
        raise FormatError(f"non-integer in header {header!r}", line=1) from None
    sets = []
    for lineno in range(2, m + 2):
        line = fp.readline()
        if not line:
            raise FormatError("unexpected end of design file", line=lineno)
        toks = line.split()
        if len(toks) != l:
            raise FormatError(f"expected {l} elements, got {len(toks)}", line=lineno)
        try:
            s = tuple(int(t) for t in toks)
        except ValueError:
            raise FormatError(f"non-integer element in {line!r}", line=lineno) from None
        if list(s) != sorted(set(s)):
            raise FormatError("elements must be distinct and sorted", line=lineno)
        sets.append(s)
    try:
        return DesignFamily(d=d, l=l, sets=tuple(sets))
    except DimensionError as exc:
        raise FormatError(str(exc)) from None
