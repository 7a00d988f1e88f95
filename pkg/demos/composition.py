"""Composing extractors: serial chaining, block sources, and mergers.

Shows the three composition mechanisms on exact toy distributions:
seed-saving serial composition, a block source feeding two extractors,
and a recursive merger folding 4 blocks into one with fresh seed per
round.
"""

from fractions import Fraction

from extrakit import (
    BitString,
    BlockSource,
    Dist,
    Merger,
    ToeplitzFamily,
    check_block_source,
    compose_serial,
    hash_extractor_map,
    merger_output_dist,
    recursive_merger,
    SomewhereRandomSource,
    check_somewhere_random,
)

# Serial composition: the second extractor's output seeds the first.
E1 = hash_extractor_map(ToeplitzFamily(3, 1))   # (3) x (3) -> (4)
E2 = hash_extractor_map(ToeplitzFamily(2, 2))   # (2) x (3) -> (5), prefix-fed
# E2 produces 5 bits; E1 needs only 3, so feed it the 3-bit prefix.
from extrakit import SeededFunction
E2p = SeededFunction(2, 3, 3, lambda x, y: E2(x, y).prefix(3), name="E2-prefix")
F = compose_serial(E1, E2p)
print(f"serial: ({E1.n})x({E2p.d}) -> ({F.m}) — one {E2p.d}-bit seed drives both")
print("example:", F(BitString(5, 0b10110), BitString(3, 0b011)).to01())

# A block source: first block uniform on {00, 01}, second block fully
# uniform given the first — k1 = 1 and k2 = 2 both hold exactly.
joint = Dist(4, [Fraction(1, 8)] * 8 + [Fraction(0)] * 8)
bs = BlockSource(2, 2, joint, k1=1, k2=2)
print("\nblock source check:", check_block_source(bs))

# Recursive merger: fold 2^2 blocks of 4 bits, one seed segment per round.
def factory(ki):
    return Merger(2, ki, 1, ki - 1,
                  lambda blocks, y: blocks[y.value].prefix(ki - 1),
                  name=f"pick+trim k={ki}")

M = recursive_merger(factory, l=2, k=4)
print(f"\nrecursive merger: {M!r}")
blocks = [BitString(4, v) for v in (0b1010, 0b0111, 0b0001, 0b1100)]
for y in range(4):
    out = M(blocks, BitString(2, y))
    print(f"  seed {y:02b} -> {out.to01()}")

# A somewhere-random source: the selector says which of two 2-bit
# blocks is uniform; the merger's output distribution is exact.
srs = SomewhereRandomSource(
    b=2, k=2,
    probs=[[Fraction(0)] * 16,            # selector 0 (no good block): empty
           [Fraction(1, 32)] * 16,        # selector 1: block 1 uniform
           [Fraction(1, 32)] * 16],       # selector 2: block 2 uniform
    eps=Fraction(0), eta=Fraction(1, 2),
)
print("\nsomewhere-random check:", check_somewhere_random(srs))
sel = Merger(2, 2, 1, 2, lambda bl, y: bl[y.value], name="select")
out = merger_output_dist(sel, srs)
print("merged output distribution:", [str(p) for p in out.probs])
