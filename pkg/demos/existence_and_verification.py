"""Random graphs at the theorem degree, checked exactly.

Samples bipartite graphs with the degree the probabilistic argument
prescribes and runs the exact extractor verifier on each: most samples
pass, and a failing sample yields a concrete witness (a right-side
event plus the flat source that over-hits it).
"""

from fractions import Fraction

from extrakit import (
    ExistenceParams,
    degree_bound,
    existence_trial,
    sample_graph,
    verify_extractor,
)

params = ExistenceParams(N=16, M=4, K=4, eps=Fraction(9, 20), kind="extractor")
D = degree_bound(params)
print(f"instance: N={params.N} M={params.M} K={params.K} eps={params.eps}")
print(f"degree from the existence bound: D={D}")

report = existence_trial(params, trials=50, seed=2024)
print(f"pass fraction over {report.trials} seeded trials: {report.fraction}")

# An undersized degree makes failures easy to find; show one witness.
skinny = 2
for seed in range(100):
    G = sample_graph(params.N, params.M, skinny, seed)
    verdict = verify_extractor(G, params.K, params.eps)
    if not verdict:
        B, A = verdict.witness
        print(f"\nat D={skinny}, seed {seed} fails: event B={B}, top sources A={A}")
        hits = G.edge_count(A, B)
        print(
            f"  {hits} of {params.K * skinny} edges from A land in B "
            f"(|B|/M + eps = {Fraction(len(B), params.M) + params.eps})"
        )
        break
else:
    print(f"\nno failure found at D={skinny} (unexpected at this size)")
