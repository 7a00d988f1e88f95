"""extrakit: exact desk-scale toolkit for randomness extractors.

Bit strings, distributions, bipartite-graph verifiers, random-graph
existence harnesses, hashing-based extractors, combinatorial designs,
list-decodable codes, the Trevisan construction, composition/merging
operators, and Muchnik-style coding helpers.
"""

from .bits import BitString, concat
from .dist import (
    Dist,
    FlatSource,
    SeededFunction,
    flat_decompose,
    min_entropy,
    push_forward,
    stat_dist,
)
from .errors import (
    BudgetExceededError,
    DimensionError,
    EntropyDeficitError,
    ExtrakitError,
    FeasibilityError,
    FormatError,
    InvalidDistributionError,
    InvalidPairError,
    NoGoodNeighborError,
    Verdict,
)
from .graph import (
    BipartiteGraph,
    ExtractorSpec,
    function_of_graph,
    graph_of_function,
    prefix_graph,
    verify_disperser,
    verify_extractor,
    verify_prefix_extractor,
    worst_flat_distance,
)
from .randgraph import (
    ExistenceParams,
    ExistenceReport,
    degree_bound,
    existence_trial,
    sample_graph,
)
from .hashext import (
    ToeplitzFamily,
    collision_prob,
    flat_output_distance,
    hash_eval,
    hash_extractor_eval,
    hash_extractor_map,
)
from .design import (
    DesignFamily,
    greedy_weak_design,
    verify_design,
)
from .ecc import PINNED_POLYNOMIALS, Code, GField, brute_list_decode, build_code
from .ecc import encode as code_encode
from .trevisan import (
    TrevisanParams,
    nw_generate,
    trevisan_build,
    trevisan_eval,
    trevisan_graph,
    trevisan_map,
)
from .compose import (
    BlockSource,
    Merger,
    SomewhereRandomSource,
    check_block_source,
    check_somewhere_random,
    compose_serial,
    iterated_compose_dp,
    merger_compose,
    merger_output_dist,
    recursive_merger,
    two_block_merger,
)
from .muchnik import (
    BadSets,
    ChainResult,
    EnumerableSet,
    FortnowReport,
    compute_bad,
    decode,
    encode_multi,
    iterative_chain,
    neighbor_rank,
    verify_fortnow,
)
from .muchnik import encode as muchnik_encode

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "concat",
    "Dist",
    "FlatSource",
    "SeededFunction",
    "flat_decompose",
    "min_entropy",
    "push_forward",
    "stat_dist",
    "ExtrakitError",
    "DimensionError",
    "InvalidDistributionError",
    "EntropyDeficitError",
    "BudgetExceededError",
    "FormatError",
    "FeasibilityError",
    "InvalidPairError",
    "NoGoodNeighborError",
    "Verdict",
    "BipartiteGraph",
    "ExtractorSpec",
    "graph_of_function",
    "function_of_graph",
    "prefix_graph",
    "verify_disperser",
    "verify_extractor",
    "verify_prefix_extractor",
    "worst_flat_distance",
    "ExistenceParams",
    "ExistenceReport",
    "degree_bound",
    "sample_graph",
    "existence_trial",
    "ToeplitzFamily",
    "hash_eval",
    "collision_prob",
    "hash_extractor_eval",
    "hash_extractor_map",
    "flat_output_distance",
    "DesignFamily",
    "greedy_weak_design",
    "verify_design",
    "PINNED_POLYNOMIALS",
    "GField",
    "Code",
    "build_code",
    "code_encode",
    "brute_list_decode",
    "TrevisanParams",
    "nw_generate",
    "trevisan_build",
    "trevisan_eval",
    "trevisan_map",
    "trevisan_graph",
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
    "BadSets",
    "EnumerableSet",
    "compute_bad",
    "FortnowReport",
    "verify_fortnow",
    "muchnik_encode",
    "decode",
    "neighbor_rank",
    "encode_multi",
    "ChainResult",
    "iterative_chain",
]
