"""Finite tagged-structure laboratory.

Exact GF(2) structures with named subgroups: amalgamation, chain
approximations of the generic limit, class-bijection lifting, the doubled
coding engine, and the graph reduction, all backed by the C++ core.
"""

from taglab._core import (  # noqa: F401
    Chain,
    CodedStructure,
    EngineParams,
    Graph,
    TaglabError,
    __version__,
    amalgamate_free,
    brute_force_iso,
    build_chain,
    encode,
    engine_claim1_report,
    engine_claim2_ok,
    find_graph_iso,
    graph_catalog,
    graphs_isomorphic,
    run_suite,
    transport_ok,
    validate_structure_text,
    zg_count,
)

__all__ = [
    "Chain",
    "CodedStructure",
    "EngineParams",
    "Graph",
    "TaglabError",
    "__version__",
    "amalgamate_free",
    "brute_force_iso",
    "build_chain",
    "encode",
    "engine_claim1_report",
    "engine_claim2_ok",
    "find_graph_iso",
    "graph_catalog",
    "graphs_isomorphic",
    "run_suite",
    "transport_ok",
    "validate_structure_text",
    "zg_count",
]
