// graphcodec.hpp
//
// Encoding finite graphs as engine expansions: vertices are the E0 classes,
// an edge marks every fiber over a cross-class pair, and the span of the
// marked fibers is the distinguished subgroup. Decoding works from the
// subspace data alone; a brute-force structure-isomorphism search and the
// induced vertex map close the loop.

#pragma once

#include <optional>

#include "taglab/engine.hpp"

namespace taglab {

struct Graph {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // u < v, irreflexive

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    std::size_t edge_count() const { return edges.size(); }

    friend bool operator==(const Graph&, const Graph&) = default;
};

/// Applies a vertex bijection to every edge.
Graph apply_vertex_map(const Graph& g, const std::vector<int>& h);

/// All graphs on n vertices up to isomorphism, canonically labeled,
/// deterministic order.
std::vector<Graph> graph_catalog(int n);

/// Permutation-search isomorphism test (the independent oracle).
std::optional<std::vector<int>> find_graph_iso(const Graph& a, const Graph& b);
bool graphs_isomorphic(const Graph& a, const Graph& b);
bool is_graph_iso(const Graph& a, const Graph& b, const std::vector<int>& h);

struct CodedStructure {
    Engine engine;
    std::vector<F2Vector> z;  // the marked X1 elements
    F2Subspace u_plus;        // their span
};

/// |Z| = edges * m0^2 * m1 without building anything.
std::size_t zg_count(const Graph& g, const EngineParams& params);

CodedStructure encode(const Graph& g, const EngineParams& params);

/// Decode from raw subspace data; rejects a subgroup whose X1 trace is not a
/// union of recovered fibers.
Graph decode_raw(const EngineRawData& raw, const F2Subspace& u_plus,
                 int guard = kDefaultEnumerationGuard);
Graph decode(const CodedStructure& coded, int guard = kDefaultEnumerationGuard);

struct TransportResult {
    Sigma sigma;
    ValidationReport audit;  // Z and U+ transport checks
    bool ok() const { return audit.ok(); }
};

/// Lifts a vertex bijection and audits that it carries Z and U+ across.
TransportResult transport(const std::vector<int>& h, const CodedStructure& from,
                          const CodedStructure& to);

struct StructureIso {
    std::vector<int> perm_x0;
    std::vector<int> perm_x1;
    F2LinearMap map;
};

/// Backtracking over X0 permutations with the fiber action induced on X1;
/// that restriction loses nothing, because preserving W0 forces every fiber
/// onto the fiber of the image pair, and permutations inside a fiber change
/// none of the checked subspaces. Returns the first map preserving W0, W1
/// and carrying U+ across, or nothing, in which case no isomorphism of the
/// searched signature exists.
std::optional<StructureIso> brute_force_iso(const CodedStructure& a,
                                            const CodedStructure& b);

/// The vertex map induced by a structure isomorphism on the recovered
/// classes, verified to be a graph isomorphism of the decoded graphs.
std::vector<int> induced_graph_iso(const StructureIso& f, const CodedStructure& a,
                                   const CodedStructure& b);

}  // namespace taglab
