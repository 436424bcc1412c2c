#include "taglab/graphcodec.hpp"

#include <algorithm>

namespace taglab {

void Graph::add_edge(int u, int v) {
    detail::require(u != v, "Graph: no loops");
    detail::require(0 <= u && u < n && 0 <= v && v < n, "Graph: vertex out of range");
    if (u > v) std::swap(u, v);
    edges.emplace(u, v);
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return edges.count({u, v}) > 0;
}

Graph apply_vertex_map(const Graph& g, const std::vector<int>& h) {
    detail::require(static_cast<int>(h.size()) == g.n, "apply_vertex_map: size mismatch");
    Graph out;
    out.n = g.n;
    for (const auto& [u, v] : g.edges)
        out.add_edge(h[static_cast<std::size_t>(u)], h[static_cast<std::size_t>(v)]);
    return out;
}

namespace {

std::uint64_t edge_mask(const Graph& g) {
    std::uint64_t mask = 0;
    int bit = 0;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v, ++bit)
            if (g.has_edge(u, v)) mask |= std::uint64_t{1} << bit;
    return mask;
}

Graph graph_from_mask(int n, std::uint64_t mask) {
    Graph g;
    g.n = n;
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if (mask & (std::uint64_t{1} << bit)) g.add_edge(u, v);
    return g;
}

std::uint64_t canonical_mask(const Graph& g) {
    std::vector<int> perm;
    for (int i = 0; i < g.n; ++i) perm.push_back(i);
    std::uint64_t best = ~std::uint64_t{0};
    do {
        best = std::min(best, edge_mask(apply_vertex_map(g, perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

std::vector<Graph> graph_catalog(int n) {
    detail::require(0 <= n && n <= 6, "graph_catalog: supported through 6 vertices");
    int pairs = n * (n - 1) / 2;
    std::set<std::uint64_t> canonical;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask)
        canonical.insert(canonical_mask(graph_from_mask(n, mask)));
    std::vector<Graph> out;
    for (std::uint64_t mask : canonical) out.push_back(graph_from_mask(n, mask));
    return out;
}

bool is_graph_iso(const Graph& a, const Graph& b, const std::vector<int>& h) {
    if (a.n != b.n || static_cast<int>(h.size()) != a.n) return false;
    std::vector<bool> hit(static_cast<std::size_t>(a.n), false);
    for (int v : h) {
        if (v < 0 || v >= a.n || hit[static_cast<std::size_t>(v)]) return false;
        hit[static_cast<std::size_t>(v)] = true;
    }
    for (int u = 0; u < a.n; ++u)
        for (int v = u + 1; v < a.n; ++v)
            if (a.has_edge(u, v) !=
                b.has_edge(h[static_cast<std::size_t>(u)], h[static_cast<std::size_t>(v)]))
                return false;
    return true;
}

std::optional<std::vector<int>> find_graph_iso(const Graph& a, const Graph& b) {
    if (a.n != b.n || a.edge_count() != b.edge_count()) return std::nullopt;
    std::vector<int> perm;
    for (int i = 0; i < a.n; ++i) perm.push_back(i);
    do {
        if (is_graph_iso(a, b, perm)) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

bool graphs_isomorphic(const Graph& a, const Graph& b) {
    return find_graph_iso(a, b).has_value();
}

std::size_t zg_count(const Graph& g, const EngineParams& params) {
    return g.edge_count() * static_cast<std::size_t>(params.m0) *
           static_cast<std::size_t>(params.m0) * static_cast<std::size_t>(params.m1);
}

CodedStructure encode(const Graph& g, const EngineParams& params) {
    detail::require(params.n == g.n, "encode: engine classes must match the vertex count");
    Engine engine = build_engine(params);
    std::vector<F2Vector> z;
    for (int t = 0; t < engine.pair_count(); ++t) {
        auto [i, j] = engine.pairs()[static_cast<std::size_t>(t)];
        int ci = engine.e0_class(i), cj = engine.e0_class(j);
        if (ci == cj || !g.has_edge(ci, cj)) continue;
        for (int r = 0; r < params.m1; ++r)
            z.push_back(engine.x1()[static_cast<std::size_t>(t * params.m1 + r)]);
    }
    F2Subspace u_plus = span(engine.dim(), z);
    detail::require(z.size() == zg_count(g, params), "encode: marker count is off");
    return CodedStructure{std::move(engine), std::move(z), std::move(u_plus)};
}

Graph decode_raw(const EngineRawData& raw, const F2Subspace& u_plus, int guard) {
    RecoveredE1 e1 = recover_e1(raw, guard);
    auto e0 = recover_e0(raw, e1);

    // vertex of each X0 position: classes come ordered by least member
    std::vector<int> vertex_of(raw.x0.size(), -1);
    for (std::size_t c = 0; c < e0.size(); ++c)
        for (int i : e0[c]) vertex_of[static_cast<std::size_t>(i)] = static_cast<int>(c);

    // the X1 trace of U+ must be a union of recovered fibers
    std::vector<bool> marked_class(e1.classes.size(), false);
    for (std::size_t c = 0; c < e1.classes.size(); ++c) {
        bool all = true, any = false;
        for (int m : e1.classes[c]) {
            bool in = member(raw.x1[static_cast<std::size_t>(m)], u_plus);
            all = all && in;
            any = any || in;
        }
        detail::require(all == any, "decode: U+ meets X1 off the recovered fibers");
        marked_class[c] = all;
    }

    Graph g;
    g.n = static_cast<int>(e0.size());
    for (std::size_t c = 0; c < e1.classes.size(); ++c) {
        if (!marked_class[c]) continue;
        auto [i, j] = e1.class_to_pair[c];
        int u = vertex_of[static_cast<std::size_t>(i)];
        int v = vertex_of[static_cast<std::size_t>(j)];
        if (u != v) g.add_edge(u, v);
    }
    return g;
}

Graph decode(const CodedStructure& coded, int guard) {
    return decode_raw(raw_data(coded.engine), coded.u_plus, guard);
}

TransportResult transport(const std::vector<int>& h, const CodedStructure& from,
                          const CodedStructure& to) {
    detail::require(from.engine.params().n == to.engine.params().n &&
                        from.engine.params().m0 == to.engine.params().m0 &&
                        from.engine.params().m1 == to.engine.params().m1,
                    "transport: engines must share parameters");
    detail::require(static_cast<int>(h.size()) == from.engine.params().n,
                    "transport: vertex map size mismatch");
    std::map<int, int> mapping;
    for (std::size_t i = 0; i < h.size(); ++i) mapping[static_cast<int>(i)] = h[i];

    TransportResult result{sigma_lift(from.engine, ClassBijection(mapping)), {}};
    std::set<F2Vector, CanonicalLess> target(to.z.begin(), to.z.end());
    std::set<F2Vector, CanonicalLess> image;
    for (const auto& z : from.z) image.insert(result.sigma.map.apply(z));
    result.audit.add("Z-transported-setwise", image == target);

    std::vector<F2Vector> span_images;
    for (const auto& b : from.u_plus.basis()) span_images.push_back(result.sigma.map.apply(b));
    result.audit.add("U+-transported-subspace",
                     span(from.u_plus.ambient_dim(), span_images) == to.u_plus);
    return result;
}

std::optional<StructureIso> brute_force_iso(const CodedStructure& a,
                                            const CodedStructure& b) {
    const Engine& ea = a.engine;
    const Engine& eb = b.engine;
    detail::require(ea.params().n == eb.params().n && ea.params().m0 == eb.params().m0 &&
                        ea.params().m1 == eb.params().m1,
                    "brute_force_iso: engines must share parameters");
    detail::require(ea.x0_count() <= 8, "brute_force_iso: X0 too large for the search");

    // cheap invariants first
    if (a.u_plus.dim() != b.u_plus.dim()) return std::nullopt;

    int k = ea.x0_count();
    int m1 = ea.params().m1;
    std::vector<int> perm;
    for (int i = 0; i < k; ++i) perm.push_back(i);
    do {
        // fiber action induced by the pair transport; W0 is preserved by
        // construction, so W1 and U+ decide
        std::vector<int> perm_x1(static_cast<std::size_t>(ea.x1_count()));
        for (int t = 0; t < ea.pair_count(); ++t) {
            auto [i, j] = ea.pairs()[static_cast<std::size_t>(t)];
            int tt = ea.pair_index(perm[static_cast<std::size_t>(i)],
                                   perm[static_cast<std::size_t>(j)]);
            for (int r = 0; r < m1; ++r)
                perm_x1[static_cast<std::size_t>(t * m1 + r)] = tt * m1 + r;
        }
        std::vector<F2Vector> images(static_cast<std::size_t>(ea.dim()));
        for (int i = 0; i < k; ++i)
            images[static_cast<std::size_t>(i)] =
                eb.x0()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        for (int z = 0; z < ea.x1_count(); ++z)
            images[static_cast<std::size_t>(k + z)] =
                eb.x1()[static_cast<std::size_t>(perm_x1[static_cast<std::size_t>(z)])];
        F2LinearMap f(ea.dim(), eb.dim(), std::move(images));

        auto carries = [&](const F2Subspace& src, const F2Subspace& dst) {
            std::vector<F2Vector> imgs;
            for (const auto& v : src.basis()) imgs.push_back(f.apply(v));
            return span(dst.ambient_dim(), imgs) == dst;
        };
        if (carries(a.engine.w0(), b.engine.w0()) && carries(a.engine.w1(), b.engine.w1()) &&
            carries(a.u_plus, b.u_plus)) {
            return StructureIso{perm, perm_x1, f};
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

std::vector<int> induced_graph_iso(const StructureIso& f, const CodedStructure& a,
                                   const CodedStructure& b) {
    auto raw_a = raw_data(a.engine);
    auto raw_b = raw_data(b.engine);
    auto e0_a = recover_e0(raw_a, recover_e1(raw_a));
    auto e0_b = recover_e0(raw_b, recover_e1(raw_b));

    std::vector<int> vertex_a(raw_a.x0.size()), vertex_b(raw_b.x0.size());
    for (std::size_t c = 0; c < e0_a.size(); ++c)
        for (int i : e0_a[c]) vertex_a[static_cast<std::size_t>(i)] = static_cast<int>(c);
    for (std::size_t c = 0; c < e0_b.size(); ++c)
        for (int i : e0_b[c]) vertex_b[static_cast<std::size_t>(i)] = static_cast<int>(c);

    std::vector<int> h(e0_a.size(), -1);
    for (std::size_t i = 0; i < f.perm_x0.size(); ++i) {
        int from_class = vertex_a[i];
        int to_class = vertex_b[static_cast<std::size_t>(f.perm_x0[i])];
        detail::require(h[static_cast<std::size_t>(from_class)] < 0 ||
                            h[static_cast<std::size_t>(from_class)] == to_class,
                        "induced_graph_iso: X0 map does not respect the recovered classes");
        h[static_cast<std::size_t>(from_class)] = to_class;
    }
    detail::require(is_graph_iso(decode(a), decode(b), h),
                    "induced_graph_iso: induced map is not a graph isomorphism");
    return h;
}

}  // namespace taglab
