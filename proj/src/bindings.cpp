// Python bindings for the main operations: graphs and their codings, engine
// claims, chains and liftings, amalgamation, and the verification suites.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "taglab/lifting.hpp"
#include "taglab/serial.hpp"
#include "taglab/suites.hpp"

namespace py = pybind11;
using namespace taglab;

namespace {

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    g.n = n;
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

std::vector<std::pair<int, int>> edge_list(const Graph& g) {
    return {g.edges.begin(), g.edges.end()};
}

ClassBijection bijection_from_dict(const std::map<int, int>& mapping) {
    return ClassBijection(mapping);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite tagged-structure laboratory";
    py::register_exception<Error>(m, "TaglabError");

    py::class_<Graph>(m, "Graph")
        .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
                 return graph_from_edges(n, edges);
             }),
             py::arg("n"), py::arg("edges") = std::vector<std::pair<int, int>>{})
        .def_readonly("n", &Graph::n)
        .def_property_readonly("edges", &edge_list)
        .def("add_edge", &Graph::add_edge)
        .def("has_edge", &Graph::has_edge)
        .def("to_text", &emit_graph)
        .def_static("from_text", &parse_graph)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.n) + ", edges=" +
                   std::to_string(g.edge_count()) + ")";
        });

    m.def("graph_catalog", &graph_catalog, py::arg("n"),
          "all graphs on n vertices up to isomorphism");
    m.def("graphs_isomorphic", &graphs_isomorphic);
    m.def("find_graph_iso", [](const Graph& a, const Graph& b) -> py::object {
        auto h = find_graph_iso(a, b);
        return h ? py::cast(*h) : py::none();
    });

    py::class_<EngineParams>(m, "EngineParams")
        .def(py::init([](int n, int m0, int m1) { return EngineParams{n, m0, m1}; }),
             py::arg("n"), py::arg("m0") = 1, py::arg("m1") = 1)
        .def_readonly("n", &EngineParams::n)
        .def_readonly("m0", &EngineParams::m0)
        .def_readonly("m1", &EngineParams::m1);

    py::class_<CodedStructure>(m, "CodedStructure")
        .def_property_readonly("dim",
                               [](const CodedStructure& c) { return c.engine.dim(); })
        .def_property_readonly("marker_count",
                               [](const CodedStructure& c) { return c.z.size(); })
        .def("decode", [](const CodedStructure& c) { return decode(c); })
        .def("to_text", &emit_coded)
        .def_static("from_text", &parse_coded);

    m.def(
        "encode",
        [](const Graph& g, int n, int m0, int m1) { return encode(g, {n, m0, m1}); },
        py::arg("graph"), py::arg("n"), py::arg("m0") = 1, py::arg("m1") = 1);
    m.def("zg_count", [](const Graph& g, int n, int m0, int m1) {
        return zg_count(g, {n, m0, m1});
    });
    m.def("brute_force_iso",
          [](const CodedStructure& a, const CodedStructure& b) -> py::object {
              auto f = brute_force_iso(a, b);
              if (!f) return py::none();
              return py::cast(induced_graph_iso(*f, a, b));
          },
          "vertex map induced by a structure isomorphism, or None");
    m.def("transport_ok",
          [](const std::vector<int>& h, const CodedStructure& a, const CodedStructure& b) {
              return transport(h, a, b).ok();
          });

    m.def("engine_claim1_report", [](int n, int m0, int m1) {
        auto report = claim1_check(build_engine({n, m0, m1}));
        return py::make_tuple(report.ok(), report.to_string());
    });
    m.def("engine_claim2_ok", [](int n, int m0, int m1) {
        Engine engine = build_engine({n, m0, m1});
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        do {
            std::map<int, int> mapping;
            for (int i = 0; i < n; ++i) mapping[i] = perm[static_cast<std::size_t>(i)];
            if (!verify_sigma(engine, sigma_lift(engine, ClassBijection(mapping))).ok())
                return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return true;
    });

    py::class_<Chain>(m, "Chain")
        .def_property_readonly("stage_count",
                               [](const Chain& c) { return c.stages.size(); })
        .def_property_readonly("final_dim",
                               [](const Chain& c) { return c.final_stage()->dim(); })
        .def_property_readonly("complete", [](const Chain& c) { return c.complete; })
        .def("classes", [](const Chain& c) { return classes_count(*c.final_stage()); })
        .def("stage_text",
             [](const Chain& c, int i) {
                 detail::require(i >= 0 && i <= c.final_index(), "stage out of range");
                 return emit_structure(*c.stages[static_cast<std::size_t>(i)]);
             })
        .def("block_ids", [](const Chain& c) { return all_block_ids(*c.final_stage()); })
        .def("richness_summary",
             [](const Chain& c, int bound) { return check_richness(c, bound).summary(); })
        .def("richness_ok",
             [](const Chain& c, int bound) {
                 auto r = check_richness(c, bound);
                 return r.logged_ok();
             })
        .def("lift",
             [](Chain& c, const std::map<int, int>& h, const std::vector<int>& target) {
                 std::vector<F2Vector> coords;
                 for (int t : target)
                     coords.push_back(F2Vector::unit(c.final_stage()->dim(), t));
                 TrackedPartialIso iso = lift_over(bijection_from_dict(h), coords, c);
                 detail::require(is_in_Fh(iso, c), "lifted map left the tracked family");
                 std::vector<std::pair<std::string, std::string>> pairs;
                 for (const auto& [a, b] : iso.x_pairs)
                     pairs.emplace_back(a.to_string(), b.to_string());
                 return pairs;
             },
             py::arg("h"), py::arg("target"),
             "lift a class bijection over target X coordinates, growing the chain")
        .def("save", &write_chain)
        .def_static("load", &read_chain);

    m.def("build_chain",
          [](int bound, int steps, std::uint64_t seed, int max_stage_dim) {
              return build_chain(bound, steps, seed, ChainLimits{max_stage_dim, 512});
          },
          py::arg("bound"), py::arg("steps"), py::arg("seed") = 1,
          py::arg("max_stage_dim") = 24);

    m.def("validate_structure_text", [](const std::string& text) {
        try {
            parse_structure(text);
            return py::make_tuple(true, std::string());
        } catch (const Error& e) {
            return py::make_tuple(false, std::string(e.what()));
        }
    });
    m.def("amalgamate_free",
          [](const std::string& a, const std::string& b, const std::string& c) {
              auto aref = make_ref(parse_structure(a));
              auto bref = make_ref(parse_structure(b));
              auto cref = make_ref(parse_structure(c));
              auto into_b = find_embeddings(aref, bref);
              auto into_c = find_embeddings(aref, cref);
              detail::require(!into_b.empty() && !into_c.empty(),
                              "A does not embed into both sides");
              auto result =
                  amalgamate_k_free({aref, bref, cref, into_b[0], into_c[0]});
              return emit_structure(*result.d);
          },
          "amalgamate B and C over A with the free extension relation");

    m.def("run_suite",
          [](const std::string& name, std::uint64_t seed, int size) {
              VerificationReport report = [&]() -> VerificationReport {
                  if (name == "amalgam") return suite_amalgam_closure(seed, size);
                  if (name == "strong") return suite_strong_amalgamation(seed, size);
                  if (name == "chain") return suite_chain_classes();
                  if (name == "lifting") return suite_lifting_closure(seed, size);
                  if (name == "claim1") return suite_engine_claim1();
                  if (name == "claim2") return suite_engine_claim2();
                  if (name == "reduction") return suite_reduction_iff();
                  if (name == "roundtrip") return suite_roundtrip();
                  if (name == "equivariance") return suite_equivariance();
                  if (name == "serialization") return suite_serialization(seed, size);
                  throw Error("unknown suite '" + name + "'");
              }();
              return py::make_tuple(report.ok(), report.to_text());
          },
          py::arg("name"), py::arg("seed") = 1, py::arg("size") = 100);

    m.attr("__version__") = "0.1.0";
}
