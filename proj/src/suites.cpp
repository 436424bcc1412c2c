#include "taglab/suites.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "taglab/graphcodec.hpp"
#include "taglab/lifting.hpp"
#include "taglab/randomgen.hpp"
#include "taglab/serial.hpp"

namespace taglab {

VerificationReport suite_amalgam_closure(std::uint64_t seed, int trials, int max_result_dim) {
    VerificationReport report("amalgam-closure");
    report.add_param("seed", static_cast<long long>(seed));
    report.add_param("trials", trials);
    report.add_param("max_result_dim", max_result_dim);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::string id = "problem" + std::to_string(t);
        try {
            auto problem = random_k0_problem(rng, max_result_dim);
            auto result = amalgamate_k0(problem);
            auto validation = validate_k(*result.d);
            bool pass = validation.ok();
            std::string detail;
            if (!pass) detail = "amalgam failed validation";

            std::set<F2Vector, CanonicalLess> expected, actual(result.d->X().begin(),
                                                               result.d->X().end());
            for (const auto& x : problem.b->X()) expected.insert(result.from_b.map.apply(x));
            for (const auto& x : problem.c->X()) expected.insert(result.from_c.map.apply(x));
            if (expected != actual) {
                pass = false;
                detail = "X is not the union of the embedded sides";
            }
            if (compose_embeddings(problem.into_b, result.from_b).map !=
                compose_embeddings(problem.into_c, result.from_c).map) {
                pass = false;
                detail = "square does not commute";
            }
            report.add_case(id, pass, detail);
        } catch (const Error& e) {
            report.add_case(id, false, e.what());
        }
    }
    return report;
}

VerificationReport suite_strong_amalgamation(std::uint64_t seed, int trials, int coarsenings) {
    VerificationReport report("strong-amalgamation");
    report.add_param("seed", static_cast<long long>(seed));
    report.add_param("trials", trials);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::string id = "problem" + std::to_string(t);
        try {
            auto problem = random_k0_problem(rng, 8);
            auto free_result = amalgamate_k_free(problem);
            bool pass = validate_k(*free_result.d).ok();
            std::string detail = pass ? "" : "free extension failed validation";
            for (int c = 0; pass && c < coarsenings; ++c) {
                auto coarse = random_admissible_coarsening(rng, free_result, 1 + rng.below(3));
                auto spec = estar_from_partition(free_result, coarse);
                auto result = amalgamate_k(problem, spec);
                if (!validate_k(*result.d).ok() || !(result.d->E == coarse)) {
                    pass = false;
                    detail = "admissible coarsening rejected or mangled";
                }
            }
            if (pass) {
                if (auto bad = inadmissible_coarsening(free_result)) {
                    bool rejected = false;
                    try {
                        amalgamate_k(problem, estar_from_partition(free_result, *bad));
                    } catch (const Error&) {
                        rejected = true;
                    }
                    if (!rejected) {
                        pass = false;
                        detail = "one-sided coarsening was accepted";
                    }
                }
            }
            report.add_case(id, pass, detail);
        } catch (const Error& e) {
            report.add_case(id, false, e.what());
        }
    }
    return report;
}

VerificationReport suite_chain_classes(const std::vector<int>& rounds) {
    VerificationReport report("chain-classes");
    for (int k : rounds) {
        Chain chain = build_chain(1, k, static_cast<std::uint64_t>(k));
        int classes = classes_count(*chain.final_stage());
        std::ostringstream os;
        os << "rounds=" << k << " classes=" << classes;
        report.add_case("rounds" + std::to_string(k), chain.complete && classes >= k,
                        os.str());
        auto richness = check_richness(chain, 1);
        report.add_case("rounds" + std::to_string(k) + "-log",
                        richness.logged_ok() && richness.unsatisfied.empty(),
                        richness.summary());
    }
    return report;
}

VerificationReport suite_lifting_closure(std::uint64_t seed, int cases) {
    VerificationReport report("lifting-closure");
    report.add_param("seed", static_cast<long long>(seed));
    report.add_param("cases", cases);
    Rng rng(seed);
    for (int t = 0; t < cases; ++t) {
        std::string id = "case" + std::to_string(t);
        try {
            int bound = 1 + rng.below(2);
            int steps = bound == 1 ? 1 + rng.below(3) : 1;
            Chain chain = build_chain(bound, steps, rng.next(), ChainLimits{30, 512});
            const XEStructure& stage = *chain.final_stage();
            if (stage.X().empty()) {
                report.skip_case(id, "degenerate stage");
                continue;
            }
            // random class bijection on the stage blocks
            auto ids = all_block_ids(stage);
            std::vector<int> targets = ids;
            std::shuffle(targets.begin(), targets.end(), rng.engine());
            ClassBijection h;
            for (std::size_t i = 0; i < ids.size(); ++i) h.set(ids[i], targets[i]);

            // a starting tracked iso over a small random subset
            std::vector<F2Vector> xs = stage.X();
            std::shuffle(xs.begin(), xs.end(), rng.engine());
            std::vector<F2Vector> start(xs.begin(),
                                        xs.begin() + rng.below(std::min<int>(2, static_cast<int>(xs.size())) + 1));
            TrackedPartialIso f = lift_over(h, start, chain);
            if (!is_in_Fh(f, chain)) {
                report.add_case(id, false, "seed map left the family");
                continue;
            }

            // extend by one more element of the (possibly grown) stage
            const XEStructure& now = *chain.final_stage();
            std::vector<F2Vector> aprime;
            for (const auto& [a, b] : f.x_pairs) aprime.push_back(a);
            for (const auto& x : now.X()) {
                bool used = false;
                for (const auto& v : aprime)
                    if (v == x) used = true;
                if (!used) {
                    aprime.push_back(x);
                    break;
                }
            }
            std::size_t old_pairs = f.x_pairs.size();
            TrackedPartialIso g = extend_one_step(f, aprime, chain);
            bool pass = is_in_Fh(g, chain);
            std::string detail = pass ? "" : "extension left the family";
            // conservativity
            int nd = chain.final_stage()->dim();
            for (const auto& [a, b] : f.x_pairs) {
                bool kept = false;
                for (const auto& [ga, gb] : g.x_pairs)
                    if (ga == a.padded(nd) && gb == b.padded(nd)) kept = true;
                if (!kept) {
                    pass = false;
                    detail = "extension is not conservative";
                }
            }
            if (g.x_pairs.size() < old_pairs) {
                pass = false;
                detail = "domain shrank";
            }
            report.add_case(id, pass, detail);
        } catch (const Error& e) {
            report.add_case(id, false, e.what());
        }
    }
    return report;
}

VerificationReport suite_engine_claim1(int max_n, int max_m) {
    VerificationReport report("engine-claim1");
    for (int n = 1; n <= max_n; ++n)
        for (int m0 = 1; m0 <= max_m; ++m0)
            for (int m1 = 1; m1 <= max_m; ++m1) {
                std::ostringstream id;
                id << "n" << n << "m" << m0 << m1;
                try {
                    Engine engine = build_engine({n, m0, m1});
                    auto check = claim1_check(engine);
                    std::ostringstream detail;
                    detail << engine.x1_count() << " witnesses, W0 dim "
                           << engine.w0().dim()
                           << (engine.w0().dim() <= kDefaultEnumerationGuard
                                   ? " (both routes)"
                                   : " (rank route)");
                    report.add_case(id.str(), check.ok(), detail.str());
                } catch (const Error& e) {
                    report.add_case(id.str(), false, e.what());
                }
            }
    return report;
}

VerificationReport suite_engine_claim2(int max_n, int max_m) {
    VerificationReport report("engine-claim2");
    for (int n = 1; n <= max_n; ++n)
        for (int m0 = 1; m0 <= max_m; ++m0)
            for (int m1 = 1; m1 <= max_m; ++m1) {
                Engine engine = build_engine({n, m0, m1});
                std::vector<int> perm(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
                int index = 0;
                do {
                    std::map<int, int> mapping;
                    for (int i = 0; i < n; ++i) mapping[i] = perm[static_cast<std::size_t>(i)];
                    std::ostringstream id;
                    id << "n" << n << "m" << m0 << m1 << "h" << index++;
                    try {
                        Sigma sigma = sigma_lift(engine, ClassBijection(mapping));
                        report.add_case(id.str(), verify_sigma(engine, sigma));
                    } catch (const Error& e) {
                        report.add_case(id.str(), false, e.what());
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
    return report;
}

VerificationReport suite_reduction_iff(int max_n) {
    VerificationReport report("reduction-iff");
    report.add_param("vertices", max_n);
    auto catalog = graph_catalog(max_n);
    report.add_param("graphs", static_cast<long long>(catalog.size()));
    EngineParams params{max_n, 1, 1};
    std::vector<CodedStructure> coded;
    for (const auto& g : catalog) coded.push_back(encode(g, params));

    for (std::size_t i = 0; i < catalog.size(); ++i) {
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            std::string id = "pair" + std::to_string(i) + "-" + std::to_string(j);
            try {
                bool graph_iso = graphs_isomorphic(catalog[i], catalog[j]);
                auto structure_iso = brute_force_iso(coded[i], coded[j]);
                bool pass = graph_iso == structure_iso.has_value();
                std::string detail = graph_iso ? "isomorphic" : "distinct";
                if (pass && graph_iso) {
                    // forward witness: transport the oracle's bijection
                    auto h = find_graph_iso(catalog[i], catalog[j]);
                    auto carried = transport(*h, coded[i], coded[j]);
                    if (!carried.ok()) {
                        pass = false;
                        detail = "transport failed to carry the markers";
                    }
                }
                if (pass && structure_iso) {
                    // converse witness: the induced vertex map is an isomorphism
                    auto h = induced_graph_iso(*structure_iso, coded[i], coded[j]);
                    if (!is_graph_iso(catalog[i], catalog[j], h)) {
                        pass = false;
                        detail = "induced map is not a graph isomorphism";
                    }
                }
                report.add_case(id, pass, detail);
            } catch (const Error& e) {
                report.add_case(id, false, e.what());
            }
        }
    }
    return report;
}

VerificationReport suite_roundtrip(int max_n) {
    VerificationReport report("encode-decode-roundtrip");
    const std::vector<std::pair<int, int>> m_choices{{1, 1}, {2, 1}, {1, 2}};
    for (int n = 1; n <= max_n; ++n) {
        auto catalog = graph_catalog(n);
        for (const auto& [m0, m1] : m_choices) {
            std::ostringstream id;
            id << "n" << n << "m" << m0 << m1;
            try {
                int failures = 0;
                for (const auto& g : catalog)
                    if (!(decode(encode(g, {n, m0, m1})) == g)) ++failures;
                std::ostringstream detail;
                detail << catalog.size() << " graphs";
                if (failures) detail << ", " << failures << " mismatches";
                report.add_case(id.str(), failures == 0, detail.str());
            } catch (const Error& e) {
                report.add_case(id.str(), false, e.what());
            }
        }
    }
    return report;
}

VerificationReport suite_equivariance(int n) {
    VerificationReport report("equivariance");
    auto catalog = graph_catalog(n);
    EngineParams params{n, 1, 1};
    int checked = 0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        // every vertex permutation of every catalog graph is an isomorphism
        // onto its image; transport each and decode
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
        int pi = 0;
        do {
            Graph image = apply_vertex_map(catalog[i], perm);
            auto coded_from = encode(catalog[i], params);
            auto coded_to = encode(image, params);
            std::string id =
                "g" + std::to_string(i) + "p" + std::to_string(pi++);
            try {
                auto carried = transport(perm, coded_from, coded_to);
                bool pass = carried.ok();
                std::string detail;
                if (pass) {
                    std::vector<F2Vector> images;
                    for (const auto& b : coded_from.u_plus.basis())
                        images.push_back(carried.sigma.map.apply(b));
                    F2Subspace moved = span(coded_from.engine.dim(), images);
                    Graph decoded = decode_raw(raw_data(coded_from.engine), moved);
                    pass = decoded == image;
                    if (!pass) detail = "decoded transport differs from the mapped graph";
                } else {
                    detail = "transport audit failed";
                }
                report.add_case(id, pass, detail);
                ++checked;
            } catch (const Error& e) {
                report.add_case(id, false, e.what());
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    report.add_param("checked", checked);
    return report;
}

VerificationReport suite_serialization(std::uint64_t seed, int values) {
    VerificationReport report("serialization-roundtrip");
    report.add_param("seed", static_cast<long long>(seed));
    report.add_param("values", values);
    Rng rng(seed);

    int structure_fail = 0, tagged_fail = 0, graph_fail = 0, coded_fail = 0, engine_fail = 0;
    for (int t = 0; t < values; ++t) {
        XEStructure s = random_k_structure(rng, rng.below(6));
        std::string text = emit_structure(s);
        XEStructure back = parse_structure(text);
        if (!(back == s) || emit_structure(back) != text) ++structure_fail;

        std::string ttext = emit_tagged(s.xs.base);
        TaggedStructure tback = parse_tagged(ttext);
        if (!(tback == s.xs.base) || emit_tagged(tback) != ttext) ++tagged_fail;

        int n = rng.below(7);
        Graph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.chance(0.4)) g.add_edge(u, v);
        std::string gtext = emit_graph(g);
        Graph gback = parse_graph(gtext);
        if (!(gback == g) || emit_graph(gback) != gtext) ++graph_fail;

        EngineParams params{1 + rng.below(4), 1 + rng.below(2), 1 + rng.below(2)};
        std::string etext = emit_engine(params);
        EngineParams eback = parse_engine_params(etext);
        if (eback.n != params.n || eback.m0 != params.m0 || eback.m1 != params.m1 ||
            emit_engine(eback) != etext)
            ++engine_fail;

        Graph host;
        host.n = params.n;
        for (int u = 0; u < host.n; ++u)
            for (int v = u + 1; v < host.n; ++v)
                if (rng.chance(0.4)) host.add_edge(u, v);
        CodedStructure coded = encode(host, params);
        std::string ctext = emit_coded(coded);
        CodedStructure cback = parse_coded(ctext);
        if (!(cback.u_plus == coded.u_plus) || emit_coded(cback) != ctext ||
            !(cback.z == coded.z))
            ++coded_fail;
    }
    report.add_case("structures", structure_fail == 0,
                    std::to_string(values) + " values");
    report.add_case("tagged", tagged_fail == 0, std::to_string(values) + " values");
    report.add_case("graphs", graph_fail == 0, std::to_string(values) + " values");
    report.add_case("engine-params", engine_fail == 0, std::to_string(values) + " values");
    report.add_case("coded-structures", coded_fail == 0,
                    std::to_string(values) + " values");

    // chain archives round-trip through the filesystem
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "taglab-serial-check";
    int chain_fail = 0;
    int chain_trials = std::max(1, values / 25);
    for (int t = 0; t < chain_trials; ++t) {
        Chain chain = build_chain(1 + rng.below(2), 1 + rng.below(2), rng.next());
        fs::remove_all(dir);
        write_chain(chain, dir.string());
        Chain back = read_chain(dir.string());
        bool same = back.stages.size() == chain.stages.size() &&
                    back.bound == chain.bound && back.seed == chain.seed &&
                    back.log.size() == chain.log.size();
        for (std::size_t i = 0; same && i < chain.stages.size(); ++i)
            same = *back.stages[i] == *chain.stages[i];
        for (std::size_t i = 0; same && i < chain.inclusions.size(); ++i)
            same = back.inclusions[i].map == chain.inclusions[i].map;
        // byte-exact re-emission
        if (same) {
            fs::path second = fs::temp_directory_path() / "taglab-serial-check2";
            fs::remove_all(second);
            write_chain(back, second.string());
            for (const auto& entry : fs::directory_iterator(dir)) {
                std::string name = entry.path().filename().string();
                if (read_file((second / name).string()) != read_file(entry.path().string()))
                    same = false;
            }
            fs::remove_all(second);
        }
        if (!same) ++chain_fail;
    }
    fs::remove_all(dir);
    report.add_case("chain-archives", chain_fail == 0,
                    std::to_string(chain_trials) + " archives");
    return report;
}

}  // namespace taglab
