// taglab: command-line front end for the finite tagged-structure laboratory.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "taglab/lifting.hpp"
#include "taglab/serial.hpp"
#include "taglab/suites.hpp"

using namespace taglab;

namespace {

void put(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

EStarSpec parse_estar_file(const std::string& text) {
    EStarSpec spec;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head != "Eblock:") throw ParseError("expected 'Eblock:'", number);
        std::vector<std::pair<EStarSpec::Side, F2Vector>> block;
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 3 || tok[1] != ':' || (tok[0] != 'B' && tok[0] != 'C'))
                throw ParseError("expected B:<bits> or C:<bits>, got '" + tok + "'", number);
            block.emplace_back(tok[0] == 'B' ? EStarSpec::Side::B : EStarSpec::Side::C,
                               F2Vector::from_string(tok.substr(2)));
        }
        if (block.empty()) throw ParseError("empty Eblock", number);
        spec.blocks.push_back(std::move(block));
    }
    return spec;
}

std::map<int, int> parse_pairs_arg(const std::string& arg) {
    std::map<int, int> out;
    std::istringstream is(arg);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto colon = item.find(':');
        detail::require(colon != std::string::npos, "expected from:to pairs, got '" + item + "'");
        out[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& arg) {
    std::vector<int> out;
    std::istringstream is(arg);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
    return out;
}

int run_amalgamate(const std::string& a_path, const std::string& b_path,
                   const std::string& c_path, const std::string& estar_path, bool free_ext,
                   const std::string& out_path, int guard) {
    auto a = make_ref(parse_structure(read_file(a_path)));
    auto b = make_ref(parse_structure(read_file(b_path)));
    auto c = make_ref(parse_structure(read_file(c_path)));
    auto into_b = find_embeddings(a, b);
    auto into_c = find_embeddings(a, c);
    detail::require(!into_b.empty(), "A does not embed into B");
    detail::require(!into_c.empty(), "A does not embed into C");
    AmalgamationProblem problem{a, b, c, into_b[0], into_c[0]};
    AmalgamationResult result =
        free_ext || estar_path.empty()
            ? amalgamate_k_free(problem, guard)
            : amalgamate_k(problem, parse_estar_file(read_file(estar_path)), guard);
    std::ostringstream os;
    os << emit_structure(*result.d);
    os << "# embedding of B\n" << emit_embedding_matrix(result.from_b.map);
    os << "# embedding of C\n" << emit_embedding_matrix(result.from_c.map);
    put(os.str(), out_path);
    return 0;
}

int run_reduce_experiment(int max_n) {
    VerificationReport report = suite_reduction_iff(max_n);
    auto catalog = graph_catalog(max_n);
    std::cout << "graphs on " << max_n << " vertices up to isomorphism: " << catalog.size()
              << "\n";
    std::cout << "pairwise structure-isomorphism matrix ('=' iso, '.' distinct):\n   ";
    for (std::size_t j = 0; j < catalog.size(); ++j) std::cout << j % 10;
    std::cout << "\n";
    EngineParams params{max_n, 1, 1};
    std::vector<CodedStructure> coded;
    for (const auto& g : catalog) coded.push_back(encode(g, params));
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        std::cout << (i < 10 ? " " : "") << i << " ";
        for (std::size_t j = 0; j < catalog.size(); ++j)
            std::cout << (brute_force_iso(coded[i], coded[j]) ? '=' : '.');
        std::cout << "\n";
    }
    std::cout << report.to_text();
    return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite tagged-structure laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::uint64_t seed = 1;
    int max_dim = kDefaultEnumerationGuard;
    std::string out_path;
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--max-dim", max_dim, "enumeration guard");
    app.add_option("--out", out_path, "output file or directory");

    // amalgamate
    auto* amalg = app.add_subcommand("amalgamate", "amalgamate B and C over A");
    std::string a_path, b_path, c_path, estar_path;
    bool free_ext = false;
    amalg->add_option("--A", a_path)->required();
    amalg->add_option("--B", b_path)->required();
    amalg->add_option("--C", c_path)->required();
    amalg->add_option("--estar", estar_path, "extension relation file");
    amalg->add_flag("--free", free_ext, "use the free extension");

    // chain build / check
    auto* chain_cmd = app.add_subcommand("chain", "build or check approximation chains");
    chain_cmd->require_subcommand(1);
    auto* chain_build = chain_cmd->add_subcommand("build");
    int bound = 1, steps = 5, max_stages = 512;
    chain_build->add_option("--bound", bound, "maximum extension dimension");
    chain_build->add_option("--steps", steps, "scheduler rounds");
    chain_build->add_option("--max-stages", max_stages);
    auto* chain_check = chain_cmd->add_subcommand("check");
    std::string chain_dir;
    int check_bound = -1;
    chain_check->add_option("--in", chain_dir)->required();
    chain_check->add_option("--bound", check_bound, "bound for the richness scan");

    // lift
    auto* lift_cmd = app.add_subcommand("lift", "lift a class bijection over a target");
    lift_cmd->set_help_flag("--help", "print help");  // frees the name -h/--h
    std::string lift_chain_dir, h_arg, target_arg;
    bool lift_save = false;
    lift_cmd->add_option("--chain", lift_chain_dir)->required();
    lift_cmd->add_option("--h", h_arg, "class bijection, e.g. 0:1,1:0")->required();
    lift_cmd->add_option("--target", target_arg, "X coordinates, e.g. 0,1,2")->required();
    lift_cmd->add_flag("--save", lift_save, "write the grown chain back");

    // engine build / verify
    auto* engine_cmd = app.add_subcommand("engine", "build or verify coding engines");
    engine_cmd->require_subcommand(1);
    auto* engine_build_cmd = engine_cmd->add_subcommand("build");
    int en = 2, em0 = 1, em1 = 1;
    bool export_full = false;
    engine_build_cmd->add_option("--n", en)->required();
    engine_build_cmd->add_option("--m0", em0);
    engine_build_cmd->add_option("--m1", em1);
    engine_build_cmd->add_flag("--export-full", export_full);
    auto* engine_verify_cmd = engine_cmd->add_subcommand("verify");
    std::string claims = "1,2";
    engine_verify_cmd->add_option("--n", en)->required();
    engine_verify_cmd->add_option("--m0", em0);
    engine_verify_cmd->add_option("--m1", em1);
    engine_verify_cmd->add_option("--claims", claims, "comma list of claims to check");

    // encode / decode / iso
    auto* encode_cmd = app.add_subcommand("encode", "encode a graph");
    std::string graph_path;
    encode_cmd->add_option("--graph", graph_path)->required();
    encode_cmd->add_option("--n", en);
    encode_cmd->add_option("--m0", em0);
    encode_cmd->add_option("--m1", em1);
    auto* decode_cmd = app.add_subcommand("decode", "decode a coded structure");
    std::string in_path;
    decode_cmd->add_option("--in", in_path)->required();
    auto* iso_cmd = app.add_subcommand("iso", "structure isomorphism of coded files");
    std::string left_path, right_path;
    iso_cmd->add_option("--left", left_path)->required();
    iso_cmd->add_option("--right", right_path)->required();

    // verify <suite>
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string suite_name;
    int trials = -1, cases = -1, values = -1, max_n = 4;
    bool engine_given = false;
    verify_cmd->add_option("suite", suite_name,
                           "amalgam|chain|lifting|claim1|claim2|reduction|serialization|all")
        ->required();
    verify_cmd->add_option("--trials", trials);
    verify_cmd->add_option("--cases", cases);
    verify_cmd->add_option("--values", values);
    verify_cmd->add_option("--max-n", max_n);
    verify_cmd->add_option("--n", en)->each([&](const std::string&) { engine_given = true; });
    verify_cmd->add_option("--m0", em0);
    verify_cmd->add_option("--m1", em1);

    auto* reduce_cmd = app.add_subcommand("reduce-experiment", "graph pair matrix");
    reduce_cmd->add_option("--max-n", max_n);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*amalg)
            return run_amalgamate(a_path, b_path, c_path, estar_path, free_ext, out_path,
                                  max_dim);
        if (*chain_cmd) {
            if (*chain_build) {
                detail::require(!out_path.empty(), "chain build needs --out");
                ChainLimits limits;
                limits.max_stages = max_stages;
                limits.max_stage_dim = std::max(max_dim, limits.max_stage_dim);
                Chain chain = build_chain(bound, steps, seed, limits);
                write_chain(chain, out_path);
                std::cout << "stages: " << chain.stages.size()
                          << ", classes: " << classes_count(*chain.final_stage())
                          << ", complete: " << (chain.complete ? "yes" : "no") << "\n";
                return chain.complete ? 0 : 1;
            }
            Chain chain = read_chain(chain_dir);
            int b = check_bound < 0 ? chain.bound : check_bound;
            auto richness = check_richness(chain, b);
            std::cout << richness.summary() << "\n";
            for (const auto& u : richness.unsatisfied) std::cout << "unsatisfied: " << u << "\n";
            return richness.logged_ok() ? 0 : 1;
        }
        if (*lift_cmd) {
            Chain chain = read_chain(lift_chain_dir);
            ClassBijection h(parse_pairs_arg(h_arg));
            std::vector<F2Vector> target;
            int dim = chain.final_stage()->dim();
            for (int coord : parse_int_list(target_arg))
                target.push_back(F2Vector::unit(dim, coord));
            TrackedPartialIso iso = lift_over(h, target, chain);
            std::ostringstream os;
            os << "stage " << iso.stage_index << "\n";
            for (const auto& [x, y] : iso.x_pairs) {
                os << x.to_string() << " -> " << y.to_string() << "   class "
                   << block_id(*chain.final_stage(), x) << " -> "
                   << block_id(*chain.final_stage(), y) << "\n";
            }
            os << "in-family: " << (is_in_Fh(iso, chain) ? "yes" : "no") << "\n";
            put(os.str(), out_path);
            if (lift_save) write_chain(chain, lift_chain_dir);
            return is_in_Fh(iso, chain) ? 0 : 1;
        }
        if (*engine_cmd) {
            EngineParams params{en, em0, em1};
            if (*engine_build_cmd) {
                std::string text = export_full ? emit_engine_with_export(params, max_dim)
                                               : emit_engine(params);
                put(text, out_path);
                return 0;
            }
            Engine engine = build_engine(params);
            int rc = 0;
            for (int claim : parse_int_list(claims)) {
                if (claim == 1) {
                    auto report = claim1_check(engine, max_dim);
                    std::cout << "claim 1:\n" << report.to_string();
                    if (!report.ok()) rc = 1;
                } else if (claim == 2) {
                    // exhaustive liftings for this one engine
                    VerificationReport engine_report("engine-claim2");
                    std::vector<int> perm(static_cast<std::size_t>(params.n));
                    for (int i = 0; i < params.n; ++i) perm[static_cast<std::size_t>(i)] = i;
                    int index = 0;
                    do {
                        std::map<int, int> mapping;
                        for (int i = 0; i < params.n; ++i)
                            mapping[i] = perm[static_cast<std::size_t>(i)];
                        Sigma sigma = sigma_lift(engine, ClassBijection(mapping));
                        engine_report.add_case("h" + std::to_string(index++),
                                               verify_sigma(engine, sigma));
                    } while (std::next_permutation(perm.begin(), perm.end()));
                    std::cout << "claim 2:\n" << engine_report.to_text();
                    if (!engine_report.ok()) rc = 1;
                } else {
                    detail::require(false, "unknown claim " + std::to_string(claim));
                }
            }
            return rc;
        }
        if (*encode_cmd) {
            Graph g = parse_graph(read_file(graph_path));
            CodedStructure coded = encode(g, {en, em0, em1});
            put(emit_coded(coded), out_path);
            return 0;
        }
        if (*decode_cmd) {
            CodedStructure coded = parse_coded(read_file(in_path));
            put(emit_graph(decode(coded, std::max(max_dim, coded.engine.dim()))), out_path);
            return 0;
        }
        if (*iso_cmd) {
            CodedStructure left = parse_coded(read_file(left_path));
            CodedStructure right = parse_coded(read_file(right_path));
            auto found = brute_force_iso(left, right);
            if (!found) {
                std::cout << "none\n";
                return 1;
            }
            auto h = induced_graph_iso(*found, left, right);
            std::cout << "found\nvertex map:";
            for (std::size_t i = 0; i < h.size(); ++i) std::cout << " " << i << "->" << h[i];
            std::cout << "\n";
            return 0;
        }
        if (*verify_cmd) {
            auto run_suite = [&](const std::string& name) -> VerificationReport {
                if (name == "amalgam") return suite_amalgam_closure(seed, trials < 0 ? 1000 : trials);
                if (name == "strong") return suite_strong_amalgamation(seed, trials < 0 ? 200 : trials);
                if (name == "chain") return suite_chain_classes({5, 10, 20});
                if (name == "lifting") return suite_lifting_closure(seed, cases < 0 ? 100 : cases);
                if (name == "claim1") {
                    if (engine_given) {
                        Engine engine = build_engine({en, em0, em1});
                        auto check = claim1_check(engine, max_dim);
                        VerificationReport report("engine-claim1");
                        report.add_param("n", en);
                        report.add_param("m0", em0);
                        report.add_param("m1", em1);
                        int z = 0;
                        for (const auto& item : check.items)
                            report.add_case(item.check,
                                            item.status != ValidationItem::Status::fail,
                                            item.detail),
                                ++z;
                        return report;
                    }
                    return suite_engine_claim1();
                }
                if (name == "claim2") return suite_engine_claim2();
                if (name == "reduction") return suite_reduction_iff(max_n);
                if (name == "roundtrip") return suite_roundtrip();
                if (name == "equivariance") return suite_equivariance(max_n);
                if (name == "serialization")
                    return suite_serialization(seed, values < 0 ? 500 : values);
                detail::require(false, "unknown suite '" + name + "'");
                throw Error("unreachable");
            };
            if (suite_name == "all") {
                int rc = 0;
                for (const char* name :
                     {"amalgam", "strong", "chain", "lifting", "claim1", "claim2",
                      "reduction", "roundtrip", "equivariance", "serialization"}) {
                    VerificationReport report = run_suite(name);
                    std::cout << report.to_text() << "\n";
                    if (!report.ok()) rc = 1;
                }
                return rc;
            }
            VerificationReport report = run_suite(suite_name);
            std::cout << report.to_text();
            return report.exit_code();
        }
        if (*reduce_cmd) return run_reduce_experiment(max_n);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
