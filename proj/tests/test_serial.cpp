#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "taglab/randomgen.hpp"
#include "taglab/serial.hpp"

using namespace taglab;

TEST_CASE("structure text round-trips bit-exactly") {
    Rng rng(404);
    for (int t = 0; t < 50; ++t) {
        XEStructure s = random_k_structure(rng, rng.below(6));
        std::string text = emit_structure(s);
        XEStructure back = parse_structure(text);
        CHECK(back == s);
        CHECK(emit_structure(back) == text);
    }

    XEStructure zero = dim0_structure();
    CHECK(parse_structure(emit_structure(zero)) == zero);
}

TEST_CASE("completed structures carry their marker through files") {
    auto line = make_ref(make_structure(1, {}));
    auto d0 = make_ref(dim0_structure());
    AmalgamationProblem p{d0, line, line, find_embeddings(d0, line)[0],
                          find_embeddings(d0, line)[0]};
    auto r = amalgamate_k0(p);
    REQUIRE(r.d->tags().completed());
    std::string text = emit_structure(*r.d);
    CHECK(text.find("completed") != std::string::npos);
    XEStructure back = parse_structure(text);
    CHECK(back == *r.d);
    CHECK(emit_structure(back) == text);
}

TEST_CASE("an X line that conflicts with the tag complement is rejected") {
    std::string text =
        "dim 2\n"
        "tag 0: 11\n"
        "X: 01\n"
        "Eblock: 01\n";
    try {
        parse_structure(text);
        FAIL("expected a rejection");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("X-is-tag-complement") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_structure("dim 2\nbogus line\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
    }
    CHECK_THROWS_AS(parse_structure("tag 0: 11\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("n 2\ne 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("e 0 1\n"), ParseError);
}

TEST_CASE("graph files") {
    Graph g;
    g.n = 4;
    g.add_edge(0, 2);
    g.add_edge(1, 3);
    std::string text = emit_graph(g);
    CHECK(text == "n 4\ne 0 2\ne 1 3\n");
    CHECK(parse_graph(text) == g);

    Graph empty = parse_graph("n 0\n");
    CHECK(empty.n == 0);
    CHECK(empty.edge_count() == 0);
}

TEST_CASE("engine and coded files") {
    EngineParams p{3, 1, 2};
    CHECK(emit_engine(p) == "engine 3 1 2\n");
    auto back = parse_engine_params(emit_engine(p));
    CHECK(back.n == 3);
    CHECK(back.m0 == 1);
    CHECK(back.m1 == 2);

    Graph tri;
    tri.n = 3;
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(0, 2);
    CodedStructure coded = encode(tri, {3, 1, 1});
    std::string text = emit_coded(coded);
    CodedStructure cback = parse_coded(text);
    CHECK(cback.u_plus == coded.u_plus);
    CHECK(cback.z == coded.z);
    CHECK(emit_coded(cback) == text);

    // the export section parses back as a tagged structure
    std::string full = emit_engine_with_export({2, 1, 1});
    auto params = parse_engine_params(full);
    CHECK(params.n == 2);
}

TEST_CASE("chain archives") {
    namespace fs = std::filesystem;
    Chain chain = build_chain(2, 1, 99);
    fs::path dir = fs::temp_directory_path() / "taglab-test-chain";
    fs::remove_all(dir);
    write_chain(chain, dir.string());
    Chain back = read_chain(dir.string());
    REQUIRE(back.stages.size() == chain.stages.size());
    for (std::size_t i = 0; i < chain.stages.size(); ++i)
        CHECK(*back.stages[i] == *chain.stages[i]);
    CHECK(back.log.size() == chain.log.size());
    CHECK(check_richness(back, 2).logged_ok());
    fs::remove_all(dir);
}
