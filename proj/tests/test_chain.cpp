#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taglab/chain.hpp"

using namespace taglab;

namespace {

F2Vector vec(const std::string& bits) { return F2Vector::from_string(bits); }

bool embeds_mod_tags(StructureRef a, StructureRef b) {
    EmbedOptions opt;
    opt.mod_tags = true;
    opt.max_results = 1;
    return !find_embeddings_opt(a, b, opt).empty();
}

}  // namespace

TEST_CASE("structure catalog sizes and validity") {
    CHECK(catalog_k_structures(0).size() == 1);
    CHECK(catalog_k_structures(1).size() == 1);
    auto two = catalog_k_structures(2);
    CHECK(two.size() == 2);  // same block or different blocks
    auto three = catalog_k_structures(3);
    CHECK(three.size() == 17);
    for (const auto& s : three) CHECK(validate_k(s).ok());

    // no two catalog entries are isomorphic
    for (std::size_t i = 0; i < three.size(); ++i)
        for (std::size_t j = i + 1; j < three.size(); ++j)
            CHECK_FALSE(embeds_mod_tags(make_ref(three[i]), make_ref(three[j])));
}

TEST_CASE("extension problem catalog") {
    auto p1 = catalog_extension_problems(1);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0].small->dim() == 0);
    CHECK(p1[0].big->dim() == 1);

    auto p2 = catalog_extension_problems(2);
    CHECK(p2.size() == 1 + 2 * 3);  // one from dim 1, three subsets per dim-2 entry
    for (const auto& p : p2) {
        CHECK(validate_embedding(p.inclusion).ok());
        CHECK(validate_k(*p.small).ok());
    }
}

TEST_CASE("bound-1 chains gain one class per round") {
    Chain chain = build_chain(1, 5, 42);
    CHECK(chain.complete);
    CHECK(chain.rounds_run == 5);
    CHECK(classes_count(*chain.final_stage()) >= 5);

    // stages stay valid and inclusions stay embeddings all along
    int prev_classes = 0;
    for (std::size_t i = 0; i < chain.stages.size(); ++i) {
        CHECK(validate_k(*chain.stages[i]).ok());
        int c = classes_count(*chain.stages[i]);
        CHECK(c >= prev_classes);
        prev_classes = c;
    }
    for (const auto& inc : chain.inclusions) CHECK(validate_embedding(inc).ok());

    auto richness = check_richness(chain, 1);
    CHECK(richness.logged_ok());
    CHECK(richness.verified_log_entries == static_cast<int>(chain.log.size()));
    CHECK(richness.unsatisfied.empty());
}

TEST_CASE("bound-2 chain realizes equivalent and inequivalent pairs") {
    Chain chain = build_chain(2, 1, 7);
    CHECK(chain.complete);
    const XEStructure& final_stage = *chain.final_stage();
    bool has_pair_block = false;
    for (const auto& block : final_stage.E.blocks())
        if (block.size() >= 2) has_pair_block = true;
    CHECK(has_pair_block);
    CHECK(final_stage.E.block_count() >= 2);

    // the final stage contains every structure of dimension at most 2
    for (int d = 0; d <= 2; ++d)
        for (const auto& s : catalog_k_structures(d))
            CHECK(embeds_mod_tags(make_ref(s), chain.final_stage()));

    CHECK(check_richness(chain, 2).logged_ok());
}

TEST_CASE("truncated chains report unsatisfied problems") {
    Chain chain = build_chain(2, 1, 7);
    Chain truncated = chain;
    truncated.stages.resize(1);
    truncated.inclusions.clear();
    truncated.log.clear();
    auto report = check_richness(truncated, 2);
    CHECK(report.logged_ok());  // nothing logged, nothing broken
    CHECK_FALSE(report.unsatisfied.empty());

    // bound 0 is vacuous
    auto vacuous = check_richness(truncated, 0);
    CHECK(vacuous.unsatisfied.empty());
}

TEST_CASE("bound-3 growth covers the catalog until the dimension cap bites") {
    ChainLimits limits;
    limits.max_stage_dim = 26;
    Chain chain = build_chain(3, 1, 3, limits);
    CHECK_FALSE(chain.complete);  // the full catalog needs more room than the cap
    CHECK(check_richness(chain, 2).logged_ok());
    int embedded = 0;
    for (const auto& s : catalog_k_structures(3))
        if (embeds_mod_tags(make_ref(s), chain.final_stage())) ++embedded;
    CHECK(embedded >= 5);
}

TEST_CASE("embed_fixing: D equal to F returns the anchor unchanged") {
    Chain chain = build_chain(1, 2, 3);
    auto f = generated_substructure(chain.final_stage(), {vec("10"), vec("01")});
    auto fref = make_ref(f.structure);
    Embedding anchor = f.inclusion;
    anchor.source = fref;
    std::size_t stages_before = chain.stages.size();
    Embedding out = embed_fixing(chain, fref, fref, anchor);
    CHECK(chain.stages.size() == stages_before);
    CHECK(out.map == anchor.map);
}

TEST_CASE("embed_fixing grows an empty chain to host a fresh line") {
    Chain chain = build_chain(1, 0, 3);  // just the zero stage
    auto d0 = make_ref(dim0_structure());
    auto line = make_ref(make_structure(1, {}));
    Embedding anchor{d0, chain.final_stage(), F2LinearMap(0, 0, {}), SigLevel::LXE};
    Embedding out = embed_fixing(chain, line, d0, anchor);
    CHECK(chain.stages.size() == 2);
    CHECK(chain.final_stage()->dim() == 1);
    CHECK(validate_embedding(out).ok());
}

TEST_CASE("embed_fixing keeps the anchor and lands block-mates together") {
    Chain chain = build_chain(1, 2, 3);  // two singleton blocks
    REQUIRE(chain.final_stage()->dim() == 2);
    auto f = generated_substructure(chain.final_stage(), {vec("10")});
    auto fref = make_ref(f.structure);
    Embedding anchor = f.inclusion;
    anchor.source = fref;

    // D: F plus one new member of the same class
    XEStructure d = make_structure(2, {{0, span(2, {vec("11")})}}, {},
                                   {{vec("10"), vec("01")}});
    REQUIRE(validate_k(d).ok());
    Embedding out = embed_fixing(chain, make_ref(d), fref, anchor);
    CHECK(validate_k(*chain.final_stage()).ok());

    // the anchored element is fixed and the new one joined its block
    F2Vector anchored = out.map.apply(vec("10"));
    F2Vector fresh = out.map.apply(vec("01"));
    CHECK(anchored == anchor.map.apply(vec("1")).padded(chain.final_stage()->dim()));
    CHECK(chain.final_stage()->E.same_block(anchored, fresh));
}

TEST_CASE("stage inclusions compose") {
    Chain chain = build_chain(1, 3, 9);
    auto inc = stage_inclusion(chain, 0, chain.final_index());
    CHECK(inc.map.domain_dim() == 0);
    auto mid = stage_inclusion(chain, 1, 2);
    CHECK(validate_embedding(mid).ok());
}
