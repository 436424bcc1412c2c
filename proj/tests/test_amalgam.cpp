#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "taglab/amalgam.hpp"
#include "taglab/randomgen.hpp"

using namespace taglab;

namespace {

F2Vector vec(const std::string& bits) { return F2Vector::from_string(bits); }

AmalgamationProblem over_dim0(StructureRef b, StructureRef c) {
    auto a = make_ref(dim0_structure());
    return AmalgamationProblem{a, b, c, find_embeddings(a, b)[0], find_embeddings(a, c)[0]};
}

}  // namespace

TEST_CASE("amalgamating three empty structures is a no-op") {
    auto d0 = make_ref(dim0_structure());
    auto r = amalgamate_k0(over_dim0(d0, d0));
    CHECK(r.d->dim() == 0);
    CHECK(r.fresh_count == 0);
    CHECK(validate_k(*r.d).ok());
}

TEST_CASE("two fresh lines over the empty structure") {
    auto line = make_ref(make_structure(1, {}));
    auto r = amalgamate_k0(over_dim0(line, line));
    CHECK(r.d->dim() == 2);
    CHECK(r.d->X() == std::vector<F2Vector>{vec("10"), vec("01")});
    REQUIRE(r.fresh_count == 1);
    CHECK(r.fresh_tags[0].second == vec("11"));
    CHECK(validate_k0(r.d->xs).ok());
    // X^D is exactly the complement, verified independently
    CHECK(compute_X(r.d->xs.base) == r.d->X());
}

TEST_CASE("active tags join, everything else gets tagged freshly") {
    // B: dim 2 with an active tag at index 5; C: a fresh line
    auto b = make_ref(make_structure(2, {{5, span(2, {vec("11")})}}));
    auto c = make_ref(make_structure(1, {}));
    auto r = amalgamate_k0(over_dim0(b, c));
    CHECK(r.d->dim() == 3);
    CHECK(r.d->tags().tag(5) == span(3, {vec("110")}));
    REQUIRE(r.fresh_count == 3);
    std::set<F2Vector, CanonicalLess> fresh;
    for (const auto& [idx, v] : r.fresh_tags) fresh.insert(v);
    CHECK(fresh == std::set<F2Vector, CanonicalLess>{vec("101"), vec("011"), vec("111")});
    CHECK(validate_k0(r.d->xs).ok());

    // every vector of D is X, zero, active-tagged, or fresh
    for (const auto& v : all_vectors(3)) {
        bool in_x = r.d->x_member(v);
        bool covered = r.d->tags().covers(v);
        CHECK((in_x || covered));
        CHECK_FALSE((in_x && covered));
    }
}

TEST_CASE("commuting square and disjointness on a nontrivial base") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        auto p = random_k0_problem(rng, 7);
        auto r = amalgamate_k0(p);
        CHECK(validate_k(*r.d).ok());
        CHECK(compose_embeddings(p.into_b, r.from_b).map ==
              compose_embeddings(p.into_c, r.from_c).map);
        CHECK(validate_embedding(r.from_b).ok());
        CHECK(validate_embedding(r.from_c).ok());
        // X^D = i_B[X^B] u i_C[X^C]
        std::set<F2Vector, CanonicalLess> expected;
        for (const auto& x : p.b->X()) expected.insert(r.from_b.map.apply(x));
        for (const auto& x : p.c->X()) expected.insert(r.from_c.map.apply(x));
        std::set<F2Vector, CanonicalLess> actual(r.d->X().begin(), r.d->X().end());
        CHECK(expected == actual);
        // active-tag join, index by index
        p.b->tags().for_each([&](int n, const F2Subspace& sub) {
            std::vector<F2Vector> gens;
            for (const auto& v : sub.basis()) gens.push_back(r.from_b.map.apply(v));
            F2Subspace ctag = p.c->tags().tag(n);
            for (const auto& v : ctag.basis()) gens.push_back(r.from_c.map.apply(v));
            CHECK(r.d->tags().tag(n) == span(r.d->dim(), gens));
        });
    }
}

TEST_CASE("amalgamation is symmetric up to isomorphism") {
    Rng rng(123);
    for (int t = 0; t < 15; ++t) {
        auto p = random_k0_problem(rng, 5);
        AmalgamationProblem swapped{p.a, p.c, p.b, p.into_c, p.into_b};
        auto r1 = amalgamate_k0(p);
        auto r2 = amalgamate_k0(swapped);
        REQUIRE(r1.d->dim() == r2.d->dim());
        EmbedOptions opt;
        opt.mod_tags = true;
        opt.max_results = 1;
        auto found = find_embeddings_opt(r1.d, r2.d, opt);
        CHECK_FALSE(found.empty());  // same dimension, so any embedding is onto
    }
}

TEST_CASE("free extension of partitions") {
    auto eb = VecPartition::from_blocks({{vec("100"), vec("010")}});
    auto ec = VecPartition::from_blocks({{vec("100"), vec("001")}});
    auto joined = free_extension(eb, ec);
    CHECK(joined.block_count() == 1);
    CHECK(joined.same_block(vec("010"), vec("001")));

    auto disjoint = free_extension(VecPartition::singletons({vec("100")}),
                                   VecPartition::singletons({vec("010")}));
    CHECK(disjoint.block_count() == 2);

    CHECK(free_extension(eb, eb) == eb);

    auto conflicting = VecPartition::from_blocks({{vec("100")}, {vec("010")}});
    CHECK_THROWS_AS(free_extension(eb, conflicting), Error);
}

TEST_CASE("strong amalgamation accepts admissible E* and rejects the rest") {
    Rng rng(7);
    int coarser_seen = 0;
    for (int t = 0; t < 40; ++t) {
        auto p = random_k0_problem(rng, 7);
        auto free_result = amalgamate_k_free(p);
        CHECK(validate_k(*free_result.d).ok());

        auto coarse = random_admissible_coarsening(rng, free_result, 2);
        auto spec = estar_from_partition(free_result, coarse);
        auto r = amalgamate_k(p, spec);
        CHECK(validate_k(*r.d).ok());
        CHECK(r.d->E == coarse);
        if (coarse.block_count() < free_result.d->E.block_count()) ++coarser_seen;

        if (auto bad = inadmissible_coarsening(free_result)) {
            auto bad_spec = estar_from_partition(free_result, *bad);
            CHECK_THROWS_AS(amalgamate_k(p, bad_spec), Error);
        }
    }
    CHECK(coarser_seen > 0);
}

TEST_CASE("E* naming a non-X element is rejected") {
    auto b = make_ref(make_structure(2, {{0, span(2, {vec("11")})}}));
    auto c = make_ref(make_structure(1, {}));
    auto p = over_dim0(b, c);
    EStarSpec spec;
    spec.blocks = {{{EStarSpec::Side::B, vec("01")}},
                   {{EStarSpec::Side::B, vec("11")}},  // tagged, not in X
                   {{EStarSpec::Side::B, vec("10")}},
                   {{EStarSpec::Side::C, vec("1")}}};
    CHECK_THROWS_AS(amalgamate_k(p, spec), Error);
}

TEST_CASE("partial E* is rejected") {
    auto line = make_ref(make_structure(1, {}));
    auto p = over_dim0(line, line);
    EStarSpec spec;
    spec.blocks = {{{EStarSpec::Side::B, vec("1")}}};  // misses the C line
    CHECK_THROWS_AS(amalgamate_k(p, spec), Error);
}
