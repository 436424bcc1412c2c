#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "taglab/engine.hpp"

using namespace taglab;

namespace {

ClassBijection bijection(std::map<int, int> m) { return ClassBijection(m); }

ClassBijection identity_classes(int n) {
    std::map<int, int> m;
    for (int i = 0; i < n; ++i) m[i] = i;
    return ClassBijection(m);
}

std::vector<ClassBijection> all_bijections(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<ClassBijection> out;
    do {
        std::map<int, int> m;
        for (int i = 0; i < n; ++i) m[i] = perm[static_cast<std::size_t>(i)];
        out.push_back(ClassBijection(m));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("engine shapes match the closed forms") {
    Engine a = build_engine({3, 1, 1});
    CHECK(a.dim() == 6);
    CHECK(a.pair_count() == 3);
    CHECK(a.t_set().size() == 3);
    CHECK(a.q_set().empty());
    CHECK(a.w0().dim() == 3);
    CHECK(a.w1().is_zero());

    Engine b = build_engine({2, 1, 2});
    CHECK(b.x0_count() == 2);
    CHECK(b.x1_count() == 2);
    REQUIRE(b.t_set().size() == 2);
    // W0 is spanned by s+z0 and s+z1; its four elements are known exactly
    F2Vector s = b.x0()[0] ^ b.x0()[1];
    std::set<F2Vector, CanonicalLess> expect{F2Vector(b.dim()), s ^ b.x1()[0],
                                             s ^ b.x1()[1], b.x1()[0] ^ b.x1()[1]};
    auto got = b.w0().elements();
    CHECK(std::set<F2Vector, CanonicalLess>(got.begin(), got.end()) == expect);

    Engine c = build_engine({2, 2, 1});
    CHECK(c.x0_count() == 4);
    CHECK(c.pair_count() == 6);
    CHECK(c.x1_count() == 6);
    CHECK(c.dim() == 10);
    CHECK(c.q_set().size() == 2);

    CHECK_THROWS_AS(build_engine({100, 4, 4}), Error);
}

TEST_CASE("fibers partition X1") {
    Engine e = build_engine({3, 2, 2});
    std::set<int> seen;
    for (int z = 0; z < e.x1_count(); ++z) {
        int c = e.e1_class(z);
        CHECK(c >= 0);
        CHECK(c < e.pair_count());
        seen.insert(z);
    }
    CHECK(static_cast<int>(seen.size()) == e.x1_count());
}

TEST_CASE("claim 1 holds and both solver routes agree") {
    for (int n = 1; n <= 3; ++n)
        for (int m0 = 1; m0 <= 2; ++m0)
            for (int m1 = 1; m1 <= 2; ++m1) {
                Engine e = build_engine({n, m0, m1});
                auto report = claim1_check(e);
                CHECK(report.ok());
            }
    // a case where W0 is too big to enumerate, rank route only
    Engine big = build_engine({4, 2, 2});
    CHECK(big.w0().dim() == 56);
    CHECK(claim1_check(big).ok());
}

TEST_CASE("sigma_lift on the identity is the identity") {
    Engine e = build_engine({3, 2, 2});
    Sigma s = sigma_lift(e, identity_classes(3));
    CHECK(s.map == F2LinearMap::identity(e.dim()));
}

TEST_CASE("the swap on two classes fixes the single pair sum") {
    Engine e = build_engine({2, 1, 1});
    Sigma s = sigma_lift(e, bijection({{0, 1}, {1, 0}}));
    CHECK(s.perm_x0 == std::vector<int>{1, 0});
    CHECK(s.h1.apply(0) == 0);
    CHECK(s.perm_x1 == std::vector<int>{0});
    CHECK(verify_sigma(e, s).ok());
}

TEST_CASE("a three-cycle acts on fibers through the pair action") {
    Engine e = build_engine({3, 1, 1});
    Sigma s = sigma_lift(e, bijection({{0, 1}, {1, 2}, {2, 0}}));
    // pairs (0,1)->(1,2), (0,2)->(0,1), (1,2)->(0,2)
    CHECK(s.h1.apply(0) == 2);
    CHECK(s.h1.apply(1) == 0);
    CHECK(s.h1.apply(2) == 1);
    CHECK(verify_sigma(e, s).ok());
}

TEST_CASE("every lifting passes the full verifier, exhaustively to n = 3") {
    for (int n = 1; n <= 3; ++n)
        for (int m0 = 1; m0 <= 2; ++m0)
            for (int m1 = 1; m1 <= 2; ++m1) {
                Engine e = build_engine({n, m0, m1});
                for (const auto& h : all_bijections(n)) {
                    Sigma s = sigma_lift(e, h);
                    auto report = verify_sigma(e, s);
                    CHECK(report.ok());
                }
            }
}

TEST_CASE("liftings compose functorially") {
    Engine e = build_engine({3, 2, 1});
    auto hs = all_bijections(3);
    for (const auto& g : hs)
        for (const auto& h : hs) {
            std::map<int, int> gh;
            for (int c = 0; c < 3; ++c) gh[c] = g.apply(h.apply(c));
            Sigma composed = sigma_lift(e, ClassBijection(gh));
            Sigma left = sigma_lift(e, g);
            Sigma right = sigma_lift(e, h);
            CHECK(composed.map == compose(left.map, right.map));
        }
}

TEST_CASE("a corrupted sigma fails T preservation") {
    Engine e = build_engine({2, 1, 2});
    Sigma s = sigma_lift(e, identity_classes(2));
    // swap one fiber member against a different fiber without touching sigma0
    Engine wide = build_engine({3, 1, 1});
    Sigma t = sigma_lift(wide, identity_classes(3));
    std::vector<F2Vector> images = t.map.images();
    std::swap(images[3], images[4]);  // two X1 elements of different fibers
    t.map = F2LinearMap(wide.dim(), wide.dim(), std::move(images));
    auto report = verify_sigma(wide, t);
    CHECK_FALSE(report.ok());
    bool t_broken = false;
    for (const auto& item : report.items)
        if (item.check == "T-fixed-setwise" && item.status == ValidationItem::Status::fail)
            t_broken = true;
    CHECK(t_broken);
    CHECK(verify_sigma(e, s).ok());
}

TEST_CASE("recovery reproduces the stored class structures") {
    for (int n = 2; n <= 3; ++n)
        for (int m0 = 1; m0 <= 2; ++m0)
            for (int m1 = 1; m1 <= 2; ++m1) {
                Engine e = build_engine({n, m0, m1});
                auto raw = raw_data(e);
                auto e1 = recover_e1(raw);
                REQUIRE(static_cast<int>(e1.classes.size()) == e.pair_count());
                for (int t = 0; t < e.pair_count(); ++t) {
                    std::vector<int> expect;
                    for (int r = 0; r < m1; ++r) expect.push_back(t * m1 + r);
                    CHECK(e1.classes[static_cast<std::size_t>(t)] == expect);
                    CHECK(e1.class_to_pair[static_cast<std::size_t>(t)] ==
                          e.pairs()[static_cast<std::size_t>(t)]);
                }
                auto e0 = recover_e0(raw, e1);
                REQUIRE(static_cast<int>(e0.size()) == n);
                for (int c = 0; c < n; ++c) {
                    std::vector<int> expect;
                    for (int r = 0; r < m0; ++r) expect.push_back(c * m0 + r);
                    CHECK(e0[static_cast<std::size_t>(c)] == expect);
                }
            }
}

TEST_CASE("specific small recoveries") {
    // one E1 class of two, witnessed by the single pair sum
    Engine e = build_engine({2, 1, 2});
    auto e1 = recover_e1(raw_data(e));
    REQUIRE(e1.classes.size() == 1);
    CHECK(e1.classes[0] == std::vector<int>{0, 1});
    CHECK(e1.class_to_s[0] == (e.x0()[0] ^ e.x0()[1]));

    // m0 = 1 decodes to the discrete partition
    Engine d = build_engine({3, 1, 2});
    auto classes = recover_e0(raw_data(d), recover_e1(raw_data(d)));
    CHECK(classes.size() == 3);

    // zero W1 also decodes to the discrete partition
    auto raw = raw_data(build_engine({2, 2, 1}));
    raw.w1 = F2Subspace::zero(raw.dim);
    auto discrete = recover_e0(raw, recover_e1(raw));
    CHECK(discrete.size() == 4);
}

TEST_CASE("recovery only sees the subspace data: invariance under relabeling") {
    Engine e = build_engine({2, 2, 1});
    auto raw = raw_data(e);

    std::mt19937_64 rng(5);
    // a random invertible map preserving nothing but the recorded data
    std::vector<int> perm(static_cast<std::size_t>(e.dim()));
    for (int i = 0; i < e.dim(); ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<F2Vector> images;
    for (int i = 0; i < e.dim(); ++i)
        images.push_back(F2Vector::unit(e.dim(), perm[static_cast<std::size_t>(i)]));
    F2LinearMap g(e.dim(), e.dim(), images);

    auto moved = transform_raw(raw, g);
    auto e1 = recover_e1(raw);
    auto e1_moved = recover_e1(moved);
    REQUIRE(e1.classes.size() == e1_moved.classes.size());
    CHECK(e1.classes == e1_moved.classes);  // indices refer to the x1 lists
    CHECK(recover_e0(raw, e1) == recover_e0(moved, e1_moved));
}

TEST_CASE("full tagged export") {
    Engine small = build_engine({2, 1, 1});
    TaggedStructure exported = export_full_tagged(small);
    CHECK(exported.tags.tag(kTagV0) == small.v0());
    CHECK(exported.tags.tag(kTagV1) == small.v1());
    CHECK(exported.tags.tag(kTagW0) == small.w0());
    // v0 block hides one non-X element, v1 none
    CHECK(exported.tags.explicit_count() == 3 + 1);  // V0, V1, W0 and one singleton

    Engine mid = build_engine({3, 1, 1});
    TaggedStructure wide = export_full_tagged(mid);
    int singles = 0;
    wide.tags.for_each_explicit([&](TagIndex n, const F2Subspace& sub) {
        if (n >= kTagFirstSingleton) {
            CHECK(sub.dim() == 1);
            ++singles;
        }
    });
    CHECK(singles == 8);  // four per block

    // each block reads off its X as the complement of the singleton tags
    auto block_x = [&](int offset, int size) {
        TaggedStructure block(size);
        TagIndex next = 0;
        wide.tags.for_each_explicit([&](TagIndex n, const F2Subspace& sub) {
            if (n < kTagFirstSingleton || sub.dim() != 1) return;
            const F2Vector& v = sub.basis().front();
            bool inside = true;
            for (int i = 0; i < wide.dim; ++i)
                if (v.get(i) && (i < offset || i >= offset + size)) inside = false;
            if (!inside) return;
            F2Vector local(size);
            for (int i = 0; i < size; ++i) local.set(i, v.get(offset + i));
            block.tags.set_tag(next++, span(size, {local}));
        });
        return compute_X(block);
    };
    std::vector<F2Vector> x0_local = block_x(0, 3);
    REQUIRE(x0_local.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(x0_local[static_cast<std::size_t>(i)].weight() == 1);

    CHECK_THROWS_AS(export_full_tagged(build_engine({4, 2, 2})), Error);
}
