#include "taglab/engine.hpp"

#include <algorithm>

namespace taglab {

namespace {

constexpr int kMaxEngineDim = 512;

}  // namespace

int Engine::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    detail::require(0 <= i && i < j && j < x0_count_, "Engine::pair_index: bad positions");
    // lex rank of (i, j) among increasing pairs
    int skipped = i * x0_count_ - i * (i + 1) / 2;
    return skipped + (j - i - 1);
}

int Engine::x0_index(const F2Vector& v) const {
    for (int i = 0; i < x0_count_; ++i)
        if (x0_[static_cast<std::size_t>(i)] == v) return i;
    return -1;
}

int Engine::x1_index(const F2Vector& v) const {
    int p = v.pivot();
    if (p >= x0_count_ && p < dim_ && v.weight() == 1) return p - x0_count_;
    return -1;
}

Engine::Engine(const EngineParams& params) : params_(params) {
    detail::require(params.n >= 1 && params.m0 >= 1 && params.m1 >= 1,
                    "Engine: parameters must be positive");
    x0_count_ = params.n * params.m0;
    pair_count_ = x0_count_ * (x0_count_ - 1) / 2;
    x1_count_ = pair_count_ * params.m1;
    dim_ = x0_count_ + x1_count_;
    detail::require(dim_ <= kMaxEngineDim && dim_ >= 1, "Engine: dimension out of range");

    for (int i = 0; i < x0_count_; ++i) x0_.push_back(F2Vector::unit(dim_, i));
    for (int j = 0; j < x1_count_; ++j) x1_.push_back(F2Vector::unit(dim_, x0_count_ + j));
    for (int i = 0; i < x0_count_; ++i)
        for (int j = i + 1; j < x0_count_; ++j) pairs_.emplace_back(i, j);

    v0_ = span(dim_, x0_);
    v1_ = span(dim_, x1_);

    // T: each pair sum combined with every member of its fiber
    for (int t = 0; t < pair_count_; ++t) {
        auto [i, j] = pairs_[static_cast<std::size_t>(t)];
        F2Vector s = x0_[static_cast<std::size_t>(i)] ^ x0_[static_cast<std::size_t>(j)];
        for (int r = 0; r < params_.m1; ++r)
            t_set_.push_back(s ^ x1_[static_cast<std::size_t>(t * params_.m1 + r)]);
    }
    w0_ = span(dim_, t_set_);
    detail::require(w0_.dim() == static_cast<int>(t_set_.size()),
                    "Engine: T failed to be independent");

    // Q: fibers of within-class pairs
    for (int t = 0; t < pair_count_; ++t) {
        auto [i, j] = pairs_[static_cast<std::size_t>(t)];
        if (e0_class(i) != e0_class(j)) continue;
        for (int r = 0; r < params_.m1; ++r)
            q_set_.push_back(x1_[static_cast<std::size_t>(t * params_.m1 + r)]);
    }
    w1_ = span(dim_, q_set_);
    detail::require(w1_.dim() == static_cast<int>(q_set_.size()),
                    "Engine: Q failed to be independent");

    // projections onto the blocks
    std::vector<F2Vector> p0_images, p1_images;
    for (int i = 0; i < dim_; ++i) {
        bool in_v0 = i < x0_count_;
        p0_images.push_back(in_v0 ? F2Vector::unit(dim_, i) : F2Vector(dim_));
        p1_images.push_back(in_v0 ? F2Vector(dim_) : F2Vector::unit(dim_, i));
    }
    pi0_ = F2LinearMap(dim_, dim_, std::move(p0_images));
    pi1_ = F2LinearMap(dim_, dim_, std::move(p1_images));
}

Engine build_engine(const EngineParams& params) { return Engine(params); }

ValidationReport claim1_check(const Engine& engine, int guard) {
    ValidationReport report;
    std::set<F2Vector, CanonicalLess> t_elems(engine.t_set().begin(), engine.t_set().end());
    for (int j = 0; j < engine.x1_count(); ++j) {
        const F2Vector& z = engine.x1()[static_cast<std::size_t>(j)];
        auto pre = preimage_set(engine.pi1(), engine.w0(), z, guard);
        bool unique = pre.size() == 1;
        bool in_t = unique && t_elems.count(pre.front()) > 0;
        report.add("z" + std::to_string(j), unique && in_t,
                   unique ? (in_t ? "" : "witness outside T")
                          : "expected one witness, found " + std::to_string(pre.size()));
    }
    return report;
}

Sigma sigma_lift(const Engine& engine, const ClassBijection& h) {
    const EngineParams& p = engine.params();
    detail::require(h.size() == p.n, "sigma_lift: h must be total on the E0 classes");
    for (int c = 0; c < p.n; ++c) {
        detail::require(h.defined(c) && h.apply(c) >= 0 && h.apply(c) < p.n,
                        "sigma_lift: h is not a class bijection");
    }

    Sigma sigma;
    sigma.h = h;
    // members move in index order
    sigma.perm_x0.resize(static_cast<std::size_t>(engine.x0_count()));
    for (int i = 0; i < engine.x0_count(); ++i)
        sigma.perm_x0[static_cast<std::size_t>(i)] =
            h.apply(engine.e0_class(i)) * p.m0 + i % p.m0;

    // induced class action: the fiber of a pair follows the image pair
    for (int t = 0; t < engine.pair_count(); ++t) {
        auto [i, j] = engine.pairs()[static_cast<std::size_t>(t)];
        int it = sigma.perm_x0[static_cast<std::size_t>(i)];
        int jt = sigma.perm_x0[static_cast<std::size_t>(j)];
        sigma.h1.set(engine.k_of_pair(t), engine.k_of_pair(engine.pair_index(it, jt)));
    }
    sigma.perm_x1.resize(static_cast<std::size_t>(engine.x1_count()));
    for (int z = 0; z < engine.x1_count(); ++z)
        sigma.perm_x1[static_cast<std::size_t>(z)] =
            sigma.h1.apply(engine.e1_class(z)) * p.m1 + z % p.m1;

    std::vector<F2Vector> images(static_cast<std::size_t>(engine.dim()));
    for (int i = 0; i < engine.x0_count(); ++i)
        images[static_cast<std::size_t>(i)] =
            engine.x0()[static_cast<std::size_t>(sigma.perm_x0[static_cast<std::size_t>(i)])];
    for (int z = 0; z < engine.x1_count(); ++z)
        images[static_cast<std::size_t>(engine.x0_count() + z)] =
            engine.x1()[static_cast<std::size_t>(sigma.perm_x1[static_cast<std::size_t>(z)])];
    sigma.map = F2LinearMap(engine.dim(), engine.dim(), std::move(images));
    return sigma;
}

ValidationReport verify_sigma(const Engine& engine, const Sigma& sigma) {
    ValidationReport report;
    const F2LinearMap& f = sigma.map;
    report.add("bijective", f.is_bijective());

    auto image_set = [&](const std::vector<F2Vector>& vs) {
        std::set<F2Vector, CanonicalLess> out;
        for (const auto& v : vs) out.insert(f.apply(v));
        return out;
    };
    std::set<F2Vector, CanonicalLess> t_elems(engine.t_set().begin(), engine.t_set().end());
    std::set<F2Vector, CanonicalLess> q_elems(engine.q_set().begin(), engine.q_set().end());
    report.add("T-fixed-setwise", image_set(engine.t_set()) == t_elems);
    report.add("Q-fixed-setwise", image_set(engine.q_set()) == q_elems);

    auto subspace_fixed = [&](const F2Subspace& s) {
        std::vector<F2Vector> imgs;
        for (const auto& b : s.basis()) imgs.push_back(f.apply(b));
        return span(s.ambient_dim(), imgs) == s;
    };
    report.add("W0-fixed-subspace", subspace_fixed(engine.w0()));
    report.add("W1-fixed-subspace", subspace_fixed(engine.w1()));
    report.add("V0-fixed-subspace", subspace_fixed(engine.v0()));
    report.add("V1-fixed-subspace", subspace_fixed(engine.v1()));

    // (i) fibers follow the pair action
    bool fiber_action = true;
    for (int t = 0; t < engine.pair_count() && fiber_action; ++t) {
        auto [i, j] = engine.pairs()[static_cast<std::size_t>(t)];
        F2Vector fx = f.apply(engine.x0()[static_cast<std::size_t>(i)]);
        F2Vector fy = f.apply(engine.x0()[static_cast<std::size_t>(j)]);
        int it = engine.x0_index(fx), jt = engine.x0_index(fy);
        if (it < 0 || jt < 0 || it == jt) {
            fiber_action = false;
            break;
        }
        int target_class = engine.k_of_pair(engine.pair_index(it, jt));
        for (int r = 0; r < engine.params().m1; ++r) {
            const F2Vector& z =
                engine.x1()[static_cast<std::size_t>(t * engine.params().m1 + r)];
            int zi = engine.x1_index(f.apply(z));
            if (zi < 0 || engine.e1_class(zi) != target_class) fiber_action = false;
        }
    }
    report.add("(i)-pair-transport", fiber_action);

    // (ii) the E1 class structure is respected
    bool e1_blocks = true;
    for (int a = 0; a < engine.x1_count(); ++a)
        for (int b = a + 1; b < engine.x1_count(); ++b) {
            int fa = engine.x1_index(f.apply(engine.x1()[static_cast<std::size_t>(a)]));
            int fb = engine.x1_index(f.apply(engine.x1()[static_cast<std::size_t>(b)]));
            if (fa < 0 || fb < 0) {
                e1_blocks = false;
            } else if ((engine.e1_class(a) == engine.e1_class(b)) !=
                       (engine.e1_class(fa) == engine.e1_class(fb))) {
                e1_blocks = false;
            }
        }
    report.add("(ii)-E1-preserved", e1_blocks);

    // (iii) W1 meets X1 in exactly Q
    std::set<F2Vector, CanonicalLess> w1_in_x1;
    for (const auto& z : engine.x1())
        if (member(z, engine.w1())) w1_in_x1.insert(z);
    report.add("(iii)-W1-meets-X1-in-Q", w1_in_x1 == q_elems);

    // (iv) within-class pairs are exactly the Q fibers, before and after
    bool e0_criterion = true;
    for (int t = 0; t < engine.pair_count(); ++t) {
        auto [i, j] = engine.pairs()[static_cast<std::size_t>(t)];
        bool equivalent = engine.e0_class(i) == engine.e0_class(j);
        bool fiber_in_q = true;
        for (int r = 0; r < engine.params().m1; ++r)
            if (!q_elems.count(
                    engine.x1()[static_cast<std::size_t>(t * engine.params().m1 + r)]))
                fiber_in_q = false;
        if (equivalent != fiber_in_q) e0_criterion = false;
        // transported pair agrees
        int it = engine.x0_index(f.apply(engine.x0()[static_cast<std::size_t>(i)]));
        int jt = engine.x0_index(f.apply(engine.x0()[static_cast<std::size_t>(j)]));
        if (it < 0 || jt < 0 ||
            (engine.e0_class(it) == engine.e0_class(jt)) != equivalent)
            e0_criterion = false;
    }
    report.add("(iv)-E0-criterion", e0_criterion);
    return report;
}

EngineRawData raw_data(const Engine& engine) {
    return EngineRawData{engine.dim(), engine.v0(), engine.v1(), engine.x0(),
                         engine.x1(), engine.w0(), engine.w1()};
}

EngineRawData transform_raw(const EngineRawData& raw, const F2LinearMap& g) {
    detail::require(g.domain_dim() == raw.dim && g.is_bijective(),
                    "transform_raw: need an invertible map on the ambient space");
    auto map_space = [&](const F2Subspace& s) {
        std::vector<F2Vector> imgs;
        for (const auto& b : s.basis()) imgs.push_back(g.apply(b));
        return span(raw.dim, imgs);
    };
    auto map_vecs = [&](const std::vector<F2Vector>& vs) {
        std::vector<F2Vector> out;
        for (const auto& v : vs) out.push_back(g.apply(v));
        return out;
    };
    return EngineRawData{raw.dim,          map_space(raw.v0), map_space(raw.v1),
                         map_vecs(raw.x0), map_vecs(raw.x1),  map_space(raw.w0),
                         map_space(raw.w1)};
}

int RecoveredE1::class_of(int x1_index) const {
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int m : classes[c])
            if (m == x1_index) return static_cast<int>(c);
    return -1;
}

RecoveredE1 recover_e1(const EngineRawData& raw, int guard) {
    detail::require(intersect(raw.v0, raw.v1).is_zero() &&
                        sum_subspaces(raw.v0, raw.v1).dim() == raw.dim,
                    "recover_e1: V0 and V1 must be complementary");

    // projection onto V1 along V0
    std::vector<F2Vector> basis = raw.v0.basis();
    std::vector<F2Vector> images(basis.size(), F2Vector(raw.dim));
    for (const auto& b : raw.v1.basis()) {
        basis.push_back(b);
        images.push_back(b);
    }
    F2LinearMap pi1 = extend_map_on_basis(basis, images, raw.dim, raw.dim);

    // the enumeration arm of preimage_set is a cross-check, not the workhorse;
    // cap it so decoding stays linear-algebra speed
    int solve_guard = std::min(guard, 12);
    std::map<F2Vector, std::vector<int>, CanonicalLess> by_witness;
    for (std::size_t j = 0; j < raw.x1.size(); ++j) {
        auto pre = preimage_set(pi1, raw.w0, raw.x1[j], solve_guard);
        detail::require(pre.size() == 1,
                        "recover_e1: X1 element without a unique W0 witness");
        F2Vector s = pre.front() ^ raw.x1[j];  // the V0 component
        detail::require(member(s, raw.v0), "recover_e1: witness has a bad V0 part");
        by_witness[s].push_back(static_cast<int>(j));
    }

    RecoveredE1 out;
    for (auto& [s, members] : by_witness) {
        std::sort(members.begin(), members.end());
        out.classes.push_back(members);
        out.class_to_s.push_back(s);
    }
    // order classes by smallest member
    std::vector<std::size_t> order(out.classes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.classes[a].front() < out.classes[b].front();
    });
    RecoveredE1 sorted;
    for (std::size_t i : order) {
        sorted.classes.push_back(out.classes[i]);
        sorted.class_to_s.push_back(out.class_to_s[i]);
    }

    // decompose each witness sum over X0 into its defining pair
    int k = static_cast<int>(raw.x0.size());
    std::vector<F2Vector> units;
    for (int i = 0; i < k; ++i) units.push_back(F2Vector::unit(k, i));
    F2LinearMap section = extend_map_on_basis(raw.x0, units, raw.dim, k);
    for (const auto& s : sorted.class_to_s) {
        F2Vector c = section.apply(s);
        std::vector<int> support;
        for (int i = 0; i < k; ++i)
            if (c.get(i)) support.push_back(i);
        detail::require(support.size() == 2 && span(raw.dim, raw.x0).reduce(s).is_zero(),
                        "recover_e1: witness sum is not a pair of X0 elements");
        sorted.class_to_pair.emplace_back(support[0], support[1]);
    }
    return sorted;
}

std::vector<std::vector<int>> recover_e0(const EngineRawData& raw, const RecoveredE1& e1) {
    // Q: the X1 elements inside W1, which must be a union of recovered classes
    std::vector<bool> in_q(raw.x1.size(), false);
    for (std::size_t j = 0; j < raw.x1.size(); ++j) in_q[j] = member(raw.x1[j], raw.w1);
    std::vector<bool> class_in_q(e1.classes.size(), false);
    for (std::size_t c = 0; c < e1.classes.size(); ++c) {
        bool all = true, any = false;
        for (int m : e1.classes[c]) {
            all = all && in_q[static_cast<std::size_t>(m)];
            any = any || in_q[static_cast<std::size_t>(m)];
        }
        detail::require(all == any, "recover_e0: W1 meets X1 off the recovered fibers");
        class_in_q[c] = all;
    }

    int k = static_cast<int>(raw.x0.size());
    std::vector<std::vector<bool>> related(static_cast<std::size_t>(k),
                                           std::vector<bool>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i) related[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    for (std::size_t c = 0; c < e1.classes.size(); ++c) {
        auto [i, j] = e1.class_to_pair[c];
        if (class_in_q[c]) {
            related[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
            related[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
        }
    }
    // the relation must already be transitive on valid data
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                if (related[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] &&
                    related[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])
                    detail::require(
                        related[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)],
                        "recover_e0: recovered relation is not transitive");

    std::vector<std::vector<int>> classes;
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int i = 0; i < k; ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        std::vector<int> cls;
        for (int j = 0; j < k; ++j)
            if (related[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                cls.push_back(j);
                seen[static_cast<std::size_t>(j)] = true;
            }
        classes.push_back(std::move(cls));
    }
    return classes;
}

TaggedStructure export_full_tagged(const Engine& engine, int guard) {
    detail::require(engine.dim() <= guard,
                    "export_full_tagged: dimension above enumeration guard");
    TaggedStructure out(engine.dim());
    out.tags.set_tag(kTagV0, engine.v0());
    out.tags.set_tag(kTagV1, engine.v1());
    if (!engine.w0().is_zero()) out.tags.set_tag(kTagW0, engine.w0());
    if (!engine.w1().is_zero()) out.tags.set_tag(kTagW1, engine.w1());

    std::set<F2Vector, CanonicalLess> x_elems;
    for (const auto& v : engine.x0()) x_elems.insert(v);
    for (const auto& v : engine.x1()) x_elems.insert(v);

    TagIndex next = kTagFirstSingleton;
    auto tag_block = [&](const F2Subspace& block) {
        for (const auto& v : block.elements(guard)) {
            if (v.is_zero() || x_elems.count(v)) continue;
            out.tags.set_tag(next++, span(engine.dim(), {v}));
        }
    };
    tag_block(engine.v0());
    tag_block(engine.v1());
    return out;
}

}  // namespace taglab
