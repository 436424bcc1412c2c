#include "taglab/lifting.hpp"

#include <algorithm>

namespace taglab {

ClassBijection::ClassBijection(const std::map<int, int>& mapping) {
    for (const auto& [s, t] : mapping) set(s, t);
}

int ClassBijection::apply(int block) const {
    auto it = map_.find(block);
    detail::require(it != map_.end(), "ClassBijection: undefined on block " +
                                          std::to_string(block));
    return it->second;
}

void ClassBijection::set(int source, int target) {
    detail::require(!map_.count(source) || map_.at(source) == target,
                    "ClassBijection: source already mapped");
    detail::require(!inverse_.count(target) || inverse_.at(target) == source,
                    "ClassBijection: target already hit");
    map_[source] = target;
    inverse_[target] = source;
}

ClassBijection ClassBijection::inverse() const {
    ClassBijection out;
    out.map_ = inverse_;
    out.inverse_ = map_;
    return out;
}

int block_id(const XEStructure& stage, const F2Vector& x) {
    int b = stage.E.block_of(x);
    detail::require(b >= 0, "block_id: element is not in X");
    const auto& block = stage.E.blocks()[static_cast<std::size_t>(b)];
    int id = block.front().pivot();
    for (const auto& v : block) id = std::min(id, v.pivot());
    return id;
}

std::vector<int> all_block_ids(const XEStructure& stage) {
    std::vector<int> ids;
    for (const auto& block : stage.E.blocks()) {
        int id = block.front().pivot();
        for (const auto& v : block) id = std::min(id, v.pivot());
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

namespace {

F2Vector pad_to(const F2Vector& v, int dim) { return v.padded(dim); }

std::vector<F2Vector> pad_all(const std::vector<F2Vector>& vs, int dim) {
    std::vector<F2Vector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(v.padded(dim));
    return out;
}

// earliest member of the block with the given id
F2Vector block_representative(const XEStructure& stage, int id) {
    for (const auto& block : stage.E.blocks()) {
        int bid = block.front().pivot();
        for (const auto& v : block) bid = std::min(bid, v.pivot());
        if (bid == id) {
            F2Vector best = block.front();
            for (const auto& v : block)
                if (v.pivot() < best.pivot()) best = v;
            return best;
        }
    }
    throw Error("block_representative: no block with id " + std::to_string(id));
}

// appends a fresh singleton-block element and returns its block id
int add_fresh_block(Chain& chain) {
    StructureRef line = make_ref(make_structure(1, {}));
    StructureRef d0 = make_ref(dim0_structure());
    Embedding into_final{d0, chain.final_stage(),
                         F2LinearMap(0, chain.final_stage()->dim(), {}), SigLevel::LXE};
    Embedding into_line{d0, line, F2LinearMap(0, 1, {}), SigLevel::LXE};
    Embedding placed = grow_chain(chain, d0, into_final, into_line);
    return placed.map.apply(F2Vector::unit(1, 0)).pivot();
}

}  // namespace

ValidationReport check_in_Fh(const TrackedPartialIso& f, const Chain& chain) {
    ValidationReport report;
    bool stage_ok =
        f.stage_index >= 0 && f.stage_index <= chain.final_index();
    report.add("stage-index", stage_ok);
    if (!stage_ok) return report;
    StructureRef stage = chain.stages[static_cast<std::size_t>(f.stage_index)];

    std::vector<F2Vector> dom, img;
    for (const auto& [a, b] : f.x_pairs) {
        dom.push_back(a);
        img.push_back(b);
    }
    bool members = true;
    for (const auto& v : dom) members = members && stage->x_member(v);
    for (const auto& v : img) members = members && stage->x_member(v);
    report.add("pairs-in-X", members);
    if (!members) return report;

    if (dom.empty()) {
        report.add("isomorphism", true, "empty map");
        report.add("class-tracking", true);
        return report;
    }

    // the pair map extends to an exact isomorphism between the generated
    // substructures
    auto a_sub = generated_substructure(stage, dom);
    std::map<F2Vector, F2Vector, CanonicalLess> assignment;
    for (const auto& [a, b] : f.x_pairs) assignment[a] = b;
    std::vector<F2Vector> unit_images;
    for (const auto& u : a_sub.structure.X())
        unit_images.push_back(assignment.at(a_sub.inclusion.map.apply(u)));
    bool iso_ok = false;
    std::string detail_text;
    try {
        F2LinearMap phi = extend_map_on_basis(a_sub.structure.X(), unit_images,
                                              a_sub.structure.dim(), stage->dim());
        Embedding e{make_ref(a_sub.structure), stage, phi, SigLevel::LXE};
        auto rep = validate_embedding(e);
        iso_ok = rep.ok();
        if (!iso_ok) detail_text = "embedding checks failed";
    } catch (const Error& err) {
        detail_text = err.what();
    }
    report.add("isomorphism", iso_ok, detail_text);

    bool tracking = true;
    for (const auto& [a, b] : f.x_pairs) {
        int ca = block_id(*stage, a);
        int cb = block_id(*stage, b);
        if (!f.h.defined(ca) || f.h.apply(ca) != cb) tracking = false;
    }
    report.add("class-tracking", tracking);
    return report;
}

bool is_in_Fh(const TrackedPartialIso& f, const Chain& chain) {
    return check_in_Fh(f, chain).ok();
}

TrackedPartialIso extend_one_step(const TrackedPartialIso& f,
                                  const std::vector<F2Vector>& a_prime_x, Chain& chain,
                                  ExtensionAudit* audit) {
    StructureRef stage = chain.final_stage();
    int sdim = stage->dim();

    std::vector<F2Vector> aprime = pad_all(a_prime_x, sdim);
    std::sort(aprime.begin(), aprime.end(), CanonicalLess{});
    aprime.erase(std::unique(aprime.begin(), aprime.end()), aprime.end());
    for (const auto& v : aprime)
        detail::require(stage->x_member(v), "extend_one_step: A' must lie in X");

    std::map<F2Vector, F2Vector, CanonicalLess> assignment;
    for (const auto& [a, b] : f.x_pairs)
        assignment[pad_to(a, sdim)] = pad_to(b, sdim);
    for (const auto& [a, b] : assignment)
        detail::require(std::binary_search(aprime.begin(), aprime.end(), a, CanonicalLess{}),
                        "extend_one_step: A' must contain the domain of f");

    TrackedPartialIso result = f;
    result.stage_index = chain.final_index();
    result.x_pairs.clear();
    for (const auto& [a, b] : assignment) result.x_pairs.emplace_back(a, b);
    if (aprime.size() == assignment.size()) return result;  // nothing new

    // extend h deterministically to the blocks A' meets, creating target
    // blocks when none are free
    ClassBijection h = f.h;
    for (const auto& x : aprime) {
        int c = block_id(*stage, x);
        if (h.defined(c)) continue;
        int target = -1;
        for (int candidate : all_block_ids(*stage)) {
            if (!h.hits(candidate)) {
                target = candidate;
                break;
            }
        }
        if (target < 0) {
            target = add_fresh_block(chain);
            stage = chain.final_stage();
            sdim = stage->dim();
        }
        h.set(c, target);
    }
    // re-pad in case h-extension grew the chain
    {
        std::vector<F2Vector> repadded;
        for (const auto& v : aprime) repadded.push_back(pad_to(v, sdim));
        aprime = std::move(repadded);
        std::map<F2Vector, F2Vector, CanonicalLess> repad;
        for (const auto& [a, b] : assignment)
            repad[pad_to(a, sdim)] = pad_to(b, sdim);
        assignment = std::move(repad);
    }

    // abstract copy C of A', carrying the exact tag indices of A'
    auto aprime_sub = generated_substructure(stage, aprime);
    StructureRef c_ref = make_ref(aprime_sub.structure);
    // g maps the stage element aprime[i] to C's unit i
    std::map<F2Vector, F2Vector, CanonicalLess> g;
    for (std::size_t i = 0; i < aprime.size(); ++i)
        g[aprime_sub.inclusion.map.apply(c_ref->X()[i])] = c_ref->X()[i];

    // representative set Y: the image of the current domain plus the earliest
    // element of every prescribed target class
    std::vector<F2Vector> y_set;
    for (const auto& [a, b] : assignment) y_set.push_back(b);
    for (const auto& x : aprime) {
        int target_class = h.apply(block_id(*stage, x));
        y_set.push_back(block_representative(*stage, target_class));
    }
    std::sort(y_set.begin(), y_set.end(), CanonicalLess{});
    y_set.erase(std::unique(y_set.begin(), y_set.end()), y_set.end());

    auto f_sub = generated_substructure(stage, y_set);
    StructureRef f_ref = make_ref(f_sub.structure);
    Embedding f_anchor = f_sub.inclusion;
    f_anchor.source = f_ref;
    if (audit) {
        audit->representatives = y_set;
        audit->representative_structure_dim = f_ref->dim();
    }

    // B, the image of the current domain, included in both F and C
    std::vector<F2Vector> b_elems;
    for (const auto& [a, b] : assignment) b_elems.push_back(b);
    std::sort(b_elems.begin(), b_elems.end(), CanonicalLess{});
    auto b_sub = generated_substructure(stage, b_elems);
    StructureRef b_ref = make_ref(b_sub.structure);

    std::map<F2Vector, int, CanonicalLess> y_pos;
    for (std::size_t i = 0; i < y_set.size(); ++i)
        y_pos.emplace(y_set[i], static_cast<int>(i));
    std::map<F2Vector, int, CanonicalLess> aprime_pos;
    for (std::size_t i = 0; i < aprime.size(); ++i)
        aprime_pos.emplace(aprime[i], static_cast<int>(i));
    std::map<F2Vector, F2Vector, CanonicalLess> inv_assignment;
    for (const auto& [a, b] : assignment) inv_assignment[b] = a;

    std::vector<F2Vector> into_f_images, into_c_images;
    for (std::size_t j = 0; j < b_elems.size(); ++j) {
        F2Vector stage_b = b_sub.inclusion.map.apply(b_ref->X()[j]);
        into_f_images.push_back(F2Vector::unit(f_ref->dim(), y_pos.at(stage_b)));
        F2Vector stage_a = inv_assignment.at(stage_b);
        into_c_images.push_back(
            F2Vector::unit(c_ref->dim(), aprime_pos.at(stage_a)));
    }
    auto embed_from_b = [&](StructureRef target, const std::vector<F2Vector>& images) {
        return Embedding{b_ref, target,
                         b_ref->dim() == 0
                             ? F2LinearMap(0, target->dim(), {})
                             : extend_map_on_basis(b_ref->X(), images, b_ref->dim(),
                                                   target->dim()),
                         SigLevel::LXE};
    };
    Embedding b_into_f = embed_from_b(f_ref, into_f_images);
    Embedding b_into_c = embed_from_b(c_ref, into_c_images);

    // the unique extension relation on X^F u X^C: side relations, plus
    // E(g(x), y) exactly when y represents the h-image of x's class
    EStarSpec estar;
    {
        std::map<std::pair<int, std::string>, int> label_id;
        std::vector<std::pair<EStarSpec::Side, F2Vector>> labels;
        std::vector<int> parent;
        auto intern = [&](EStarSpec::Side side, const F2Vector& v) {
            auto key = std::make_pair(side == EStarSpec::Side::B ? 0 : 1, v.to_string());
            auto it = label_id.find(key);
            if (it != label_id.end()) return it->second;
            int id = static_cast<int>(labels.size());
            label_id.emplace(key, id);
            labels.emplace_back(side, v);
            parent.push_back(id);
            return id;
        };
        std::function<int(int)> find = [&](int i) {
            while (parent[static_cast<std::size_t>(i)] != i)
                i = parent[static_cast<std::size_t>(i)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            return i;
        };
        auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

        for (const auto& block : f_ref->E.blocks()) {
            int head = intern(EStarSpec::Side::B, block.front());
            for (const auto& v : block) unite(head, intern(EStarSpec::Side::B, v));
        }
        for (const auto& block : c_ref->E.blocks()) {
            int head = intern(EStarSpec::Side::C, block.front());
            for (const auto& v : block) unite(head, intern(EStarSpec::Side::C, v));
        }
        // identified copies of B agree
        for (std::size_t j = 0; j < b_elems.size(); ++j)
            unite(intern(EStarSpec::Side::B, b_into_f.map.apply(b_ref->X()[j])),
                  intern(EStarSpec::Side::C, b_into_c.map.apply(b_ref->X()[j])));
        // the displayed condition
        for (const auto& x : aprime) {
            F2Vector rep = block_representative(*stage, h.apply(block_id(*stage, x)));
            unite(intern(EStarSpec::Side::C, g.at(x)),
                  intern(EStarSpec::Side::B, F2Vector::unit(f_ref->dim(), y_pos.at(rep))));
        }

        std::map<int, std::vector<std::pair<EStarSpec::Side, F2Vector>>> groups;
        for (std::size_t i = 0; i < labels.size(); ++i)
            groups[find(static_cast<int>(i))].push_back(labels[i]);
        for (auto& [root, members] : groups) estar.blocks.push_back(std::move(members));
    }

    AmalgamationProblem dproblem{b_ref, f_ref, c_ref, b_into_f, b_into_c};
    AmalgamationResult d_amalgam = amalgamate_k(dproblem, estar);

    Embedding placed = embed_fixing(chain, d_amalgam.d, f_ref, f_anchor);
    if (audit) audit->grew = chain.final_index() > result.stage_index;

    result.stage_index = chain.final_index();
    result.h = h;
    result.x_pairs.clear();
    int ndim = chain.final_stage()->dim();
    for (const auto& x : aprime) {
        F2Vector in_d = d_amalgam.from_c.map.apply(g.at(x));
        result.x_pairs.emplace_back(pad_to(x, ndim), placed.map.apply(in_d));
    }

    // conservativity over f
    for (const auto& [a, b] : assignment) {
        bool found = false;
        for (const auto& [pa, pb] : result.x_pairs)
            if (pa == pad_to(a, ndim)) found = pb == pad_to(b, ndim);
        detail::require(found, "extend_one_step: extension is not conservative");
    }
    return result;
}

TrackedPartialIso lift_over(const ClassBijection& h, const std::vector<F2Vector>& target_x,
                            Chain& chain) {
    TrackedPartialIso f;
    f.stage_index = chain.final_index();
    f.h = h;
    std::vector<F2Vector> sorted = target_x;
    std::sort(sorted.begin(), sorted.end(), CanonicalLess{});
    sorted.erase(std::unique(sorted.begin(), sorted.end(), std::equal_to<F2Vector>{}),
                 sorted.end());
    std::vector<F2Vector> prefix;
    for (const auto& x : sorted) {
        prefix.push_back(x);
        f = extend_one_step(f, prefix, chain);
    }
    return f;
}

TrackedPartialIso inverse_iso(const TrackedPartialIso& f) {
    TrackedPartialIso out;
    out.stage_index = f.stage_index;
    out.h = f.h.inverse();
    for (const auto& [a, b] : f.x_pairs) out.x_pairs.emplace_back(b, a);
    return out;
}

}  // namespace taglab
