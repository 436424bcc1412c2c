#include "taglab/amalgam.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace taglab {

namespace {

constexpr int kFreshListDim = 16;  // fresh tags are listed only below this

void require_valid_embedding(const Embedding& e, const char* which, int guard) {
    auto report = validate_embedding(e, guard);
    detail::require(report.ok(), std::string("amalgamate: invalid embedding ") + which + "\n" +
                                     report.to_string());
}

// true when f maps unit i of the domain to unit i of the codomain
bool is_padding(const F2LinearMap& f) {
    for (int i = 0; i < f.domain_dim(); ++i)
        if (f.images()[static_cast<std::size_t>(i)] !=
            F2Vector::unit(f.codomain_dim(), i))
            return false;
    return true;
}

}  // namespace

VecPartition free_extension(const VecPartition& eb, const VecPartition& ec) {
    std::vector<F2Vector> shared;
    for (const auto& v : eb.support())
        if (ec.contains(v)) shared.push_back(v);
    detail::require(eb.restricted_to(shared) == ec.restricted_to(shared),
                    "free_extension: partitions disagree on the shared part");
    PartitionBuilder builder;
    builder.absorb(eb);
    builder.absorb(ec);
    return builder.build();
}

AmalgamationResult amalgamate_k0(const AmalgamationProblem& p, int guard) {
    const XEStructure& a = *p.a;
    const XEStructure& b = *p.b;
    const XEStructure& c = *p.c;
    detail::require(p.into_b.source && *p.into_b.source == a && *p.into_b.target == b,
                    "amalgamate: into_b does not connect A to B");
    detail::require(p.into_c.source && *p.into_c.source == a && *p.into_c.target == c,
                    "amalgamate: into_c does not connect A to C");
    require_valid_embedding(p.into_b, "A->B", guard);
    require_valid_embedding(p.into_c, "A->C", guard);

    int nb = b.dim(), nc = c.dim(), na = a.dim();
    int nd = nb + nc - na;
    detail::require(nd <= guard, "amalgamate: result dimension " + std::to_string(nd) +
                                     " exceeds enumeration guard " + std::to_string(guard));

    // identified part of X^C, keyed by C-side value
    std::map<F2Vector, F2Vector, CanonicalLess> c_to_b;
    for (const auto& x : a.X()) {
        c_to_b.emplace(p.into_c.map.apply(x), p.into_b.map.apply(x));
    }
    detail::require(c_to_b.size() == a.X().size(), "amalgamate: A does not embed injectively");

    // D basis: X^B first, then the new part of X^C in canonical order
    std::vector<F2Vector> b_images, c_images;
    for (std::size_t i = 0; i < b.X().size(); ++i)
        b_images.push_back(F2Vector::unit(nd, static_cast<int>(i)));
    F2LinearMap ib = extend_map_on_basis(b.X(), b_images, nb, nd);
    int next_coord = nb;
    for (const auto& x : c.X()) {
        auto it = c_to_b.find(x);
        if (it != c_to_b.end())
            c_images.push_back(ib.apply(it->second));
        else
            c_images.push_back(F2Vector::unit(nd, next_coord++));
    }
    detail::require(next_coord == nd, "amalgamate: X accounting is off");
    F2LinearMap ic = extend_map_on_basis(c.X(), c_images, nc, nd);

    // commuting square
    detail::require(compose(ib, p.into_b.map) == compose(ic, p.into_c.map),
                    "amalgamate: square does not commute");

    XEStructure d;
    d.xs.base = TaggedStructure(nd);
    for (int i = 0; i < nd; ++i) d.xs.X.push_back(F2Vector::unit(nd, i));

    // Active tags: join the two images index by index. Anonymous band
    // singletons of a completed B side carry over by the index rule because
    // i_B preserves coordinates whenever B's X is the standard basis.
    detail::require(!c.tags().completed(),
                    "amalgamate: C side carries anonymous singletons; materialize them first");
    detail::require(!b.tags().completed() || is_padding(ib),
                    "amalgamate: completed B side requires a coordinate padding");
    std::set<TagIndex> c_indices;
    c.tags().for_each_explicit([&](TagIndex n, const F2Subspace&) { c_indices.insert(n); });
    auto join_at = [&](TagIndex n) {
        std::vector<F2Vector> gens;
        F2Subspace btag = b.tags().tag(n);
        for (const auto& v : btag.basis()) gens.push_back(ib.apply(v));
        F2Subspace ctag = c.tags().tag(n);
        for (const auto& v : ctag.basis()) gens.push_back(ic.apply(v));
        d.xs.base.tags.set_tag(n, span(nd, gens));
    };
    b.tags().for_each_explicit([&](TagIndex n, const F2Subspace&) {
        join_at(n);
        c_indices.erase(n);
    });
    for (TagIndex n : c_indices) join_at(n);

    // everything still uncovered carries its own anonymous singleton tag
    d.xs.base.tags.complete_with_singletons(d.xs.X);

    AmalgamationResult result;
    if (nd <= std::min(guard, kFreshListDim)) {
        // fresh tags are the anonymous singletons outside both images
        F2Subspace b_image = ib.image();
        F2Subspace c_image = ic.image();
        for_each_vector(nd, [&](const F2Vector& v) {
            if (v.is_zero() || v.weight() == 1) return;  // zero and X^D
            if (member(v, b_image) || member(v, c_image)) return;
            auto ids = d.xs.base.tags.covering_indices(v);
            if (ids.size() == 1 && ids[0] >= kSingletonBandBase)
                result.fresh_tags.emplace_back(ids[0], v);
        }, guard);
        result.fresh_count = result.fresh_tags.size();
    }

    // free extension of E as a default
    {
        PartitionBuilder builder;
        for (const auto& block : b.E.blocks()) {
            F2Vector rep = ib.apply(block.front());
            builder.add(rep);
            for (const auto& v : block) builder.relate(rep, ib.apply(v));
        }
        for (const auto& block : c.E.blocks()) {
            F2Vector rep = ic.apply(block.front());
            builder.add(rep);
            for (const auto& v : block) builder.relate(rep, ic.apply(v));
        }
        d.E = builder.build();
    }

    result.d = make_ref(std::move(d));
    result.from_b = Embedding{p.b, result.d, ib, SigLevel::LXE};
    result.from_c = Embedding{p.c, result.d, ic, SigLevel::LXE};

    // disjointness over A: the images overlap exactly in the image of A
    {
        F2Subspace bspan = result.from_b.map.image();
        F2Subspace cspan = result.from_c.map.image();
        F2Subspace aspan = compose(ib, p.into_b.map).image();
        detail::require(intersect(bspan, cspan) == aspan,
                        "amalgamate: images overlap beyond A");
    }
    return result;
}

AmalgamationResult amalgamate_k(const AmalgamationProblem& p, const EStarSpec& estar,
                                int guard) {
    AmalgamationResult result = amalgamate_k0(p, guard);

    std::vector<std::vector<F2Vector>> blocks;
    for (const auto& block : estar.blocks) {
        std::vector<F2Vector> mapped;
        for (const auto& [side, v] : block) {
            const Embedding& e = side == EStarSpec::Side::B ? result.from_b : result.from_c;
            detail::require(e.source->x_member(v),
                            "amalgamate_k: E* names the non-X element " + v.to_string());
            mapped.push_back(e.map.apply(v));
        }
        blocks.push_back(std::move(mapped));
    }
    VecPartition estar_mapped = VecPartition::from_blocks(std::move(blocks));

    XEStructure d = *result.d;
    detail::require(estar_mapped.support() == d.X(),
                    "amalgamate_k: E* must be an equivalence relation on all of X");
    auto check_side = [&](const Embedding& e) {
        std::vector<std::vector<F2Vector>> side_blocks;
        for (const auto& block : e.source->E.blocks()) {
            std::vector<F2Vector> mapped;
            for (const auto& v : block) mapped.push_back(e.map.apply(v));
            side_blocks.push_back(std::move(mapped));
        }
        VecPartition image = VecPartition::from_blocks(std::move(side_blocks));
        detail::require(estar_mapped.extends(image),
                        "amalgamate_k: E* does not extend the side relations");
    };
    check_side(result.from_b);
    check_side(result.from_c);

    d.E = std::move(estar_mapped);
    result.d = make_ref(std::move(d));
    result.from_b.target = result.d;
    result.from_c.target = result.d;
    return result;
}

AmalgamationResult amalgamate_k_free(const AmalgamationProblem& p, int guard) {
    // amalgamate_k0 already installs the free extension
    AmalgamationResult result = amalgamate_k0(p, guard);
    return result;
}

}  // namespace taglab
