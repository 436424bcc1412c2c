#include "taglab/randomgen.hpp"

#include <algorithm>
#include <map>

namespace taglab {

namespace {

// true when every nonzero element has weight >= 2 (touches no X element)
bool avoids_x(const F2Subspace& s) {
    for (const auto& v : s.elements()) {
        if (!v.is_zero() && v.weight() < 2) return false;
    }
    return true;
}

VecPartition random_partition(Rng& rng, const std::vector<F2Vector>& elems) {
    std::vector<std::vector<F2Vector>> blocks;
    for (const auto& v : elems) {
        if (!blocks.empty() && rng.chance(0.5)) {
            blocks[static_cast<std::size_t>(rng.below(static_cast<int>(blocks.size())))]
                .push_back(v);
        } else {
            blocks.push_back({v});
        }
    }
    return VecPartition::from_blocks(std::move(blocks));
}

}  // namespace

XEStructure random_k_structure(Rng& rng, int dim) {
    detail::require(dim >= 0 && dim <= 12, "random_k_structure: dimension out of range");
    TaggedStructure base(dim);
    std::vector<F2Vector> uncovered;
    for_each_vector(dim, [&](const F2Vector& v) {
        if (v.weight() >= 2) uncovered.push_back(v);
    });
    std::shuffle(uncovered.begin(), uncovered.end(), rng.engine());
    while (!uncovered.empty()) {
        F2Vector head = uncovered.back();
        F2Subspace tag = span(dim, {head});
        if (uncovered.size() >= 2 && rng.chance(0.35)) {
            F2Vector other =
                uncovered[static_cast<std::size_t>(rng.below(static_cast<int>(uncovered.size()) - 1))];
            F2Subspace wide = span(dim, {head, other});
            if (avoids_x(wide)) tag = wide;
        }
        base.tags.set_tag(base.tags.smallest_unused_index(), tag);
        std::erase_if(uncovered, [&](const F2Vector& v) { return member(v, tag); });
    }
    // occasionally name the same subgroup twice
    if (!base.tags.empty() && rng.chance(0.15)) {
        base.tags.set_tag(base.tags.smallest_unused_index(),
                          base.tags.tag(rng.below(static_cast<int>(base.tags.smallest_unused_index()))));
    }
    XEStructure s;
    s.xs.base = std::move(base);
    for (int i = 0; i < dim; ++i) s.xs.X.push_back(F2Vector::unit(dim, i));
    s.E = random_partition(rng, s.xs.X);
    return s;
}

ExtensionResult random_extension(Rng& rng, StructureRef base, int extra_dims) {
    const XEStructure& a = *base;
    int na = a.dim();
    int nb = na + extra_dims;
    detail::require(nb <= 12, "random_extension: dimension out of range");

    TaggedStructure tagged(nb);
    a.tags().for_each([&](TagIndex n, const F2Subspace& sub) {
        std::vector<F2Vector> gens;
        for (const auto& v : sub.basis()) gens.push_back(v.padded(nb));
        F2Subspace padded = span(nb, gens);
        // sometimes enlarge beyond the old span; the new generator keeps two
        // bits among the new coordinates so the old intersection is untouched
        if (extra_dims >= 2 && rng.chance(0.3)) {
            F2Vector w(nb);
            int c1 = na + rng.below(extra_dims);
            int c2 = na + rng.below(extra_dims);
            if (c1 != c2) {
                w.set(c1, true);
                w.set(c2, true);
                for (int i = 0; i < na; ++i)
                    if (rng.chance(0.3)) w.set(i, true);
                gens.push_back(w);
                padded = span(nb, gens);
            }
        }
        tagged.tags.set_tag(n, padded);
    });

    // cover whatever is new and still untagged
    std::vector<F2Vector> uncovered;
    for_each_vector(nb, [&](const F2Vector& v) {
        if (v.weight() >= 2 && !tagged.tags.covers(v)) uncovered.push_back(v);
    });
    std::shuffle(uncovered.begin(), uncovered.end(), rng.engine());
    auto new_part_nonzero = [&](const F2Vector& v) {
        for (int i = na; i < nb; ++i)
            if (v.get(i)) return true;
        return false;
    };
    while (!uncovered.empty()) {
        F2Vector head = uncovered.back();
        F2Subspace tag = span(nb, {head});
        if (uncovered.size() >= 2 && rng.chance(0.35)) {
            F2Vector other =
                uncovered[static_cast<std::size_t>(rng.below(static_cast<int>(uncovered.size()) - 1))];
            F2Subspace wide = span(nb, {head, other});
            bool ok = avoids_x(wide);
            for (const auto& v : wide.elements())
                if (!v.is_zero() && !new_part_nonzero(v)) ok = false;
            if (ok) tag = wide;
        }
        tagged.tags.set_tag(tagged.tags.smallest_unused_index(), tag);
        std::erase_if(uncovered, [&](const F2Vector& v) { return member(v, tag); });
    }

    XEStructure b;
    b.xs.base = std::move(tagged);
    for (int i = 0; i < nb; ++i) b.xs.X.push_back(F2Vector::unit(nb, i));
    {
        PartitionBuilder builder;
        std::vector<F2Vector> padded_x;
        for (const auto& block : a.E.blocks()) {
            F2Vector rep = block.front().padded(nb);
            builder.add(rep);
            for (const auto& v : block) builder.relate(rep, v.padded(nb));
        }
        for (int i = na; i < nb; ++i) {
            F2Vector x = F2Vector::unit(nb, i);
            builder.add(x);
            auto blocks_so_far = builder.build();
            if (rng.chance(0.4) && blocks_so_far.block_count() > 1) {
                const auto& all = blocks_so_far.blocks();
                const auto& pick =
                    all[static_cast<std::size_t>(rng.below(static_cast<int>(all.size())))];
                builder.relate(x, pick.front());
            }
        }
        b.E = builder.build();
    }

    ExtensionResult result;
    result.structure = make_ref(std::move(b));
    std::vector<F2Vector> images;
    for (int i = 0; i < na; ++i) images.push_back(F2Vector::unit(nb, i));
    result.inclusion = Embedding{base, result.structure,
                                 F2LinearMap(na, nb, std::move(images)), SigLevel::LXE};
    return result;
}

AmalgamationProblem random_k0_problem(Rng& rng, int max_result_dim) {
    int na = rng.below(3);
    int room = max_result_dim - na;
    int be = rng.below(room + 1);
    int ce = rng.below(room - be + 1);
    StructureRef a = make_ref(random_k_structure(rng, na));
    ExtensionResult b = random_extension(rng, a, be);
    ExtensionResult c = random_extension(rng, a, ce);
    return AmalgamationProblem{a, b.structure, c.structure, b.inclusion, c.inclusion};
}

namespace {

// for every element of X^D, one side-qualified name
std::map<F2Vector, std::pair<EStarSpec::Side, F2Vector>, CanonicalLess> side_names(
    const AmalgamationResult& result) {
    std::map<F2Vector, std::pair<EStarSpec::Side, F2Vector>, CanonicalLess> names;
    for (const auto& x : result.from_b.source->X())
        names.emplace(result.from_b.map.apply(x), std::make_pair(EStarSpec::Side::B, x));
    for (const auto& x : result.from_c.source->X())
        names.emplace(result.from_c.map.apply(x), std::make_pair(EStarSpec::Side::C, x));
    return names;
}

struct SideFlags {
    bool meets_b = false;
    bool meets_c = false;
};

std::vector<SideFlags> block_flags(const AmalgamationResult& result,
                                   const std::vector<std::vector<F2Vector>>& blocks) {
    std::map<F2Vector, int, CanonicalLess> b_image, c_image;
    for (const auto& x : result.from_b.source->X()) b_image.emplace(result.from_b.map.apply(x), 1);
    for (const auto& x : result.from_c.source->X()) c_image.emplace(result.from_c.map.apply(x), 1);
    std::vector<SideFlags> flags(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (const auto& v : blocks[i]) {
            if (b_image.count(v)) flags[i].meets_b = true;
            if (c_image.count(v)) flags[i].meets_c = true;
        }
    }
    return flags;
}

}  // namespace

EStarSpec estar_from_partition(const AmalgamationResult& result, const VecPartition& p) {
    auto names = side_names(result);
    EStarSpec spec;
    for (const auto& block : p.blocks()) {
        std::vector<std::pair<EStarSpec::Side, F2Vector>> named;
        for (const auto& v : block) {
            auto it = names.find(v);
            detail::require(it != names.end(), "estar_from_partition: element outside X^D");
            named.push_back(it->second);
        }
        spec.blocks.push_back(std::move(named));
    }
    return spec;
}

VecPartition random_admissible_coarsening(Rng& rng, const AmalgamationResult& result,
                                          int merges) {
    std::vector<std::vector<F2Vector>> blocks = result.d->E.blocks();
    auto flags = block_flags(result, blocks);
    for (int step = 0; step < merges && blocks.size() > 1; ++step) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (std::size_t j = i + 1; j < blocks.size(); ++j) {
                if (flags[i].meets_b && flags[j].meets_b) continue;
                if (flags[i].meets_c && flags[j].meets_c) continue;
                pairs.emplace_back(i, j);
            }
        if (pairs.empty()) break;
        auto [i, j] = pairs[static_cast<std::size_t>(rng.below(static_cast<int>(pairs.size())))];
        blocks[i].insert(blocks[i].end(), blocks[j].begin(), blocks[j].end());
        flags[i].meets_b = flags[i].meets_b || flags[j].meets_b;
        flags[i].meets_c = flags[i].meets_c || flags[j].meets_c;
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
        flags.erase(flags.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return VecPartition::from_blocks(std::move(blocks));
}

std::optional<VecPartition> inadmissible_coarsening(const AmalgamationResult& result) {
    std::vector<std::vector<F2Vector>> blocks = result.d->E.blocks();
    auto flags = block_flags(result, blocks);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if ((flags[i].meets_b && flags[j].meets_b) ||
                (flags[i].meets_c && flags[j].meets_c)) {
                blocks[i].insert(blocks[i].end(), blocks[j].begin(), blocks[j].end());
                blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
                return VecPartition::from_blocks(std::move(blocks));
            }
        }
    return std::nullopt;
}

}  // namespace taglab
