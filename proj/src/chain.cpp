#include "taglab/chain.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace taglab {

namespace {

bool is_padding_map(const F2LinearMap& f) {
    for (int i = 0; i < f.domain_dim(); ++i)
        if (f.images()[static_cast<std::size_t>(i)] != F2Vector::unit(f.codomain_dim(), i))
            return false;
    return true;
}

std::vector<F2Vector> units_of(int dim) {
    std::vector<F2Vector> out;
    for (int i = 0; i < dim; ++i) out.push_back(F2Vector::unit(dim, i));
    return out;
}

// all partitions of 0..n-1 as index blocks
void index_partitions(int n, std::vector<std::vector<std::vector<int>>>& out) {
    std::vector<std::vector<int>> current;
    std::function<void(int)> place = [&](int i) {
        if (i == n) {
            out.push_back(current);
            return;
        }
        std::size_t existing = current.size();
        for (std::size_t b = 0; b < existing; ++b) {
            current[b].push_back(i);
            place(i + 1);
            current[b].pop_back();
        }
        current.push_back({i});
        place(i + 1);
        current.pop_back();
    };
    place(0);
}

std::string structure_key(const XEStructure& s) {
    XEStructure n = normalize_tag_indices(s);
    std::ostringstream os;
    os << s.dim() << ";";
    n.tags().for_each_explicit([&](TagIndex, const F2Subspace& sub) {
        os << "[";
        for (const auto& b : sub.basis()) os << b.to_string() << ",";
        os << "]";
    });
    os << ";E";
    for (const auto& block : n.E.blocks()) {
        os << "{";
        for (const auto& v : block) os << v.to_string() << ",";
        os << "}";
    }
    return os.str();
}

XEStructure permute_coords(const XEStructure& s, const std::vector<int>& perm) {
    int d = s.dim();
    std::vector<F2Vector> images;
    for (int i = 0; i < d; ++i)
        images.push_back(F2Vector::unit(d, perm[static_cast<std::size_t>(i)]));
    F2LinearMap p(d, d, images);
    XEStructure out;
    out.xs.base = TaggedStructure(d);
    s.tags().for_each_explicit([&](TagIndex n, const F2Subspace& sub) {
        std::vector<F2Vector> gens;
        for (const auto& b : sub.basis()) gens.push_back(p.apply(b));
        out.xs.base.tags.set_tag(n, span(d, gens));
    });
    out.xs.X = units_of(d);
    std::vector<std::vector<F2Vector>> blocks;
    for (const auto& block : s.E.blocks()) {
        std::vector<F2Vector> mapped;
        for (const auto& v : block) mapped.push_back(p.apply(v));
        blocks.push_back(std::move(mapped));
    }
    out.E = VecPartition::from_blocks(std::move(blocks));
    return out;
}

std::string canonical_key(const XEStructure& s) {
    int d = s.dim();
    std::vector<int> perm;
    for (int i = 0; i < d; ++i) perm.push_back(i);
    std::string best;
    do {
        std::string key = structure_key(permute_coords(s, perm));
        if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best.empty() ? structure_key(s) : best;
}

}  // namespace

std::vector<XEStructure> catalog_k_structures(int dim) {
    detail::require(dim >= 0 && dim <= 3, "catalog_k_structures: supported through dimension 3");
    if (dim == 0) return {dim0_structure()};

    std::vector<F2Vector> heavy;
    for_each_vector(dim, [&](const F2Vector& v) {
        if (v.weight() >= 2) heavy.push_back(v);
    });

    // candidate tags: subspaces whose nonzero vectors all have weight >= 2
    std::vector<F2Subspace> pool;
    {
        std::set<std::string> seen;
        for (std::size_t mask = 1; mask < (std::size_t{1} << heavy.size()); ++mask) {
            std::vector<F2Vector> gens;
            for (std::size_t i = 0; i < heavy.size(); ++i)
                if (mask & (std::size_t{1} << i)) gens.push_back(heavy[i]);
            F2Subspace s = span(dim, gens);
            bool ok = true;
            for (const auto& v : s.elements())
                if (!v.is_zero() && v.weight() < 2) ok = false;
            if (!ok) continue;
            std::ostringstream os;
            for (const auto& b : s.basis()) os << b.to_string() << ",";
            if (seen.insert(os.str()).second) pool.push_back(s);
        }
    }

    // families of distinct tags covering every heavy vector
    std::vector<std::vector<int>> families;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
        std::vector<int> family;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask & (std::size_t{1} << i)) family.push_back(static_cast<int>(i));
        bool covers_all = true;
        for (const auto& v : heavy) {
            bool covered = false;
            for (int i : family)
                if (member(v, pool[static_cast<std::size_t>(i)])) covered = true;
            if (!covered) covers_all = false;
        }
        if (covers_all) families.push_back(std::move(family));
    }

    std::vector<std::vector<std::vector<int>>> partitions;
    index_partitions(dim, partitions);

    std::vector<XEStructure> catalog;
    std::set<std::string> seen;
    for (const auto& family : families) {
        for (const auto& part : partitions) {
            XEStructure s;
            s.xs.base = TaggedStructure(dim);
            for (std::size_t i = 0; i < family.size(); ++i)
                s.xs.base.tags.set_tag(static_cast<TagIndex>(i),
                                       pool[static_cast<std::size_t>(family[i])]);
            s.xs.X = units_of(dim);
            std::vector<std::vector<F2Vector>> blocks;
            for (const auto& idxs : part) {
                std::vector<F2Vector> block;
                for (int i : idxs) block.push_back(F2Vector::unit(dim, i));
                blocks.push_back(std::move(block));
            }
            s.E = VecPartition::from_blocks(std::move(blocks));
            if (seen.insert(canonical_key(s)).second) catalog.push_back(std::move(s));
        }
    }
    return catalog;
}

std::vector<ExtensionProblem> catalog_extension_problems(int bound) {
    std::vector<ExtensionProblem> problems;
    for (int d = 1; d <= bound; ++d) {
        for (auto& big : catalog_k_structures(d)) {
            StructureRef bigref = make_ref(big);
            for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << d); ++mask) {
                std::vector<int> gens;
                std::vector<F2Vector> elems;
                for (int i = 0; i < d; ++i)
                    if (mask & (std::size_t{1} << i)) {
                        gens.push_back(i);
                        elems.push_back(F2Vector::unit(d, i));
                    }
                auto sub = generated_substructure(bigref, elems);
                ExtensionProblem p;
                p.small = make_ref(std::move(sub.structure));
                p.big = bigref;
                p.inclusion = sub.inclusion;
                p.inclusion.source = p.small;
                p.generators = std::move(gens);
                problems.push_back(std::move(p));
            }
        }
    }
    return problems;
}

Embedding stage_inclusion(const Chain& chain, int from, int to) {
    detail::require(0 <= from && from <= to && to <= chain.final_index(),
                    "stage_inclusion: bad stage indices");
    const auto& src = chain.stages[static_cast<std::size_t>(from)];
    const auto& dst = chain.stages[static_cast<std::size_t>(to)];
    std::vector<F2Vector> images;
    for (int i = 0; i < src->dim(); ++i) images.push_back(F2Vector::unit(dst->dim(), i));
    return Embedding{src, dst, F2LinearMap(src->dim(), dst->dim(), std::move(images)),
                     SigLevel::LXE};
}

Embedding grow_chain(Chain& chain, StructureRef a, const Embedding& a_into_final,
                     const Embedding& a_into_c, const EStarSpec* estar) {
    const StructureRef final_ref = chain.final_stage();
    detail::require(*a_into_final.target == *final_ref,
                    "grow_chain: anchor does not target the final stage");
    int grown = final_ref->dim() + a_into_c.target->dim() - a->dim();
    detail::require(grown <= chain.limits.max_stage_dim,
                    "grow_chain: stage dimension cap exceeded");
    detail::require(static_cast<int>(chain.stages.size()) < chain.limits.max_stages,
                    "grow_chain: stage count cap exceeded");
    AmalgamationProblem problem{a, final_ref, a_into_c.target, a_into_final, a_into_c};
    AmalgamationResult r = estar ? amalgamate_k(problem, *estar, chain.limits.max_stage_dim)
                                 : amalgamate_k_free(problem, chain.limits.max_stage_dim);
    detail::require(is_padding_map(r.from_b.map), "grow_chain: inclusion is not a padding");
    chain.stages.push_back(r.d);
    chain.inclusions.push_back(r.from_b);
    return r.from_c;
}

namespace {

// target indices for the tags of `big`, matching the copy where the problem's
// small part dictates and taking fresh low indices elsewhere
std::map<TagIndex, TagIndex> reindex_for_copy(const XEStructure& big,
                                              const std::map<TagIndex, TagIndex>& copy_match,
                                              const TagMap& stage_tags) {
    std::map<TagIndex, TagIndex> rho = copy_match;
    std::set<TagIndex> used;
    for (const auto& [n, t] : rho) used.insert(t);
    TagIndex next = 0;
    big.tags().for_each_explicit([&](TagIndex n, const F2Subspace&) {
        if (rho.count(n)) return;
        while (stage_tags.has(next) || used.count(next)) ++next;
        rho[n] = next;
        used.insert(next);
    });
    return rho;
}

XEStructure reindex_tags(const XEStructure& s, const std::map<TagIndex, TagIndex>& rho) {
    XEStructure out;
    out.xs.base = TaggedStructure(s.dim());
    s.tags().for_each_explicit([&](TagIndex n, const F2Subspace& sub) {
        auto it = rho.find(n);
        detail::require(it != rho.end(), "reindex_tags: missing index assignment");
        out.xs.base.tags.set_tag(it->second, sub);
    });
    out.xs.X = s.X();
    out.E = s.E;
    return out;
}

struct PendingCopy {
    int problem_index;
    FoundEmbedding copy;
};

// satisfies one (problem, copy-in-final) pair by a fresh amalgamation
void satisfy(Chain& chain, int posed_stage, const PendingCopy& pending) {
    const ExtensionProblem& problem =
        chain.problems[static_cast<std::size_t>(pending.problem_index)];
    const StructureRef final_ref = chain.final_stage();

    // copy images, padded from the posed stage into the current final stage
    std::vector<F2Vector> images;
    for (const auto& x : problem.small->X())
        images.push_back(pending.copy.embedding.map.apply(x).padded(final_ref->dim()));

    auto a_stage = generated_substructure(final_ref, images);
    StructureRef a_ref = make_ref(a_stage.structure);
    a_stage.inclusion.source = a_ref;

    // abstract copy of big, reindexed to live over the stage copy
    auto rho = reindex_for_copy(*problem.big, pending.copy.tag_match, final_ref->tags());
    StructureRef c_ref = make_ref(reindex_tags(*problem.big, rho));

    // A-positions: sorted copy image -> position in small's X -> big generator
    std::map<F2Vector, int, CanonicalLess> img_pos;
    for (std::size_t i = 0; i < images.size(); ++i)
        img_pos.emplace(images[i], static_cast<int>(i));
    std::vector<F2Vector> ec_images;
    for (const auto& y : a_ref->X()) {
        // y is the unit of a_stage matching the sorted image list
        F2Vector stage_vec = a_stage.inclusion.map.apply(y);
        int small_pos = img_pos.at(stage_vec);
        int gen = problem.generators[static_cast<std::size_t>(small_pos)];
        ec_images.push_back(problem.big->X()[static_cast<std::size_t>(gen)]);
    }
    Embedding a_into_c{a_ref, c_ref,
                       a_ref->dim() == 0
                           ? F2LinearMap(0, c_ref->dim(), {})
                           : extend_map_on_basis(a_ref->X(), ec_images, a_ref->dim(),
                                                 c_ref->dim()),
                       SigLevel::LXE};

    Embedding from_c = grow_chain(chain, a_ref, a_stage.inclusion, a_into_c);

    RequirementRecord record;
    record.problem_index = pending.problem_index;
    record.posed_stage = posed_stage;
    for (const auto& x : problem.small->X())
        record.copy_images.push_back(pending.copy.embedding.map.apply(x));
    record.copy_tag_match = pending.copy.tag_match;
    record.satisfied_stage = chain.final_index();
    for (const auto& x : problem.big->X())
        record.witness_images.push_back(from_c.map.apply(x));
    record.witness_tag_match = rho;
    chain.log.push_back(std::move(record));
}

}  // namespace

Chain build_chain(int bound, int steps, std::uint64_t seed, ChainLimits limits) {
    Chain chain;
    chain.bound = bound;
    chain.seed = seed;
    chain.limits = limits;
    chain.stages.push_back(make_ref(dim0_structure()));
    chain.problems = catalog_extension_problems(bound);

    for (int round = 0; round < steps && chain.complete; ++round) {
        int posed = chain.final_index();
        StructureRef snapshot = chain.final_stage();
        std::vector<PendingCopy> pending;
        for (std::size_t pi = 0; pi < chain.problems.size(); ++pi) {
            EmbedOptions opt;
            opt.mod_tags = true;
            for (auto& found :
                 find_embeddings_opt(chain.problems[pi].small, snapshot, opt))
                pending.push_back({static_cast<int>(pi), std::move(found)});
        }
        for (const auto& p : pending) {
            const ExtensionProblem& problem =
                chain.problems[static_cast<std::size_t>(p.problem_index)];
            int growth = problem.big->dim() - problem.small->dim();
            if (chain.final_stage()->dim() + growth > limits.max_stage_dim ||
                static_cast<int>(chain.stages.size()) >= limits.max_stages) {
                chain.complete = false;
                break;
            }
            satisfy(chain, posed, p);
        }
        if (chain.complete) ++chain.rounds_run;
    }
    return chain;
}

namespace {

bool mod_tag_embedding_valid(const XEStructure& source, StructureRef target,
                             const std::vector<F2Vector>& images,
                             const std::map<TagIndex, TagIndex>& match) {
    XEStructure renamed;
    try {
        renamed = reindex_tags(source, match);
    } catch (const Error&) {
        return false;
    }
    if (static_cast<int>(images.size()) != source.dim()) return false;
    if (source.dim() == 0) {
        Embedding e{make_ref(renamed), target, F2LinearMap(0, target->dim(), {}),
                    SigLevel::LXE};
        return validate_embedding(e).ok();
    }
    F2LinearMap map;
    try {
        map = extend_map_on_basis(source.X(), images, source.dim(), target->dim());
    } catch (const Error&) {
        return false;
    }
    Embedding e{make_ref(renamed), target, map, SigLevel::LXE};
    return validate_embedding(e).ok();
}

}  // namespace

std::string RichnessReport::summary() const {
    std::ostringstream os;
    os << "log entries verified: " << verified_log_entries
       << ", broken: " << broken_log_entries.size()
       << "; copies against final stage: " << copies_checked << ", satisfied: " << satisfied
       << ", unsatisfied: " << unsatisfied.size();
    return os.str();
}

RichnessReport check_richness(const Chain& chain, int bound) {
    RichnessReport report;

    for (std::size_t li = 0; li < chain.log.size(); ++li) {
        const RequirementRecord& rec = chain.log[li];
        bool ok = true;
        if (rec.problem_index < 0 ||
            rec.problem_index >= static_cast<int>(chain.problems.size()) ||
            rec.posed_stage < 0 || rec.satisfied_stage < rec.posed_stage ||
            rec.satisfied_stage > chain.final_index()) {
            ok = false;
        } else {
            const ExtensionProblem& problem =
                chain.problems[static_cast<std::size_t>(rec.problem_index)];
            const auto& posed = chain.stages[static_cast<std::size_t>(rec.posed_stage)];
            const auto& sat = chain.stages[static_cast<std::size_t>(rec.satisfied_stage)];
            ok = mod_tag_embedding_valid(*problem.small, posed, rec.copy_images,
                                         rec.copy_tag_match) &&
                 mod_tag_embedding_valid(*problem.big, sat, rec.witness_images,
                                         rec.witness_tag_match);
            if (ok) {
                // the witness extends the copy
                int pad = sat->dim();
                for (std::size_t i = 0; i < problem.small->X().size(); ++i) {
                    F2Vector via_copy = rec.copy_images[i].padded(pad);
                    F2Vector inc = problem.inclusion.map.apply(problem.small->X()[i]);
                    F2Vector via_witness(pad);
                    for (std::size_t p = 0; p < problem.big->X().size(); ++p)
                        if (inc == problem.big->X()[p]) via_witness = rec.witness_images[p];
                    if (via_copy != via_witness) ok = false;
                }
            }
        }
        if (ok)
            ++report.verified_log_entries;
        else
            report.broken_log_entries.push_back(static_cast<int>(li));
    }

    // exhaustive pass: every catalog problem against every copy in the final stage
    auto problems = catalog_extension_problems(bound);
    StructureRef final_ref = chain.final_stage();
    for (std::size_t pi = 0; pi < problems.size(); ++pi) {
        const ExtensionProblem& problem = problems[pi];
        EmbedOptions copy_opt;
        copy_opt.mod_tags = true;
        for (const auto& copy : find_embeddings_opt(problem.small, final_ref, copy_opt)) {
            ++report.copies_checked;
            EmbedOptions ext_opt;
            ext_opt.mod_tags = true;
            ext_opt.max_results = 1;
            for (std::size_t i = 0; i < problem.small->X().size(); ++i) {
                ext_opt.fixed.emplace_back(
                    problem.generators[i],
                    copy.embedding.map.apply(problem.small->X()[i]));
            }
            if (find_embeddings_opt(problem.big, final_ref, ext_opt).empty()) {
                std::ostringstream os;
                os << "problem " << pi << " unsatisfied at copy (";
                for (std::size_t i = 0; i < problem.small->X().size(); ++i)
                    os << copy.embedding.map.apply(problem.small->X()[i]).to_string() << " ";
                os << ")";
                report.unsatisfied.push_back(os.str());
            } else {
                ++report.satisfied;
            }
        }
    }
    return report;
}

Embedding embed_fixing(Chain& chain, StructureRef d, StructureRef f,
                       const Embedding& f_anchor) {
    detail::require(*f_anchor.source == *f, "embed_fixing: anchor source is not F");
    detail::require(*f_anchor.target == *chain.final_stage(),
                    "embed_fixing: anchor must target the final stage");
    detail::require(validate_embedding(f_anchor).ok(), "embed_fixing: invalid anchor");

    if (*d == *f) return f_anchor;

    // F sits inside D as a coordinate padding
    std::vector<F2Vector> f_in_d;
    for (const auto& x : f->X()) f_in_d.push_back(x.padded(d->dim()));
    Embedding f_into_d{f, d,
                       f->dim() == 0 ? F2LinearMap(0, d->dim(), {})
                                     : extend_map_on_basis(f->X(), f_in_d, f->dim(), d->dim()),
                       SigLevel::LXE};
    detail::require(validate_embedding(f_into_d).ok(),
                    "embed_fixing: F is not a padded substructure of D");

    // exact embedding without growth, when one exists
    EmbedOptions opt;
    opt.max_results = 1;
    for (std::size_t p = 0; p < d->X().size(); ++p) {
        for (std::size_t i = 0; i < f->X().size(); ++i)
            if (d->X()[p] == f_in_d[i])
                opt.fixed.emplace_back(static_cast<int>(p),
                                       f_anchor.map.apply(f->X()[i]));
    }
    auto found = find_embeddings_opt(d, chain.final_stage(), opt);
    if (!found.empty()) return found[0].embedding;

    // grow: anonymous tags of D get fresh low names that stay clear of the stage
    std::set<TagIndex> avoid;
    chain.final_stage()->tags().for_each_explicit(
        [&](TagIndex n, const F2Subspace&) { avoid.insert(n); });
    StructureRef d_mat = make_ref(materialize_anonymous_tags(*d, avoid));
    Embedding f_into_dmat = f_into_d;
    f_into_dmat.target = d_mat;
    detail::require(validate_embedding(f_into_dmat).ok(),
                    "embed_fixing: materialized D lost the F part");
    Embedding grown = grow_chain(chain, f, f_anchor, f_into_dmat);

    // restriction to F equals the anchor, padded into the new final stage
    for (const auto& x : f->X()) {
        F2Vector via_f = f_anchor.map.apply(x).padded(chain.final_stage()->dim());
        F2Vector via_d = grown.map.apply(x.padded(d->dim()));
        detail::require(via_f == via_d, "embed_fixing: restriction mismatch");
    }
    return grown;
}

int classes_count(const XEStructure& stage) { return stage.E.block_count(); }

}  // namespace taglab
