#include "taglab/tagged.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace taglab {

namespace {

constexpr std::size_t kNormalizeLimit = std::size_t{1} << 16;

}  // namespace

// ---------------------------------------------------------------------------
// VecPartition

VecPartition VecPartition::singletons(const std::vector<F2Vector>& elems) {
    std::vector<std::vector<F2Vector>> blocks;
    blocks.reserve(elems.size());
    for (const auto& e : elems) blocks.push_back({e});
    return from_blocks(std::move(blocks));
}

VecPartition VecPartition::from_blocks(std::vector<std::vector<F2Vector>> blocks) {
    VecPartition p;
    for (auto& b : blocks) {
        detail::require(!b.empty(), "VecPartition: empty block");
        std::sort(b.begin(), b.end(), CanonicalLess{});
        b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<F2Vector>& a, const std::vector<F2Vector>& b) {
                  return canonical_less(a.front(), b.front());
              });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (const auto& v : blocks[i]) {
            auto [it, inserted] = p.index_.emplace(v, static_cast<int>(i));
            detail::require(inserted, "VecPartition: blocks overlap at " + v.to_string());
        }
    }
    p.blocks_ = std::move(blocks);
    return p;
}

int VecPartition::block_of(const F2Vector& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
}

bool VecPartition::same_block(const F2Vector& u, const F2Vector& v) const {
    int bu = block_of(u), bv = block_of(v);
    detail::require(bu >= 0 && bv >= 0, "VecPartition::same_block: element not in support");
    return bu == bv;
}

std::vector<F2Vector> VecPartition::support() const {
    std::vector<F2Vector> out;
    for (const auto& kv : index_) out.push_back(kv.first);
    return out;  // map order is canonical order
}

VecPartition VecPartition::restricted_to(const std::vector<F2Vector>& subset) const {
    std::map<int, std::vector<F2Vector>> by_block;
    for (const auto& v : subset) {
        int b = block_of(v);
        detail::require(b >= 0, "VecPartition::restricted_to: element not in support");
        by_block[b].push_back(v);
    }
    std::vector<std::vector<F2Vector>> blocks;
    for (auto& [b, vs] : by_block) blocks.push_back(std::move(vs));
    return from_blocks(std::move(blocks));
}

bool VecPartition::extends(const VecPartition& other) const {
    for (const auto& block : other.blocks()) {
        for (const auto& v : block)
            if (!contains(v)) return false;
    }
    return restricted_to(other.support()) == other;
}

// ---------------------------------------------------------------------------
// PartitionBuilder

void PartitionBuilder::add(const F2Vector& v) {
    if (id_.count(v)) return;
    int n = static_cast<int>(elems_.size());
    id_.emplace(v, n);
    elems_.push_back(v);
    parent_.push_back(n);
}

int PartitionBuilder::find(int i) const {
    while (parent_[static_cast<std::size_t>(i)] != i) {
        parent_[static_cast<std::size_t>(i)] =
            parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(i)])];
        i = parent_[static_cast<std::size_t>(i)];
    }
    return i;
}

void PartitionBuilder::relate(const F2Vector& u, const F2Vector& v) {
    add(u);
    add(v);
    int ru = find(id_.at(u)), rv = find(id_.at(v));
    if (ru != rv) parent_[static_cast<std::size_t>(ru)] = rv;
}

void PartitionBuilder::absorb(const VecPartition& p) {
    for (const auto& block : p.blocks()) {
        add(block.front());
        for (const auto& v : block) relate(block.front(), v);
    }
}

VecPartition PartitionBuilder::build() const {
    std::map<int, std::vector<F2Vector>> groups;
    for (std::size_t i = 0; i < elems_.size(); ++i)
        groups[find(static_cast<int>(i))].push_back(elems_[i]);
    std::vector<std::vector<F2Vector>> blocks;
    for (auto& [root, vs] : groups) blocks.push_back(std::move(vs));
    return VecPartition::from_blocks(std::move(blocks));
}

// ---------------------------------------------------------------------------
// TagMap

std::uint64_t vector_value(const F2Vector& v) {
    detail::require(v.dim() <= 62, "vector_value: dimension too large");
    std::uint64_t value = 0;
    for (int i = 0; i < v.dim(); ++i)
        if (v.get(i)) value |= std::uint64_t{1} << i;
    return value;
}

F2Vector vector_of_value(int dim, std::uint64_t value) {
    F2Vector v(dim);
    for (int i = 0; i < dim && value; ++i, value >>= 1)
        if (value & 1) v.set(i, true);
    detail::require(value == 0, "vector_of_value: value out of range");
    return v;
}

void TagMap::set_tag(TagIndex index, const F2Subspace& s) {
    detail::require(index >= 0, "TagMap: negative index");
    detail::require(s.ambient_dim() == dim_, "TagMap: ambient dimension mismatch");
    if (s.is_zero())
        tags_.erase(index);
    else
        tags_[index] = s;
}

bool TagMap::implicit_singleton_at(const F2Vector& v) const {
    if (!completed_ || v.is_zero()) return false;
    if (std::binary_search(exclude_.begin(), exclude_.end(), v, CanonicalLess{})) return false;
    for (const auto& [idx, sub] : tags_)
        if (member(v, sub)) return false;
    return true;
}

void TagMap::complete_with_singletons(std::vector<F2Vector> exclude) {
    detail::require(!completed_, "TagMap: already completed");
    detail::require(dim_ <= 30, "TagMap: completion limited to dimension 30");
    std::sort(exclude.begin(), exclude.end(), CanonicalLess{});
    for (const auto& v : exclude)
        detail::require(v.dim() == dim_, "TagMap: exclusion dimension mismatch");
    completed_ = true;
    exclude_ = std::move(exclude);
}

TagIndex TagMap::implicit_index_of(const F2Vector& v) const {
    // first free band slot for this value; occupied slots belong to explicit
    // tags carried over from other structures
    TagIndex slot = kSingletonBandBase + static_cast<TagIndex>(vector_value(v));
    while (tags_.count(slot)) slot += kSingletonBandBase;
    return slot;
}

bool TagMap::has(TagIndex index) const {
    if (tags_.count(index)) return true;
    return !tag(index).is_zero();
}

F2Subspace TagMap::tag(TagIndex index) const {
    auto it = tags_.find(index);
    if (it != tags_.end()) return it->second;
    if (completed_ && index >= kSingletonBandBase) {
        std::uint64_t value = static_cast<std::uint64_t>(index % kSingletonBandBase);
        if (value != 0 && value < (std::uint64_t{1} << dim_)) {
            F2Vector v = vector_of_value(dim_, value);
            if (implicit_singleton_at(v) && implicit_index_of(v) == index)
                return span(dim_, {v});
        }
    }
    return F2Subspace::zero(dim_);
}

bool TagMap::covers(const F2Vector& v) const {
    detail::require(v.dim() == dim_, "TagMap::covers: dimension mismatch");
    if (v.is_zero()) return true;
    for (const auto& [idx, sub] : tags_)
        if (member(v, sub)) return true;
    if (completed_ &&
        !std::binary_search(exclude_.begin(), exclude_.end(), v, CanonicalLess{}))
        return true;
    return false;
}

std::vector<TagIndex> TagMap::covering_indices(const F2Vector& v) const {
    detail::require(v.dim() == dim_, "TagMap::covering_indices: dimension mismatch");
    std::vector<TagIndex> out;
    if (v.is_zero()) return out;  // zero lies in every subgroup; not informative
    for (const auto& [idx, sub] : tags_)
        if (member(v, sub)) out.push_back(idx);
    if (out.empty() && implicit_singleton_at(v)) out.push_back(implicit_index_of(v));
    return out;
}

void TagMap::for_each(const std::function<void(TagIndex, const F2Subspace&)>& fn,
                      int guard) const {
    for (const auto& [idx, sub] : tags_) fn(idx, sub);
    if (completed_) {
        detail::require(dim_ <= guard,
                        "TagMap::for_each: completed map above enumeration guard");
        for_each_vector(dim_, [&](const F2Vector& v) {
            if (implicit_singleton_at(v)) fn(implicit_index_of(v), span(dim_, {v}));
        }, guard);
    }
}

void TagMap::for_each_explicit(const std::function<void(TagIndex, const F2Subspace&)>& fn) const {
    for (const auto& [idx, sub] : tags_) fn(idx, sub);
}

TagIndex TagMap::smallest_unused_index() const {
    TagIndex candidate = 0;
    while (tags_.count(candidate)) ++candidate;
    return candidate;
}

// ---------------------------------------------------------------------------
// structures

bool XEStructure::x_member(const F2Vector& v) const {
    return std::binary_search(xs.X.begin(), xs.X.end(), v, CanonicalLess{});
}

StructureRef make_ref(XEStructure s) { return std::make_shared<const XEStructure>(std::move(s)); }

XEStructure dim0_structure() {
    XEStructure s;
    s.xs.base = TaggedStructure(0);
    return s;
}

XEStructure make_structure(int dim, const std::vector<std::pair<TagIndex, F2Subspace>>& tags,
                           std::vector<F2Vector> X,
                           std::vector<std::vector<F2Vector>> eblocks, int guard) {
    XEStructure s;
    s.xs.base = TaggedStructure(dim);
    for (const auto& [idx, sub] : tags) s.xs.base.tags.set_tag(idx, sub);
    if (X.empty() && dim > 0) X = compute_X(s.xs.base, guard);
    std::sort(X.begin(), X.end(), CanonicalLess{});
    s.xs.X = std::move(X);
    if (eblocks.empty())
        s.E = VecPartition::singletons(s.xs.X);
    else
        s.E = VecPartition::from_blocks(std::move(eblocks));
    return s;
}

// ---------------------------------------------------------------------------
// embeddings

std::string to_string(SigLevel level) {
    switch (level) {
        case SigLevel::L: return "L";
        case SigLevel::LX: return "LX";
        case SigLevel::LXE: return "LXE";
    }
    return "?";
}

Embedding identity_embedding(StructureRef s, SigLevel level) {
    return Embedding{s, s, F2LinearMap::identity(s->dim()), level};
}

Embedding compose_embeddings(const Embedding& first, const Embedding& then) {
    detail::require(*first.target == *then.source,
                    "compose_embeddings: inner structures do not match");
    SigLevel level = static_cast<int>(first.level) < static_cast<int>(then.level)
                         ? first.level
                         : then.level;
    return Embedding{first.source, then.target, compose(then.map, first.map), level};
}

// ---------------------------------------------------------------------------
// validation

bool ValidationReport::ok() const {
    for (const auto& item : items)
        if (item.status == ValidationItem::Status::fail) return false;
    return true;
}

void ValidationReport::add(const std::string& check, bool pass, const std::string& detail) {
    items.push_back({check,
                     pass ? ValidationItem::Status::pass : ValidationItem::Status::fail,
                     detail});
}

void ValidationReport::skip(const std::string& check, const std::string& detail) {
    items.push_back({check, ValidationItem::Status::skip, detail});
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& item : items) {
        const char* s = item.status == ValidationItem::Status::pass   ? "pass"
                        : item.status == ValidationItem::Status::fail ? "FAIL"
                                                                      : "skip";
        os << s << " " << item.check;
        if (!item.detail.empty()) os << " (" << item.detail << ")";
        os << "\n";
    }
    return os.str();
}

std::vector<F2Vector> compute_X(const TaggedStructure& base, int guard) {
    std::vector<F2Vector> out;
    for_each_vector(base.dim, [&](const F2Vector& v) {
        if (!base.tags.covers(v)) out.push_back(v);
    }, guard);
    std::sort(out.begin(), out.end(), CanonicalLess{});
    return out;
}

ValidationReport validate_k0(const XStructure& candidate, int guard) {
    ValidationReport report;
    const auto& X = candidate.X;
    bool tag_dims_ok = true;
    candidate.base.tags.for_each_explicit([&](TagIndex, const F2Subspace& s) {
        if (s.ambient_dim() != candidate.base.dim || s.is_zero()) tag_dims_ok = false;
    });
    report.add("tags-are-nonzero-subgroups", tag_dims_ok);
    if (candidate.base.dim <= guard) {
        auto complement = compute_X(candidate.base, guard);
        report.add("X-is-tag-complement", X == complement,
                   X == complement ? "" : "X differs from the complement of the tag union");
    } else {
        report.skip("X-is-tag-complement", "dimension above enumeration guard");
    }
    bool indep = is_linearly_independent(X);
    report.add("X-independent", indep);
    report.add("X-spans", rank(X) == candidate.base.dim);
    return report;
}

ValidationReport validate_k(const XEStructure& candidate, int guard) {
    ValidationReport report = validate_k0(candidate.xs, guard);
    report.add("E-partitions-X", candidate.E.support() == candidate.X(),
               "E must be an equivalence relation on exactly X");
    return report;
}

ValidationReport validate_embedding(const Embedding& e, int guard) {
    ValidationReport report;
    const XEStructure& a = *e.source;
    const XEStructure& b = *e.target;
    bool shape = e.map.domain_dim() == a.dim() && e.map.codomain_dim() == b.dim();
    report.add("map-shape", shape);
    if (!shape) return report;
    report.add("injective", e.map.is_injective());
    if (a.dim() > guard) {
        report.skip("tags-preserved-and-reflected", "source dimension above guard");
        return report;
    }
    bool tags_ok = true, x_ok = true;
    std::string tag_detail, x_detail;
    for_each_vector(a.dim(), [&](const F2Vector& v) {
        F2Vector fv = e.map.apply(v);
        if (a.tags().covering_indices(v) != b.tags().covering_indices(fv)) {
            tags_ok = false;
            if (tag_detail.empty())
                tag_detail = "tag mismatch at " + v.to_string() + " -> " + fv.to_string();
        }
        if (e.level != SigLevel::L && a.x_member(v) != b.x_member(fv)) {
            x_ok = false;
            if (x_detail.empty())
                x_detail = "X mismatch at " + v.to_string() + " -> " + fv.to_string();
        }
    }, guard);
    report.add("tags-preserved-and-reflected", tags_ok, tag_detail);
    if (e.level != SigLevel::L) report.add("X-preserved-and-reflected", x_ok, x_detail);
    if (e.level == SigLevel::LXE) {
        bool e_ok = true;
        const auto& X = a.X();
        for (std::size_t i = 0; i < X.size() && e_ok; ++i)
            for (std::size_t j = i + 1; j < X.size() && e_ok; ++j) {
                bool in_a = a.E.same_block(X[i], X[j]);
                bool in_b = b.E.same_block(e.map.apply(X[i]), e.map.apply(X[j]));
                if (in_a != in_b) e_ok = false;
            }
        report.add("E-preserved-and-reflected", e_ok);
    }
    return report;
}

// ---------------------------------------------------------------------------
// embedding search

namespace {

struct EmbedSearch {
    StructureRef aref, bref;
    const XEStructure& a;
    const XEStructure& b;
    const EmbedOptions& opt;
    std::vector<F2Vector> xa;
    std::vector<F2Vector> pool;
    std::map<int, F2Vector> fixed;
    std::vector<F2Vector> images;
    std::vector<FoundEmbedding> results;

    EmbedSearch(StructureRef ar, StructureRef br, const EmbedOptions& o)
        : aref(std::move(ar)), bref(std::move(br)), a(*aref), b(*bref), opt(o) {
        xa = a.X();
        if (opt.level == SigLevel::L) {
            for (const auto& v : all_vectors(b.dim(), opt.guard))
                if (!v.is_zero()) pool.push_back(v);
            std::sort(pool.begin(), pool.end(), CanonicalLess{});
        } else {
            pool = b.X();
        }
        for (const auto& [i, v] : opt.fixed) fixed[i] = v;
    }

    bool image_used(const F2Vector& v) const {
        return std::find(images.begin(), images.end(), v) != images.end();
    }

    bool compatible(std::size_t i, const F2Vector& cand) {
        if (image_used(cand)) return false;
        {
            std::vector<F2Vector> test = images;
            test.push_back(cand);
            if (!is_linearly_independent(test)) return false;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (opt.level == SigLevel::LXE) {
                bool in_a = a.E.same_block(xa[j], xa[i]);
                bool in_b = b.E.same_block(images[j], cand);
                if (in_a != in_b) return false;
            }
            auto ia = a.tags().covering_indices(xa[j] ^ xa[i]);
            auto ib = b.tags().covering_indices(images[j] ^ cand);
            if (opt.mod_tags ? (ia.size() != ib.size()) : (ia != ib)) return false;
        }
        return true;
    }

    // full check of the completed assignment; fills tag_match in mod mode
    bool leaf(FoundEmbedding& out) {
        F2LinearMap f = extend_map_on_basis(xa, images, a.dim(), b.dim());
        if (a.dim() > opt.guard) throw Error("find_embeddings: source dimension above guard");
        bool ok = true;
        std::map<TagIndex, std::vector<std::string>> a_sets, b_sets;
        for_each_vector(a.dim(), [&](const F2Vector& v) {
            if (!ok || v.is_zero()) return;
            F2Vector fv = f.apply(v);
            auto ia = a.tags().covering_indices(v);
            auto ib = b.tags().covering_indices(fv);
            if (opt.mod_tags) {
                if (ia.size() != ib.size()) ok = false;
                for (int n : ia) a_sets[n].push_back(fv.to_string());
                for (int m : ib) b_sets[m].push_back(fv.to_string());
            } else if (ia != ib) {
                ok = false;
            }
            if (opt.level != SigLevel::L && a.x_member(v) != b.x_member(fv)) ok = false;
        }, opt.guard);
        if (!ok) return false;
        std::map<TagIndex, TagIndex> match;
        if (opt.mod_tags) {
            if (a_sets.size() != b_sets.size()) return false;
            // pair tags whose element sets agree, smallest indices first
            std::map<std::vector<std::string>, std::vector<TagIndex>> a_by_key, b_by_key;
            for (auto& [n, key] : a_sets) {
                std::sort(key.begin(), key.end());
                a_by_key[key].push_back(n);
            }
            for (auto& [m, key] : b_sets) {
                std::sort(key.begin(), key.end());
                b_by_key[key].push_back(m);
            }
            if (a_by_key.size() != b_by_key.size()) return false;
            for (auto& [key, ans] : a_by_key) {
                auto it = b_by_key.find(key);
                if (it == b_by_key.end() || it->second.size() != ans.size()) return false;
                for (std::size_t i = 0; i < ans.size(); ++i) match[ans[i]] = it->second[i];
            }
        }
        out.embedding = Embedding{aref, bref, std::move(f), opt.level};
        out.tag_match = std::move(match);
        return true;
    }

    bool run(std::size_t i) {  // returns true when max_results reached
        if (i == xa.size()) {
            FoundEmbedding found;
            if (leaf(found)) {
                results.push_back(std::move(found));
                if (opt.max_results > 0 &&
                    static_cast<int>(results.size()) >= opt.max_results)
                    return true;
            }
            return false;
        }
        auto it = fixed.find(static_cast<int>(i));
        if (it != fixed.end()) {
            if (!compatible(i, it->second)) return false;
            images.push_back(it->second);
            bool done = run(i + 1);
            images.pop_back();
            return done;
        }
        for (const auto& cand : pool) {
            if (!compatible(i, cand)) continue;
            images.push_back(cand);
            if (run(i + 1)) return true;
            images.pop_back();
        }
        return false;
    }
};

}  // namespace

std::vector<FoundEmbedding> find_embeddings_opt(StructureRef a, StructureRef b,
                                                const EmbedOptions& options) {
    EmbedSearch search(std::move(a), std::move(b), options);
    search.run(0);
    return std::move(search.results);
}

std::vector<Embedding> find_embeddings(StructureRef a, StructureRef b, SigLevel level) {
    EmbedOptions opt;
    opt.level = level;
    std::vector<Embedding> out;
    for (auto& found : find_embeddings_opt(std::move(a), std::move(b), opt))
        out.push_back(std::move(found.embedding));
    return out;
}

// ---------------------------------------------------------------------------
// substructures

SubstructureResult generated_substructure(StructureRef parent, const std::vector<F2Vector>& Y,
                                          int guard) {
    const XEStructure& m = *parent;
    for (const auto& y : Y)
        detail::require(m.x_member(y), "generated_substructure: Y must lie inside X");
    std::vector<F2Vector> ys = Y;
    std::sort(ys.begin(), ys.end(), CanonicalLess{});
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    int k = static_cast<int>(ys.size());
    detail::require(k <= guard, "generated_substructure: |Y| above enumeration guard");

    std::vector<F2Vector> units;
    for (int i = 0; i < k; ++i) units.push_back(F2Vector::unit(k, i));
    // section: parent coordinates of span(Y) -> Y-coordinates
    F2LinearMap section = extend_map_on_basis(ys, units, m.dim(), k);
    F2LinearMap inclusion_map = k == 0 ? F2LinearMap(0, m.dim(), {})
                                       : extend_map_on_basis(units, ys, k, m.dim());

    XEStructure f;
    f.xs.base = TaggedStructure(k);

    // restrict every parent tag meeting span(Y)
    std::map<TagIndex, std::vector<F2Vector>> restricted;
    F2Subspace yspan = span(m.dim(), ys);
    for (const auto& v : yspan.elements(guard)) {
        for (TagIndex n : m.tags().covering_indices(v))
            restricted[n].push_back(section.apply(v));
    }
    for (auto& [n, elems] : restricted) f.xs.base.tags.set_tag(n, span(k, elems));

    // anything still uncovered gets a fresh singleton tag
    for_each_vector(k, [&](const F2Vector& v) {
        if (!f.xs.base.tags.covers(v) && !std::binary_search(units.begin(), units.end(), v,
                                                             CanonicalLess{})) {
            f.xs.base.tags.set_tag(f.xs.base.tags.smallest_unused_index(), span(k, {v}));
        }
    }, guard);

    f.xs.X = units;
    {
        // E restricted to Y, pulled back through the section
        VecPartition on_y = m.E.restricted_to(ys);
        std::vector<std::vector<F2Vector>> blocks;
        for (const auto& block : on_y.blocks()) {
            std::vector<F2Vector> pulled;
            for (const auto& v : block) pulled.push_back(section.apply(v));
            blocks.push_back(std::move(pulled));
        }
        f.E = VecPartition::from_blocks(std::move(blocks));
    }

    SubstructureResult result;
    result.structure = std::move(f);
    StructureRef fref = make_ref(result.structure);
    result.inclusion = Embedding{fref, parent, std::move(inclusion_map), SigLevel::LXE};
    return result;
}

// ---------------------------------------------------------------------------
// normalization

TaggedStructure normalize_tag_indices(const TaggedStructure& s) {
    detail::require(s.tags.explicit_count() <= kNormalizeLimit &&
                        (!s.tags.completed() || s.dim <= 16),
                    "normalize_tag_indices: too many tags to materialize");
    std::vector<std::pair<std::vector<std::string>, F2Subspace>> keyed;
    s.tags.for_each([&](TagIndex, const F2Subspace& sub) {
        std::vector<std::string> key{std::to_string(sub.dim())};
        for (const auto& b : sub.basis()) key.push_back(b.to_string());
        keyed.emplace_back(std::move(key), sub);
    });
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    TaggedStructure out(s.dim);
    for (std::size_t i = 0; i < keyed.size(); ++i)
        out.tags.set_tag(static_cast<TagIndex>(i), keyed[i].second);
    return out;
}

XEStructure normalize_tag_indices(const XEStructure& s) {
    XEStructure out = s;
    out.xs.base = normalize_tag_indices(s.xs.base);
    return out;
}

XEStructure materialize_anonymous_tags(const XEStructure& s, const std::set<TagIndex>& avoid,
                                       int guard) {
    if (!s.tags().completed()) return s;
    XEStructure out;
    out.xs.base = TaggedStructure(s.dim());
    s.tags().for_each_explicit(
        [&](TagIndex n, const F2Subspace& sub) { out.xs.base.tags.set_tag(n, sub); });
    TagIndex next = 0;
    auto next_free = [&]() {
        while (out.xs.base.tags.has(next) || avoid.count(next)) ++next;
        return next;
    };
    s.tags().for_each([&](TagIndex n, const F2Subspace& sub) {
        if (n < kSingletonBandBase) return;
        if (!out.xs.base.tags.tag(n).is_zero()) return;  // explicit band tag, kept
        out.xs.base.tags.set_tag(next_free(), sub);
    }, guard);
    out.xs.X = s.X();
    out.E = s.E;
    return out;
}

}  // namespace taglab
