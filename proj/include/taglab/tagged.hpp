// tagged.hpp
//
// Finite tagged F2-structures: a group F2^dim with finitely many named
// subgroups ("tags"), optionally a designated subset X with an equivalence
// relation E on it. Membership validation for the amalgamation classes and
// the embedding search live here.

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "taglab/f2.hpp"

namespace taglab {

// ---------------------------------------------------------------------------
// partitions of finite vector sets

/// A partition of a finite set of vectors into nonempty blocks, kept in a
/// canonical form: elements sorted within blocks, blocks sorted by their
/// first element.
class VecPartition {
public:
    VecPartition() = default;
    static VecPartition singletons(const std::vector<F2Vector>& elems);
    static VecPartition from_blocks(std::vector<std::vector<F2Vector>> blocks);

    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<F2Vector>>& blocks() const { return blocks_; }
    int block_of(const F2Vector& v) const;  // -1 if v is not in the support
    bool contains(const F2Vector& v) const { return block_of(v) >= 0; }
    bool same_block(const F2Vector& u, const F2Vector& v) const;
    std::vector<F2Vector> support() const;
    bool empty() const { return blocks_.empty(); }

    /// The induced partition on the given subset of the support.
    VecPartition restricted_to(const std::vector<F2Vector>& subset) const;

    /// True if this partition's support contains other's and blocks restrict
    /// to other's blocks exactly.
    bool extends(const VecPartition& other) const;

    friend bool operator==(const VecPartition& a, const VecPartition& b) {
        return a.blocks_ == b.blocks_;
    }

private:
    std::vector<std::vector<F2Vector>> blocks_;
    std::map<F2Vector, int, CanonicalLess> index_;
};

/// Union-find style construction of a VecPartition.
class PartitionBuilder {
public:
    void add(const F2Vector& v);
    void relate(const F2Vector& u, const F2Vector& v);
    void absorb(const VecPartition& p);
    VecPartition build() const;

private:
    int find(int i) const;
    std::map<F2Vector, int, CanonicalLess> id_;
    std::vector<F2Vector> elems_;
    mutable std::vector<int> parent_;
};

// ---------------------------------------------------------------------------
// tag maps

using TagIndex = std::int64_t;

/// Index band reserved for anonymous singleton tags: a completed tag map
/// carries one singleton {0, v} for every uncovered non-X vector v at index
/// kSingletonBandBase + value(v), where value reads coordinate i with weight
/// 2^i. That value is unchanged by zero-padding, so chain inclusions keep
/// anonymous indices stable without storing millions of subspaces.
inline constexpr TagIndex kSingletonBandBase = TagIndex{1} << 32;

/// Little-endian numeric value of a vector (coordinate i has weight 2^i).
std::uint64_t vector_value(const F2Vector& v);
F2Vector vector_of_value(int dim, std::uint64_t value);

/// Finite map from tag indices to nonzero subspaces; an absent index means
/// the zero subgroup. Besides explicitly stored tags, a map may be
/// "completed": every nonzero vector outside the designated exclusion set
/// (the structure's X) and outside all explicit tags implicitly carries its
/// own singleton tag in the reserved band.
class TagMap {
public:
    TagMap() = default;
    explicit TagMap(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    bool empty() const { return tags_.empty() && !completed_; }
    std::size_t explicit_count() const { return tags_.size(); }
    bool completed() const { return completed_; }

    /// Assigns a tag; a zero subspace erases the index.
    void set_tag(TagIndex index, const F2Subspace& s);

    /// Switches on implicit singleton tags for every vector not covered by
    /// an explicit tag and not in `exclude` (canonically sorted).
    void complete_with_singletons(std::vector<F2Vector> exclude);

    bool has(TagIndex index) const;
    F2Subspace tag(TagIndex index) const;

    bool covers(const F2Vector& v) const;  // v lies in some tag; 0 always counts
    std::vector<TagIndex> covering_indices(const F2Vector& v) const;

    /// Visits every tag, including implicit singletons; refuses on completed
    /// maps whose dimension makes that enumeration unreasonable.
    void for_each(const std::function<void(TagIndex, const F2Subspace&)>& fn,
                  int guard = kDefaultEnumerationGuard) const;
    /// Visits only the explicitly stored tags.
    void for_each_explicit(const std::function<void(TagIndex, const F2Subspace&)>& fn) const;
    TagIndex smallest_unused_index() const;  // below the singleton band

    friend bool operator==(const TagMap&, const TagMap&) = default;

private:
    bool implicit_singleton_at(const F2Vector& v) const;
    TagIndex implicit_index_of(const F2Vector& v) const;
    int dim_ = 0;
    std::map<TagIndex, F2Subspace> tags_;
    bool completed_ = false;
    std::vector<F2Vector> exclude_;  // canonical order
};

// ---------------------------------------------------------------------------
// structures

struct TaggedStructure {
    int dim = 0;
    TagMap tags;

    TaggedStructure() = default;
    explicit TaggedStructure(int d) : dim(d), tags(d) {}

    friend bool operator==(const TaggedStructure&, const TaggedStructure&) = default;
};

struct XStructure {
    TaggedStructure base;
    std::vector<F2Vector> X;  // canonical order

    int dim() const { return base.dim; }
    friend bool operator==(const XStructure&, const XStructure&) = default;
};

struct XEStructure {
    XStructure xs;
    VecPartition E;

    int dim() const { return xs.dim(); }
    const TagMap& tags() const { return xs.base.tags; }
    const std::vector<F2Vector>& X() const { return xs.X; }
    bool x_member(const F2Vector& v) const;

    friend bool operator==(const XEStructure&, const XEStructure&) = default;
};

using StructureRef = std::shared_ptr<const XEStructure>;
StructureRef make_ref(XEStructure s);

/// The structure with universe {0}: dimension zero, no tags, empty X and E.
XEStructure dim0_structure();

/// Convenience constructor; X defaults to compute_X, E to singleton blocks.
XEStructure make_structure(int dim, const std::vector<std::pair<TagIndex, F2Subspace>>& tags,
                           std::vector<F2Vector> X = {},
                           std::vector<std::vector<F2Vector>> eblocks = {},
                           int guard = kDefaultEnumerationGuard);

// ---------------------------------------------------------------------------
// signature levels and embeddings

enum class SigLevel { L, LX, LXE };
std::string to_string(SigLevel level);

/// An injective linear map that is an isomorphism onto a substructure of the
/// target at the declared signature level (tags always; X at LX and above; E
/// at LXE).
struct Embedding {
    StructureRef source;
    StructureRef target;
    F2LinearMap map;
    SigLevel level = SigLevel::LXE;
};

Embedding identity_embedding(StructureRef s, SigLevel level = SigLevel::LXE);
Embedding compose_embeddings(const Embedding& first, const Embedding& then);

// ---------------------------------------------------------------------------
// validation

struct ValidationItem {
    enum class Status { pass, fail, skip };
    std::string check;
    Status status = Status::pass;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool ok() const;
    void add(const std::string& check, bool pass, const std::string& detail = "");
    void skip(const std::string& check, const std::string& detail);
    std::string to_string() const;
};

/// Complement of the tag union, by enumeration of all 2^dim vectors.
/// The zero vector is always covered (it lies in every subgroup).
std::vector<F2Vector> compute_X(const TaggedStructure& base,
                                int guard = kDefaultEnumerationGuard);

/// The class-K0 bullets: X is the exact complement of the tag union, is
/// linearly independent, and spans.
ValidationReport validate_k0(const XStructure& candidate,
                             int guard = kDefaultEnumerationGuard);

/// K0 bullets plus: E is an equivalence relation on exactly X.
ValidationReport validate_k(const XEStructure& candidate,
                            int guard = kDefaultEnumerationGuard);

/// Checks that e.map is an embedding at e.level with exact tag indices.
ValidationReport validate_embedding(const Embedding& e,
                                    int guard = kDefaultEnumerationGuard);

// ---------------------------------------------------------------------------
// embedding search

struct EmbedOptions {
    SigLevel level = SigLevel::LXE;
    /// Match tag subspaces by value instead of by index (the predicate
    /// renaming license); the resulting index correspondence is reported.
    bool mod_tags = false;
    int max_results = 0;  // 0 = all
    /// Prescribed images: (position in source X list) -> target vector.
    std::vector<std::pair<int, F2Vector>> fixed;
    int guard = kDefaultEnumerationGuard;
};

struct FoundEmbedding {
    Embedding embedding;
    std::map<TagIndex, TagIndex> tag_match;  // source tag index -> target tag index
};

std::vector<FoundEmbedding> find_embeddings_opt(StructureRef a, StructureRef b,
                                                const EmbedOptions& options);

/// All embeddings of A into B at the requested level, deterministic order.
std::vector<Embedding> find_embeddings(StructureRef a, StructureRef b,
                                       SigLevel level = SigLevel::LXE);

// ---------------------------------------------------------------------------
// substructures and normalization

struct SubstructureResult {
    XEStructure structure;
    Embedding inclusion;  // structure -> parent
};

/// The smallest substructure of *parent containing Y (a subset of X^parent):
/// tags restricted to span(Y), X = Y, E restricted; anything left uncovered
/// receives a fresh singleton tag.
SubstructureResult generated_substructure(StructureRef parent,
                                          const std::vector<F2Vector>& Y,
                                          int guard = kDefaultEnumerationGuard);

/// Canonical reindexing of tags by (dimension, basis) order.
TaggedStructure normalize_tag_indices(const TaggedStructure& s);
XEStructure normalize_tag_indices(const XEStructure& s);

/// Rewrites the anonymous band singletons of a completed structure as
/// explicit tags at fresh low indices (outside `avoid`), in bitstring order
/// of their elements. Anonymous subgroups may be renamed freely, so the
/// result is the same structure up to reindexing, with no implicit part.
XEStructure materialize_anonymous_tags(const XEStructure& s,
                                       const std::set<TagIndex>& avoid = {},
                                       int guard = kDefaultEnumerationGuard);

}  // namespace taglab
