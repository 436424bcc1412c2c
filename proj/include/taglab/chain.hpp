// chain.hpp
//
// Finite-stage approximation of the generic limit of the class K: an
// increasing chain of structures grown by amalgamation, a catalog of small
// extension problems, a satisfaction log, and the fixing-embedding operation
// the lifting algorithm consumes.

#pragma once

#include "taglab/amalgam.hpp"

namespace taglab {

/// A structure A' together with the substructure generated by a subset of
/// its X elements.
struct ExtensionProblem {
    StructureRef small;           // A
    StructureRef big;             // A'
    Embedding inclusion;          // A -> A'
    std::vector<int> generators;  // positions in big's X that generate small
};

struct RequirementRecord {
    int problem_index = -1;
    int posed_stage = -1;
    std::vector<F2Vector> copy_images;  // one per X element of small, in stage coords
    std::map<TagIndex, TagIndex> copy_tag_match;
    int satisfied_stage = -1;
    std::vector<F2Vector> witness_images;  // one per X element of big
    std::map<TagIndex, TagIndex> witness_tag_match;
};

struct ChainLimits {
    int max_stage_dim = 24;
    int max_stages = 512;
};

struct Chain {
    std::vector<StructureRef> stages;   // stage 0 has dimension zero
    std::vector<Embedding> inclusions;  // stage i -> stage i+1, coordinate paddings
    std::vector<ExtensionProblem> problems;
    std::vector<RequirementRecord> log;
    int bound = 0;
    std::uint64_t seed = 0;
    int rounds_run = 0;
    bool complete = true;  // false once a cap stopped construction
    ChainLimits limits;

    const StructureRef& final_stage() const { return stages.back(); }
    int final_index() const { return static_cast<int>(stages.size()) - 1; }
};

/// All members of K of the given dimension with X the standard basis, up to
/// tag renaming and permutation of X. Supported through dimension 3.
std::vector<XEStructure> catalog_k_structures(int dim);

/// Every (A inside A') with dim(A') <= bound and A generated by a proper
/// subset of X^{A'}.
std::vector<ExtensionProblem> catalog_extension_problems(int bound);

/// Runs `steps` scheduler rounds. Each round finds every copy (up to tag
/// renaming) of every catalog problem's A in the current final stage and
/// satisfies it by a fresh free amalgamation, so realized structures pile up
/// and the class count grows round by round. Hitting a cap clears `complete`.
Chain build_chain(int bound, int steps, std::uint64_t seed, ChainLimits limits = {});

struct RichnessReport {
    int verified_log_entries = 0;
    std::vector<int> broken_log_entries;
    int copies_checked = 0;  // exhaustive pass against the final stage
    int satisfied = 0;
    std::vector<std::string> unsatisfied;
    bool logged_ok() const { return broken_log_entries.empty(); }
    std::string summary() const;
};

/// Independently re-verifies every log entry, then reports which catalog
/// problems posed against the final stage are not yet satisfied inside it.
RichnessReport check_richness(const Chain& chain, int bound);

/// The embedding of stage i into stage j (a coordinate padding).
Embedding stage_inclusion(const Chain& chain, int from, int to);

/// Grows the chain by amalgamating C into the final stage over A and returns
/// the embedding of C into the new final stage. E* defaults to the free
/// extension.
Embedding grow_chain(Chain& chain, StructureRef a, const Embedding& a_into_final,
                     const Embedding& a_into_c, const EStarSpec* estar = nullptr);

/// An embedding of D into the (possibly grown) final stage restricting to
/// f_anchor on F. F must sit inside D as a coordinate-padding substructure.
/// Looks for an exact embedding first; otherwise grows the chain, renaming
/// D's anonymous singleton tags as needed.
Embedding embed_fixing(Chain& chain, StructureRef d, StructureRef f,
                       const Embedding& f_anchor);

/// Number of E-blocks.
int classes_count(const XEStructure& stage);

}  // namespace taglab
