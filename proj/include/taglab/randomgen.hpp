// randomgen.hpp
//
// Seeded generators of random valid structures, extensions and amalgamation
// problems, used by the verification suites and the property tests.

#pragma once

#include <random>

#include "taglab/amalgam.hpp"

namespace taglab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    int below(int n) {
        detail::require(n > 0, "Rng::below: empty range");
        return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
    }
    bool chance(double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// A random member of K (X is the standard basis; random covering tags,
/// sometimes overlapping or spanning several vectors; random E).
XEStructure random_k_structure(Rng& rng, int dim);

struct ExtensionResult {
    StructureRef structure;
    Embedding inclusion;  // base -> structure, a coordinate padding
};

/// A random K-extension of base by extra_dims new X elements.
ExtensionResult random_extension(Rng& rng, StructureRef base, int extra_dims);

/// A random disjoint-amalgamation problem whose result dimension is at most
/// max_result_dim.
AmalgamationProblem random_k0_problem(Rng& rng, int max_result_dim);

/// Rewrites a partition of X^D in side-qualified terms (elements named in B
/// or C coordinates), for feeding back into amalgamate_k.
EStarSpec estar_from_partition(const AmalgamationResult& result, const VecPartition& p);

/// The free extension partition of the result, coarsened by up to `merges`
/// admissible block merges (never joining two B-blocks or two C-blocks).
VecPartition random_admissible_coarsening(Rng& rng, const AmalgamationResult& result,
                                          int merges);

/// A partition that violates the extension requirement by merging two blocks
/// on the same side, when one exists.
std::optional<VecPartition> inadmissible_coarsening(const AmalgamationResult& result);

}  // namespace taglab
