// amalgam.hpp
//
// Disjoint amalgamation of tagged structures: the tag-level construction
// with active indices and fresh singleton tags, and the strong version that
// accepts any extension equivalence relation on the joint X.

#pragma once

#include "taglab/tagged.hpp"

namespace taglab {

struct AmalgamationProblem {
    StructureRef a;
    StructureRef b;
    StructureRef c;
    Embedding into_b;  // a -> b
    Embedding into_c;  // a -> c
};

struct AmalgamationResult {
    StructureRef d;
    Embedding from_b;  // b -> d
    Embedding from_c;  // c -> d
    // fresh singleton tags, listed explicitly only while small
    std::size_t fresh_count = 0;
    std::vector<std::pair<int, F2Vector>> fresh_tags;
};

/// Amalgamates B and C over A at the tag+X level. The basis of D is the
/// image of X^B followed by the unidentified part of X^C; every element of D
/// left uncovered by the joined active tags receives a fresh singleton tag.
/// The result carries the free extension of E^B and E^C so that it is a
/// complete structure; amalgamate_k replaces it.
AmalgamationResult amalgamate_k0(const AmalgamationProblem& p,
                                 int guard = kDefaultEnumerationGuard);

/// An extension equivalence relation on X^B u X^C, with elements named on
/// whichever side they live; identified elements may be named on either.
struct EStarSpec {
    enum class Side { B, C };
    std::vector<std::vector<std::pair<Side, F2Vector>>> blocks;
};

/// Strong amalgamation: K0 amalgam plus the caller's choice of E*. Rejects
/// an E* that fails to extend E^B and E^C or strays off X.
AmalgamationResult amalgamate_k(const AmalgamationProblem& p, const EStarSpec& estar,
                                int guard = kDefaultEnumerationGuard);

/// amalgamate_k with the free extension.
AmalgamationResult amalgamate_k_free(const AmalgamationProblem& p,
                                     int guard = kDefaultEnumerationGuard);

/// Smallest equivalence relation extending both partitions. The two must
/// induce the same partition on the intersection of their supports.
VecPartition free_extension(const VecPartition& eb, const VecPartition& ec);

}  // namespace taglab
