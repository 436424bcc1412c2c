// suites.hpp
//
// The runnable verification suites behind `taglab verify ...` and the
// acceptance binary. Every tolerance and count is pinned here.

#pragma once

#include "taglab/report.hpp"

namespace taglab {

/// 1000 random problems, every amalgam valid with the exact X union and a
/// commuting square.
VerificationReport suite_amalgam_closure(std::uint64_t seed, int trials = 1000,
                                         int max_result_dim = 8);

/// Free extension plus random admissible coarsenings all land in the class;
/// one-sided coarsenings are rejected.
VerificationReport suite_strong_amalgamation(std::uint64_t seed, int trials = 200,
                                             int coarsenings = 10);

/// Bound-1 chains reach at least k classes after k rounds.
VerificationReport suite_chain_classes(const std::vector<int>& rounds = {5, 10, 20});

/// Random one-step extensions stay inside the tracked family and extend
/// conservatively.
VerificationReport suite_lifting_closure(std::uint64_t seed, int cases = 100);

/// Unique witnesses through the projection for every parameter triple.
VerificationReport suite_engine_claim1(int max_n = 4, int max_m = 2);

/// Exhaustive liftings pass the full verifier for every parameter triple.
VerificationReport suite_engine_claim2(int max_n = 4, int max_m = 2);

/// Structure isomorphism of coded graphs agrees with the graph oracle over
/// the full ordered-pair matrix; witnesses both directions.
VerificationReport suite_reduction_iff(int max_n = 4);

/// decode(encode(G)) = G with canonical labels across catalogs and parameter
/// choices.
VerificationReport suite_roundtrip(int max_n = 5);

/// Decoding a transported code yields the mapped graph.
VerificationReport suite_equivariance(int n = 4);

/// parse-emit identity, byte-exact, over seeded random values of every
/// serialized type.
VerificationReport suite_serialization(std::uint64_t seed, int values = 500);

}  // namespace taglab
