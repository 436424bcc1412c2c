// engine.hpp
//
// The doubled coding structure: two complementary blocks V0 and V1 with
// designated bases X0 and X1, class structures E0 and E1, a canonical
// bijection from X0-pairs to E1-classes realized through the subgroup W0,
// and the within-class marker subgroup W1. Liftings of E0-class bijections
// to structure automorphisms are built and verified here, together with the
// decoding maps that recover E1 and E0 from the subgroups alone.

#pragma once

#include "taglab/lifting.hpp"

namespace taglab {

struct EngineParams {
    int n = 1;   // number of E0 classes
    int m0 = 1;  // members per E0 class
    int m1 = 1;  // members per E1 class
};

class Engine {
public:
    explicit Engine(const EngineParams& params);

    const EngineParams& params() const { return params_; }
    int dim() const { return dim_; }
    int x0_count() const { return x0_count_; }
    int x1_count() const { return x1_count_; }
    int pair_count() const { return pair_count_; }

    const std::vector<F2Vector>& x0() const { return x0_; }
    const std::vector<F2Vector>& x1() const { return x1_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    int e0_class(int x0_index) const { return x0_index / params_.m0; }
    int e1_class(int x1_index) const { return x1_index / params_.m1; }
    /// canonical pair-to-class table: the t-th lex pair maps to class t
    int k_of_pair(int pair_index) const { return pair_index; }
    int pair_index(int i, int j) const;

    const F2Subspace& v0() const { return v0_; }
    const F2Subspace& v1() const { return v1_; }
    const F2Subspace& w0() const { return w0_; }
    const F2Subspace& w1() const { return w1_; }
    const std::vector<F2Vector>& t_set() const { return t_set_; }
    const std::vector<F2Vector>& q_set() const { return q_set_; }
    const F2LinearMap& pi0() const { return pi0_; }
    const F2LinearMap& pi1() const { return pi1_; }

    int x0_index(const F2Vector& v) const;  // -1 when not an X0 element
    int x1_index(const F2Vector& v) const;

private:
    EngineParams params_;
    int dim_ = 0, x0_count_ = 0, x1_count_ = 0, pair_count_ = 0;
    std::vector<F2Vector> x0_, x1_;
    std::vector<std::pair<int, int>> pairs_;
    F2Subspace v0_, v1_, w0_, w1_;
    std::vector<F2Vector> t_set_, q_set_;
    F2LinearMap pi0_, pi1_;
};

Engine build_engine(const EngineParams& params);

/// Every X1 element has exactly one W0 preimage under the V1 projection, and
/// that preimage lies in T. Cross-checks enumeration against the linear
/// solver whenever W0 is small enough to enumerate.
ValidationReport claim1_check(const Engine& engine, int guard = kDefaultEnumerationGuard);

/// A lifting of an E0-class bijection: block permutations on both sides plus
/// the assembled linear map.
struct Sigma {
    std::vector<int> perm_x0;  // X0 index -> X0 index
    std::vector<int> perm_x1;
    ClassBijection h;   // E0 classes
    ClassBijection h1;  // E1 classes, induced
    F2LinearMap map;
};

/// Canonical lifting: class members move in index order, the E1 side follows
/// the induced action on pair sums.
Sigma sigma_lift(const Engine& engine, const ClassBijection& h);

/// Checks that sigma fixes T and Q setwise, fixes W0 and W1 as subspaces,
/// transports fibers compatibly with the pair action, preserves the class
/// structures on both sides, and that W1 meets X1 in exactly Q.
ValidationReport verify_sigma(const Engine& engine, const Sigma& sigma);

/// The decoding side works from subspace data alone.
struct EngineRawData {
    int dim = 0;
    F2Subspace v0, v1;
    std::vector<F2Vector> x0, x1;
    F2Subspace w0;
    F2Subspace w1;
};
EngineRawData raw_data(const Engine& engine);

/// Applies an invertible map to every component (for invariance tests).
EngineRawData transform_raw(const EngineRawData& raw, const F2LinearMap& g);

struct RecoveredE1 {
    // partition of X1 positions into classes, each sorted, classes ordered by
    // their smallest member
    std::vector<std::vector<int>> classes;
    std::vector<F2Vector> class_to_s;              // V0 witness per class
    std::vector<std::pair<int, int>> class_to_pair;  // X0 positions, i < j
    int class_of(int x1_index) const;
};

/// Recovers the E1 partition of X1 from W0: two elements are equivalent when
/// their unique W0 witnesses share the V0 component; the witness sum
/// decomposes over X0 into the defining pair.
RecoveredE1 recover_e1(const EngineRawData& raw, int guard = kDefaultEnumerationGuard);

/// Recovers the E0 partition of X0 positions: a distinct pair is equivalent
/// exactly when its fiber lies inside W1.
std::vector<std::vector<int>> recover_e0(const EngineRawData& raw, const RecoveredE1& e1);

/// Reserved tag indices in the full tagged export.
inline constexpr TagIndex kTagV0 = 0;
inline constexpr TagIndex kTagV1 = 1;
inline constexpr TagIndex kTagW0 = 2;
inline constexpr TagIndex kTagW1 = 3;
inline constexpr TagIndex kTagFirstSingleton = 4;

/// A pure tagged structure naming V0, V1, W0, W1 at the reserved indices and
/// giving every non-X element of either block its own singleton tag, so each
/// block reads off its X set as the complement.
TaggedStructure export_full_tagged(const Engine& engine,
                                   int guard = kDefaultEnumerationGuard);

}  // namespace taglab
