// lifting.hpp
//
// Class-tracking partial isomorphisms between substructures of a chain stage
// and the one-step extension algorithm that keeps them class-tracking: build
// an abstract copy of the extended domain, pick class representatives, form
// the controlled amalgam over them, and embed it back fixing the
// representative structure pointwise.

#pragma once

#include "taglab/chain.hpp"

namespace taglab {

/// Partial injective map between E-class ids of a stage. A block's id is the
/// coordinate index of its earliest element, which chain growth never
/// changes.
class ClassBijection {
public:
    ClassBijection() = default;
    explicit ClassBijection(const std::map<int, int>& mapping);

    bool defined(int block) const { return map_.count(block) > 0; }
    bool hits(int block) const { return inverse_.count(block) > 0; }
    int apply(int block) const;
    void set(int source, int target);
    const std::map<int, int>& mapping() const { return map_; }
    ClassBijection inverse() const;
    int size() const { return static_cast<int>(map_.size()); }

    friend bool operator==(const ClassBijection&, const ClassBijection&) = default;

private:
    std::map<int, int> map_;
    std::map<int, int> inverse_;
};

/// Coordinate index of the earliest member of x's block.
int block_id(const XEStructure& stage, const F2Vector& x);
std::vector<int> all_block_ids(const XEStructure& stage);

/// A partial isomorphism between substructures of one chain stage together
/// with the class bijection it tracks.
struct TrackedPartialIso {
    int stage_index = 0;
    std::vector<std::pair<F2Vector, F2Vector>> x_pairs;  // domain X -> image X
    ClassBijection h;
};

/// Membership in the back-and-forth family: the pairs extend to an exact
/// isomorphism between generated substructures, and every image sits in the
/// class h prescribes.
ValidationReport check_in_Fh(const TrackedPartialIso& f, const Chain& chain);
bool is_in_Fh(const TrackedPartialIso& f, const Chain& chain);

struct ExtensionAudit {
    std::vector<F2Vector> representatives;  // the set Y, in stage coordinates
    bool grew = false;
    int representative_structure_dim = 0;  // dim of F
};

/// Extends f to the substructure generated by a_prime_x (stage X elements
/// containing the domain of f). h gains deterministic values on any new
/// classes first; the chain may grow. The result extends f exactly.
TrackedPartialIso extend_one_step(const TrackedPartialIso& f,
                                  const std::vector<F2Vector>& a_prime_x, Chain& chain,
                                  ExtensionAudit* audit = nullptr);

/// Runs extend_one_step along a filtration of the target coordinate set,
/// starting from the empty map.
TrackedPartialIso lift_over(const ClassBijection& h, const std::vector<F2Vector>& target_x,
                            Chain& chain);

/// The inverse tracked iso (swapped pairs, inverted h).
TrackedPartialIso inverse_iso(const TrackedPartialIso& f);

}  // namespace taglab
