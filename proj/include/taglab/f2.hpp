// f2.hpp
//
// Exact linear algebra over the two-element field: fixed-width bit vectors,
// subspaces kept in reduced row echelon form (so equality is representation
// equality), and linear maps given by the images of the standard basis.
//
// Everything here is a plain immutable value; operations are pure functions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace taglab {

// Exhaustive vector enumeration is refused above this dimension unless the
// caller raises the bound explicitly.
inline constexpr int kDefaultEnumerationGuard = 20;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}
}  // namespace detail

/// A vector in F2^dim. Coordinate 0 is the leftmost character of the
/// serialized bitstring.
class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(int dim);
    static F2Vector unit(int dim, int coord);
    static F2Vector from_string(const std::string& bits);

    int dim() const { return dim_; }
    bool get(int coord) const;
    void set(int coord, bool value);
    bool is_zero() const;
    int weight() const;
    int pivot() const;  // first set coordinate, -1 for the zero vector
    std::string to_string() const;

    // zero-extend into a larger ambient space
    F2Vector padded(int new_dim) const;

    F2Vector& operator^=(const F2Vector& other);
    friend F2Vector operator^(F2Vector a, const F2Vector& b) {
        a ^= b;
        return a;
    }
    friend bool operator==(const F2Vector&, const F2Vector&) = default;

    std::size_t hash() const;

private:
    int dim_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Deterministic vector order used everywhere a set of vectors is listed:
/// first by pivot (ascending), then by bitstring. On a standard basis this
/// is coordinate order, which keeps chain coordinates stable under growth.
bool canonical_less(const F2Vector& a, const F2Vector& b);

struct CanonicalLess {
    bool operator()(const F2Vector& a, const F2Vector& b) const {
        return canonical_less(a, b);
    }
};

/// Plain bitstring order (the order all_vectors enumerates in).
bool bitstring_less(const F2Vector& a, const F2Vector& b);

struct F2VectorHash {
    std::size_t operator()(const F2Vector& v) const { return v.hash(); }
};

/// Coordinatewise XOR with a dimension check.
F2Vector add(const F2Vector& u, const F2Vector& v);

/// Visit every vector of F2^dim in bitstring order. Refuses above the guard.
void for_each_vector(int dim, const std::function<void(const F2Vector&)>& fn,
                     int guard = kDefaultEnumerationGuard);
std::vector<F2Vector> all_vectors(int dim, int guard = kDefaultEnumerationGuard);

/// A subspace of F2^ambient_dim with a canonical basis: rows in reduced row
/// echelon form, pivots strictly increasing, pivot columns cleared in all
/// other rows. Two subspaces are equal iff their bases are identical.
class F2Subspace {
public:
    F2Subspace() = default;
    static F2Subspace zero(int ambient_dim);
    static F2Subspace full(int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<F2Vector>& basis() const { return basis_; }
    bool is_zero() const { return basis_.empty(); }

    /// Remainder of v after reduction by the basis; zero iff v is a member.
    F2Vector reduce(const F2Vector& v) const;

    /// Coefficients of v over the canonical basis, or nullopt if v is not a
    /// member.
    std::optional<std::vector<bool>> coordinates(const F2Vector& v) const;

    /// All 2^dim elements, sorted canonically. Guarded.
    std::vector<F2Vector> elements(int guard = kDefaultEnumerationGuard) const;

    bool contains(const F2Subspace& other) const;

    friend bool operator==(const F2Subspace&, const F2Subspace&) = default;

private:
    friend F2Subspace span(int, const std::vector<F2Vector>&);
    int ambient_dim_ = 0;
    std::vector<F2Vector> basis_;
};

/// Canonical RREF basis of the subspace generated by the given vectors.
/// The empty set spans the zero subspace.
F2Subspace span(int ambient_dim, const std::vector<F2Vector>& gens);

bool member(const F2Vector& v, const F2Subspace& s);
F2Subspace intersect(const F2Subspace& s, const F2Subspace& t);
F2Subspace sum_subspaces(const F2Subspace& s, const F2Subspace& t);
bool is_linearly_independent(const std::vector<F2Vector>& vectors);
int rank(const std::vector<F2Vector>& vectors);

/// A total linear map F2^domain_dim -> F2^codomain_dim, stored as the images
/// of the standard basis.
class F2LinearMap {
public:
    F2LinearMap() = default;
    F2LinearMap(int domain_dim, int codomain_dim, std::vector<F2Vector> images);
    static F2LinearMap identity(int dim);
    static F2LinearMap zero_map(int domain_dim, int codomain_dim);

    int domain_dim() const { return domain_dim_; }
    int codomain_dim() const { return codomain_dim_; }
    const std::vector<F2Vector>& images() const { return images_; }

    F2Vector apply(const F2Vector& v) const;
    F2Vector operator()(const F2Vector& v) const { return apply(v); }

    F2Subspace image() const;
    F2Subspace kernel() const;
    bool is_injective() const;
    bool is_bijective() const;
    F2LinearMap inverse() const;

    friend bool operator==(const F2LinearMap&, const F2LinearMap&) = default;

private:
    int domain_dim_ = 0;
    int codomain_dim_ = 0;
    std::vector<F2Vector> images_;
};

/// f after g.
F2LinearMap compose(const F2LinearMap& f, const F2LinearMap& g);

/// The linear map sending domain_basis[i] to images[i]. The basis must be
/// linearly independent. If it does not span the ambient space, the map is
/// completed by sending a complement of the span to zero; only the values on
/// the span are contractually meaningful.
F2LinearMap extend_map_on_basis(const std::vector<F2Vector>& domain_basis,
                                const std::vector<F2Vector>& images,
                                int domain_ambient_dim, int codomain_dim);

/// All w in S with f(w) = target, computed by solving the linear system in
/// S-coordinates and, when dim S fits the guard, cross-checked against plain
/// enumeration. Refuses if the solution set itself is too large to list.
std::vector<F2Vector> preimage_set(const F2LinearMap& f, const F2Subspace& s,
                                   const F2Vector& target,
                                   int guard = kDefaultEnumerationGuard);

}  // namespace taglab
