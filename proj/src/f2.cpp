#include "taglab/f2.hpp"

#include <algorithm>
#include <bit>

namespace taglab {

namespace {

int words_for(int dim) { return (dim + 63) / 64; }

void check_same_dim(const F2Vector& a, const F2Vector& b, const char* op) {
    detail::require(a.dim() == b.dim(),
                    std::string(op) + ": dimension mismatch (" +
                        std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

void check_guard(int dim, int guard, const char* what) {
    detail::require(dim <= guard, std::string(what) + ": dimension " + std::to_string(dim) +
                                      " exceeds enumeration guard " + std::to_string(guard));
}

// Elimination rows carrying a coefficient tag, used for solving, kernels and
// basis extension.
struct TaggedRow {
    F2Vector vec;
    F2Vector tag;
};

// Inserts (vec, tag) into rows kept in echelon form (pivots increasing, not
// fully reduced). Returns the residual pair after reduction; residual.vec is
// zero iff vec was dependent on the rows already present.
TaggedRow reduce_by_rows(std::vector<TaggedRow>& rows, F2Vector vec, F2Vector tag,
                         bool insert) {
    for (auto& row : rows) {
        int p = row.vec.pivot();
        if (!vec.is_zero() && vec.get(p)) {
            vec ^= row.vec;
            tag ^= row.tag;
        }
    }
    TaggedRow residual{vec, tag};
    if (insert && !vec.is_zero()) {
        rows.push_back(residual);
        std::sort(rows.begin(), rows.end(),
                  [](const TaggedRow& a, const TaggedRow& b) { return a.vec.pivot() < b.vec.pivot(); });
    }
    return residual;
}

}  // namespace

F2Vector::F2Vector(int dim) : dim_(dim), words_(words_for(dim), 0) {
    detail::require(dim >= 0, "F2Vector: negative dimension");
}

F2Vector F2Vector::unit(int dim, int coord) {
    F2Vector v(dim);
    v.set(coord, true);
    return v;
}

F2Vector F2Vector::from_string(const std::string& bits) {
    F2Vector v(static_cast<int>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        detail::require(bits[i] == '0' || bits[i] == '1',
                        "F2Vector: bad character in bitstring '" + bits + "'");
        if (bits[i] == '1') v.set(static_cast<int>(i), true);
    }
    return v;
}

bool F2Vector::get(int coord) const {
    detail::require(coord >= 0 && coord < dim_, "F2Vector: coordinate out of range");
    return (words_[coord >> 6] >> (coord & 63)) & 1u;
}

void F2Vector::set(int coord, bool value) {
    detail::require(coord >= 0 && coord < dim_, "F2Vector: coordinate out of range");
    std::uint64_t mask = std::uint64_t{1} << (coord & 63);
    if (value)
        words_[coord >> 6] |= mask;
    else
        words_[coord >> 6] &= ~mask;
}

bool F2Vector::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

int F2Vector::weight() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

int F2Vector::pivot() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    return -1;
}

std::string F2Vector::to_string() const {
    std::string s(static_cast<std::size_t>(dim_), '0');
    for (int i = 0; i < dim_; ++i)
        if (get(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

F2Vector F2Vector::padded(int new_dim) const {
    detail::require(new_dim >= dim_, "F2Vector::padded: target dimension too small");
    F2Vector v(new_dim);
    for (std::size_t i = 0; i < words_.size(); ++i) v.words_[i] = words_[i];
    return v;
}

F2Vector& F2Vector::operator^=(const F2Vector& other) {
    check_same_dim(*this, other, "xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

std::size_t F2Vector::hash() const {
    std::size_t h = std::hash<int>()(dim_);
    for (auto w : words_) h = h * 1099511628211ull + std::hash<std::uint64_t>()(w);
    return h;
}

bool bitstring_less(const F2Vector& a, const F2Vector& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (int i = 0; i < a.dim(); ++i) {
        bool ai = a.get(i), bi = b.get(i);
        if (ai != bi) return bi;
    }
    return false;
}

bool canonical_less(const F2Vector& a, const F2Vector& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    int pa = a.pivot(), pb = b.pivot();
    if (pa != pb) {
        if (pa < 0) return false;
        if (pb < 0) return true;
        return pa < pb;
    }
    return bitstring_less(a, b);
}

F2Vector add(const F2Vector& u, const F2Vector& v) {
    check_same_dim(u, v, "add");
    return u ^ v;
}

void for_each_vector(int dim, const std::function<void(const F2Vector&)>& fn, int guard) {
    check_guard(dim, guard, "for_each_vector");
    F2Vector v(dim);
    while (true) {
        fn(v);
        // odometer increment, coordinate dim-1 is the fastest digit
        int i = dim - 1;
        while (i >= 0 && v.get(i)) {
            v.set(i, false);
            --i;
        }
        if (i < 0) break;
        v.set(i, true);
    }
}

std::vector<F2Vector> all_vectors(int dim, int guard) {
    std::vector<F2Vector> out;
    out.reserve(dim <= 30 ? (std::size_t{1} << dim) : 0);
    for_each_vector(dim, [&](const F2Vector& v) { out.push_back(v); }, guard);
    return out;
}

F2Subspace F2Subspace::zero(int ambient_dim) {
    detail::require(ambient_dim >= 0, "F2Subspace: negative dimension");
    F2Subspace s;
    s.ambient_dim_ = ambient_dim;
    return s;
}

F2Subspace F2Subspace::full(int ambient_dim) {
    std::vector<F2Vector> units;
    for (int i = 0; i < ambient_dim; ++i) units.push_back(F2Vector::unit(ambient_dim, i));
    return span(ambient_dim, units);
}

F2Vector F2Subspace::reduce(const F2Vector& v) const {
    detail::require(v.dim() == ambient_dim_, "F2Subspace::reduce: dimension mismatch");
    F2Vector r = v;
    for (const auto& row : basis_) {
        if (!r.is_zero() && r.get(row.pivot())) r ^= row;
    }
    return r;
}

std::optional<std::vector<bool>> F2Subspace::coordinates(const F2Vector& v) const {
    detail::require(v.dim() == ambient_dim_, "F2Subspace::coordinates: dimension mismatch");
    std::vector<bool> coeffs(basis_.size(), false);
    F2Vector r = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (!r.is_zero() && r.get(basis_[i].pivot())) {
            r ^= basis_[i];
            coeffs[i] = true;
        }
    }
    if (!r.is_zero()) return std::nullopt;
    return coeffs;
}

std::vector<F2Vector> F2Subspace::elements(int guard) const {
    check_guard(dim(), guard, "F2Subspace::elements");
    std::vector<F2Vector> out;
    out.reserve(std::size_t{1} << dim());
    out.push_back(F2Vector(ambient_dim_));
    for (const auto& b : basis_) {
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ b);
    }
    std::sort(out.begin(), out.end(), CanonicalLess{});
    return out;
}

bool F2Subspace::contains(const F2Subspace& other) const {
    detail::require(ambient_dim_ == other.ambient_dim_, "F2Subspace::contains: dimension mismatch");
    for (const auto& b : other.basis_)
        if (!reduce(b).is_zero()) return false;
    return true;
}

F2Subspace span(int ambient_dim, const std::vector<F2Vector>& gens) {
    detail::require(ambient_dim >= 0, "span: negative ambient dimension");
    // rows stay sorted by pivot so a single reduction pass is complete
    std::vector<F2Vector> rows;
    for (const auto& g : gens) {
        detail::require(g.dim() == ambient_dim, "span: dimension mismatch");
        F2Vector r = g;
        for (const auto& row : rows)
            if (!r.is_zero() && r.get(row.pivot())) r ^= row;
        if (!r.is_zero()) {
            rows.push_back(r);
            std::sort(rows.begin(), rows.end(),
                      [](const F2Vector& a, const F2Vector& b) { return a.pivot() < b.pivot(); });
        }
    }
    // back-substitute to reach reduced form
    for (std::size_t i = rows.size(); i-- > 0;) {
        for (std::size_t j = 0; j < i; ++j)
            if (rows[j].get(rows[i].pivot())) rows[j] ^= rows[i];
    }
    F2Subspace s;
    s.ambient_dim_ = ambient_dim;
    s.basis_ = std::move(rows);
    return s;
}

bool member(const F2Vector& v, const F2Subspace& s) { return s.reduce(v).is_zero(); }

F2Subspace intersect(const F2Subspace& s, const F2Subspace& t) {
    detail::require(s.ambient_dim() == t.ambient_dim(), "intersect: dimension mismatch");
    int n = s.ambient_dim();
    // Zassenhaus: rows [b|b] for b in S and [c|0] for c in T; rows whose left
    // half eliminates to zero carry an intersection element in the right half.
    std::vector<TaggedRow> rows;
    std::vector<F2Vector> result;
    for (const auto& b : s.basis()) reduce_by_rows(rows, b, b, true);
    for (const auto& c : t.basis()) {
        TaggedRow res = reduce_by_rows(rows, c, F2Vector(n), true);
        if (res.vec.is_zero()) result.push_back(res.tag);
    }
    return span(n, result);
}

F2Subspace sum_subspaces(const F2Subspace& s, const F2Subspace& t) {
    detail::require(s.ambient_dim() == t.ambient_dim(), "sum_subspaces: dimension mismatch");
    std::vector<F2Vector> gens = s.basis();
    gens.insert(gens.end(), t.basis().begin(), t.basis().end());
    return span(s.ambient_dim(), gens);
}

int rank(const std::vector<F2Vector>& vectors) {
    if (vectors.empty()) return 0;
    return span(vectors.front().dim(), vectors).dim();
}

bool is_linearly_independent(const std::vector<F2Vector>& vectors) {
    return rank(vectors) == static_cast<int>(vectors.size());
}

F2LinearMap::F2LinearMap(int domain_dim, int codomain_dim, std::vector<F2Vector> images)
    : domain_dim_(domain_dim), codomain_dim_(codomain_dim), images_(std::move(images)) {
    detail::require(static_cast<int>(images_.size()) == domain_dim_,
                    "F2LinearMap: need one image per domain basis vector");
    for (const auto& im : images_)
        detail::require(im.dim() == codomain_dim_, "F2LinearMap: image dimension mismatch");
}

F2LinearMap F2LinearMap::identity(int dim) {
    std::vector<F2Vector> images;
    for (int i = 0; i < dim; ++i) images.push_back(F2Vector::unit(dim, i));
    return F2LinearMap(dim, dim, std::move(images));
}

F2LinearMap F2LinearMap::zero_map(int domain_dim, int codomain_dim) {
    return F2LinearMap(domain_dim, codomain_dim,
                       std::vector<F2Vector>(domain_dim, F2Vector(codomain_dim)));
}

F2Vector F2LinearMap::apply(const F2Vector& v) const {
    detail::require(v.dim() == domain_dim_, "F2LinearMap::apply: dimension mismatch");
    F2Vector out(codomain_dim_);
    for (int i = 0; i < domain_dim_; ++i)
        if (v.get(i)) out ^= images_[static_cast<std::size_t>(i)];
    return out;
}

F2Subspace F2LinearMap::image() const { return span(codomain_dim_, images_); }

F2Subspace F2LinearMap::kernel() const {
    std::vector<TaggedRow> rows;
    std::vector<F2Vector> kernel_gens;
    for (int i = 0; i < domain_dim_; ++i) {
        TaggedRow res = reduce_by_rows(rows, images_[static_cast<std::size_t>(i)],
                                       F2Vector::unit(domain_dim_, i), true);
        if (res.vec.is_zero()) kernel_gens.push_back(res.tag);
    }
    return span(domain_dim_, kernel_gens);
}

bool F2LinearMap::is_injective() const { return kernel().is_zero(); }

bool F2LinearMap::is_bijective() const {
    return domain_dim_ == codomain_dim_ && is_injective();
}

F2LinearMap F2LinearMap::inverse() const {
    detail::require(is_bijective(), "F2LinearMap::inverse: map is not bijective");
    return extend_map_on_basis(images_, F2LinearMap::identity(domain_dim_).images(),
                               codomain_dim_, domain_dim_);
}

F2LinearMap compose(const F2LinearMap& f, const F2LinearMap& g) {
    detail::require(f.domain_dim() == g.codomain_dim(), "compose: dimension mismatch");
    std::vector<F2Vector> images;
    images.reserve(static_cast<std::size_t>(g.domain_dim()));
    for (const auto& im : g.images()) images.push_back(f.apply(im));
    return F2LinearMap(g.domain_dim(), f.codomain_dim(), std::move(images));
}

F2LinearMap extend_map_on_basis(const std::vector<F2Vector>& domain_basis,
                                const std::vector<F2Vector>& images,
                                int domain_ambient_dim, int codomain_dim) {
    detail::require(domain_basis.size() == images.size(),
                    "extend_map_on_basis: basis/image length mismatch");
    int k = static_cast<int>(domain_basis.size());
    std::vector<TaggedRow> rows;
    for (int i = 0; i < k; ++i) {
        detail::require(domain_basis[static_cast<std::size_t>(i)].dim() == domain_ambient_dim,
                        "extend_map_on_basis: basis dimension mismatch");
        detail::require(images[static_cast<std::size_t>(i)].dim() == codomain_dim,
                        "extend_map_on_basis: image dimension mismatch");
        TaggedRow res = reduce_by_rows(rows, domain_basis[static_cast<std::size_t>(i)],
                                       F2Vector::unit(k, i), true);
        detail::require(!res.vec.is_zero(), "extend_map_on_basis: domain basis is dependent");
    }
    std::vector<F2Vector> unit_images;
    for (int i = 0; i < domain_ambient_dim; ++i) {
        TaggedRow res =
            reduce_by_rows(rows, F2Vector::unit(domain_ambient_dim, i), F2Vector(k), false);
        F2Vector im(codomain_dim);
        if (res.vec.is_zero()) {
            for (int j = 0; j < k; ++j)
                if (res.tag.get(j)) im ^= images[static_cast<std::size_t>(j)];
        }
        unit_images.push_back(im);
    }
    return F2LinearMap(domain_ambient_dim, codomain_dim, std::move(unit_images));
}

std::vector<F2Vector> preimage_set(const F2LinearMap& f, const F2Subspace& s,
                                   const F2Vector& target, int guard) {
    detail::require(target.dim() == f.codomain_dim(), "preimage_set: target dimension mismatch");
    detail::require(s.ambient_dim() == f.domain_dim(), "preimage_set: subspace dimension mismatch");

    // Solve sum_i c_i f(b_i) = target over the coefficients c of S's basis.
    int k = s.dim();
    std::vector<TaggedRow> rows;
    std::vector<F2Vector> kernel_tags;
    for (int i = 0; i < k; ++i) {
        TaggedRow res = reduce_by_rows(rows, f.apply(s.basis()[static_cast<std::size_t>(i)]),
                                       F2Vector::unit(k, i), true);
        if (res.vec.is_zero()) kernel_tags.push_back(res.tag);
    }
    std::vector<F2Vector> solved;
    TaggedRow res = reduce_by_rows(rows, target, F2Vector(k), false);
    if (res.vec.is_zero()) {
        int kernel_dim = static_cast<int>(kernel_tags.size());
        check_guard(kernel_dim, guard, "preimage_set: solution set");
        auto lift = [&](const F2Vector& coeffs) {
            F2Vector w(s.ambient_dim());
            for (int i = 0; i < k; ++i)
                if (coeffs.get(i)) w ^= s.basis()[static_cast<std::size_t>(i)];
            return w;
        };
        std::vector<F2Vector> coeff_sets{res.tag};
        for (const auto& kt : kernel_tags) {
            std::size_t n = coeff_sets.size();
            for (std::size_t i = 0; i < n; ++i) coeff_sets.push_back(coeff_sets[i] ^ kt);
        }
        for (const auto& c : coeff_sets) solved.push_back(lift(c));
        std::sort(solved.begin(), solved.end(), CanonicalLess{});
    }

    if (k <= guard) {
        std::vector<F2Vector> enumerated;
        for (const auto& w : s.elements(guard))
            if (f.apply(w) == target) enumerated.push_back(w);
        detail::require(enumerated == solved,
                        "preimage_set: enumeration and linear-system methods disagree");
    }
    return solved;
}

}  // namespace taglab
