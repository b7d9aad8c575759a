#pragma once

// Symmetric tensors over a truncated basis, stored once per nondecreasing
// multi-index (k_1 ≤ … ≤ k_n), together with the contractions used by the
// Gross Laplacian and the heat semigroup.
//
// Storage order is colex over the strictly increasing image
// c_j = k_j + j, so rank(J) = Σ_j C(k_j + j, j + 1). Indices are 0-based
// in memory; serialized records use 1-based labels.

#include "exotic/graded_space.hpp"
#include "exotic/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

using MultiIndex = std::vector<std::size_t>;

/// Hard cap on stored coefficients per tensor (2^27 complex ≈ 2 GiB).
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 27;

namespace detail {

/// C(a, b), saturating to SIZE_MAX on overflow.
inline std::size_t binomial(std::size_t a, std::size_t b) noexcept
{
    if (b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 r = 1;
    for (std::size_t i = 0; i < b; ++i) {
        r = r * (a - i) / (i + 1);
        if (r > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(r);
}

inline std::size_t rank_sorted(std::span<const std::size_t> idx) noexcept
{
    std::size_t r = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) r += binomial(idx[j] + j, j + 1);
    return r;
}

/// Colex successor of a nondecreasing tuple; false after the last one.
inline bool next_sorted(MultiIndex& idx, std::size_t dim) noexcept
{
    const std::size_t n = idx.size();
    for (std::size_t j = 0; j < n; ++j) {
        const bool can_bump = (j + 1 < n) ? idx[j] < idx[j + 1] : idx[j] + 1 < dim;
        if (can_bump) {
            ++idx[j];
            for (std::size_t i = 0; i < j; ++i) idx[i] = 0;
            return true;
        }
    }
    return false;
}

/// Number of distinct orderings of a sorted multi-index: n! / ∏ c_i!.
inline double multiplicity(std::span<const std::size_t> sorted) noexcept
{
    double m = 1.0;
    std::size_t run = 0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        run = (j > 0 && sorted[j] == sorted[j - 1]) ? run + 1 : 1;
        m *= static_cast<double>(j + 1) / static_cast<double>(run);
    }
    return m;
}

inline MultiIndex merged(const MultiIndex& sorted, std::size_t k)
{
    MultiIndex out;
    out.reserve(sorted.size() + 1);
    auto it = std::upper_bound(sorted.begin(), sorted.end(), k);
    out.insert(out.end(), sorted.begin(), it);
    out.push_back(k);
    out.insert(out.end(), it, sorted.end());
    return out;
}

} // namespace detail

/// Dense n-way array, row-major. Input to symmetrize(); axes may be ragged,
/// in which case symmetrize() rejects it.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(std::vector<std::size_t> shape) : shape_(std::move(shape))
    {
        std::size_t total = 1;
        for (auto s : shape_) total *= s;
        data_.assign(total, cplx{});
    }

    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t degree() const noexcept { return shape_.size(); }
    [[nodiscard]] const std::vector<cplx>& data() const noexcept { return data_; }

    [[nodiscard]] std::size_t offset(std::span<const std::size_t> idx) const
    {
        if (idx.size() != shape_.size()) throw std::invalid_argument("DenseTensor: index rank mismatch");
        std::size_t off = 0;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] >= shape_[j]) throw std::out_of_range("DenseTensor: index out of range");
            off = off * shape_[j] + idx[j];
        }
        return off;
    }

    [[nodiscard]] cplx at(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }
    cplx& at(std::span<const std::size_t> idx) { return data_[offset(idx)]; }

    /// v_1 ⊗ … ⊗ v_n, unsymmetrized.
    static DenseTensor outer(std::span<const GradedVector> factors)
    {
        std::vector<std::size_t> shape;
        for (const auto& f : factors) shape.push_back(f.dim());
        DenseTensor t(shape);
        MultiIndex idx(shape.size(), 0);
        for (std::size_t off = 0; off < t.data_.size(); ++off) {
            cplx v = 1.0;
            for (std::size_t j = 0; j < idx.size(); ++j) v *= factors[j][idx[j]];
            t.data_[off] = v;
            for (std::size_t j = idx.size(); j-- > 0;) {
                if (++idx[j] < shape[j]) break;
                idx[j] = 0;
            }
        }
        return t;
    }

    DenseTensor& operator+=(const DenseTensor& o)
    {
        if (o.shape_ != shape_) throw std::invalid_argument("DenseTensor: shape mismatch");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<cplx> data_;
};

class SymTensor {
public:
    SymTensor() : SymTensor(0, 1) {}

    SymTensor(std::size_t degree, std::size_t dim) : degree_(degree), dim_(dim)
    {
        if (dim_ == 0) throw std::invalid_argument("SymTensor: dimension must be positive");
        const std::size_t n = storage_size(degree_, dim_);
        if (n > kMaxTensorEntries) {
            throw std::length_error("SymTensor: degree " + std::to_string(degree_) + " over dim " +
                                    std::to_string(dim_) + " needs " + std::to_string(n) + " entries");
        }
        coeffs_.assign(n, cplx{});
    }

    static SymTensor scalar(cplx c, std::size_t dim)
    {
        SymTensor t(0, dim);
        t.coeffs_[0] = c;
        return t;
    }

    static std::size_t storage_size(std::size_t degree, std::size_t dim) noexcept
    {
        return detail::binomial(dim + degree - 1, degree);
    }

    [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::vector<cplx>& coeffs() noexcept { return coeffs_; }

    /// Value at an arbitrary (unsorted) full index tuple.
    [[nodiscard]] cplx at(MultiIndex idx) const { return coeffs_[offset_of(std::move(idx))]; }

    void set(MultiIndex idx, cplx value) { coeffs_[offset_of(std::move(idx))] = value; }

    /// Value at an already-sorted index.
    [[nodiscard]] cplx at_sorted(std::span<const std::size_t> sorted) const
    {
        return coeffs_[detail::rank_sorted(sorted)];
    }

    /// Calls f(sorted_index, value) in storage order.
    template <class F>
    void for_each(F&& f) const
    {
        MultiIndex idx(degree_, 0);
        std::size_t off = 0;
        do {
            f(static_cast<const MultiIndex&>(idx), coeffs_[off]);
            ++off;
        } while (detail::next_sorted(idx, dim_));
    }

    /// Calls f(sorted_index, value&) in storage order.
    template <class F>
    void transform(F&& f)
    {
        MultiIndex idx(degree_, 0);
        std::size_t off = 0;
        do {
            f(static_cast<const MultiIndex&>(idx), coeffs_[off]);
            ++off;
        } while (detail::next_sorted(idx, dim_));
    }

    [[nodiscard]] bool is_zero() const noexcept
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
    }

    SymTensor& operator+=(const SymTensor& o)
    {
        require_same_shape(o, "SymTensor::+=");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    SymTensor& operator-=(const SymTensor& o)
    {
        require_same_shape(o, "SymTensor::-=");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    SymTensor& operator*=(cplx c)
    {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(cplx c, SymTensor t) { return t *= c; }

    void require_same_shape(const SymTensor& o, const char* where) const
    {
        if (o.degree_ != degree_ || o.dim_ != dim_) {
            throw std::invalid_argument(std::string(where) + ": shape mismatch (degree " + std::to_string(degree_) +
                                        ", dim " + std::to_string(dim_) + " vs degree " +
                                        std::to_string(o.degree_) + ", dim " + std::to_string(o.dim_) + ")");
        }
    }

    friend bool operator==(const SymTensor&, const SymTensor&) = default;

private:
    std::size_t offset_of(MultiIndex idx) const
    {
        if (idx.size() != degree_) throw std::invalid_argument("SymTensor: index has wrong length");
        for (auto k : idx) {
            if (k >= dim_) throw std::out_of_range("SymTensor: index out of range");
        }
        std::sort(idx.begin(), idx.end());
        return detail::rank_sorted(idx);
    }

    std::size_t degree_;
    std::size_t dim_;
    std::vector<cplx> coeffs_;
};

enum class TraceKind {
    Base,                 ///< τ = Σ e_k ⊗ e_k in canonical coordinates
    ExoticCoordinates,    ///< τ_a in its own frame: identity array of size K_a
    ExoticInBase,         ///< τ_a = Σ e_{a,k} ⊗ e_{a,k} expanded in base coordinates
};

struct TraceTensor {
    SymTensor tensor;
    TraceKind kind = TraceKind::Base;
};

/// Identity coefficient array: b_(k,k) = 1, off-diagonal 0.
inline SymTensor identity_trace_tensor(std::size_t dim)
{
    SymTensor t(2, dim);
    for (std::size_t k = 0; k < dim; ++k) t.set({k, k}, 1.0);
    return t;
}

inline TraceTensor base_trace(std::size_t dim) { return {identity_trace_tensor(dim), TraceKind::Base}; }

/// b_J = average of the dense array over all orderings of J.
inline SymTensor symmetrize(const DenseTensor& dense)
{
    const auto& shape = dense.shape();
    if (shape.empty()) {
        // degree 0: no axes, the single stored value is the scalar
        if (dense.data().empty()) throw std::invalid_argument("symmetrize: empty degree-0 array");
        return SymTensor::scalar(dense.data()[0], 1);
    }
    for (auto s : shape) {
        if (s != shape[0]) throw std::invalid_argument("symmetrize: ragged axes");
    }
    SymTensor out(shape.size(), shape[0]);
    out.transform([&](const MultiIndex& sorted, cplx& v) {
        MultiIndex perm = sorted;
        CompensatedComplexSum acc;
        std::size_t count = 0;
        do {
            acc.add(dense.at(perm));
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        v = acc.value() / static_cast<double>(count);
    });
    return out;
}

/// ξ^{⊗n}: coefficient ∏_j ξ_{k_j}.
inline SymTensor sym_power(const GradedVector& xi, long n)
{
    if (n < 0) throw std::invalid_argument("sym_power: negative degree");
    SymTensor out(static_cast<std::size_t>(n), xi.dim());
    out.transform([&](const MultiIndex& idx, cplx& v) {
        cplx p = 1.0;
        for (auto k : idx) p *= xi[k];
        v = p;
    });
    return out;
}

/// sqrt(Σ over full index tuples of ∏ λ_{k_j}^{2p} |b|²), from symmetric storage.
inline double tensor_norm_p(const SymTensor& t, double p, const WeightFamily& w)
{
    if (t.dim() != w.K()) throw std::invalid_argument("tensor_norm_p: tensor dimension differs from weight truncation K");
    std::vector<double> g(t.dim());
    for (std::size_t k = 0; k < t.dim(); ++k) g[k] = w.grade_factor(k + 1, p);
    CompensatedSum acc;
    t.for_each([&](const MultiIndex& idx, cplx v) {
        if (v == cplx{}) return;
        double f = detail::multiplicity(idx);
        for (auto k : idx) f *= g[k];
        acc.add(f * std::norm(v));
    });
    return std::sqrt(acc.value());
}

/// Contracts the last slot against v with the bilinear pairing.
inline SymTensor right_contract(const SymTensor& t, const GradedVector& v)
{
    if (t.degree() == 0) throw std::invalid_argument("right_contract: degree-0 tensor has no slot");
    if (v.dim() != t.dim()) throw std::invalid_argument("right_contract: dimension mismatch");
    SymTensor out(t.degree() - 1, t.dim());
    out.transform([&](const MultiIndex& idx, cplx& r) {
        CompensatedComplexSum acc;
        for (std::size_t k = 0; k < t.dim(); ++k) {
            if (v[k] == cplx{}) continue;
            acc.add(t.at_sorted(detail::merged(idx, k)) * v[k]);
        }
        r = acc.value();
    });
    return out;
}

namespace detail {

/// One τ-contraction of the last two slots: out_J = Σ_{i,j} τ_{ij} T_{J,i,j}.
inline SymTensor contract_trace_once(const SymTensor& t, const SymTensor& tau)
{
    struct Term {
        std::size_t i, j;
        cplx w;
    };
    std::vector<Term> terms;
    tau.for_each([&](const MultiIndex& idx, cplx v) {
        if (v == cplx{}) return;
        terms.push_back({idx[0], idx[1], (idx[0] == idx[1] ? 1.0 : 2.0) * v});
    });
    SymTensor out(t.degree() - 2, t.dim());
    out.transform([&](const MultiIndex& idx, cplx& r) {
        CompensatedComplexSum acc;
        for (const auto& term : terms) acc.add(term.w * t.at_sorted(merged(merged(idx, term.i), term.j)));
        r = acc.value();
    });
    return out;
}

} // namespace detail

/// Pairs 2m slots of T against τ^{⊗m} (bilinear). Slots are taken from the
/// end; for symmetric T the result is symmetric and slot choice is immaterial.
inline SymTensor contract_2m(const SymTensor& t, const TraceTensor& tau, std::size_t m)
{
    if (t.degree() < 2 * m) {
        throw std::invalid_argument("contract_2m: degree " + std::to_string(t.degree()) + " < 2m = " +
                                    std::to_string(2 * m));
    }
    if (m > 0 && (tau.tensor.degree() != 2 || tau.tensor.dim() != t.dim())) {
        throw std::invalid_argument("contract_2m: trace must be a degree-2 tensor over the same dimension");
    }
    SymTensor out = t;
    for (std::size_t i = 0; i < m; ++i) out = detail::contract_trace_once(out, tau.tensor);
    return out;
}

/// Σ over full index tuples of T·U, bilinear.
inline cplx full_pair(const SymTensor& t, const SymTensor& u)
{
    t.require_same_shape(u, "full_pair");
    CompensatedComplexSum acc;
    std::size_t off = 0;
    const auto& uc = u.coeffs();
    t.for_each([&](const MultiIndex& idx, cplx v) {
        const cplx w = uc[off++];
        if (v == cplx{} || w == cplx{}) return;
        acc.add(detail::multiplicity(idx) * v * w);
    });
    return acc.value();
}

/// Σ over full index tuples of conj(T)·U.
inline cplx conj_full_pair(const SymTensor& t, const SymTensor& u)
{
    t.require_same_shape(u, "conj_full_pair");
    CompensatedComplexSum acc;
    std::size_t off = 0;
    const auto& uc = u.coeffs();
    t.for_each([&](const MultiIndex& idx, cplx v) {
        const cplx w = uc[off++];
        if (v == cplx{} || w == cplx{}) return;
        acc.add(detail::multiplicity(idx) * std::conj(v) * w);
    });
    return acc.value();
}

/// Contracts every slot of T against the same vector: Σ T_{k_1..k_n} ∏ v_{k_j}.
inline cplx evaluate_polynomial(const SymTensor& t, const GradedVector& v)
{
    if (v.dim() != t.dim()) throw std::invalid_argument("evaluate_polynomial: dimension mismatch");
    CompensatedComplexSum acc;
    t.for_each([&](const MultiIndex& idx, cplx c) {
        if (c == cplx{}) return;
        cplx p = detail::multiplicity(idx) * c;
        for (auto k : idx) p *= v[k];
        acc.add(p);
    });
    return acc.value();
}

} // namespace exotic
