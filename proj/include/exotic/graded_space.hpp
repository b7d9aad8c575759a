#pragma once

// Truncated base triple E ⊂ H ⊂ E*: weight sequences, graded norms and the
// two pairings on coefficient vectors over the canonical basis {e_k}.

#include "exotic/summation.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

enum class WeightKind {
    Shifted,   ///< λ_k = k + c            params {c},    default c = 1
    Power,     ///< λ_k = (k + c)^β        params {c, β}
    Geometric, ///< λ_k = b · r^(k-1)       params {b, r}
};

inline const char* to_string(WeightKind kind) noexcept
{
    switch (kind) {
    case WeightKind::Shifted: return "shifted";
    case WeightKind::Power: return "power";
    case WeightKind::Geometric: return "geometric";
    }
    return "?";
}

inline WeightKind weight_kind_from_string(const std::string& s)
{
    if (s == "shifted") return WeightKind::Shifted;
    if (s == "power") return WeightKind::Power;
    if (s == "geometric") return WeightKind::Geometric;
    throw std::invalid_argument("unknown weight family kind '" + s + "'");
}

/// A nondecreasing weight sequence λ_1 ≤ λ_2 ≤ … with λ_1 > 1, truncated at K.
/// Indices passed to lambda() are 1-based, matching the basis labels e_k.
class WeightFamily {
public:
    WeightFamily(WeightKind kind, std::vector<double> params, std::size_t K)
        : kind_(kind), params_(std::move(params)), K_(K)
    {
        if (K_ == 0) throw std::invalid_argument("WeightFamily: K must be positive");
        switch (kind_) {
        case WeightKind::Shifted:
            if (params_.empty()) params_ = {1.0};
            if (params_.size() != 1) throw std::invalid_argument("shifted weights take one parameter");
            break;
        case WeightKind::Power:
            if (params_.empty()) params_ = {1.0, 1.0};
            if (params_.size() != 2) throw std::invalid_argument("power weights take two parameters");
            if (!(params_[1] > 0.5)) throw std::invalid_argument("power weights need β > 1/2 for Σλ^-2 < ∞");
            break;
        case WeightKind::Geometric:
            if (params_.size() != 2) throw std::invalid_argument("geometric weights take two parameters");
            if (!(params_[1] >= 1.0)) throw std::invalid_argument("geometric weights need r ≥ 1");
            break;
        }
        if (!(lambda(1) > 1.0)) throw std::invalid_argument("WeightFamily: λ_1 must exceed 1");
    }

    /// Default family λ_k = k + 1.
    static WeightFamily standard(std::size_t K) { return {WeightKind::Shifted, {1.0}, K}; }

    [[nodiscard]] WeightKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }
    [[nodiscard]] std::size_t K() const noexcept { return K_; }

    [[nodiscard]] double lambda(std::size_t k) const
    {
        const auto kd = static_cast<double>(k);
        switch (kind_) {
        case WeightKind::Shifted: return kd + params_[0];
        case WeightKind::Power: return std::pow(kd + params_[0], params_[1]);
        case WeightKind::Geometric: return params_[0] * std::pow(params_[1], kd - 1.0);
        }
        return 0.0;
    }

    /// λ_k^{2p}, the per-coordinate factor in the grade-p norm.
    [[nodiscard]] double grade_factor(std::size_t k, double p) const { return std::pow(lambda(k), 2.0 * p); }

    /// Σ_{k≤K} λ_k^{-2s}, ascending compensated.
    [[nodiscard]] double inverse_power_sum(double s) const
    {
        CompensatedSum acc;
        for (std::size_t k = 1; k <= K_; ++k) acc.add(std::pow(lambda(k), -2.0 * s));
        return acc.value();
    }

    /// λ_1 > 1 and λ_k ≤ λ_{k+1} for k < K.
    [[nodiscard]] bool admissible() const
    {
        if (!(lambda(1) > 1.0)) return false;
        for (std::size_t k = 1; k < K_; ++k) {
            if (lambda(k) > lambda(k + 1)) return false;
        }
        return true;
    }

    [[nodiscard]] WeightFamily with_K(std::size_t K) const { return {kind_, params_, K}; }

    friend bool operator==(const WeightFamily&, const WeightFamily&) = default;

private:
    WeightKind kind_;
    std::vector<double> params_;
    std::size_t K_;
};

/// Coefficients α_1..α_K of ξ = Σ α_k e_k. Storage is 0-based.
class GradedVector {
public:
    GradedVector() = default;
    explicit GradedVector(std::size_t dim) : coeffs_(dim, cplx{}) {}
    explicit GradedVector(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}
    GradedVector(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) {}

    /// e_k with 1-based k.
    static GradedVector unit(std::size_t dim, std::size_t k)
    {
        if (k == 0 || k > dim) throw std::out_of_range("GradedVector::unit: index out of range");
        GradedVector v(dim);
        v.coeffs_[k - 1] = 1.0;
        return v;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return coeffs_.size(); }
    [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return coeffs_[i]; }
    cplx& operator[](std::size_t i) { return coeffs_[i]; }

    GradedVector& operator+=(const GradedVector& o)
    {
        require_same_dim(o, "GradedVector::+=");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    GradedVector& operator*=(cplx c)
    {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
    friend GradedVector operator*(cplx c, GradedVector v) { return v *= c; }

    void require_same_dim(const GradedVector& o, const char* where) const
    {
        if (o.dim() != dim()) {
            throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(dim()) +
                                        " vs " + std::to_string(o.dim()) + ")");
        }
    }

    friend bool operator==(const GradedVector&, const GradedVector&) = default;

private:
    std::vector<cplx> coeffs_;
};

/// |ξ|_p = sqrt(Σ_k λ_k^{2p} |α_k|²).
inline double norm_p(const GradedVector& v, double p, const WeightFamily& w)
{
    if (v.dim() != w.K()) throw std::invalid_argument("norm_p: vector dimension differs from weight truncation K");
    CompensatedSum acc;
    for (std::size_t k = 0; k < v.dim(); ++k) acc.add(w.grade_factor(k + 1, p) * std::norm(v[k]));
    return std::sqrt(acc.value());
}

/// Σ_k x_k ξ_k, no conjugation.
inline cplx bilinear_pair(const GradedVector& x, const GradedVector& xi)
{
    x.require_same_dim(xi, "bilinear_pair");
    CompensatedComplexSum acc;
    for (std::size_t k = 0; k < x.dim(); ++k) acc.add(x[k] * xi[k]);
    return acc.value();
}

/// Σ_k conj(x_k) y_k, conjugate-linear in the first argument.
inline cplx hermitian_inner(const GradedVector& x, const GradedVector& y)
{
    x.require_same_dim(y, "hermitian_inner");
    CompensatedComplexSum acc;
    for (std::size_t k = 0; k < x.dim(); ++k) acc.add(std::conj(x[k]) * y[k]);
    return acc.value();
}

} // namespace exotic
