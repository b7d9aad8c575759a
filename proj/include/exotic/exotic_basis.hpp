#pragma once

// Weyl-sum exotic frame
//     e_{a,k} = sqrt(2a−1) Σ_m exp(i2π q_k r_m) m^{a−1} e_m,
// its Cesàro inner products of order 2a−1, numerical checks of the three
// frame conditions, and the exotic trace τ_a.

#include "exotic/cesaro.hpp"
#include "exotic/graded_space.hpp"
#include "exotic/symmetric_tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend auto operator<=>(const Rational& a, const Rational& b) noexcept
    {
        return a.num * b.den <=> b.num * a.den;
    }
    friend bool operator==(const Rational& a, const Rational& b) noexcept { return a.num * b.den == b.num * a.den; }
};

/// First count elements of [0,1) ∩ ℚ: ascending denominator, then ascending
/// numerator, reduced fractions only: 0, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, …
inline std::vector<Rational> enumerate_rationals(std::size_t count)
{
    if (count == 0) throw std::invalid_argument("enumerate_rationals: count must be positive");
    std::vector<Rational> out{{0, 1}};
    for (std::int64_t den = 2; out.size() < count; ++den) {
        for (std::int64_t num = 1; num < den && out.size() < count; ++num) {
            if (std::gcd(num, den) == 1) out.push_back({num, den});
        }
    }
    return out;
}

/// r_1, …, r_M = 0, 1, −1, 2, −2, …
inline std::vector<std::int64_t> signed_integers(std::size_t count)
{
    if (count == 0) throw std::invalid_argument("signed_integers: count must be positive");
    std::vector<std::int64_t> out(count);
    for (std::size_t m = 1; m <= count; ++m) {
        const auto j = static_cast<std::int64_t>(m / 2);
        out[m - 1] = (m % 2 == 0) ? j : -j;
    }
    return out;
}

/// exp(i2π q r) with the argument reduced exactly modulo 1 before scaling.
inline cplx rational_phase(const Rational& q, std::int64_t r)
{
    std::int64_t step = (q.num * r) % q.den;
    if (step < 0) step += q.den;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(step) / static_cast<double>(q.den);
    return std::polar(1.0, angle);
}

inline void require_admissible_a(double a)
{
    if (!(a > 0.5)) throw std::invalid_argument("exotic frame parameter a must exceed 1/2 (got " + std::to_string(a) + ")");
}

/// Coefficients of one Weyl vector with frequency q, truncated at m_terms.
inline GradedVector weyl_vector(double a, const Rational& q, std::size_t m_terms)
{
    require_admissible_a(a);
    const double amp = std::sqrt(2.0 * a - 1.0);
    const auto r = signed_integers(m_terms);
    GradedVector v(m_terms);
    for (std::size_t m = 1; m <= m_terms; ++m) {
        v[m - 1] = amp * std::pow(static_cast<double>(m), a - 1.0) * rational_phase(q, r[m - 1]);
    }
    return v;
}

/// e_{a,k} with q_k from the fixed rational enumeration (k is 1-based).
inline GradedVector weyl_vector(double a, std::size_t k, std::size_t m_terms)
{
    if (k == 0) throw std::invalid_argument("weyl_vector: k is 1-based");
    return weyl_vector(a, enumerate_rationals(k).back(), m_terms);
}

class ExoticFrame {
public:
    /// Validated construction: a > 1/2, q_k from the fixed enumeration.
    ExoticFrame(double a, std::size_t K_a, std::size_t m_terms, WeightFamily exotic_weights)
        : ExoticFrame(a, enumerate_rationals(K_a), m_terms, std::move(exotic_weights), true)
    {
    }

    /// Default exotic weights λ_{a,k} = k + 1.
    ExoticFrame(double a, std::size_t K_a, std::size_t m_terms)
        : ExoticFrame(a, K_a, m_terms, WeightFamily::standard(K_a))
    {
    }

    /// Skips the distinct-frequency check. Negative tests only.
    static ExoticFrame unchecked(double a, std::vector<Rational> q, std::size_t m_terms, WeightFamily exotic_weights)
    {
        return ExoticFrame(a, std::move(q), m_terms, std::move(exotic_weights), false);
    }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double order() const noexcept { return 2.0 * a_ - 1.0; }
    [[nodiscard]] std::size_t K_a() const noexcept { return q_.size(); }
    [[nodiscard]] std::size_t m_terms() const noexcept { return m_terms_; }
    [[nodiscard]] const std::vector<Rational>& frequencies() const noexcept { return q_; }
    [[nodiscard]] const std::vector<GradedVector>& vectors() const noexcept { return vectors_; }
    [[nodiscard]] const WeightFamily& exotic_weights() const noexcept { return exotic_weights_; }

    /// e_{a,k}, 1-based.
    [[nodiscard]] const GradedVector& e(std::size_t k) const { return vectors_.at(k - 1); }

    /// ⟨e_{a,k}, e_m⟩ with 0-based k, m.
    [[nodiscard]] cplx coefficient(std::size_t k, std::size_t m) const { return vectors_[k][m]; }

    /// w_k = ⟨e_{a,k}, ξ⟩ (bilinear) for a base-coordinate ξ.
    [[nodiscard]] GradedVector project(const GradedVector& xi) const
    {
        if (xi.dim() != m_terms_) throw std::invalid_argument("ExoticFrame::project: dimension mismatch");
        GradedVector w(K_a());
        for (std::size_t k = 0; k < K_a(); ++k) w[k] = bilinear_pair(vectors_[k], xi);
        return w;
    }

    /// Σ_k c_k e_{a,k} in base coordinates.
    [[nodiscard]] GradedVector combine(const GradedVector& c) const
    {
        if (c.dim() != K_a()) throw std::invalid_argument("ExoticFrame::combine: dimension mismatch");
        GradedVector out(m_terms_);
        for (std::size_t m = 0; m < m_terms_; ++m) {
            CompensatedComplexSum acc;
            for (std::size_t k = 0; k < K_a(); ++k) acc.add(c[k] * vectors_[k][m]);
            out[m] = acc.value();
        }
        return out;
    }

    /// K_a × M_terms matrix with rows e_{a,k}.
    [[nodiscard]] Eigen::MatrixXcd coefficient_matrix() const
    {
        Eigen::MatrixXcd A(K_a(), m_terms_);
        for (std::size_t k = 0; k < K_a(); ++k) {
            for (std::size_t m = 0; m < m_terms_; ++m) A(k, m) = vectors_[k][m];
        }
        return A;
    }

    [[nodiscard]] bool frequencies_distinct() const
    {
        std::set<std::pair<std::int64_t, std::int64_t>> seen;
        for (const auto& q : q_) {
            const auto g = std::gcd(q.num, q.den);
            if (!seen.insert({q.num / g, q.den / g}).second) return false;
        }
        return true;
    }

private:
    ExoticFrame(double a, std::vector<Rational> q, std::size_t m_terms, WeightFamily exotic_weights, bool validate)
        : a_(a), m_terms_(m_terms), q_(std::move(q)), exotic_weights_(std::move(exotic_weights))
    {
        require_admissible_a(a_);
        if (q_.empty()) throw std::invalid_argument("ExoticFrame: K_a must be positive");
        if (m_terms_ == 0) throw std::invalid_argument("ExoticFrame: M_terms must be positive");
        if (exotic_weights_.K() != q_.size()) {
            throw std::invalid_argument("ExoticFrame: exotic weight truncation must equal K_a");
        }
        for (const auto& r : q_) {
            if (r.den <= 0 || r.num < 0 || r.num >= r.den) throw std::invalid_argument("ExoticFrame: q_k must lie in [0,1)");
        }
        if (validate && !frequencies_distinct()) throw std::invalid_argument("ExoticFrame: q_k must be distinct");
        vectors_.reserve(q_.size());
        for (const auto& r : q_) vectors_.push_back(weyl_vector(a_, r, m_terms_));
    }

    double a_;
    std::size_t m_terms_;
    std::vector<Rational> q_;
    std::vector<GradedVector> vectors_;
    WeightFamily exotic_weights_;
};

/// v_j = N_j^{−s} Σ_{k≤N_j} conj(z_k) w_k along the ladder.
inline CesaroEstimate cesaro_pair(const GradedVector& z, const GradedVector& w, double s, std::vector<std::size_t> ladder)
{
    z.require_same_dim(w, "cesaro_pair");
    detail::validate_ladder(ladder, z.dim());
    std::vector<cplx> terms(ladder.back());
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = std::conj(z[k]) * w[k];
    return cesaro_from_terms(terms, s, std::move(ladder));
}

struct C1Report {
    std::size_t N = 0;
    double tol = 0.0;
    Eigen::MatrixXcd means;      ///< Cesàro means at N
    Eigen::MatrixXd deviations;  ///< |mean − δ_{k1,k2}|
    bool pass = false;

    [[nodiscard]] double max_deviation() const { return deviations.size() ? deviations.maxCoeff() : 0.0; }
};

namespace detail {

inline Eigen::MatrixXcd cesaro_gram(const ExoticFrame& frame, std::size_t N, bool conjugate_first)
{
    if (N == 0 || N > frame.m_terms()) {
        throw std::invalid_argument("Cesàro Gram: N must lie in [1, M_terms] (N = " + std::to_string(N) + ")");
    }
    const std::size_t K = frame.K_a();
    const double scale = std::pow(static_cast<double>(N), -frame.order());
    Eigen::MatrixXcd g(K, K);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            CompensatedComplexSum acc;
            const auto& zi = frame.vectors()[i];
            const auto& zj = frame.vectors()[j];
            for (std::size_t m = 0; m < N; ++m) acc.add((conjugate_first ? std::conj(zi[m]) : zi[m]) * zj[m]);
            g(i, j) = acc.value() * scale;
        }
    }
    return g;
}

} // namespace detail

/// Deviation of the order-(2a−1) Cesàro Gram matrix at N from the identity.
inline C1Report check_C1(const ExoticFrame& frame, std::size_t N, double tol)
{
    C1Report r;
    r.N = N;
    r.tol = tol;
    r.means = detail::cesaro_gram(frame, N, true);
    const auto K = static_cast<Eigen::Index>(frame.K_a());
    r.deviations.resize(K, K);
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j < K; ++j) r.deviations(i, j) = std::abs(r.means(i, j) - (i == j ? 1.0 : 0.0));
    }
    r.pass = r.max_deviation() <= tol;
    return r;
}

/// Bilinear (unconjugated) Cesàro Gram matrix N^{−s} Σ_m e_{a,i,m} e_{a,j,m}.
/// This is what the exotic Laplacian sees; for the Weyl frame it tends to
/// the permutation pairing q with 1 − q rather than to the identity.
inline Eigen::MatrixXcd bilinear_gram(const ExoticFrame& frame, std::size_t N)
{
    return detail::cesaro_gram(frame, N, false);
}

struct C2Report {
    double p = 0.0;
    double M = 0.0;                  ///< max_k |e_{a,k}|_{−p}
    std::vector<double> norms;       ///< |e_{a,k}|_{−p} per k
    double analytic_order_norm = 0.0; ///< sqrt((2a−1) Σ_m m^{2a−2} λ_m^{−2(2a−1)}), the bound at p = 2a−1
};

/// M = max_k |e_{a,k}|_{−p} in base weights, plus the closed-form norm at p = 2a−1.
inline C2Report check_C2(const ExoticFrame& frame, double p, const WeightFamily& base_weights)
{
    if (!(p > 0.0)) throw std::invalid_argument("check_C2: p must be positive");
    if (base_weights.K() != frame.m_terms()) {
        throw std::invalid_argument("check_C2: base weight truncation must equal M_terms");
    }
    C2Report r;
    r.p = p;
    for (const auto& v : frame.vectors()) {
        r.norms.push_back(norm_p(v, -p, base_weights));
        r.M = std::max(r.M, r.norms.back());
    }
    const double s = frame.order();
    CompensatedSum acc;
    for (std::size_t m = 1; m <= frame.m_terms(); ++m) {
        acc.add(std::pow(static_cast<double>(m), 2.0 * frame.a() - 2.0) * std::pow(base_weights.lambda(m), -2.0 * s));
    }
    r.analytic_order_norm = std::sqrt(s * acc.value());
    return r;
}

inline C2Report check_C2(const ExoticFrame& frame, double p)
{
    return check_C2(frame, p, WeightFamily::standard(frame.m_terms()));
}

struct C3Report {
    std::vector<double> singular_values; ///< descending
    double sigma_min = 0.0;
};

/// Smallest singular value of the K_a × M_terms coefficient matrix; positive
/// certifies linear independence of the truncated family.
inline C3Report check_C3_finite(const ExoticFrame& frame)
{
    if (frame.K_a() > frame.m_terms()) throw std::invalid_argument("check_C3_finite: K_a exceeds M_terms");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(frame.coefficient_matrix());
    C3Report r;
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) r.singular_values.push_back(sv(i));
    r.sigma_min = r.singular_values.back();
    return r;
}

struct ExoticTrace {
    TraceTensor exotic;                ///< identity array of size K_a
    std::optional<TraceTensor> base;   ///< Σ e_{a,k} ⊗ e_{a,k} over M_terms, when it fits in memory
    double norm_minus1 = 0.0;          ///< |τ_a| in the exotic grade −1: sqrt(Σ λ_{a,k}^{−4})
    double norm_minus_half = 0.0;      ///< grade −1/2: sqrt(Σ λ_{a,k}^{−2})
};

/// Σ_k e_{a,k} ⊗ e_{a,k} expanded in base coordinates.
inline TraceTensor exotic_trace_in_base(const ExoticFrame& frame)
{
    SymTensor t(2, frame.m_terms());
    t.transform([&](const MultiIndex& idx, cplx& v) {
        CompensatedComplexSum acc;
        for (std::size_t k = 0; k < frame.K_a(); ++k) acc.add(frame.coefficient(k, idx[0]) * frame.coefficient(k, idx[1]));
        v = acc.value();
    });
    return {std::move(t), TraceKind::ExoticInBase};
}

/// Base-coordinate expansion is skipped above this many stored entries.
inline constexpr std::size_t kMaxBaseTraceEntries = std::size_t{1} << 22;

inline ExoticTrace exotic_trace(const ExoticFrame& frame, bool with_base = true)
{
    ExoticTrace tr;
    tr.exotic = {identity_trace_tensor(frame.K_a()), TraceKind::ExoticCoordinates};
    if (with_base && SymTensor::storage_size(2, frame.m_terms()) <= kMaxBaseTraceEntries) {
        tr.base = exotic_trace_in_base(frame);
    }
    tr.norm_minus1 = tensor_norm_p(tr.exotic.tensor, -1.0, frame.exotic_weights());
    tr.norm_minus_half = tensor_norm_p(tr.exotic.tensor, -0.5, frame.exotic_weights());
    return tr;
}

} // namespace exotic
