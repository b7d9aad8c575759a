#pragma once

// The inclusion map i from exotic coefficient arrays (coordinates in the
// frame {e_{a,k}}) to base-coordinate tensors and Fock vectors, the norm
// bound it satisfies, coefficient recovery through right contractions, and
// the grading shift for whole chaos expansions.
//
// Exotic-side objects are always CoefficientArray / ExoticFock; base-side
// objects are SymTensor / FockVector. i is the only bridge between them.

#include "exotic/exotic_basis.hpp"
#include "exotic/fock_space.hpp"
#include "exotic/graded_space.hpp"
#include "exotic/symmetric_tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

/// Coefficients b_{k_1..k_n} over nondecreasing exotic multi-indices.
class CoefficientArray {
public:
    CoefficientArray(std::size_t degree, std::size_t K_a) : t_(degree, K_a) {}
    explicit CoefficientArray(SymTensor t) : t_(std::move(t)) {}

    /// δ-array: 1 at the given (1-based) exotic multi-index.
    static CoefficientArray delta(std::size_t K_a, const MultiIndex& one_based)
    {
        CoefficientArray b(one_based.size(), K_a);
        MultiIndex idx;
        for (auto k : one_based) {
            if (k == 0 || k > K_a) throw std::out_of_range("CoefficientArray::delta: index out of range");
            idx.push_back(k - 1);
        }
        b.t_.set(idx, 1.0);
        return b;
    }

    [[nodiscard]] std::size_t degree() const noexcept { return t_.degree(); }
    [[nodiscard]] std::size_t K_a() const noexcept { return t_.dim(); }
    [[nodiscard]] const SymTensor& tensor() const noexcept { return t_; }
    [[nodiscard]] SymTensor& tensor() noexcept { return t_; }

    /// Σ over full tuples |b|.
    [[nodiscard]] double l1_mass() const
    {
        CompensatedSum acc;
        t_.for_each([&](const MultiIndex& idx, cplx v) { acc.add(detail::multiplicity(idx) * std::abs(v)); });
        return acc.value();
    }

    /// Σ over full tuples |b|² ∏ λ_{a,k_j}², the exotic grade-1 norm squared.
    [[nodiscard]] double weighted_l2_mass(const WeightFamily& exotic_weights) const
    {
        if (exotic_weights.K() != K_a()) throw std::invalid_argument("weighted_l2_mass: weight truncation mismatch");
        CompensatedSum acc;
        t_.for_each([&](const MultiIndex& idx, cplx v) {
            double f = detail::multiplicity(idx);
            for (auto k : idx) f *= exotic_weights.grade_factor(k + 1, 1.0);
            acc.add(f * std::norm(v));
        });
        return acc.value();
    }

    CoefficientArray& operator+=(const CoefficientArray& o)
    {
        t_ += o.t_;
        return *this;
    }
    CoefficientArray& operator*=(cplx c)
    {
        t_ *= c;
        return *this;
    }
    friend CoefficientArray operator+(CoefficientArray a, const CoefficientArray& b) { return a += b; }
    friend CoefficientArray operator*(cplx c, CoefficientArray a) { return a *= c; }

    friend bool operator==(const CoefficientArray&, const CoefficientArray&) = default;

private:
    SymTensor t_;
};

/// A chaos expansion in exotic coordinates (kernels are coefficient arrays).
class ExoticFock {
public:
    ExoticFock(std::size_t nmax, std::size_t K_a) : v_(nmax, K_a) {}
    explicit ExoticFock(FockVector v) : v_(std::move(v)) {}

    explicit ExoticFock(const std::vector<CoefficientArray>& kernels)
    {
        std::vector<SymTensor> ts;
        ts.reserve(kernels.size());
        for (const auto& b : kernels) ts.push_back(b.tensor());
        v_ = FockVector(std::move(ts));
    }

    static ExoticFock vacuum(std::size_t nmax, std::size_t K_a) { return ExoticFock(FockVector::vacuum(nmax, K_a)); }

    /// Exotic exponential vector of η given in exotic coordinates.
    static ExoticFock exponential(const GradedVector& eta, std::size_t nmax)
    {
        return ExoticFock(exponential_vector(eta, nmax));
    }

    [[nodiscard]] std::size_t nmax() const noexcept { return v_.nmax(); }
    [[nodiscard]] std::size_t K_a() const noexcept { return v_.dim(); }
    [[nodiscard]] CoefficientArray coefficients(std::size_t n) const { return CoefficientArray(v_.kernel(n)); }
    void set_coefficients(std::size_t n, const CoefficientArray& b) { v_.set_kernel(n, b.tensor()); }

    /// The underlying vector in exotic coordinates.
    [[nodiscard]] const FockVector& coordinates() const noexcept { return v_; }

    [[nodiscard]] double norm(double p, const WeightFamily& exotic_weights) const
    {
        return fock_norm(v_, p, exotic_weights);
    }

    ExoticFock& operator+=(const ExoticFock& o)
    {
        v_ += o.v_;
        return *this;
    }
    ExoticFock& operator*=(cplx c)
    {
        v_ *= c;
        return *this;
    }
    friend ExoticFock operator+(ExoticFock a, const ExoticFock& b) { return a += b; }
    friend ExoticFock operator*(cplx c, ExoticFock a) { return a *= c; }
    friend bool operator==(const ExoticFock&, const ExoticFock&) = default;

private:
    FockVector v_;
};

/// Σ over full exotic tuples of b · e_{a,k_1} ⊗ … ⊗ e_{a,k_n} in base
/// coordinates. The sum of symmetric terms is already symmetric.
inline SymTensor embed_tensor(const CoefficientArray& b, const ExoticFrame& frame)
{
    if (b.K_a() != frame.K_a()) throw std::invalid_argument("embed_tensor: coefficient size differs from frame K_a");
    const std::size_t n = b.degree();
    const std::size_t K = frame.K_a();
    if (n == 0) return SymTensor::scalar(b.tensor().coeffs()[0], frame.m_terms());

    // dense full-tuple copy of b, last index fastest
    std::size_t full = 1;
    for (std::size_t j = 0; j < n; ++j) full *= K;
    std::vector<cplx> dense(full);
    {
        MultiIndex idx(n, 0);
        for (std::size_t off = 0; off < full; ++off) {
            dense[off] = b.tensor().at(idx);
            for (std::size_t j = n; j-- > 0;) {
                if (++idx[j] < K) break;
                idx[j] = 0;
            }
        }
    }

    SymTensor out(n, frame.m_terms());
    MultiIndex k(n);
    out.transform([&](const MultiIndex& m, cplx& v) {
        CompensatedComplexSum acc;
        std::fill(k.begin(), k.end(), 0);
        for (std::size_t off = 0; off < full; ++off) {
            if (dense[off] != cplx{}) {
                cplx p = dense[off];
                for (std::size_t j = 0; j < n; ++j) p *= frame.coefficient(k[j], m[j]);
                acc.add(p);
            }
            for (std::size_t j = n; j-- > 0;) {
                if (++k[j] < K) break;
                k[j] = 0;
            }
        }
        v = acc.value();
    });
    return out;
}

/// Degree-wise i(φ) as a base-coordinate Fock vector of dimension M_terms.
inline FockVector embed_fock(const ExoticFock& phi, const ExoticFrame& frame)
{
    std::vector<SymTensor> kernels;
    kernels.reserve(phi.nmax() + 1);
    for (std::size_t n = 0; n <= phi.nmax(); ++n) kernels.push_back(embed_tensor(phi.coefficients(n), frame));
    return FockVector(std::move(kernels));
}

/// i(φ) held in factored form: the exotic expansion plus the frame. Its
/// S-transform at a base-coordinate ξ is the exotic S-transform at the
/// projection w_k = ⟨e_{a,k}, ξ⟩, so nothing of size M_terms^n is formed.
class EmbeddedFock {
public:
    EmbeddedFock(ExoticFock phi, std::shared_ptr<const ExoticFrame> frame)
        : phi_(std::move(phi)), frame_(std::move(frame))
    {
        if (!frame_) throw std::invalid_argument("EmbeddedFock: null frame");
        if (phi_.K_a() != frame_->K_a()) throw std::invalid_argument("EmbeddedFock: K_a mismatch");
    }

    [[nodiscard]] const ExoticFock& preimage() const noexcept { return phi_; }
    [[nodiscard]] const ExoticFrame& frame() const noexcept { return *frame_; }
    [[nodiscard]] const std::shared_ptr<const ExoticFrame>& frame_ptr() const noexcept { return frame_; }
    [[nodiscard]] std::size_t dim() const noexcept { return frame_->m_terms(); }
    [[nodiscard]] std::size_t nmax() const noexcept { return phi_.nmax(); }

    /// Base-coordinate FockVector; memory grows like M_terms^Nmax.
    [[nodiscard]] FockVector materialize() const { return embed_fock(phi_, *frame_); }

private:
    ExoticFock phi_;
    std::shared_ptr<const ExoticFrame> frame_;
};

inline cplx s_transform(const EmbeddedFock& big_phi, const GradedVector& xi)
{
    return s_transform(big_phi.preimage().coordinates(), big_phi.frame().project(xi));
}

inline cplx s_second_derivative(const EmbeddedFock& big_phi, const GradedVector& xi, const GradedVector& eta)
{
    const auto& fr = big_phi.frame();
    return s_second_derivative(big_phi.preimage().coordinates(), fr.project(xi), fr.project(eta));
}

struct GradingShift {
    double p = 0.0;
    double M = 0.0;              ///< max_k |e_{a,k}|_{−p}
    double exotic_sum = 0.0;     ///< Σ_{k≤K_a} λ_{a,k}^{−2}
    double product = 0.0;        ///< M · exotic_sum^{1/2}
    double lambda1 = 0.0;        ///< base λ_1
    int m = 0;                   ///< smallest m ≥ 0 with λ_1^m ≥ product
    double target_grade = 0.0;   ///< −(p + m)
};

inline GradingShift grading_shift(const ExoticFrame& frame, double p, const WeightFamily& base_weights)
{
    GradingShift g;
    g.p = p;
    g.M = check_C2(frame, p, base_weights).M;
    g.exotic_sum = frame.exotic_weights().inverse_power_sum(1.0);
    g.product = g.M * std::sqrt(g.exotic_sum);
    g.lambda1 = base_weights.lambda(1);
    int m = 0;
    if (g.product > 1.0) m = static_cast<int>(std::ceil(std::log(g.product) / std::log(g.lambda1)));
    while (m > 0 && std::pow(g.lambda1, m - 1) >= g.product) --m;
    while (std::pow(g.lambda1, m) < g.product) ++m;
    g.m = m;
    g.target_grade = -(p + m);
    return g;
}

struct EmbedReport {
    FockVector embedded;
    GradingShift shift;
    double embedded_norm = 0.0; ///< ‖i(φ)‖ at grade −(p+m), base weights
    double exotic_norm = 0.0;   ///< ‖φ‖ at exotic grade 1
    bool holds = false;
};

/// embed_fock plus the grading shift and the norm comparison it guarantees.
inline EmbedReport embed_fock_checked(const ExoticFock& phi, const ExoticFrame& frame, double p,
                                      const WeightFamily& base_weights)
{
    EmbedReport r{embed_fock(phi, frame), grading_shift(frame, p, base_weights)};
    r.embedded_norm = fock_norm(r.embedded, r.shift.target_grade, base_weights);
    r.exotic_norm = phi.norm(1.0, frame.exotic_weights());
    r.holds = r.embedded_norm <= r.exotic_norm * (1.0 + 1e-12);
    return r;
}

struct Lemma1Record {
    std::size_t degree = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;

    [[nodiscard]] double slack() const { return rhs - lhs; }
};

/// |i(b)|_{−p} ≤ M^n (Σ λ_{a,k}^{−2})^{n/2} |b|_{exotic,1}, with M the C2 constant at p.
inline Lemma1Record lemma1_check(const CoefficientArray& b, const ExoticFrame& frame, double p, double M,
                                 const WeightFamily& base_weights)
{
    if (!(p > 0.0)) throw std::invalid_argument("lemma1_check: p must be positive");
    Lemma1Record r;
    r.degree = b.degree();
    r.lhs = tensor_norm_p(embed_tensor(b, frame), -p, base_weights);
    const auto n = static_cast<double>(b.degree());
    const double s = frame.exotic_weights().inverse_power_sum(1.0);
    r.rhs = std::pow(M, n) * std::pow(s, n / 2.0) * std::sqrt(b.weighted_l2_mass(frame.exotic_weights()));
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

inline Lemma1Record lemma1_check(const CoefficientArray& b, const ExoticFrame& frame, double p,
                                 const WeightFamily& base_weights)
{
    return lemma1_check(b, frame, p, check_C2(frame, p, base_weights).M, base_weights);
}

/// right_contract(T, e_j) for a 0-based base label j, without scanning all of e_j.
inline SymTensor slice_last(const SymTensor& t, std::size_t j)
{
    if (t.degree() == 0) throw std::invalid_argument("slice_last: degree-0 tensor has no slot");
    if (j >= t.dim()) throw std::out_of_range("slice_last: index out of range");
    SymTensor out(t.degree() - 1, t.dim());
    out.transform([&](const MultiIndex& idx, cplx& v) { v = t.at_sorted(detail::merged(idx, j)); });
    return out;
}

namespace detail {

/// Dense full-tuple coefficients (last index fastest) of a base tensor known
/// to lie in the span of the frame, by peeling one slot at a time: right
/// contraction with every e_j, recursive recovery, then a least-squares
/// solve of Σ_k b_{·,k} ⟨e_{a,k}, e_j⟩ = c_j for the last exotic index.
inline std::vector<cplx> recover_dense(const SymTensor& t, const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd, std::size_t K)
{
    if (t.degree() == 0) return {t.coeffs()[0]};
    const std::size_t M = t.dim();
    std::size_t sub = 1;
    for (std::size_t j = 0; j + 1 < t.degree(); ++j) sub *= K;
    Eigen::MatrixXcd rhs(M, sub);
    for (std::size_t j = 0; j < M; ++j) {
        const auto c = recover_dense(slice_last(t, j), svd, K);
        for (std::size_t s = 0; s < sub; ++s) rhs(j, s) = c[s];
    }
    const Eigen::MatrixXcd x = svd.solve(rhs); // K × sub
    std::vector<cplx> out(sub * K);
    for (std::size_t s = 0; s < sub; ++s) {
        for (std::size_t k = 0; k < K; ++k) out[s * K + k] = x(k, s);
    }
    return out;
}

} // namespace detail

/// Inverts i on its range: recovers b from a base-coordinate tensor.
inline CoefficientArray recover_coefficients(const SymTensor& t, const ExoticFrame& frame)
{
    if (t.dim() != frame.m_terms()) throw std::invalid_argument("recover_coefficients: dimension mismatch");
    const Eigen::MatrixXcd At = frame.coefficient_matrix().transpose(); // M × K_a, column k is e_{a,k}
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(At, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto dense = detail::recover_dense(t, svd, frame.K_a());
    CoefficientArray b(t.degree(), frame.K_a());
    const std::size_t K = frame.K_a();
    b.tensor().transform([&](const MultiIndex& idx, cplx& v) {
        std::size_t off = 0;
        for (auto k : idx) off = off * K + k;
        v = dense[off];
    });
    return b;
}

/// Coefficient array with entries uniform in [−1,1] + i[−1,1].
template <class Engine>
CoefficientArray random_coefficients(std::size_t degree, std::size_t K_a, Engine& eng)
{
    CoefficientArray b(degree, K_a);
    for (auto& c : b.tensor().coeffs()) c = {uniform(eng, -1.0, 1.0), uniform(eng, -1.0, 1.0)};
    return b;
}

struct InjectivityTrial {
    double input_norm = 0.0;     ///< grade-0 exotic norm of b
    double embedded_norm = 0.0;  ///< grade-0 base norm of i(b)
    double relative_error = 0.0; ///< |b − recovered| / |b|, grade 0 exotic
};

struct InjectivityReport {
    std::size_t degree = 0;
    std::vector<InjectivityTrial> trials;
    double condition_number = 0.0; ///< σ_max/σ_min of the coefficient matrix
    double threshold = 0.0;
    double max_relative_error = 0.0;
    double min_embedded_norm = 0.0;
    bool all_nonzero = false;
};

/// Random nonzero b of the given degree: i(b) must be nonzero and b must be
/// recoverable from i(b) by right contractions.
template <class Engine>
InjectivityReport injectivity_probe(const ExoticFrame& frame, std::size_t degree, std::size_t trials, Engine& eng,
                                    double threshold = 1e-12)
{
    if (trials == 0) throw std::invalid_argument("injectivity_probe: trials must be positive");
    InjectivityReport r;
    r.degree = degree;
    r.threshold = threshold;
    const auto c3 = check_C3_finite(frame);
    r.condition_number = c3.singular_values.front() / c3.sigma_min;
    const auto unit = WeightFamily::standard(frame.K_a());
    const auto base = WeightFamily::standard(frame.m_terms());
    r.all_nonzero = true;
    r.min_embedded_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trials; ++i) {
        auto b = random_coefficients(degree, frame.K_a(), eng);
        InjectivityTrial tr;
        tr.input_norm = tensor_norm_p(b.tensor(), 0.0, unit);
        const auto t = embed_tensor(b, frame);
        tr.embedded_norm = tensor_norm_p(t, 0.0, base);
        const auto back = recover_coefficients(t, frame);
        tr.relative_error = tensor_norm_p(back.tensor() - b.tensor(), 0.0, unit) / tr.input_norm;
        r.all_nonzero = r.all_nonzero && tr.embedded_norm > threshold * tr.input_norm;
        r.max_relative_error = std::max(r.max_relative_error, tr.relative_error);
        r.min_embedded_norm = std::min(r.min_embedded_norm, tr.embedded_norm);
        r.trials.push_back(tr);
    }
    return r;
}

} // namespace exotic
