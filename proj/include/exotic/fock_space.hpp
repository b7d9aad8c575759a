#pragma once

// Finite chaos expansions φ = (f_0, …, f_Nmax) with factorial-weighted
// graded norms, exponential vectors, the bilinear duality and the
// S-transform with its second derivative.

#include "exotic/graded_space.hpp"
#include "exotic/symmetric_tensor.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

inline double factorial(std::size_t n) noexcept { return std::tgamma(static_cast<double>(n) + 1.0); }

/// One type for both test functionals and distributions; which slot of the
/// triple a vector belongs to is read off from which graded norms are finite.
class FockVector {
public:
    FockVector() : FockVector(0, 1) {}

    FockVector(std::size_t nmax, std::size_t dim) : dim_(dim)
    {
        kernels_.reserve(nmax + 1);
        for (std::size_t n = 0; n <= nmax; ++n) kernels_.emplace_back(n, dim);
    }

    explicit FockVector(std::vector<SymTensor> kernels) : kernels_(std::move(kernels))
    {
        if (kernels_.empty()) throw std::invalid_argument("FockVector: needs at least the degree-0 kernel");
        dim_ = kernels_[0].dim();
        for (std::size_t n = 0; n < kernels_.size(); ++n) {
            if (kernels_[n].degree() != n || kernels_[n].dim() != dim_) {
                throw std::invalid_argument("FockVector: kernel " + std::to_string(n) +
                                            " has inconsistent degree or dimension");
            }
        }
    }

    /// (1, 0, …, 0).
    static FockVector vacuum(std::size_t nmax, std::size_t dim)
    {
        FockVector v(nmax, dim);
        v.kernels_[0].coeffs()[0] = 1.0;
        return v;
    }

    [[nodiscard]] std::size_t nmax() const noexcept { return kernels_.size() - 1; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<SymTensor>& kernels() const noexcept { return kernels_; }
    [[nodiscard]] const SymTensor& kernel(std::size_t n) const { return kernels_.at(n); }

    void set_kernel(std::size_t n, SymTensor t)
    {
        if (n > nmax()) {
            throw std::invalid_argument("FockVector: degree " + std::to_string(n) + " exceeds Nmax " +
                                        std::to_string(nmax()));
        }
        if (t.degree() != n || t.dim() != dim_) throw std::invalid_argument("FockVector: kernel shape mismatch");
        kernels_[n] = std::move(t);
    }

    [[nodiscard]] bool is_zero() const noexcept
    {
        for (const auto& k : kernels_) {
            if (!k.is_zero()) return false;
        }
        return true;
    }

    FockVector& operator+=(const FockVector& o)
    {
        require_same_shape(o, "FockVector::+=");
        for (std::size_t n = 0; n < kernels_.size(); ++n) kernels_[n] += o.kernels_[n];
        return *this;
    }

    FockVector& operator-=(const FockVector& o)
    {
        require_same_shape(o, "FockVector::-=");
        for (std::size_t n = 0; n < kernels_.size(); ++n) kernels_[n] -= o.kernels_[n];
        return *this;
    }

    FockVector& operator*=(cplx c)
    {
        for (auto& k : kernels_) k *= c;
        return *this;
    }

    friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
    friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
    friend FockVector operator*(cplx c, FockVector v) { return v *= c; }

    void require_same_shape(const FockVector& o, const char* where) const
    {
        if (o.dim_ != dim_ || o.nmax() != nmax()) {
            throw std::invalid_argument(std::string(where) + ": Fock vectors differ in Nmax or dimension");
        }
    }

    friend bool operator==(const FockVector&, const FockVector&) = default;

private:
    std::size_t dim_ = 1;
    std::vector<SymTensor> kernels_;
};

/// ‖φ‖_p = sqrt(Σ_n n! |f_n|_p²).
inline double fock_norm(const FockVector& phi, double p, const WeightFamily& w)
{
    CompensatedSum acc;
    for (std::size_t n = 0; n <= phi.nmax(); ++n) {
        const double t = tensor_norm_p(phi.kernel(n), p, w);
        acc.add(factorial(n) * t * t);
    }
    return std::sqrt(acc.value());
}

/// φ_ξ = (1, ξ, ξ^{⊗2}/2!, …, ξ^{⊗Nmax}/Nmax!).
inline FockVector exponential_vector(const GradedVector& xi, std::size_t nmax)
{
    std::vector<SymTensor> kernels;
    kernels.reserve(nmax + 1);
    for (std::size_t n = 0; n <= nmax; ++n) {
        SymTensor t = sym_power(xi, static_cast<long>(n));
        t *= 1.0 / factorial(n);
        kernels.push_back(std::move(t));
    }
    return FockVector(std::move(kernels));
}

/// Upper bound on Σ_{n>Nmax} r^n / n!, namely r^{Nmax+1} e^r / (Nmax+1)!.
inline double exponential_tail_bound(double r, std::size_t nmax)
{
    const double n1 = static_cast<double>(nmax) + 1.0;
    return std::exp(n1 * std::log(std::max(r, 0.0)) + r - std::lgamma(n1 + 1.0));
}

/// ⟨⟨Φ, φ⟩⟩ = Σ_n n! ⟨F_n, f_n⟩ over the common degrees.
inline cplx duality(const FockVector& big_phi, const FockVector& phi)
{
    if (big_phi.dim() != phi.dim()) throw std::invalid_argument("duality: dimension mismatch");
    const std::size_t top = std::min(big_phi.nmax(), phi.nmax());
    CompensatedComplexSum acc;
    for (std::size_t n = 0; n <= top; ++n) acc.add(factorial(n) * full_pair(big_phi.kernel(n), phi.kernel(n)));
    return acc.value();
}

/// SΦ(ξ) = Σ_n ⟨f_n, ξ^{⊗n}⟩.
inline cplx s_transform(const FockVector& big_phi, const GradedVector& xi)
{
    if (xi.dim() != big_phi.dim()) throw std::invalid_argument("s_transform: dimension mismatch");
    CompensatedComplexSum acc;
    for (const auto& f : big_phi.kernels()) acc.add(evaluate_polynomial(f, xi));
    return acc.value();
}

/// (SΦ)''(ξ) as a degree-2 tensor: Σ_n (n+2)(n+1) f_{n+2} contracted n times with ξ.
/// Evaluated by Horner's scheme from the top degree down.
inline SymTensor second_derivative_form(const FockVector& big_phi, const GradedVector& xi)
{
    if (xi.dim() != big_phi.dim()) throw std::invalid_argument("second_derivative_form: dimension mismatch");
    const std::size_t top = big_phi.nmax();
    if (top < 2) return SymTensor(2, big_phi.dim());
    auto coeff = [](std::size_t d) { return static_cast<double>(d) * static_cast<double>(d - 1); };
    SymTensor acc = coeff(top) * big_phi.kernel(top);
    for (std::size_t d = top; d-- > 2;) {
        acc = right_contract(acc, xi);
        acc += coeff(d) * big_phi.kernel(d);
    }
    return acc;
}

/// ⟨(SΦ)''(ξ), η ⊗ η⟩.
inline cplx s_second_derivative(const FockVector& big_phi, const GradedVector& xi, const GradedVector& eta)
{
    if (eta.dim() != big_phi.dim()) throw std::invalid_argument("s_second_derivative: dimension mismatch");
    return evaluate_polynomial(second_derivative_form(big_phi, xi), eta);
}

} // namespace exotic
