#pragma once

// Gross Laplacians on chaos expansions and the exotic Laplacian realized as
// the Cesàro mean of diagonal second S-transform derivatives,
//     Δ̃ SΦ(ξ) = lim_N N^{−(2a−1)} Σ_{k≤N} ⟨(SΦ)''(ξ), e_k ⊗ e_k⟩.
// S^{-1} is never taken numerically; for embedded inputs Φ = i(φ) the
// reconstruction is i(Δ_{G,2a−1} φ).

#include "exotic/cesaro.hpp"
#include "exotic/embedding.hpp"
#include "exotic/exotic_basis.hpp"
#include "exotic/fock_space.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

/// Kernel n of the output is (n+2)(n+1) τ ⊗̂² f_{n+2}; the top two degrees vanish.
inline FockVector gross_laplacian(const FockVector& phi, const TraceTensor& tau)
{
    if (tau.tensor.degree() != 2 || tau.tensor.dim() != phi.dim()) {
        throw std::invalid_argument("gross_laplacian: trace and vector live over different dimensions");
    }
    FockVector out(phi.nmax(), phi.dim());
    for (std::size_t n = 0; n + 2 <= phi.nmax(); ++n) {
        SymTensor k = contract_2m(phi.kernel(n + 2), tau, 1);
        k *= static_cast<double>((n + 2) * (n + 1));
        out.set_kernel(n, std::move(k));
    }
    return out;
}

/// Δ_{G,2a−1} in exotic coordinates, where τ_a is the identity array.
inline ExoticFock gross_laplacian(const ExoticFock& phi, const ExoticFrame& frame)
{
    if (phi.K_a() != frame.K_a()) throw std::invalid_argument("gross_laplacian: K_a mismatch");
    const TraceTensor tau{identity_trace_tensor(frame.K_a()), TraceKind::ExoticCoordinates};
    return ExoticFock(gross_laplacian(phi.coordinates(), tau));
}

/// ⟨(SΦ)''(ξ), e_k ⊗ e_k⟩ for k = 1..N.
inline std::vector<cplx> diagonal_second_derivatives(const FockVector& big_phi, const GradedVector& xi, std::size_t N)
{
    if (N > big_phi.dim()) throw std::invalid_argument("diagonal_second_derivatives: N exceeds dimension");
    const SymTensor g = second_derivative_form(big_phi, xi);
    std::vector<cplx> out(N);
    for (std::size_t k = 0; k < N; ++k) out[k] = g.at_sorted(std::vector<std::size_t>{k, k});
    return out;
}

/// Factored route: the exotic second-derivative form at the projection of ξ,
/// evaluated on the base column (⟨e_{a,1}, e_k⟩, …, ⟨e_{a,K_a}, e_k⟩).
inline std::vector<cplx> diagonal_second_derivatives(const EmbeddedFock& big_phi, const GradedVector& xi, std::size_t N)
{
    const auto& fr = big_phi.frame();
    if (N > fr.m_terms()) throw std::invalid_argument("diagonal_second_derivatives: N exceeds M_terms");
    const SymTensor g = second_derivative_form(big_phi.preimage().coordinates(), fr.project(xi));
    std::vector<cplx> out(N);
    GradedVector column(fr.K_a());
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t i = 0; i < fr.K_a(); ++i) column[i] = fr.coefficient(i, k);
        out[k] = evaluate_polynomial(g, column);
    }
    return out;
}

/// Cesàro ladder of order s for the exotic Laplacian of SΦ at ξ.
template <class Functional>
CesaroEstimate exotic_laplacian_at(const Functional& big_phi, const GradedVector& xi, double s,
                                   std::vector<std::size_t> ladder)
{
    if (ladder.empty()) throw std::invalid_argument("exotic_laplacian_at: empty ladder");
    detail::validate_ladder(ladder, big_phi.dim());
    const auto terms = diagonal_second_derivatives(big_phi, xi, ladder.back());
    return cesaro_from_terms(terms, s, std::move(ladder));
}

struct TestPoint {
    std::string label;
    GradedVector xi;
};

struct ExoticLaplacianReport {
    std::vector<std::string> labels;
    std::vector<CesaroEstimate> estimates;
    std::vector<bool> in_domain;                 ///< ladder convergence verdict per point
    std::optional<EmbeddedFock> reconstruction;  ///< i(Δ_{G,2a−1} φ) when φ is known
    std::vector<cplx> closed_form;               ///< S(reconstruction)(ξ)
    std::vector<double> discrepancy;             ///< |raw top value − closed form|
};

namespace detail {

template <class Functional>
ExoticLaplacianReport exotic_laplacian_impl(const Functional& big_phi, double s, const std::vector<TestPoint>& points,
                                            const std::vector<std::size_t>& ladder)
{
    if (points.empty()) throw std::invalid_argument("exotic_laplacian: no test points");
    ExoticLaplacianReport r;
    for (const auto& tp : points) {
        r.labels.push_back(tp.label);
        r.estimates.push_back(exotic_laplacian_at(big_phi, tp.xi, s, ladder));
        r.in_domain.push_back(r.estimates.back().converged());
    }
    return r;
}

inline void attach_reconstruction(ExoticLaplacianReport& r, EmbeddedFock recon, const std::vector<TestPoint>& points)
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        r.closed_form.push_back(s_transform(recon, points[i].xi));
        r.discrepancy.push_back(std::abs(r.estimates[i].raw_top() - r.closed_form.back()));
    }
    r.reconstruction = std::move(recon);
}

} // namespace detail

/// Estimates only; no S-inversion is attempted for a bare base vector.
inline ExoticLaplacianReport exotic_laplacian(const FockVector& big_phi, const ExoticFrame& frame,
                                              const std::vector<TestPoint>& points,
                                              const std::vector<std::size_t>& ladder)
{
    return detail::exotic_laplacian_impl(big_phi, frame.order(), points, ladder);
}

/// Base vector with a known exotic preimage φ (Φ = i(φ)).
inline ExoticLaplacianReport exotic_laplacian(const FockVector& big_phi, const ExoticFock& preimage,
                                              std::shared_ptr<const ExoticFrame> frame,
                                              const std::vector<TestPoint>& points,
                                              const std::vector<std::size_t>& ladder)
{
    auto r = detail::exotic_laplacian_impl(big_phi, frame->order(), points, ladder);
    auto lap = gross_laplacian(preimage, *frame);
    detail::attach_reconstruction(r, EmbeddedFock(std::move(lap), std::move(frame)), points);
    return r;
}

/// Embedded input in factored form; the reconstruction is always available.
inline ExoticLaplacianReport exotic_laplacian(const EmbeddedFock& big_phi, const std::vector<TestPoint>& points,
                                              const std::vector<std::size_t>& ladder)
{
    auto r = detail::exotic_laplacian_impl(big_phi, big_phi.frame().order(), points, ladder);
    auto lap = gross_laplacian(big_phi.preimage(), big_phi.frame());
    detail::attach_reconstruction(r, EmbeddedFock(std::move(lap), big_phi.frame_ptr()), points);
    return r;
}

} // namespace exotic
