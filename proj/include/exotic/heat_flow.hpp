#pragma once

// Heat flow for the exotic Laplacian. The Gross heat semigroup
//     (P_t φ)_n = Σ_m (n+2m)!/(n! m!) t^m τ^{⊗m} ⊗̂_{2m} f_{n+2m}
// is evaluated exactly on finite chaos (the m-sum terminates), and
// u(t) = i(P_{a,t} φ) is checked against ∂_t u = Δ_{c,2a−1} u through
// S-transform residuals at sampled (t, ξ).

#include "exotic/cesaro.hpp"
#include "exotic/embedding.hpp"
#include "exotic/exotic_basis.hpp"
#include "exotic/fock_space.hpp"
#include "exotic/laplacians.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

/// (n+2m)! / (n! m!). Multiplicative updates in double, checked against the
/// exact integer when n + 2m ≤ 20; log-space above that.
inline double heat_coefficient(std::size_t n, std::size_t m)
{
    const std::size_t top = n + 2 * m;
    if (top <= 20) {
        double c = 1.0;
        std::uint64_t exact_num = 1;
        for (std::size_t i = n + 1; i <= top; ++i) {
            c *= static_cast<double>(i);
            exact_num *= i;
        }
        std::uint64_t mf = 1;
        for (std::size_t i = 2; i <= m; ++i) {
            c /= static_cast<double>(i);
            mf *= i;
        }
        const std::uint64_t exact = exact_num / mf;
        if (c != static_cast<double>(exact)) c = static_cast<double>(exact);
        return c;
    }
    const auto lg = [](std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); };
    return std::exp(lg(top) - lg(n) - lg(m));
}

/// P_t φ for an arbitrary degree-2 trace in the vector's own coordinates.
inline FockVector heat_semigroup(const FockVector& phi, double t, const TraceTensor& tau)
{
    if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: t must be nonnegative");
    FockVector out(phi.nmax(), phi.dim());
    for (std::size_t n = 0; n <= phi.nmax(); ++n) {
        SymTensor acc = phi.kernel(n);
        double tm = 1.0;
        for (std::size_t m = 1; n + 2 * m <= phi.nmax(); ++m) {
            tm *= t;
            SymTensor term = contract_2m(phi.kernel(n + 2 * m), tau, m);
            term *= heat_coefficient(n, m) * tm;
            acc += term;
        }
        out.set_kernel(n, std::move(acc));
    }
    return out;
}

/// P_{a,t} in exotic coordinates (τ_a is the identity array there).
inline ExoticFock heat_semigroup(const ExoticFock& phi, double t, const ExoticFrame& frame)
{
    if (phi.K_a() != frame.K_a()) throw std::invalid_argument("heat_semigroup: K_a mismatch");
    const TraceTensor tau{identity_trace_tensor(frame.K_a()), TraceKind::ExoticCoordinates};
    return ExoticFock(heat_semigroup(phi.coordinates(), t, tau));
}

struct HorizonReport {
    double p = 0.0;
    std::size_t K_a = 0;          ///< truncation level of Σ λ_{a,k}^{−4}
    double numerator = 0.0;       ///< λ_{a,1}^{2(p−1)}
    double tau_norm = 0.0;        ///< |τ_a| at exotic grade −1
    double tau_norm_half = 0.0;   ///< |τ_a| at exotic grade −1/2, for the alternative convention
    double T_star = 0.0;
    bool in_theory = false;       ///< p > 1 and λ_{a,1}^{2(p−1)} > 2
    std::string reason;
};

/// T* = λ_{a,1}^{2(p−1)} / |τ_a|_{−1}; out-of-theory parameters give a verdict, not an error.
inline HorizonReport validity_horizon(double p, const ExoticFrame& frame)
{
    HorizonReport h;
    h.p = p;
    h.K_a = frame.K_a();
    h.numerator = std::pow(frame.exotic_weights().lambda(1), 2.0 * (p - 1.0));
    const auto tr = exotic_trace(frame, false);
    h.tau_norm = tr.norm_minus1;
    h.tau_norm_half = tr.norm_minus_half;
    h.T_star = h.numerator / h.tau_norm;
    if (!(p > 1.0)) {
        h.reason = "p must exceed 1";
    } else if (!(h.numerator > 2.0)) {
        h.reason = "lambda_{a,1}^{2(p-1)} must exceed 2";
    } else {
        h.in_theory = true;
    }
    return h;
}

struct HeatSolution {
    std::shared_ptr<const ExoticFrame> frame;
    double p = 0.0;
    ExoticFock initial;
    std::vector<double> grid;
    std::vector<ExoticFock> snapshots;     ///< P_{a,t_j} φ
    std::vector<EmbeddedFock> embedded;    ///< i(P_{a,t_j} φ)
    HorizonReport horizon;
    std::vector<bool> within_horizon;      ///< t_j < T* and parameters in theory

    [[nodiscard]] bool in_theory() const
    {
        for (bool b : within_horizon) {
            if (!b) return false;
        }
        return true;
    }

    [[nodiscard]] EmbeddedFock at(double t) const
    {
        return EmbeddedFock(heat_semigroup(initial, t, *frame), frame);
    }
};

/// Snapshots of P_{a,t}φ and i(P_{a,t}φ) on a grid. Times beyond the horizon
/// are computed anyway (finite chaos is polynomial in t) and flagged.
inline HeatSolution solve_exotic_heat(const ExoticFock& phi, std::shared_ptr<const ExoticFrame> frame, double p,
                                      std::vector<double> grid)
{
    if (!frame) throw std::invalid_argument("solve_exotic_heat: null frame");
    if (grid.empty()) throw std::invalid_argument("solve_exotic_heat: empty time grid");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!(grid[j] >= 0.0)) throw std::invalid_argument("solve_exotic_heat: negative time in grid");
        if (j > 0 && !(grid[j] > grid[j - 1])) throw std::invalid_argument("solve_exotic_heat: grid must increase");
    }
    HeatSolution sol{frame, p, phi, std::move(grid), {}, {}, validity_horizon(p, *frame), {}};
    for (double t : sol.grid) {
        sol.snapshots.push_back(t == 0.0 ? phi : heat_semigroup(phi, t, *frame));
        sol.embedded.emplace_back(sol.snapshots.back(), frame);
        sol.within_horizon.push_back(sol.horizon.in_theory && t < sol.horizon.T_star);
    }
    return sol;
}

struct ResidualRow {
    double t = 0.0;
    std::string label;
    cplx lhs{};          ///< central difference of t ↦ S u(t)(ξ)
    cplx rhs{};          ///< top-N Cesàro value of Δ̃ S u(t)(ξ)
    double residual = 0.0;
    double budget = 0.0; ///< O(h²) + Cesàro envelope + rounding
    double fd_budget = 0.0;
    double cesaro_budget = 0.0;
    bool within = false;
};

/// |∂_t S u(t)(ξ) − Δ̃ S u(t)(ξ)| at every grid time t ≥ h and every test point.
inline std::vector<ResidualRow> verify_heat_residual(const HeatSolution& sol, const std::vector<TestPoint>& points,
                                                     double h, const std::vector<std::size_t>& ladder)
{
    if (!(h > 0.0)) throw std::invalid_argument("verify_heat_residual: h must be positive");
    for (std::size_t j = 1; j < sol.grid.size(); ++j) {
        if (2.0 * h >= sol.grid[j] - sol.grid[j - 1]) {
            throw std::invalid_argument("verify_heat_residual: grid spacing too coarse for h");
        }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<ResidualRow> rows;
    for (std::size_t j = 0; j < sol.grid.size(); ++j) {
        const double t = sol.grid[j];
        if (t < h) continue;
        const EmbeddedFock plus = sol.at(t + h);
        const EmbeddedFock minus = sol.at(t - h);
        // forward third difference with a coarser step bounds the O(h²) term
        const double H = 1e-2 * std::max(1.0, t);
        for (const auto& tp : points) {
            ResidualRow row;
            row.t = t;
            row.label = tp.label;
            const cplx sp = s_transform(plus, tp.xi);
            const cplx sm = s_transform(minus, tp.xi);
            row.lhs = (sp - sm) / (2.0 * h);
            const auto est = exotic_laplacian_at(sol.embedded[j], tp.xi, sol.frame->order(), ladder);
            row.rhs = est.raw_top();
            row.residual = std::abs(row.lhs - row.rhs);

            cplx s3[4];
            for (int i = 0; i < 4; ++i) s3[i] = s_transform(sol.at(t + i * H), tp.xi);
            const double third = std::abs(s3[3] - 3.0 * s3[2] + 3.0 * s3[1] - s3[0]) / (H * H * H);
            const double scale = std::max({std::abs(sp), std::abs(sm), 1.0});
            row.fd_budget = 2.0 * h * h * third / 6.0 + 16.0 * eps * scale / h;
            row.cesaro_budget = 10.0 * est.envelope_at_top() + 1e-12 * std::max(1.0, std::abs(row.rhs));
            row.budget = row.fd_budget + row.cesaro_budget;
            row.within = row.residual <= row.budget;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace exotic
