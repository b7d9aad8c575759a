#pragma once

// Cesàro means of order s along a ladder N_1 < … < N_L, with a power-law
// extrapolation |v_j − limit| ≈ C·N_j^{−β}. Raw ladder values are always
// kept; every acceptance threshold in the library is applied to them, the
// fit is diagnostic.

#include "exotic/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exotic {

struct CesaroEstimate {
    double order = 1.0;
    std::vector<std::size_t> ladder;
    std::vector<cplx> values;
    cplx limit{};
    double beta = 0.0;
    double constant = 0.0;
    double fit_residual = 0.0;
    bool exact = false; ///< ladder values agree to rounding; envelope is zero

    [[nodiscard]] cplx raw_top() const { return values.back(); }
    [[nodiscard]] std::size_t top_N() const { return ladder.back(); }

    [[nodiscard]] double envelope(std::size_t N) const
    {
        if (exact) return 0.0;
        return constant * std::pow(static_cast<double>(N), -beta);
    }

    [[nodiscard]] double envelope_at_top() const { return envelope(top_N()); }

    [[nodiscard]] double default_tol() const
    {
        return 10.0 * envelope_at_top() + 1e-12 * std::max(1.0, std::abs(raw_top()));
    }

    /// Ladder-convergence verdict: zero spread, or positive decay with the
    /// top raw value within tol of the extrapolated limit.
    [[nodiscard]] bool converged(std::optional<double> tol = std::nullopt) const
    {
        if (exact) return true;
        const double t = tol.value_or(default_tol());
        return beta > 0.0 && std::abs(raw_top() - limit) <= t;
    }
};

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    std::size_t points = 0;
};

inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y)
{
    LineFit f;
    f.points = x.size();
    if (x.size() < 2) return f;
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double n = static_cast<double>(x.size());
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (sxx.value() <= 0.0) return f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    CompensatedSum r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        r.add(e * e);
    }
    f.rms = std::sqrt(r.value() / n);
    return f;
}

inline void validate_ladder(std::span<const std::size_t> ladder, std::size_t available)
{
    if (ladder.empty()) throw std::invalid_argument("Cesàro ladder is empty");
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        if (ladder[j] == 0) throw std::invalid_argument("Cesàro ladder entries must be positive");
        if (j > 0 && ladder[j] <= ladder[j - 1]) throw std::invalid_argument("Cesàro ladder must be increasing");
    }
    if (ladder.back() > available) {
        throw std::invalid_argument("Cesàro ladder top " + std::to_string(ladder.back()) + " exceeds dimension " +
                                    std::to_string(available));
    }
}

} // namespace detail

/// Fits (limit, β, C) to raw ladder values.
///  1. β₀ from a log-log fit of consecutive differences |v_{j+1} − v_j|;
///  2. Richardson step on the last two entries with β₀ seeds the limit;
///  3. log|v_j − limit| against log N_j over j < L gives β and C.
inline CesaroEstimate fit_cesaro(double order, std::vector<std::size_t> ladder, std::vector<cplx> values)
{
    if (ladder.size() != values.size() || ladder.empty()) {
        throw std::invalid_argument("fit_cesaro: ladder and values must be nonempty and of equal length");
    }
    CesaroEstimate est;
    est.order = order;
    est.ladder = std::move(ladder);
    est.values = std::move(values);
    const std::size_t L = est.values.size();
    est.limit = est.values.back();

    double scale = 0.0;
    for (auto v : est.values) scale = std::max(scale, std::abs(v));
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    std::vector<double> dx, dy;
    double max_diff = 0.0;
    for (std::size_t j = 0; j + 1 < L; ++j) {
        const double d = std::abs(est.values[j + 1] - est.values[j]);
        max_diff = std::max(max_diff, d);
        if (d > noise) {
            dx.push_back(std::log(static_cast<double>(est.ladder[j])));
            dy.push_back(std::log(d));
        }
    }
    if (L == 1 || max_diff <= noise) {
        est.exact = L > 1;
        return est;
    }
    if (dx.size() < 2) {
        // a single informative step: envelope is that step, no decay claimed
        est.beta = 0.0;
        est.constant = max_diff;
        return est;
    }
    const auto dfit = detail::least_squares_line(dx, dy);
    const double beta0 = -dfit.slope;
    if (!(beta0 > 0.0)) {
        est.beta = beta0;
        est.constant = max_diff;
        est.fit_residual = dfit.rms;
        return est;
    }

    const double nl = std::pow(static_cast<double>(est.ladder[L - 1]), beta0);
    const double np = std::pow(static_cast<double>(est.ladder[L - 2]), beta0);
    est.limit = (nl * est.values[L - 1] - np * est.values[L - 2]) / (nl - np);

    std::vector<double> ex, ey;
    for (std::size_t j = 0; j + 1 < L; ++j) {
        const double e = std::abs(est.values[j] - est.limit);
        if (e > noise) {
            ex.push_back(std::log(static_cast<double>(est.ladder[j])));
            ey.push_back(std::log(e));
        }
    }
    const auto efit = detail::least_squares_line(ex, ey);
    if (efit.points >= 2 && -efit.slope > 0.0) {
        est.beta = -efit.slope;
        est.constant = std::exp(efit.intercept);
        est.fit_residual = efit.rms;
    } else {
        est.beta = beta0;
        const double e = std::abs(est.values[L - 2] - est.limit);
        est.constant = e * np;
        est.fit_residual = dfit.rms;
    }
    return est;
}

/// v_j = N_j^{−s} Σ_{k≤N_j} t_k from summands t_1, t_2, … (terms[0] is t_1).
inline CesaroEstimate cesaro_from_terms(std::span<const cplx> terms, double order, std::vector<std::size_t> ladder)
{
    detail::validate_ladder(ladder, terms.size());
    std::vector<cplx> values;
    values.reserve(ladder.size());
    CompensatedComplexSum acc;
    std::size_t next = 0;
    for (std::size_t k = 1; k <= ladder.back(); ++k) {
        acc.add(terms[k - 1]);
        if (k == ladder[next]) {
            values.push_back(acc.value() / std::pow(static_cast<double>(k), order));
            ++next;
        }
    }
    return fit_cesaro(order, std::move(ladder), std::move(values));
}

/// N_0, N_0·r, N_0·r², … up to and including N_max when it falls on the grid.
inline std::vector<std::size_t> geometric_ladder(std::size_t first, std::size_t ratio, std::size_t last)
{
    if (first == 0 || ratio < 2) throw std::invalid_argument("geometric_ladder: need first ≥ 1 and ratio ≥ 2");
    std::vector<std::size_t> out;
    for (std::size_t n = first; n <= last; n *= ratio) out.push_back(n);
    return out;
}

} // namespace exotic
