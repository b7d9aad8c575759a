#include "exotic/heat_flow.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>

using namespace exotic;

namespace {

ExoticFock random_exotic(std::size_t nmax, std::size_t K, std::mt19937_64& eng)
{
    ExoticFock phi(nmax, K);
    for (std::size_t n = 0; n <= nmax; ++n) phi.set_coefficients(n, random_coefficients(n, K, eng));
    return phi;
}

double max_diff(const FockVector& a, const FockVector& b)
{
    double m = 0.0;
    for (std::size_t n = 0; n <= a.nmax(); ++n) {
        const auto& x = a.kernel(n).coeffs();
        const auto& y = b.kernel(n).coeffs();
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

} // namespace

TEST(HeatCoefficient, SmallValuesAndLogSpaceContinuity)
{
    EXPECT_EQ(heat_coefficient(0, 0), 1.0);
    EXPECT_EQ(heat_coefficient(0, 1), 2.0);
    EXPECT_EQ(heat_coefficient(1, 1), 6.0);
    EXPECT_EQ(heat_coefficient(0, 2), 12.0);
    EXPECT_EQ(heat_coefficient(0, 10), 670442572800.0); // 20!/10!
    // 21!/(1!·10!) from the log-space branch against the recurrence 21·20!/10!
    EXPECT_NEAR(heat_coefficient(1, 10) / (21.0 * heat_coefficient(0, 10)), 1.0, 1e-12);
}

TEST(HeatSemigroup, IdentityAtZero)
{
    std::mt19937_64 eng(131);
    const ExoticFrame fr(1.0, 3, 10);
    const auto phi = random_exotic(4, 3, eng);
    EXPECT_EQ(heat_semigroup(phi, 0.0, fr), phi);
    EXPECT_THROW(heat_semigroup(phi, -1.0, fr), std::invalid_argument);
}

TEST(HeatSemigroup, SemigroupLaw)
{
    std::mt19937_64 eng(137);
    const ExoticFrame fr(1.0, 3, 10);
    for (int trial = 0; trial < 10; ++trial) {
        const auto phi = random_exotic(4, 3, eng);
        const double s = 0.3 + 0.1 * trial, t = 0.7;
        const auto lhs = heat_semigroup(heat_semigroup(phi, s, fr), t, fr);
        const auto rhs = heat_semigroup(phi, s + t, fr);
        EXPECT_LT(max_diff(lhs.coordinates(), rhs.coordinates()), 1e-10);
    }
}

TEST(HeatSemigroup, ExponentialVectorClosedForm)
{
    const GradedVector eta{cplx(0.3), cplx(-0.2, 0.1)};
    const GradedVector xi{cplx(0.5), cplx(0.1, -0.3)};
    const double t = 0.8;
    const auto out = heat_semigroup(exponential_vector(eta, 40), t, base_trace(2));
    const cplx expected = std::exp(t * bilinear_pair(eta, eta) + bilinear_pair(xi, eta));
    EXPECT_LT(std::abs(s_transform(out, xi) - expected), 1e-13);
}

TEST(HeatSemigroup, SatisfiesHeatEquationInExoticCoordinates)
{
    std::mt19937_64 eng(139);
    const ExoticFrame fr(1.0, 3, 10);
    const auto phi = random_exotic(4, 3, eng);
    const double h = 1e-4;
    for (double t : {0.5, 1.0, 2.0}) {
        auto fd = heat_semigroup(phi, t + h, fr).coordinates();
        fd -= heat_semigroup(phi, t - h, fr).coordinates();
        fd *= 1.0 / (2.0 * h);
        const auto lap = gross_laplacian(heat_semigroup(phi, t, fr), fr).coordinates();
        const auto w = WeightFamily::standard(3);
        EXPECT_LE(fock_norm(fd - lap, 0.0, w), 1e-6 * fock_norm(lap, 0.0, w));
    }
}

TEST(Horizon, DefaultParameters)
{
    const ExoticFrame fr(1.0, 3, 10);
    const auto h = validity_horizon(2.0, fr);
    EXPECT_TRUE(h.in_theory);
    EXPECT_DOUBLE_EQ(h.numerator, 4.0);
    EXPECT_NEAR(h.T_star, 4.0 / std::sqrt(1.0 / 16 + 1.0 / 81 + 1.0 / 256), 1e-12);

    EXPECT_FALSE(validity_horizon(1.0, fr).in_theory);
    EXPECT_FALSE(validity_horizon(1.2, fr).in_theory); // 2^{0.4} < 2
}

TEST(Horizon, ConvergesToZetaValueAsKGrows)
{
    const ExoticFrame fr(1.0, 2000, 2000);
    const double zeta4_minus_1 = std::pow(M_PI, 4) / 90.0 - 1.0;
    EXPECT_NEAR(validity_horizon(2.0, fr).T_star, 4.0 / std::sqrt(zeta4_minus_1), 1e-6);
}

TEST(SolveHeat, GridValidationAndFlags)
{
    auto fr = std::make_shared<const ExoticFrame>(1.0, 3, 20);
    ExoticFock phi(2, 3);
    phi.set_coefficients(2, CoefficientArray::delta(3, {1, 1}));
    EXPECT_THROW(solve_exotic_heat(phi, fr, 2.0, {}), std::invalid_argument);
    EXPECT_THROW(solve_exotic_heat(phi, fr, 2.0, {0.0, -1.0}), std::invalid_argument);
    EXPECT_THROW(solve_exotic_heat(phi, fr, 2.0, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(solve_exotic_heat(phi, nullptr, 2.0, {0.0}), std::invalid_argument);

    const auto sol = solve_exotic_heat(phi, fr, 2.0, {0.0, 1.0, 20.0});
    EXPECT_EQ(sol.snapshots[0], phi);
    EXPECT_TRUE(sol.within_horizon[1]);
    EXPECT_FALSE(sol.within_horizon[2]);
    EXPECT_FALSE(sol.in_theory());
    // P_t(f_2) = f_2 + 2t
    EXPECT_NEAR(sol.snapshots[1].coefficients(0).tensor().coeffs()[0].real(), 2.0, 1e-15);
}

TEST(HeatResidual, EmbeddedFTwoWithinBudget)
{
    auto fr = std::make_shared<const ExoticFrame>(1.0, 2, 10000);
    ExoticFock phi(2, 2);
    phi.set_coefficients(2, CoefficientArray::delta(2, {1, 1}));
    const auto sol = solve_exotic_heat(phi, fr, 2.0, {0.0, 0.5, 1.0, 2.0});
    std::vector<TestPoint> pts{{"zero", GradedVector(10000)}, {"e1", GradedVector::unit(10000, 1)}};
    const auto rows = verify_heat_residual(sol, pts, 1e-4, {100, 1000, 10000});
    EXPECT_EQ(rows.size(), 6u); // t = 0 skipped
    for (const auto& r : rows) EXPECT_TRUE(r.within) << "t=" << r.t << " " << r.label << " res=" << r.residual;
    EXPECT_THROW(verify_heat_residual(sol, pts, 0.3, {100}), std::invalid_argument);
    EXPECT_THROW(verify_heat_residual(sol, pts, 0.0, {100}), std::invalid_argument);
}

TEST(HeatResidual, DenseFourthChaosOnRealFrame)
{
    std::mt19937_64 eng(149);
    auto fr = std::make_shared<const ExoticFrame>(1.0, 2, 10000);
    ExoticFock phi(4, 2);
    for (std::size_t n = 0; n <= 4; ++n) {
        auto b = random_coefficients(n, 2, eng);
        b *= 0.5;
        phi.set_coefficients(n, b);
    }
    const auto sol = solve_exotic_heat(phi, fr, 2.0, {0.0, 1.0});
    std::vector<TestPoint> pts{{"mixed", 0.2 * GradedVector::unit(10000, 1) + cplx(0, 0.1) * GradedVector::unit(10000, 4)}};
    for (const auto& r : verify_heat_residual(sol, pts, 1e-4, {100, 1000, 10000})) {
        EXPECT_TRUE(r.within) << "res=" << r.residual << " budget=" << r.budget;
    }
}
