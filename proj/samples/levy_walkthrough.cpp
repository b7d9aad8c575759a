// Walkthrough of the a = 1 (Lévy) case: build a frame, embed an exotic
// chaos vector, compare the Cesàro ladder of the exotic Laplacian with the
// embedded Gross image, then run the heat flow for a few times.

#include "exotic/heat_flow.hpp"

#include <cstdio>
#include <memory>

int main()
{
    using namespace exotic;

    auto frame = std::make_shared<const ExoticFrame>(1.0, 2, 10000);
    std::printf("frame: a = %.2f, K_a = %zu, M_terms = %zu\n", frame->a(), frame->K_a(), frame->m_terms());

    const auto c1 = check_C1(*frame, 10000, 0.05);
    std::printf("C1 at N = 10^4: max deviation %.3e (%s)\n", c1.max_deviation(), c1.pass ? "pass" : "fail");

    // exotic exponential vector along η = 0.3 e_{a,1} − 0.2 e_{a,2}
    const GradedVector eta{0.3, -0.2};
    const EmbeddedFock big_phi(ExoticFock::exponential(eta, 12), frame);

    GradedVector xi(frame->m_terms());
    xi[0] = 0.4;
    xi[3] = -0.1;
    const auto report = exotic_laplacian(big_phi, {{"xi", xi}}, {10, 100, 1000, 10000});
    const auto& est = report.estimates.front();
    for (std::size_t j = 0; j < est.ladder.size(); ++j) {
        std::printf("  N = %6zu  partial = %+.10f\n", est.ladder[j], est.values[j].real());
    }
    std::printf("  closed form from i(Δ_G φ): %+.10f  (discrepancy %.2e)\n", report.closed_form.front().real(),
                report.discrepancy.front());

    const auto sol = solve_exotic_heat(ExoticFock::exponential(eta, 12), frame, 2.0, {0.0, 0.25, 0.5, 1.0});
    std::printf("horizon T* = %.4f (%s)\n", sol.horizon.T_star, sol.horizon.in_theory ? "in theory" : "out of theory");
    for (const auto& row : verify_heat_residual(sol, {{"xi", xi}}, 1e-4, {10, 100, 1000, 10000})) {
        std::printf("  t = %.2f  d/dt S = %+.8f  Cesàro = %+.8f  residual %.2e  budget %.2e\n", row.t, row.lhs.real(),
                    row.rhs.real(), row.residual, row.budget);
    }
    return 0;
}
