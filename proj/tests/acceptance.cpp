// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "exotic/experiment.hpp"
#include "exotic/heat_flow.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace exotic;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1_diagonal()
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t M = 100000;
    const ExoticFrame fr(1.0, 5, M);
    double worst = 0.0;
    for (std::size_t N : {100u, 1000u, 10000u, 100000u}) {
        const auto r = check_C1(fr, N, 1.0);
        for (Eigen::Index k = 0; k < r.means.rows(); ++k) worst = std::max(worst, std::abs(r.means(k, k) - 1.0));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0,
            "max |mean_kk - 1| = " + fmt("%.3g", worst) + " (tol 1e-12), runtime " + fmt("%.3f", secs) + " s (limit 1 s)"};
}

Outcome c1_off_diagonal()
{
    const auto t0 = std::chrono::steady_clock::now();
    const ExoticFrame fr(1.0, 5, 10000);
    double worst_ratio = 0.0;
    for (std::size_t N : {100u, 1000u, 10000u}) {
        const auto r = check_C1(fr, N, 5.0 / double(N));
        for (Eigen::Index i = 0; i < 5; ++i) {
            for (Eigen::Index j = 0; j < 5; ++j) {
                if (i != j) worst_ratio = std::max(worst_ratio, r.deviations(i, j) * double(N) / 5.0);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst_ratio <= 1.0 && secs < 5.0,
            "max N|v_N|/5 = " + fmt("%.4f", worst_ratio) + " (must be <= 1), runtime " + fmt("%.3f", secs) + " s (limit 5 s)"};
}

Outcome c2_constant()
{
    const std::size_t M = 10000;
    const ExoticFrame fr(1.0, 5, M);
    const auto r = check_C2(fr, 1.0);
    long double zeta = 0.0L;
    for (std::size_t m = M + 1; m >= 2; --m) zeta += 1.0L / (static_cast<long double>(m) * m);
    double spread = 0.0;
    for (double n : r.norms) spread = std::max(spread, std::abs(n - r.norms.front()));
    const double err = std::abs(r.M * r.M - double(zeta));
    return {err <= 1e-10 && spread <= 1e-12,
            "|M^2 - partial zeta(2)-1| = " + fmt("%.3g", err) + " (tol 1e-10), spread across k = " + fmt("%.3g", spread) +
                " (tol 1e-12), M^2 = " + fmt("%.15f", r.M * r.M)};
}

Outcome c3_sigma()
{
    const ExoticFrame fr(1.0, 5, 200);
    const auto r = check_C3_finite(fr);
    return {r.sigma_min > 1e-3, "sigma_min = " + fmt("%.6g", r.sigma_min) + " (must exceed 1e-3)"};
}

Outcome lemma_bound()
{
    std::mt19937_64 eng(20240601);
    const std::size_t M = 40;
    const auto base = WeightFamily::standard(M);
    std::map<std::size_t, std::shared_ptr<ExoticFrame>> frames;
    std::size_t held = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = static_cast<std::size_t>(i % 5);
        const std::size_t K = 1 + static_cast<std::size_t>((i / 5) % 5);
        auto& fr = frames[K];
        if (!fr) fr = std::make_shared<ExoticFrame>(1.0, K, M);
        const auto b = random_coefficients(n, K, eng);
        const auto rec = lemma1_check(b, *fr, 1.0, base);
        held += rec.holds ? 1 : 0;
        min_slack = std::min(min_slack, rec.slack());
        max_ratio = std::max(max_ratio, rec.lhs / rec.rhs);
    }
    return {held == 100, std::to_string(held) + "/100 hold, min slack = " + fmt("%.4g", min_slack) +
                             ", max lhs/rhs = " + fmt("%.4f", max_ratio) +
                             " (K_a = 1 is an equality case, held to 1e-12 relative)"};
}

Outcome recovery()
{
    std::mt19937_64 eng(20240602);
    const ExoticFrame fr(1.0, 4, 400);
    const auto unit = WeightFamily::standard(4);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = static_cast<std::size_t>(i % 3);
        const auto b = random_coefficients(n, 4, eng);
        const auto back = recover_coefficients(embed_tensor(b, fr), fr);
        worst = std::max(worst, tensor_norm_p(back.tensor() - b.tensor(), 0.0, unit) / tensor_norm_p(b.tensor(), 0.0, unit));
    }
    return {worst <= 1e-8, "max relative error over 20 cases = " + fmt("%.3g", worst) + " (tol 1e-8)"};
}

Outcome intertwining()
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t M = 10000;
    const auto points = ExperimentConfig{}.resolve_test_points(M);
    std::string detail;
    bool pass = true;
    for (double a : {1.0, 0.75}) {
        auto fr = std::make_shared<const ExoticFrame>(a, 3, M);
        ExoticFock phi(2, 3);
        phi.set_coefficients(2, CoefficientArray::delta(3, {1, 1}));
        const auto r = exotic_laplacian(EmbeddedFock(phi, fr), points, {100, 1000, 10000});
        double worst = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            // closed form from the embedded Gross image must equal 2
            pass = pass && std::abs(r.closed_form[i] - 2.0) <= 1e-12;
            worst = std::max(worst, std::abs(r.estimates[i].raw_top() - 2.0));
        }
        pass = pass && worst <= 2e-2;
        detail += "a=" + fmt("%.2f", a) + ": max |v_N - 2| = " + fmt("%.3g", worst) + "; ";
    }
    const double secs = seconds_since(t0);
    pass = pass && secs < 30.0;
    return {pass, detail + "tol 2e-2 at N=1e4 on 3 points, runtime " + fmt("%.2f", secs) + " s (limit 30 s)"};
}

double max_coeff_diff(const FockVector& a, const FockVector& b)
{
    double m = 0.0;
    for (std::size_t n = 0; n <= a.nmax(); ++n) {
        const auto& x = a.kernel(n).coeffs();
        const auto& y = b.kernel(n).coeffs();
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

Outcome heat_flow()
{
    std::mt19937_64 eng(20240603);
    const ExoticFrame small(1.0, 3, 10);
    const auto w = WeightFamily::standard(3);
    bool identity = true;
    double semigroup = 0.0;
    double fd_rel = 0.0;
    for (int i = 0; i < 10; ++i) {
        ExoticFock phi(4, 3);
        for (std::size_t n = 0; n <= 4; ++n) phi.set_coefficients(n, random_coefficients(n, 3, eng));
        identity = identity && heat_semigroup(phi, 0.0, small) == phi;
        const double s = 0.25 + 0.1 * i, t = 0.6;
        semigroup = std::max(semigroup, max_coeff_diff(heat_semigroup(heat_semigroup(phi, s, small), t, small).coordinates(),
                                                       heat_semigroup(phi, s + t, small).coordinates()));
        const double h = 1e-4;
        auto fd = heat_semigroup(phi, 1.0 + h, small).coordinates();
        fd -= heat_semigroup(phi, 1.0 - h, small).coordinates();
        fd *= 1.0 / (2.0 * h);
        const auto lap = gross_laplacian(heat_semigroup(phi, 1.0, small), small).coordinates();
        fd_rel = std::max(fd_rel, fock_norm(fd - lap, 0.0, w) / fock_norm(lap, 0.0, w));
    }

    // embedded f_2 residuals on the default frame
    auto fr = std::make_shared<const ExoticFrame>(1.0, 3, 10000);
    ExoticFock f2(2, 3);
    f2.set_coefficients(2, CoefficientArray::delta(3, {1, 1}));
    const double zeta4_minus_1 = std::pow(std::numbers::pi, 4) / 90.0 - 1.0;
    const double t_star_full = 4.0 / std::sqrt(zeta4_minus_1);
    const auto sol = solve_exotic_heat(f2, fr, 2.0, {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 13.5});
    const double t_star = std::min(sol.horizon.T_star, t_star_full);
    const auto rows = verify_heat_residual(sol, ExperimentConfig{}.resolve_test_points(10000), 1e-4, {100, 1000, 10000});
    std::size_t checked = 0, within = 0;
    double worst_ratio = 0.0;
    for (const auto& r : rows) {
        if (!(r.t < t_star)) continue;
        ++checked;
        within += r.within ? 1 : 0;
        worst_ratio = std::max(worst_ratio, r.residual / r.budget);
    }
    const bool pass = identity && semigroup <= 1e-10 && fd_rel <= 1e-6 && checked > 0 && within == checked;
    return {pass, std::string("(a) P_0 = id ") + (identity ? "exact" : "NOT exact") + "; (b) semigroup err " +
                      fmt("%.3g", semigroup) + " (tol 1e-10); (c) FD rel err " + fmt("%.3g", fd_rel) +
                      " (tol 1e-6); (d) " + std::to_string(within) + "/" + std::to_string(checked) +
                      " residuals within budget, max residual/budget " + fmt("%.3g", worst_ratio) + ", T* = " +
                      fmt("%.4f", t_star_full) + " (K_a=3 truncation " + fmt("%.4f", sol.horizon.T_star) + ")"};
}

Outcome kernel_suite()
{
    std::mt19937_64 eng(20240604);
    double worst_norm = 0.0;
    for (std::size_t n = 0; n <= 3; ++n) {
        for (std::size_t K = 1; K <= 4; ++K) {
            const auto w = WeightFamily::standard(K);
            const auto lam = oracle::standard_lambdas(K);
            for (int trial = 0; trial < 5; ++trial) {
                const auto t = oracle::random_sym(n, K, eng);
                for (double p : {-1.0, 0.0, 1.0}) {
                    const double ref = oracle::norm(oracle::expand(t), lam, p);
                    worst_norm = std::max(worst_norm, std::abs(tensor_norm_p(t, p, w) - ref) / std::max(1.0, ref));
                }
            }
        }
    }
    // exponential identity; the tail bound alone is ~5e-20, far below double
    // rounding, so an a-priori rounding allowance 32·eps·e^{r} is added with
    // r = Σ|η_k||ξ_k| ≥ |⟨η,ξ⟩| bounding every partial sum in absolute value
    const double eps = std::numeric_limits<double>::epsilon();
    bool exp_ok = true;
    double worst_err = 0.0, worst_tail = 0.0, worst_round = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        GradedVector eta(oracle::random_vector(4, eng));
        GradedVector xi(oracle::random_vector(4, eng));
        double r0 = 0.0;
        for (std::size_t k = 0; k < 4; ++k) r0 += std::abs(eta[k]) * std::abs(xi[k]);
        const double target = 0.05 + 0.95 * trial / 19.0;
        eta *= std::sqrt(target / r0);
        xi *= std::sqrt(target / r0);
        const cplx z = bilinear_pair(eta, xi);
        const double err = std::abs(duality(exponential_vector(eta, 20), exponential_vector(xi, 20)) - std::exp(z));
        const double tail = exponential_tail_bound(std::abs(z), 20);
        const double round = 32.0 * eps * std::exp(target);
        exp_ok = exp_ok && std::abs(z) <= 1.0 + 1e-15 && err <= tail + round;
        worst_err = std::max(worst_err, err);
        worst_tail = std::max(worst_tail, tail);
        worst_round = std::max(worst_round, round);
    }
    return {worst_norm <= 1e-12 && exp_ok,
            "max norm deviation " + fmt("%.3g", worst_norm) + " (tol 1e-12); exp identity max err " + fmt("%.3g", worst_err) +
                " vs tail " + fmt("%.3g", worst_tail) + " + rounding " + fmt("%.3g", worst_round)};
}

std::string read_stripped(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("generated") == std::string::npos) os << line << '\n';
    }
    return os.str();
}

std::map<std::string, std::string> run_suite(const fs::path& out)
{
    fs::remove_all(out);
    const std::string cli = EXOTIC_CLI_PATH;
    const std::string data = EXOTIC_SAMPLE_DIR;
    const std::string o = " --seed 42 --out " + out.string() + " > /dev/null 2>&1";
    const std::vector<std::string> cmds{
        cli + " basis-check" + o,
        cli + " embed --coefficients " + data + "/coefficients.json" + o,
        cli + " heat --initial " + data + "/f2_initial.json" + o,
        cli + " cesaro-scan" + o,
    };
    std::map<std::string, std::string> files;
    for (const auto& c : cmds) {
        const int status = std::system(c.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) files["<exit " + c + ">"] = std::to_string(status);
    }
    for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = read_stripped(e.path());
    return files;
}

Outcome determinism()
{
    const fs::path out = fs::temp_directory_path() / "exotic_acceptance_determinism";
    const auto first = run_suite(out);
    const auto second = run_suite(out);
    fs::remove_all(out);
    std::size_t differing = 0;
    for (const auto& [name, body] : first) {
        const auto it = second.find(name);
        if (it == second.end() || it->second != body) ++differing;
    }
    bool clean = true;
    for (const auto& [name, _] : first) clean = clean && name.rfind("<exit", 0) != 0;
    const bool pass = clean && first.size() == second.size() && differing == 0 && first.size() == 11;
    return {pass, std::to_string(first.size()) + " report files, " + std::to_string(differing) +
                      " differ between runs" + (clean ? "" : ", a command exited nonzero")};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"C1 diagonal exactness", c1_diagonal},
        {"C1 off-diagonal decay", c1_off_diagonal},
        {"C2 constant", c2_constant},
        {"C3 smallest singular value", c3_sigma},
        {"embedding norm bound", lemma_bound},
        {"injectivity and recovery", recovery},
        {"Laplacian intertwining", intertwining},
        {"heat flow", heat_flow},
        {"Fock and tensor kernels", kernel_suite},
        {"report determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
