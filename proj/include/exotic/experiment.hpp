#pragma once

// Batch experiment driver behind the exotic-hkt CLI: configuration, the four
// subcommands and their CSV/JSON reports. Exit codes: 0 pass, 1 tolerance
// failure, 2 configuration or parse error.

#include "exotic/embedding.hpp"
#include "exotic/exotic_basis.hpp"
#include "exotic/heat_flow.hpp"
#include "exotic/io.hpp"
#include "exotic/laplacians.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace exotic {

enum ExitCode : int { kPass = 0, kToleranceFailure = 1, kConfigError = 2 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WeightConfig {
    WeightKind kind = WeightKind::Shifted;
    std::vector<double> params{1.0};
    std::optional<std::size_t> K; ///< defaults to the dimension it weighs

    [[nodiscard]] WeightFamily resolve(std::size_t dim, const char* what) const
    {
        if (K && *K != dim) {
            throw ConfigError(std::string(what) + ".K = " + std::to_string(*K) + " must equal " + std::to_string(dim));
        }
        try {
            return WeightFamily(kind, params, dim);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    }
};

struct TestPointConfig {
    std::string label;
    std::vector<std::tuple<std::size_t, double, double>> entries; ///< sparse (1-based index, re, im)

    [[nodiscard]] TestPoint resolve(std::size_t dim) const
    {
        GradedVector xi(dim);
        for (const auto& [k, re, im] : entries) {
            if (k == 0 || k > dim) throw ConfigError("test point '" + label + "': index out of range");
            xi[k - 1] = {re, im};
        }
        return {label, std::move(xi)};
    }
};

struct Tolerances {
    double c1 = 0.05;            ///< max |Cesàro mean − δ| at the top ladder N
    double c3_sigma_min = 1e-3;  ///< required smallest singular value
    double recovery = 1e-8;      ///< relative coefficient-recovery error
    double h = 1e-4;             ///< time step of the heat residual difference
};

struct ExperimentConfig {
    WeightConfig weights;
    WeightConfig exotic_weights;
    double a = 1.0;
    std::size_t K_a = 3;
    std::size_t M_terms = 10000;
    std::size_t Nmax = 4;
    std::vector<std::size_t> ladder{100, 1000, 10000};
    std::vector<TestPointConfig> test_points{
        {"zero", {}},
        {"e1", {{1, 0.5, 0.0}}},
        {"mixed", {{1, 0.25, 0.0}, {2, -0.125, 0.0}, {3, 0.0, 0.0625}}},
    };
    std::vector<double> time_grid{0.0, 0.5, 1.0, 2.0};
    double p = 1.0;
    double heat_p = 2.0;
    Tolerances tol;
    std::size_t embed_M_terms = 40;
    std::size_t injectivity_M_terms = 400;
    std::size_t injectivity_trials = 20;
    std::size_t injectivity_max_degree = 2;
    std::vector<Rational> frequencies_override; ///< test mode: unchecked frame with these q_k
    std::string output_dir = "out";
    std::uint64_t seed = 42;

    void validate() const
    {
        if (!(a > 0.5)) throw ConfigError("a must exceed 1/2 (got " + std::to_string(a) + ")");
        if (K_a == 0 || M_terms == 0) throw ConfigError("K_a and M_terms must be positive");
        if (ladder.empty()) throw ConfigError("ladder must be nonempty");
        for (std::size_t j = 0; j < ladder.size(); ++j) {
            if (ladder[j] == 0 || (j > 0 && ladder[j] <= ladder[j - 1])) throw ConfigError("ladder must be increasing and positive");
        }
        if (ladder.back() > M_terms) throw ConfigError("ladder top exceeds M_terms");
        if (time_grid.empty()) throw ConfigError("time_grid must be nonempty");
        if (!frequencies_override.empty() && frequencies_override.size() != K_a) {
            throw ConfigError("frequencies_override must list exactly K_a rationals");
        }
        (void)weights.resolve(M_terms, "weights");
        (void)exotic_weights.resolve(K_a, "exotic_weights");
    }

    [[nodiscard]] ExoticFrame make_frame(std::size_t m_terms) const
    {
        const auto ew = exotic_weights.resolve(K_a, "exotic_weights");
        if (!frequencies_override.empty()) return ExoticFrame::unchecked(a, frequencies_override, m_terms, ew);
        return ExoticFrame(a, K_a, m_terms, ew);
    }

    [[nodiscard]] std::vector<TestPoint> resolve_test_points(std::size_t dim) const
    {
        std::vector<TestPoint> out;
        for (const auto& tp : test_points) out.push_back(tp.resolve(dim));
        return out;
    }
};

inline json to_json(const WeightConfig& w)
{
    json j{{"kind", to_string(w.kind)}, {"params", w.params}};
    if (w.K) j["K"] = *w.K;
    return j;
}

inline json to_json(const ExperimentConfig& c)
{
    json tps = json::array();
    for (const auto& tp : c.test_points) {
        json entries = json::array();
        for (const auto& [k, re, im] : tp.entries) entries.push_back(json::array({k, re, im}));
        tps.push_back({{"label", tp.label}, {"entries", entries}});
    }
    json freq = json::array();
    for (const auto& q : c.frequencies_override) freq.push_back(json::array({q.num, q.den}));
    return {
        {"weights", to_json(c.weights)},
        {"exotic_weights", to_json(c.exotic_weights)},
        {"frame", {{"a", c.a}, {"K_a", c.K_a}, {"M_terms", c.M_terms}}},
        {"truncation", {{"Nmax", c.Nmax}}},
        {"ladder", c.ladder},
        {"test_points", tps},
        {"time_grid", c.time_grid},
        {"p", c.p},
        {"heat_p", c.heat_p},
        {"tolerances", {{"c1", c.tol.c1}, {"c3_sigma_min", c.tol.c3_sigma_min}, {"recovery", c.tol.recovery}, {"h", c.tol.h}}},
        {"embed", {{"M_terms", c.embed_M_terms}}},
        {"injectivity", {{"M_terms", c.injectivity_M_terms}, {"trials", c.injectivity_trials}, {"max_degree", c.injectivity_max_degree}}},
        {"frequencies_override", freq},
        {"output_dir", c.output_dir},
        {"seed", c.seed},
    };
}

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline WeightConfig weight_config_from_json(const json& j, const std::string& where)
{
    reject_unknown(j, {"kind", "params", "K"}, where);
    WeightConfig w;
    if (j.contains("kind")) w.kind = weight_kind_from_string(j.at("kind").get<std::string>());
    w.params = j.value("params", std::vector<double>{});
    if (w.params.empty() && w.kind == WeightKind::Shifted) w.params = {1.0};
    if (j.contains("K")) w.K = j.at("K").get<std::size_t>();
    return w;
}

} // namespace detail

/// Missing keys take defaults; unknown keys are rejected.
inline ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    try {
        detail::reject_unknown(j,
                               {"weights", "exotic_weights", "frame", "truncation", "ladder", "test_points", "time_grid",
                                "p", "heat_p", "tolerances", "embed", "injectivity", "frequencies_override",
                                "output_dir", "seed"},
                               "config");
        if (j.contains("weights")) c.weights = detail::weight_config_from_json(j.at("weights"), "weights");
        if (j.contains("exotic_weights")) {
            c.exotic_weights = detail::weight_config_from_json(j.at("exotic_weights"), "exotic_weights");
        }
        if (j.contains("frame")) {
            const auto& f = j.at("frame");
            detail::reject_unknown(f, {"a", "K_a", "M_terms"}, "frame");
            c.a = f.value("a", c.a);
            c.K_a = f.value("K_a", c.K_a);
            c.M_terms = f.value("M_terms", c.M_terms);
        }
        if (j.contains("truncation")) {
            detail::reject_unknown(j.at("truncation"), {"Nmax"}, "truncation");
            c.Nmax = j.at("truncation").value("Nmax", c.Nmax);
        }
        if (j.contains("ladder")) c.ladder = j.at("ladder").get<std::vector<std::size_t>>();
        if (j.contains("test_points")) {
            c.test_points.clear();
            for (const auto& tp : j.at("test_points")) {
                TestPointConfig t;
                t.label = tp.at("label").get<std::string>();
                for (const auto& e : tp.value("entries", json::array())) {
                    t.entries.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>(), e.at(2).get<double>());
                }
                c.test_points.push_back(std::move(t));
            }
        }
        if (j.contains("time_grid")) c.time_grid = j.at("time_grid").get<std::vector<double>>();
        c.p = j.value("p", c.p);
        c.heat_p = j.value("heat_p", c.heat_p);
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            detail::reject_unknown(t, {"c1", "c3_sigma_min", "recovery", "h"}, "tolerances");
            c.tol.c1 = t.value("c1", c.tol.c1);
            c.tol.c3_sigma_min = t.value("c3_sigma_min", c.tol.c3_sigma_min);
            c.tol.recovery = t.value("recovery", c.tol.recovery);
            c.tol.h = t.value("h", c.tol.h);
        }
        if (j.contains("embed")) {
            detail::reject_unknown(j.at("embed"), {"M_terms"}, "embed");
            c.embed_M_terms = j.at("embed").value("M_terms", c.embed_M_terms);
        }
        if (j.contains("injectivity")) {
            const auto& inj = j.at("injectivity");
            detail::reject_unknown(inj, {"M_terms", "trials", "max_degree"}, "injectivity");
            c.injectivity_M_terms = inj.value("M_terms", c.injectivity_M_terms);
            c.injectivity_trials = inj.value("trials", c.injectivity_trials);
            c.injectivity_max_degree = inj.value("max_degree", c.injectivity_max_degree);
        }
        if (j.contains("frequencies_override")) {
            for (const auto& q : j.at("frequencies_override")) {
                c.frequencies_override.push_back({q.at(0).get<std::int64_t>(), q.at(1).get<std::int64_t>()});
            }
        }
        c.output_dir = j.value("output_dir", c.output_dir);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return c;
}

inline json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in " + path.string() + ": " + e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

namespace report {

inline std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Shortest round-trip form, always '.' decimal.
inline std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Csv {
public:
    Csv(const std::filesystem::path& path, const json& config, std::initializer_list<const char*> columns) : out_(path)
    {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << "# generated: " << timestamp() << '\n';
        out_ << "# config: " << config.dump() << '\n';
        bool first = true;
        for (const char* c : columns) {
            out_ << (first ? "" : ",") << c;
            first = false;
        }
        out_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return num(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(bool b) { return b ? "true" : "false"; }
    static std::string cell(std::size_t n) { return std::to_string(n); }
    static std::string cell(int n) { return std::to_string(n); }

    std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, json body, const json& config)
{
    body["generated"] = timestamp();
    body["config"] = config;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body.dump(2) << '\n';
}

inline json cesaro_to_json(const CesaroEstimate& e)
{
    json values = json::array();
    for (std::size_t j = 0; j < e.values.size(); ++j) {
        values.push_back({{"N", e.ladder[j]}, {"re", e.values[j].real()}, {"im", e.values[j].imag()}});
    }
    return {{"order", e.order},       {"ladder", values},        {"limit", to_json(e.limit)},
            {"beta", e.beta},         {"C", e.constant},         {"fit_residual", e.fit_residual},
            {"exact", e.exact},       {"envelope_at_top", e.envelope_at_top()}, {"converged", e.converged()}};
}

inline json horizon_to_json(const HorizonReport& h)
{
    return {{"p", h.p},
            {"K_a", h.K_a},
            {"lambda_a1_pow", h.numerator},
            {"tau_norm_grade_minus1", h.tau_norm},
            {"tau_norm_grade_minus_half", h.tau_norm_half},
            {"T_star", h.T_star},
            {"T_star_grade_minus_half", h.numerator / h.tau_norm_half},
            {"in_theory", h.in_theory},
            {"reason", h.reason}};
}

} // namespace report

struct CommandOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::size_t>> ladder;
    std::optional<double> tol;
};

/// Applies flag overrides on top of a file config.
inline ExperimentConfig apply_overrides(ExperimentConfig c, const CommandOptions& o, const std::string& command)
{
    if (o.out_dir) c.output_dir = *o.out_dir;
    if (o.seed) c.seed = *o.seed;
    if (o.ladder) c.ladder = *o.ladder;
    if (o.tol) {
        if (command == "embed") {
            c.tol.recovery = *o.tol;
        } else {
            c.tol.c1 = *o.tol;
        }
    }
    return c;
}

/// Writes c1_matrix.csv, c2_bounds.json, c3_sigma.json.
inline int cmd_basis_check(const ExperimentConfig& cfg)
{
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path out = cfg.output_dir;
    fs::create_directories(out);
    const json cj = to_json(cfg);

    const auto frame = cfg.make_frame(cfg.M_terms);
    const auto base = cfg.weights.resolve(cfg.M_terms, "weights");

    bool pass = true;
    {
        report::Csv csv(out / "c1_matrix.csv", cj, {"k1", "k2", "N", "re", "im", "deviation"});
        for (std::size_t N : cfg.ladder) {
            const auto r = check_C1(frame, N, cfg.tol.c1);
            for (Eigen::Index i = 0; i < r.means.rows(); ++i) {
                for (Eigen::Index j = 0; j < r.means.cols(); ++j) {
                    csv.row(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j + 1), N, r.means(i, j).real(),
                            r.means(i, j).imag(), r.deviations(i, j));
                }
            }
            if (N == cfg.ladder.back()) pass = pass && r.pass;
        }
    }

    const auto c2 = check_C2(frame, cfg.p, base);
    const bool c2_pass = std::isfinite(c2.M) && c2.M > 0.0;
    pass = pass && c2_pass;
    report::write_json(out / "c2_bounds.json",
                       {{"p", c2.p},
                        {"M", c2.M},
                        {"norms", c2.norms},
                        {"analytic_norm_at_order", c2.analytic_order_norm},
                        {"order", frame.order()},
                        {"M_terms", frame.m_terms()},
                        {"pass", c2_pass}},
                       cj);

    const auto c3 = check_C3_finite(frame);
    const bool c3_pass = c3.sigma_min > cfg.tol.c3_sigma_min;
    pass = pass && c3_pass;
    report::write_json(out / "c3_sigma.json",
                       {{"singular_values", c3.singular_values},
                        {"sigma_min", c3.sigma_min},
                        {"threshold", cfg.tol.c3_sigma_min},
                        {"frequencies_distinct", frame.frequencies_distinct()},
                        {"pass", c3_pass}},
                       cj);
    return pass ? kPass : kToleranceFailure;
}

/// Coefficient file: either an array of CoefficientArray records or {"cases": [...]}.
inline std::vector<CoefficientArray> parse_coefficient_cases(const json& j, std::size_t K_a)
{
    const json& cases = j.is_object() ? j.at("cases") : j;
    if (!cases.is_array()) throw ConfigError("coefficient file must hold an array of coefficient records");
    std::vector<CoefficientArray> out;
    try {
        for (const auto& rec : cases) {
            auto b = coefficient_array_from_json(rec);
            if (b.K_a() != K_a) throw ConfigError("coefficient record K_a differs from frame K_a");
            out.push_back(std::move(b));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed coefficient record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid coefficient record: ") + e.what());
    }
    return out;
}

/// Writes lemma1.csv, injectivity.json, grading_shift.json.
inline int cmd_embed(const ExperimentConfig& cfg, const std::vector<CoefficientArray>& cases)
{
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path out = cfg.output_dir;
    fs::create_directories(out);
    const json cj = to_json(cfg);

    const auto frame = cfg.make_frame(cfg.embed_M_terms);
    const auto base = cfg.weights.resolve(cfg.embed_M_terms, "weights");
    const auto shift = grading_shift(frame, cfg.p, base);

    bool pass = true;
    json per_case = json::array();
    {
        report::Csv csv(out / "lemma1.csv", cj, {"case", "degree", "lhs", "rhs", "holds", "slack"});
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto r = lemma1_check(cases[i], frame, cfg.p, shift.M, base);
            csv.row(i, r.degree, r.lhs, r.rhs, r.holds, r.slack());
            pass = pass && r.holds;
            const double shifted = tensor_norm_p(embed_tensor(cases[i], frame), shift.target_grade, base);
            const double exotic1 = std::sqrt(cases[i].weighted_l2_mass(frame.exotic_weights()));
            const bool ok = shifted <= exotic1 * (1.0 + 1e-12);
            pass = pass && ok;
            per_case.push_back({{"case", i}, {"shifted_norm", shifted}, {"exotic_norm", exotic1}, {"holds", ok}});
        }
    }
    report::write_json(out / "grading_shift.json",
                       {{"p", shift.p},
                        {"M", shift.M},
                        {"exotic_inverse_square_sum", shift.exotic_sum},
                        {"product", shift.product},
                        {"lambda1", shift.lambda1},
                        {"m", shift.m},
                        {"target_grade", shift.target_grade},
                        {"cases", per_case}},
                       cj);

    std::mt19937_64 eng(cfg.seed);
    const auto inj_frame = cfg.make_frame(cfg.injectivity_M_terms);
    json degrees = json::array();
    for (std::size_t n = 1; n <= cfg.injectivity_max_degree; ++n) {
        const auto r = injectivity_probe(inj_frame, n, cfg.injectivity_trials, eng);
        json trials = json::array();
        for (const auto& t : r.trials) {
            trials.push_back({{"input_norm", t.input_norm}, {"embedded_norm", t.embedded_norm}, {"relative_error", t.relative_error}});
        }
        const bool ok = r.all_nonzero && r.max_relative_error <= cfg.tol.recovery;
        pass = pass && ok;
        degrees.push_back({{"degree", n},
                           {"condition_number", r.condition_number},
                           {"max_relative_error", r.max_relative_error},
                           {"min_embedded_norm", r.min_embedded_norm},
                           {"all_nonzero", r.all_nonzero},
                           {"tolerance", cfg.tol.recovery},
                           {"pass", ok},
                           {"trials", trials}});
    }
    report::write_json(out / "injectivity.json", {{"M_terms", cfg.injectivity_M_terms}, {"degrees", degrees}}, cj);
    return pass ? kPass : kToleranceFailure;
}

/// Base-coordinate snapshots are written out in full only below this many entries.
inline constexpr std::size_t kMaxMaterializedEntries = 100000;

/// Writes solution.json, residuals.csv, horizon.json.
inline int cmd_heat(const ExperimentConfig& cfg, const ExoticFock& initial)
{
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path out = cfg.output_dir;
    fs::create_directories(out);
    const json cj = to_json(cfg);

    auto frame = std::make_shared<const ExoticFrame>(cfg.make_frame(cfg.M_terms));
    if (initial.K_a() != frame->K_a()) throw ConfigError("initial data K_a differs from frame K_a");
    const auto points = cfg.resolve_test_points(cfg.M_terms);
    HeatSolution sol = [&] {
        try {
            return solve_exotic_heat(initial, frame, cfg.heat_p, cfg.time_grid);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    std::vector<ResidualRow> rows;
    try {
        rows = verify_heat_residual(sol, points, cfg.tol.h, cfg.ladder);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    bool pass = true;
    {
        report::Csv csv(out / "residuals.csv", cj, {"t", "label", "lhs", "rhs", "residual", "budget"});
        for (const auto& r : rows) {
            csv.row(r.t, r.label, std::abs(r.lhs), std::abs(r.rhs), r.residual, r.budget);
            pass = pass && r.within;
        }
    }

    std::size_t materialized = 0;
    for (std::size_t n = 0; n <= initial.nmax(); ++n) materialized += SymTensor::storage_size(n, frame->m_terms());
    json snaps = json::array();
    for (std::size_t j = 0; j < sol.grid.size(); ++j) {
        json s_values = json::array();
        for (const auto& tp : points) {
            const cplx v = s_transform(sol.embedded[j], tp.xi);
            s_values.push_back({{"label", tp.label}, {"re", v.real()}, {"im", v.imag()}});
        }
        json embedded{{"form", "factored"}, {"s_transform", s_values}};
        if (materialized <= kMaxMaterializedEntries) embedded["materialized"] = to_json(sol.embedded[j].materialize());
        snaps.push_back({{"t", sol.grid[j]},
                         {"within_horizon", static_cast<bool>(sol.within_horizon[j])},
                         {"exotic", to_json(sol.snapshots[j])},
                         {"embedded", embedded}});
    }
    const json horizon = report::horizon_to_json(sol.horizon);
    report::write_json(out / "solution.json",
                       {{"p", sol.p},
                        {"grid", sol.grid},
                        {"horizon", horizon},
                        {"in_theory", sol.in_theory()},
                        {"initial", to_json(initial)},
                        {"snapshots", snaps}},
                       cj);
    json verdicts = json::array();
    for (std::size_t j = 0; j < sol.grid.size(); ++j) {
        verdicts.push_back({{"t", sol.grid[j]}, {"within_horizon", static_cast<bool>(sol.within_horizon[j])}});
    }
    report::write_json(out / "horizon.json", {{"horizon", horizon}, {"verdicts", verdicts}}, cj);
    return pass ? kPass : kToleranceFailure;
}

/// Writes cesaro_scan.csv and cesaro_fit.json for every ordered frame pair.
inline int cmd_cesaro_scan(const ExperimentConfig& cfg)
{
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path out = cfg.output_dir;
    fs::create_directories(out);
    const json cj = to_json(cfg);
    const auto frame = cfg.make_frame(cfg.M_terms);

    bool pass = true;
    json fits = json::array();
    report::Csv csv(out / "cesaro_scan.csv", cj, {"k1", "k2", "N", "re", "im", "deviation"});
    for (std::size_t i = 0; i < frame.K_a(); ++i) {
        for (std::size_t j = 0; j < frame.K_a(); ++j) {
            const auto est = cesaro_pair(frame.vectors()[i], frame.vectors()[j], frame.order(), cfg.ladder);
            const double target = i == j ? 1.0 : 0.0;
            for (std::size_t l = 0; l < est.ladder.size(); ++l) {
                csv.row(i + 1, j + 1, est.ladder[l], est.values[l].real(), est.values[l].imag(),
                        std::abs(est.values[l] - target));
            }
            pass = pass && std::abs(est.raw_top() - target) <= cfg.tol.c1;
            json f = report::cesaro_to_json(est);
            f["k1"] = i + 1;
            f["k2"] = j + 1;
            fits.push_back(std::move(f));
        }
    }
    report::write_json(out / "cesaro_fit.json", {{"pairs", fits}}, cj);
    return pass ? kPass : kToleranceFailure;
}

} // namespace exotic
