// exotic-hkt: batch driver for frame diagnostics, embedding checks and heat
// flow verification. See README.md for the config schema.

#include "exotic/experiment.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::size_t> parse_ladder(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const auto v = std::stoull(item, &pos);
        if (pos != item.size()) throw exotic::ConfigError("bad ladder entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exotic Hida-Kubo-Takenaka numerical engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string ladder;
    double tol = 0.0;
    std::string coefficients_path;
    std::string initial_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed for probes");
        sub->add_option("--ladder", ladder, "Cesàro ladder, e.g. \"100,1000,10000\"");
        sub->add_option("--tol", tol, "primary tolerance (C1 for basis-check/cesaro-scan, recovery for embed)");
    };

    auto* basis = app.add_subcommand("basis-check", "check the frame conditions C1, C2, C3");
    auto* embed = app.add_subcommand("embed", "norm bound, grading shift and injectivity of the inclusion map");
    auto* heat = app.add_subcommand("heat", "solve the exotic heat equation and verify residuals");
    auto* scan = app.add_subcommand("cesaro-scan", "Cesàro ladders and fits for every frame pair");
    for (auto* sub : {basis, embed, heat, scan}) add_common(sub);
    embed->add_option("--coefficients", coefficients_path, "coefficient records (JSON)")->required();
    heat->add_option("--initial", initial_path, "initial exotic Fock vector (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exotic::kConfigError;
    }

    auto* active = app.get_subcommands().front();
    const std::string command = active->get_name();
    try {
        exotic::ExperimentConfig cfg = config_path.empty() ? exotic::ExperimentConfig{} : exotic::load_config(config_path);
        exotic::CommandOptions opts;
        if (active->count("--out")) opts.out_dir = out_dir;
        if (active->count("--seed")) opts.seed = seed;
        if (active->count("--ladder")) opts.ladder = parse_ladder(ladder);
        if (active->count("--tol")) opts.tol = tol;
        cfg = exotic::apply_overrides(std::move(cfg), opts, command);

        int rc = exotic::kPass;
        if (command == "basis-check") {
            rc = exotic::cmd_basis_check(cfg);
        } else if (command == "embed") {
            const auto cases = exotic::parse_coefficient_cases(exotic::read_json_file(coefficients_path), cfg.K_a);
            rc = exotic::cmd_embed(cfg, cases);
        } else if (command == "heat") {
            const auto j = exotic::read_json_file(initial_path);
            exotic::ExoticFock initial = [&] {
                try {
                    return exotic::exotic_fock_from_json(j);
                } catch (const std::exception& e) {
                    throw exotic::ConfigError(std::string("malformed initial data: ") + e.what());
                }
            }();
            rc = exotic::cmd_heat(cfg, initial);
        } else {
            rc = exotic::cmd_cesaro_scan(cfg);
        }
        std::cout << command << ": " << (rc == exotic::kPass ? "pass" : "FAIL (tolerance)") << " -> " << cfg.output_dir
                  << '\n';
        return rc;
    } catch (const exotic::ConfigError& e) {
        std::cerr << command << ": configuration error: " << e.what() << '\n';
        return exotic::kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": invalid input: " << e.what() << '\n';
        return exotic::kConfigError;
    }
}
