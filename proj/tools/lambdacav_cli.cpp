// lambdacav: time series, parameter sweeps and self-checks for a moving
// Lambda atom in a two-mode cavity with field-field coupling.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lambdacav/lambdacav.hpp"

namespace {

std::vector<double> parse_values(const std::string& list)
{
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw lambdacav::ConfigError("cannot parse sweep value '" + item + "'");
        }
        if (used != item.size()) {
            throw lambdacav::ConfigError("cannot parse sweep value '" + item + "'");
        }
        values.push_back(value);
    }
    return values;
}

int print_report(const lambdacav::verify::Report& report)
{
    for (const auto& check : report.checks) {
        std::printf("%-4s %-50s max_error=%.3e", check.asserted ? (check.passed ? "PASS" : "FAIL") : "INFO",
                    check.name.c_str(), check.max_error);
        if (check.asserted) {
            std::printf(" threshold=%.1e", check.threshold);
        }
        std::printf("\n");
    }
    std::printf("%s\n", report.passed() ? "verify: all checks passed" : "verify: FAILED");
    return report.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact dynamics of a moving Lambda atom in a two-mode cavity"};
    app.set_version_flag("--version", std::string(lambdacav::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* simulate = app.add_subcommand("simulate", "Write one time series and its metadata");
    simulate->add_option("--config", config_path, "JSON run configuration (or a previous run's metadata)")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--out", out_dir, "Output directory (overrides the config)");

    std::string param;
    std::string values;
    auto* sweep = app.add_subcommand("sweep", "Run one series per value of a parameter");
    sweep->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sweep->add_option("--param", param, "Parameter to vary")
        ->required()
        ->check(CLI::IsMember({"p", "Delta2", "Delta3", "gamma", "beta_sq"}));
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--out", out_dir, "Output directory (overrides the config)");

    std::string level = "quick";
    auto* verify = app.add_subcommand("verify", "Compare analytic routes with numerical oracles");
    verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            auto config = lambdacav::load_config(config_path);
            if (!out_dir.empty()) {
                config.output = out_dir;
            }
            const auto result = lambdacav::run(config);
            std::cout << "wrote " << result.series.string() << " (" << result.rows.size() << " rows) and "
                      << result.metadata.string() << '\n';
        } else if (sweep->parsed()) {
            auto config = lambdacav::load_config(config_path);
            if (!out_dir.empty()) {
                config.output = out_dir;
            }
            const auto result = lambdacav::sweep(config, param, parse_values(values));
            std::cout << "wrote " << result.runs.size() << " series; index " << result.index.string() << '\n';
        } else if (verify->parsed()) {
            const auto lvl = level == "full" ? lambdacav::verify::Level::Full : lambdacav::verify::Level::Quick;
            return print_report(lambdacav::verify::run(lvl));
        }
    } catch (const lambdacav::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
