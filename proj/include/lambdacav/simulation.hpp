#pragma once

// Time-series runs, parameter sweeps and their on-disk formats.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "json.hpp"

#include "config.hpp"
#include "dynamics.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "oracle.hpp"

namespace lambdacav {

struct TimeSeriesRow {
    double tau = 0.0;
    double inversion = 0.0;
    double entropy_vn = 0.0;
    double entropy_lin = 0.0;
    double rho11 = 0.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
};

inline constexpr const char* kSeriesHeader = "tau,inversion,entropy_vn,entropy_lin,rho11,rho22,rho33";

/// Everything derived from a config before time stepping.
struct Setup {
    PhysicalParams physical;
    TransformedParams transformed;
    CoherentWeights weights;
    ShapeFunction shape;
};

inline Setup prepare(const RunConfig& config)
{
    validate(config);
    Setup setup;
    setup.physical = physical_from_effective(config.effective());
    setup.transformed = transform(setup.physical);
    setup.weights = coherent_weights(cplx{std::sqrt(config.alpha_sq), 0.0}, cplx{std::sqrt(config.beta_sq), 0.0},
                                     config.tail_tol);
    setup.shape = ShapeFunction::sinusoidal(config.p);
    return setup;
}

inline TimeSeriesRow observe(const JointState& state)
{
    const AtomicDensityMatrix rho = reduce(state);
    const EigenTriple eigs = cardano_eigenvalues(rho);
    return {
        state.time,
        inversion(rho),
        von_neumann_entropy(eigs),
        linear_entropy(rho),
        rho(0, 0).real(),
        rho(1, 1).real(),
        rho(2, 2).real(),
    };
}

/// Uniform grid tau_i = i tau_max / (n_points - 1).
inline std::vector<double> time_grid(double tau_max, std::size_t n_points)
{
    std::vector<double> taus(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        taus[i] = tau_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return taus;
}

/// Maps `fn(i)` over [0, count) with a contiguous block per worker.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 64);
    if (workers == 1 || count < 2 * workers) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t begin = 0; begin < count; begin += chunk) {
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
}

/// Throws Error when a row leaves the physical range of the observables.
inline void check_row(const TimeSeriesRow& row)
{
    constexpr double slack = 1e-12;
    const bool ok = row.inversion >= -1.0 - slack && row.inversion <= 1.0 + slack && row.entropy_vn >= 0.0 &&
                    row.entropy_vn <= std::log(3.0) + slack && row.entropy_lin >= -slack &&
                    row.entropy_lin <= 2.0 / 3.0 + slack;
    if (!ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "observable out of range at tau=" << row.tau << ": inversion=" << row.inversion
            << " entropy_vn=" << row.entropy_vn << " entropy_lin=" << row.entropy_lin;
        throw Error(msg.str());
    }
}

inline std::vector<TimeSeriesRow> simulate_series(const RunConfig& config, const Setup& setup)
{
    const std::vector<double> taus = time_grid(config.tau_max, config.n_points);
    std::vector<TimeSeriesRow> rows(taus.size());
    parallel_for(taus.size(), [&](std::size_t i) {
        rows[i] = observe(evolve(setup.weights, setup.transformed, setup.shape, taus[i]));
    });
    return rows;
}

inline std::vector<TimeSeriesRow> simulate_series(const RunConfig& config)
{
    return simulate_series(config, prepare(config));
}

inline std::string format_double(double value)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

inline void write_series(std::ostream& out, const std::vector<TimeSeriesRow>& rows)
{
    out << kSeriesHeader << '\n';
    for (const auto& row : rows) {
        check_row(row);
        out << format_double(row.tau) << ',' << format_double(row.inversion) << ','
            << format_double(row.entropy_vn) << ',' << format_double(row.entropy_lin) << ','
            << format_double(row.rho11) << ',' << format_double(row.rho22) << ',' << format_double(row.rho33)
            << '\n';
    }
}

/// Analytic-vs-RK4 discrepancy for one config, sampled on a coarse grid.
struct OracleReport {
    double max_amplitude_error = 0.0;
    double step = 0.0;
    std::size_t samples = 0;
};

inline OracleReport oracle_report(const RunConfig& config, const Setup& setup, std::size_t samples = 26)
{
    OracleReport report;
    report.step = oracle::default_step(setup.transformed, config.p, setup.weights.mmax);
    report.samples = samples;
    const std::vector<double> taus = time_grid(config.tau_max, samples);
    std::vector<double> worst(setup.weights.mmax + 1, 0.0);
    parallel_for(worst.size(), [&](std::size_t m) {
        const auto numeric =
            oracle::propagate_block_samples(oracle::BlockODE::from(setup.transformed, setup.shape, m), taus,
                                            report.step);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const Amplitudes analytic = amplitudes(theta_closed_form(setup.transformed, config.p, taus[i]), m);
            worst[m] = std::max(worst[m], oracle::amplitude_distance(analytic, numeric[i]));
        }
    });
    report.max_amplitude_error = *std::max_element(worst.begin(), worst.end());
    return report;
}

inline nlohmann::json metadata_json(const RunConfig& config, const Setup& setup, const std::string& series_file,
                                    const OracleReport* oracle_result)
{
    nlohmann::json doc = config_to_json(config);
    nlohmann::json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["series_file"] = series_file;
    meta["nmax"] = setup.weights.nmax;
    meta["mmax"] = setup.weights.mmax;
    const auto& ph = setup.physical;
    meta["physical"] = {
        {"omega1", ph.omega1}, {"omega2", ph.omega2}, {"omega3", ph.omega3}, {"Omega1", ph.Omega1},
        {"Omega2", ph.Omega2}, {"g11", ph.g11},       {"g12", ph.g12},       {"g21", ph.g21},
        {"g22", ph.g22},       {"gff", ph.gff},       {"p", ph.p},           {"delta", ph.delta},
    };
    const auto& tp = setup.transformed;
    meta["transformed"] = {
        {"theta", tp.theta}, {"OmegaT1", tp.OmegaT1}, {"OmegaT2", tp.OmegaT2}, {"mu11", tp.mu11},
        {"mu12", tp.mu12},   {"mu21", tp.mu21},       {"mu22", tp.mu22},       {"mu", tp.mu},
        {"gamma", tp.gamma}, {"Delta2", tp.Delta2},   {"Delta3", tp.Delta3},
    };
    if (oracle_result != nullptr) {
        meta["oracle"] = {
            {"max_amplitude_error", oracle_result->max_amplitude_error},
            {"step", oracle_result->step},
            {"samples", oracle_result->samples},
        };
    }
    doc["metadata"] = meta;
    return doc;
}

struct RunOutput {
    std::filesystem::path series;
    std::filesystem::path metadata;
    std::vector<TimeSeriesRow> rows;
};

namespace detail {

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

inline std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    return out;
}

inline RunOutput run_to(const RunConfig& config, const std::filesystem::path& dir, const std::string& stem)
{
    const Setup setup = prepare(config);
    ensure_directory(dir);

    RunOutput result;
    result.rows = simulate_series(config, setup);
    result.series = dir / (stem + ".csv");
    result.metadata = dir / (stem + ".json");

    // validate every row before touching the filesystem
    for (const auto& row : result.rows) {
        check_row(row);
    }
    {
        auto out = open_for_write(result.series);
        write_series(out, result.rows);
        if (!out) {
            throw IoError("failed writing '" + result.series.string() + "'");
        }
    }

    OracleReport report;
    if (config.verify) {
        report = oracle_report(config, setup);
    }
    {
        auto out = open_for_write(result.metadata);
        out << metadata_json(config, setup, result.series.filename().string(), config.verify ? &report : nullptr)
                   .dump(2)
            << '\n';
        if (!out) {
            throw IoError("failed writing '" + result.metadata.string() + "'");
        }
    }
    return result;
}

} // namespace detail

/// Writes <output>/series.csv and <output>/metadata.json.
inline RunOutput run(const RunConfig& config)
{
    validate(config);
    return detail::run_to(config, config.output, "series");
}

struct SweepOutput {
    std::filesystem::path index;
    std::vector<RunOutput> runs;
};

/// One run per value, written as <output>/<param>_<i>.csv/.json, plus
/// <output>/sweep_index.csv mapping each value to its files.
inline SweepOutput sweep(const RunConfig& config, const std::string& param, const std::vector<double>& values)
{
    if (values.empty()) {
        throw ConfigError("sweep: no values given");
    }
    std::vector<RunConfig> configs;
    for (double value : values) {
        RunConfig point = config;
        set_sweep_param(point, param, value);
        validate(point);
        configs.push_back(point);
    }

    const std::filesystem::path dir = config.output;
    detail::ensure_directory(dir);
    SweepOutput result;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        result.runs.push_back(detail::run_to(configs[i], dir, param + "_" + std::to_string(i)));
    }

    result.index = dir / "sweep_index.csv";
    auto out = detail::open_for_write(result.index);
    out << "index,param,value,series,metadata\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',' << param << ',' << format_double(values[i]) << ','
            << result.runs[i].series.filename().string() << ',' << result.runs[i].metadata.filename().string()
            << '\n';
    }
    if (!out) {
        throw IoError("failed writing '" + result.index.string() + "'");
    }
    return result;
}

} // namespace lambdacav
