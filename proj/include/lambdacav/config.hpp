#pragma once

// Run configuration: presets, JSON parsing and validation.

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "errors.hpp"
#include "model.hpp"

namespace lambdacav {

inline constexpr std::string_view kToolName = "lambdacav";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct RunConfig {
    std::string preset; ///< empty when fully explicit
    double Delta2 = 0.0;
    double Delta3 = 0.0;
    double gamma = 1.0;
    double p = 2.0;
    double delta = 0.0; ///< g11/g12; sets mu = sqrt(1 + delta^2)
    double alpha_sq = 10.0;
    double beta_sq = 10.0;
    double tau_max = 25.0;
    std::size_t n_points = 2001;
    double tail_tol = 1e-12;
    std::string output = "lambdacav-out";
    bool verify = false;

    EffectiveParams effective() const { return {Delta2, Delta3, gamma, p, delta}; }
};

struct Preset {
    std::string_view name;
    double Delta2;
    double Delta3;
    double gamma;
};

// Figure parameter sets: p = 2, |alpha|^2 = |beta|^2 = 10 throughout.
inline constexpr std::array<Preset, 4> kPresets = {{
    {"resonant-equal", 0.0, 0.0, 1.0},
    {"resonant-unequal", 0.0, 0.0, 2.0},
    {"detuned-equal", 7.0, 15.0, 1.0},
    {"detuned-unequal", 7.0, 15.0, 2.0},
}};

inline const Preset& find_preset(std::string_view name)
{
    for (const auto& preset : kPresets) {
        if (preset.name == name) {
            return preset;
        }
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

inline void validate(const RunConfig& config)
{
    auto fail = [](const std::string& what) { throw ConfigError("invalid configuration: " + what); };
    if (!(config.tau_max > 0.0)) {
        fail("tau_max must be positive");
    }
    if (config.n_points < 2) {
        fail("n_points must be at least 2");
    }
    if (!(config.alpha_sq >= 0.0) || !(config.beta_sq >= 0.0)) {
        fail("alpha_sq and beta_sq must be non-negative");
    }
    if (!(config.p > 0.0)) {
        fail("p must be positive");
    }
    if (!(config.tail_tol > 0.0 && config.tail_tol < 1.0)) {
        fail("tail_tol must lie in (0, 1)");
    }
    if (std::abs(1.0 - config.delta * config.delta) < kPoleTolerance) {
        fail("|delta| must differ from 1");
    }
    if (!std::isfinite(config.Delta2) || !std::isfinite(config.Delta3) || !std::isfinite(config.gamma)) {
        fail("Delta2, Delta3 and gamma must be finite");
    }
}

/// Resolves defaults, then the preset (if any), then explicit keys.
/// Unknown keys are rejected; a "metadata" block written by a previous run is
/// accepted and ignored, so metadata files load as configs.
inline RunConfig config_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    static constexpr std::array<std::string_view, 14> known = {
        "preset", "Delta2", "Delta3", "gamma", "p", "delta", "alpha_sq", "beta_sq",
        "tau_max", "n_points", "tail_tol", "output", "verify", "metadata",
    };
    for (const auto& [key, value] : doc.items()) {
        bool found = false;
        for (auto k : known) {
            found = found || key == k;
        }
        if (!found) {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }

    RunConfig config;
    try {
        if (doc.contains("preset") && !doc["preset"].get<std::string>().empty()) {
            const Preset& preset = find_preset(doc["preset"].get<std::string>());
            config.preset = std::string(preset.name);
            config.Delta2 = preset.Delta2;
            config.Delta3 = preset.Delta3;
            config.gamma = preset.gamma;
        }
        auto read = [&](const char* key, auto& field) {
            if (doc.contains(key)) {
                doc.at(key).get_to(field);
            }
        };
        read("Delta2", config.Delta2);
        read("Delta3", config.Delta3);
        read("gamma", config.gamma);
        read("p", config.p);
        read("delta", config.delta);
        read("alpha_sq", config.alpha_sq);
        read("beta_sq", config.beta_sq);
        read("tau_max", config.tau_max);
        read("tail_tol", config.tail_tol);
        read("output", config.output);
        read("verify", config.verify);
        if (doc.contains("n_points")) {
            const auto& value = doc.at("n_points");
            if (!value.is_number_integer() || value.get<long long>() < 0) {
                throw ConfigError("n_points must be a non-negative integer");
            }
            config.n_points = value.get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    validate(config);
    return config;
}

inline nlohmann::json config_to_json(const RunConfig& config)
{
    nlohmann::json doc;
    if (!config.preset.empty()) {
        doc["preset"] = config.preset;
    }
    doc["Delta2"] = config.Delta2;
    doc["Delta3"] = config.Delta3;
    doc["gamma"] = config.gamma;
    doc["p"] = config.p;
    doc["delta"] = config.delta;
    doc["alpha_sq"] = config.alpha_sq;
    doc["beta_sq"] = config.beta_sq;
    doc["tau_max"] = config.tau_max;
    doc["n_points"] = config.n_points;
    doc["tail_tol"] = config.tail_tol;
    doc["output"] = config.output;
    doc["verify"] = config.verify;
    return doc;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open configuration file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

/// Sets one sweepable parameter by name.
inline void set_sweep_param(RunConfig& config, std::string_view name, double value)
{
    if (name == "p") {
        config.p = value;
    } else if (name == "Delta2") {
        config.Delta2 = value;
    } else if (name == "Delta3") {
        config.Delta3 = value;
    } else if (name == "gamma") {
        config.gamma = value;
    } else if (name == "beta_sq") {
        config.beta_sq = value;
    } else {
        throw ConfigError("cannot sweep '" + std::string(name) + "' (allowed: p, Delta2, Delta3, gamma, beta_sq)");
    }
}

} // namespace lambdacav
