// config.hpp - strict JSON run configuration shared by every CLI command.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fockgen/ensemble.hpp"

namespace fockgen {

// Unset optional keys default relative to g: kappa = g/10, gamma = g/20,
// delta = -2g, dt = 0.1/g, stop_threshold = 1e-6 g, linear rate = g/30,
// gaussian peak = g, tau = 50/g, t0 = 4 tau.
struct SimulationConfig {
    EnsembleConfig ensemble{};
    std::string output_dir{"."};

    [[nodiscard]] const TrajectoryConfig& trajectory() const noexcept { return ensemble.trajectory; }
};

// Throws ConfigError on malformed JSON, unknown keys, wrong types or values
// that fail validation.
[[nodiscard]] SimulationConfig parse_config(const std::string& json_text);
[[nodiscard]] SimulationConfig load_config(const std::filesystem::path& path);

// Fully resolved config as JSON text; parse_config(to_json(c)) reproduces c.
[[nodiscard]] std::string config_to_json(const SimulationConfig& config, int indent = 2);

}  // namespace fockgen
