// JSON run configuration.
//
//   {
//     "ssp": [[0, 1496], [8, 1496], [10, 1485], [31, 1485]],
//     "water_depth": 31,
//     "halfspace": {"speed": 1652, "density_ratio": 1.77, "attenuation_db_per_lambda": 0.2},
//     "array": {"first_depth": 1, "spacing": 1, "count": 30, "anchor": "surface"},
//     "source": {"frequency": 596, "depth": 20, "range": 5000},
//     "snr_db": 30,
//     "solver": {"band": [2.0851, 2.5217], "epsilon_mode": "known", ...},
//     "dss": {"sign_step": 0.1, "amplitude_threshold": 1e-3, "template_epsilon": 1e-6},
//     "window": {"sample_rate": 2000},
//     "sweep": {"trials": 50, "seed": 1, "workers": 1}
//   }
//
// "array" may instead be {"depths": [...]}; "snr_db" may be "inf" for a clean
// snapshot; "solver.band_speeds": [slow, fast] gives a band that scales with f.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "ocmsd/harness.hpp"

namespace ocmsd {

struct RunConfig {
    Scenario scenario;
    EstimatorSettings estimator;
    WindowSettings window;
    int trials = 50;
    std::uint64_t seed = 1;
    int workers = 1;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Echo of a configuration in the same schema.
nlohmann::json to_json(const RunConfig& cfg);

EpsilonMode epsilon_mode_from_string(const std::string& name);
const char* to_string(EpsilonMode mode);

/// SweepSpec from a run configuration; values default to the study grid.
SweepSpec make_sweep_spec(const RunConfig& cfg, SweepKind kind, std::vector<double> values = {});

}  // namespace ocmsd
