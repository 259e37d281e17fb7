#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "occtime/mc_sim.hpp"
#include "occtime/model.hpp"
#include "occtime/step_penalty.hpp"

namespace occtime {

/// Bad JSON, unknown keys or values that fail validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// n equally spaced wealth levels from w_min to w_max inclusive.
struct CurveGrid {
    double w_min = 0.0;
    double w_max = 0.0;
    int n = 101;

    std::vector<double> points() const;
};

struct RunConfig {
    ModelParams params;
    CurveGrid grid;  // defaults to [-L, c/r]
    SimConfig sim;
    /// Level of the constant-allocation benchmark rule in `simulate`;
    /// defaults to the ruin-minimizing allocation at zero wealth.
    std::optional<double> constant_pi;
    std::vector<double> sweep_L;  // defaults to {L/2, L, 2L}
    std::optional<StepPenalty> penalty;
};

/// Parses the JSON text. A string-valued "penalty" is read as a path to a
/// penalty file, resolved against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace occtime
