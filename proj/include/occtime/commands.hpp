#pragma once

#include <string>

#include "occtime/config.hpp"

namespace occtime {

/// Fault injection for exercising the failure path of `verify`.
struct VerifyHooks {
    double y0_factor = 1.0;  // multiplies y0 after the solve
};

struct CommandResult {
    std::string text;  // JSON or CSV, newline-terminated
    bool pass = true;  // false only when verify finds a failing check
};

CommandResult cmd_solve(const RunConfig& config);
/// w,y,M_L,m1,m2_left,m2_right,pi_star,pi_ruin on the config grid. Away from
/// w = 0 both m2 columns agree; pi_star at w = 0 is the right-hand limit.
CommandResult cmd_curve(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config, const VerifyHooks& hooks = {});
/// L,w,M_L,pi_star,pi_star_over_L for each L and each grid point in (-L, c/r].
CommandResult cmd_sweep(const RunConfig& config);

CommandResult run_command(const std::string& name, const RunConfig& config, const VerifyHooks& hooks = {});

/// 17 significant digits.
std::string format_number(double x);

}  // namespace occtime
