#pragma once

#include <string_view>

#include "run_config.hpp"

namespace subharmonic::cli {

/// Exit statuses shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Each command writes its files into cfg.output.dir and returns kExitOk or
/// kExitNumerical (outputs written so far are kept). Configuration problems
/// throw ConfigError; library errors propagate as subharmonic::Error.
int run_phase_portrait(const RunConfig& cfg);
int run_period_curve(const RunConfig& cfg);
int run_strobo_scan(const RunConfig& cfg);
int run_melnikov(const RunConfig& cfg);
int run_find_po(const RunConfig& cfg);

/// Dispatch by subcommand name; maps every failure to an exit status and
/// reports it on stderr.
int run_command(std::string_view name, const RunConfig& cfg);

}  // namespace subharmonic::cli
