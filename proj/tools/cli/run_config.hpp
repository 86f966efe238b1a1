#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "subharmonic/dynamics.hpp"
#include "subharmonic/unperturbed.hpp"

namespace subharmonic::cli {

/// Bad or inconsistent run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct OutputOptions {
  std::filesystem::path dir = ".";
  OutputFormat format = OutputFormat::Csv;
  int precision = 15;
};

struct SystemBlock {
  std::vector<ForcingTerm> forcing{ForcingTerm{}};
  std::optional<double> omega;
  std::optional<double> period;
  double epsilon = 0.0;
};

/// Unperturbed level the forcing is tuned to. The level comes from at most one
/// of v0, c or x0.
struct ResonanceBlock {
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> v0;
  std::optional<double> c;
  std::optional<PlanarState> x0;
};

struct RunConfig {
  SystemBlock system;
  ResonanceBlock resonance;
  nlohmann::json experiment = nlohmann::json::object();
  OutputOptions output;
};

/// Command-line overrides; unset fields leave the config untouched.
struct FlagOverrides {
  std::optional<std::string> out;
  std::optional<double> eps;
  std::optional<double> t0;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> v0;
  std::optional<std::string> forcing;
};

/// Parses "a1*sin(1),a2*cos(2)"; the amplitude and '*' may be omitted.
std::vector<ForcingTerm> parse_forcing(const std::string& text);

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
void apply_overrides(RunConfig& cfg, const FlagOverrides& flags);

/// Forcing period and, when a level was requested, the resonance behind it.
struct ResolvedSystem {
  ForcingSpec forcing;
  double epsilon = 0.0;
  std::optional<ResonanceSpec> resonance;
};

/// T comes from exactly one source: system.omega, system.T, or the resonant
/// level (T = n T_c / m). With system.T or omega plus m and n, the level is
/// solved for. When require_period is false and nothing is given, omega = 1.
ResolvedSystem resolve_system(const RunConfig& cfg, bool require_period);

nlohmann::json to_json(const std::vector<ForcingTerm>& terms);
nlohmann::json to_json(const ResonanceSpec& spec);

}  // namespace subharmonic::cli
