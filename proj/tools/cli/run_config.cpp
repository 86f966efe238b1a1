#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>

#include "subharmonic/errors.hpp"

namespace subharmonic::cli {
namespace {

using nlohmann::json;

const json& child(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const json& c = doc.at(key);
  if (!c.is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return c;
}

template <class T>
std::optional<T> optional_field(const json& block, const char* key) {
  if (!block.contains(key) || block.at(key).is_null()) return std::nullopt;
  try {
    return block.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("'") + key + "' has the wrong type");
  }
}

PlanarState point_from_json(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a [u, v] pair");
  }
  try {
    return PlanarState(j[0].get<double>(), j[1].get<double>());
  } catch (const Error& e) {
    throw ConfigError(std::string("'") + key + "': " + e.what());
  }
}

std::vector<ForcingTerm> forcing_from_json(const json& j) {
  if (j.is_string()) return parse_forcing(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("'forcing' must be a string or a list of terms");
  std::vector<ForcingTerm> terms;
  for (const auto& t : j) {
    if (!t.is_object()) throw ConfigError("forcing terms must be objects");
    ForcingTerm term;
    term.amplitude = optional_field<double>(t, "amplitude").value_or(1.0);
    term.harmonic = optional_field<int>(t, "harmonic").value_or(1);
    const std::string kind = optional_field<std::string>(t, "kind").value_or("sin");
    if (kind == "sin") {
      term.kind = PhaseKind::Sine;
    } else if (kind == "cos") {
      term.kind = PhaseKind::Cosine;
    } else {
      throw ConfigError("forcing kind must be 'sin' or 'cos', got '" + kind + "'");
    }
    terms.push_back(term);
  }
  return terms;
}

}  // namespace

std::vector<ForcingTerm> parse_forcing(const std::string& text) {
  static const std::regex term_re(
      R"(\s*(?:([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*\s*)?(sin|cos)\s*\(\s*(\d+)\s*\)\s*)");
  std::vector<ForcingTerm> terms;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::smatch m;
    if (!std::regex_match(piece, m, term_re)) {
      throw ConfigError("cannot parse forcing term '" + piece + "'");
    }
    ForcingTerm term;
    term.amplitude = m[1].matched ? std::stod(m[1].str()) : 1.0;
    term.kind = m[2].str() == "sin" ? PhaseKind::Sine : PhaseKind::Cosine;
    term.harmonic = std::stoi(m[3].str());
    terms.push_back(term);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return terms;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "system" && key != "resonance" && key != "experiment" && key != "output") {
      throw ConfigError("unknown config block '" + key + "'");
    }
  }
  RunConfig cfg;

  const json& sys = child(doc, "system");
  if (sys.contains("forcing")) cfg.system.forcing = forcing_from_json(sys.at("forcing"));
  cfg.system.omega = optional_field<double>(sys, "omega");
  cfg.system.period = optional_field<double>(sys, "T");
  cfg.system.epsilon = optional_field<double>(sys, "epsilon").value_or(0.0);

  const json& res = child(doc, "resonance");
  cfg.resonance.m = optional_field<int>(res, "m");
  cfg.resonance.n = optional_field<int>(res, "n");
  cfg.resonance.v0 = optional_field<double>(res, "v0");
  cfg.resonance.c = optional_field<double>(res, "c");
  if (res.contains("x0")) cfg.resonance.x0 = point_from_json(res.at("x0"), "x0");

  cfg.experiment = child(doc, "experiment");

  const json& out = child(doc, "output");
  if (auto dir = optional_field<std::string>(out, "dir")) cfg.output.dir = *dir;
  const std::string format = optional_field<std::string>(out, "format").value_or("csv");
  if (format == "csv") {
    cfg.output.format = OutputFormat::Csv;
  } else if (format == "json") {
    cfg.output.format = OutputFormat::Json;
  } else {
    throw ConfigError("output format must be 'csv' or 'json'");
  }
  cfg.output.precision = optional_field<int>(out, "precision").value_or(15);
  if (cfg.output.precision < 1 || cfg.output.precision > 17) {
    throw ConfigError("output precision must be between 1 and 17 digits");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void apply_overrides(RunConfig& cfg, const FlagOverrides& flags) {
  if (flags.out) cfg.output.dir = *flags.out;
  if (flags.eps) cfg.system.epsilon = *flags.eps;
  if (flags.t0) cfg.experiment["t0"] = *flags.t0;
  if (flags.m) cfg.resonance.m = *flags.m;
  if (flags.n) cfg.resonance.n = *flags.n;
  if (flags.v0) {
    cfg.resonance.v0 = *flags.v0;
    cfg.resonance.c.reset();
    cfg.resonance.x0.reset();
  }
  if (flags.forcing) cfg.system.forcing = parse_forcing(*flags.forcing);
}

ResolvedSystem resolve_system(const RunConfig& cfg, bool require_period) {
  const auto& sys = cfg.system;
  const auto& res = cfg.resonance;
  if (!std::isfinite(sys.epsilon) || sys.epsilon < 0.0) {
    throw ConfigError("epsilon must be a finite non-negative number");
  }
  const int level_sources = res.v0.has_value() + res.c.has_value() + res.x0.has_value();
  if (level_sources > 1) throw ConfigError("give at most one of resonance.v0, resonance.c, resonance.x0");
  if (sys.omega && sys.period) throw ConfigError("give exactly one of system.omega and system.T");
  const bool has_period = sys.omega || sys.period;
  if (has_period && level_sources == 1) {
    throw ConfigError("the forcing period comes from either system.omega/T or the resonant level, not both");
  }
  if (level_sources == 1 && !(res.m && res.n)) {
    throw ConfigError("a resonant level needs resonance.m and resonance.n");
  }

  ResolvedSystem out;
  out.epsilon = sys.epsilon;
  double omega = 1.0;
  try {
    if (level_sources == 1) {
      double v0;
      if (res.v0) {
        v0 = *res.v0;
      } else {
        const double c = res.c ? *res.c : hamiltonian(*res.x0);
        v0 = ic_on_axis(EnergyLevel(c)).v();
      }
      out.resonance = resonance_from_level(v0, *res.m, *res.n);
      omega = out.resonance->omega;
    } else if (has_period) {
      const double T = sys.period ? *sys.period : 2.0 * std::numbers::pi / *sys.omega;
      if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("forcing period must be positive");
      omega = 2.0 * std::numbers::pi / T;
      if (res.m && res.n) out.resonance = level_for_period(T, *res.m, *res.n);
    } else if (require_period) {
      throw ConfigError("no forcing period: set system.omega, system.T or a resonant level");
    }
    out.forcing = ForcingSpec(omega, sys.forcing);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::InvalidArgument:
      case ErrorKind::OutOfRange:
      case ErrorKind::Unattainable:
        throw ConfigError(e.what());
      default:
        throw;
    }
  }
  return out;
}

json to_json(const std::vector<ForcingTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms) {
    out.push_back({{"amplitude", t.amplitude},
                   {"harmonic", t.harmonic},
                   {"kind", t.kind == PhaseKind::Sine ? "sin" : "cos"}});
  }
  return out;
}

json to_json(const ResonanceSpec& spec) {
  return {{"m", spec.m}, {"n", spec.n}, {"T", spec.T}, {"omega", spec.omega},
          {"c", spec.c}, {"T_c", spec.T_c}, {"v0", spec.v0}};
}

}  // namespace subharmonic::cli
