#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <set>

#include "subharmonic/errors.hpp"
#include "subharmonic/melnikov.hpp"
#include "subharmonic/roots.hpp"
#include "subharmonic/solvers.hpp"
#include "subharmonic/strobo_map.hpp"
#include "subharmonic/unperturbed.hpp"
#include "table.hpp"

namespace subharmonic::cli {
namespace {

using nlohmann::json;

/// Reads experiment parameters and records the value actually used, so the
/// output header shows defaults too. Unknown keys are rejected by finish().
class Params {
 public:
  explicit Params(const json& src) : src_(src) {}

  template <class T>
  T get(const char* key, T fallback) {
    T value = fallback;
    if (src_.contains(key) && !src_.at(key).is_null()) {
      try {
        value = src_.at(key).get<T>();
      } catch (const json::exception&) {
        throw ConfigError(std::string("experiment.") + key + " has the wrong type");
      }
    }
    used_[key] = value;
    return value;
  }

  template <class T>
  std::optional<T> optional(const char* key) {
    seen_.insert(key);
    if (!src_.contains(key) || src_.at(key).is_null()) return std::nullopt;
    return get<T>(key, T{});
  }

  bool has(const char* key) const { return src_.contains(key); }
  const json& raw(const char* key) const { return src_.at(key); }
  void record(const char* key, json value) { used_[key] = std::move(value); }

  void finish() const {
    for (const auto& [key, value] : src_.items()) {
      if (!used_.contains(key) && !seen_.contains(key)) {
        throw ConfigError("unknown experiment parameter '" + key + "'");
      }
    }
  }

  const json& used() const { return used_; }

 private:
  const json& src_;
  json used_ = json::object();
  std::set<std::string> seen_;
};

PlanarState point_param(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(what + " must be a [u, v] pair");
  }
  return PlanarState(j[0].get<double>(), j[1].get<double>());
}

json point_json(const PlanarState& x) { return json::array({x.u(), x.v()}); }

OutputContext make_context(const char* command, const RunConfig& cfg, const ResolvedSystem& rs,
                           const Params& params) {
  json system = {{"forcing", to_json(cfg.system.forcing)},
                 {"omega", rs.forcing.omega()},
                 {"T", rs.forcing.period()},
                 {"epsilon", rs.epsilon}};
  json resolved = {{"system", system},
                   {"resonance", rs.resonance ? to_json(*rs.resonance) : json(nullptr)},
                   {"experiment", params.used()},
                   {"output",
                    {{"format", cfg.output.format == OutputFormat::Csv ? "csv" : "json"},
                     {"precision", cfg.output.precision}}}};
  return {command, cfg.output, std::move(resolved)};
}

const ResonanceSpec& require_resonance(const ResolvedSystem& rs) {
  if (!rs.resonance) {
    throw ConfigError("this command needs a resonance: resonance.m, resonance.n and a level or period");
  }
  return *rs.resonance;
}

void announce(const std::filesystem::path& path) { std::cout << "wrote " << path.string() << '\n'; }

std::vector<PlanarState> default_portrait_seeds() {
  std::vector<PlanarState> seeds;
  for (int k = 1; k <= 7; ++k) seeds.emplace_back(0.0, 0.25 * k);
  // Levels H = 1 -+ 0.01 on either side of the separatrix.
  seeds.emplace_back(0.0, std::sqrt(2.0 * (1.0 - 0.01 + 1.0)));
  seeds.emplace_back(0.0, std::sqrt(2.0 * (1.0 + 0.01 + 1.0)));
  for (double v : {2.25, 2.5}) {
    seeds.emplace_back(-std::numbers::pi, v);
    seeds.emplace_back(std::numbers::pi, -v);
  }
  return seeds;
}

std::vector<PlanarState> seeds_param(Params& p, const char* key, std::vector<PlanarState> fallback) {
  std::vector<PlanarState> seeds = std::move(fallback);
  if (p.has(key)) {
    const json& list = p.raw(key);
    if (!list.is_array() || list.empty()) throw ConfigError(std::string("experiment.") + key + " must be a non-empty list");
    seeds.clear();
    for (const auto& s : list) seeds.push_back(point_param(s, std::string("experiment.") + key + " entry"));
  }
  json used = json::array();
  for (const auto& s : seeds) used.push_back(point_json(s));
  p.record(key, used);
  return seeds;
}

/// v1 > 0 with H(v1, v1) = c, the diagonal crossing of a librational level.
double diagonal_crossing(double c) {
  auto f = [c](double x) { return 0.5 * x * x - std::cos(x) - c; };
  const double hi = std::numbers::pi;
  return refine_root(f, 0.0, hi, f(0.0), f(hi), 1e-15).x;
}

}  // namespace

int run_phase_portrait(const RunConfig& cfg) {
  Params p(cfg.experiment);
  const double t0 = p.get("t0", 0.0);
  const std::string mode = p.get<std::string>("sample_mode", "uniform");
  if (mode != "uniform" && mode != "strobe") throw ConfigError("sample_mode must be 'uniform' or 'strobe'");
  const bool strobe = mode == "strobe";
  const int samples = p.get("samples", strobe ? 300 : 400);
  const double duration = strobe ? 0.0 : p.get("duration", 20.0);
  const std::vector<PlanarState> seeds = seeds_param(p, "seeds", default_portrait_seeds());
  p.finish();
  if (samples < 1) throw ConfigError("samples must be positive");
  if (!strobe && !(duration > 0.0)) throw ConfigError("duration must be positive");

  const ResolvedSystem rs = resolve_system(cfg, cfg.system.epsilon != 0.0 || strobe);
  const SystemSpec sys{rs.forcing, rs.epsilon};
  const OutputContext ctx = make_context("phase-portrait", cfg, rs, p);

  Table traj{"trajectories", {"seed_id", "t", "u", "v", "H"}, {}};
  Table status{"trajectories_status", {"seed_id", "u0", "v0", "status", "message"}, {}};
  if (strobe) {
    const double T = rs.forcing.period();
    const auto results = scan(seeds, t0, sys, T, ScanOptions{samples, 10.0});
    for (std::size_t s = 0; s < results.size(); ++s) {
      const auto& pts = results[s].orbit.points;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        traj.add({static_cast<long long>(s), t0 + static_cast<double>(k) * T, pts[k].u(), pts[k].v(),
                  hamiltonian(pts[k])});
      }
      status.add({static_cast<long long>(s), seeds[s].u(), seeds[s].v(),
                  std::string(to_string(results[s].status)), results[s].message});
    }
  } else {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      try {
        for (const auto& sample : sample_trajectory(seeds[s], t0, sys, duration, samples)) {
          traj.add({static_cast<long long>(s), sample.t, sample.x.u(), sample.x.v(), hamiltonian(sample.x)});
        }
        status.add({static_cast<long long>(s), seeds[s].u(), seeds[s].v(), std::string("ok"), std::string()});
      } catch (const Error& e) {
        status.add({static_cast<long long>(s), seeds[s].u(), seeds[s].v(), std::string("integration_failed"),
                    std::string(e.what())});
      }
    }
  }
  announce(write_table(traj, ctx));
  announce(write_table(status, ctx));
  return kExitOk;
}

int run_period_curve(const RunConfig& cfg) {
  Params p(cfg.experiment);
  const double lo = p.get("v0_min", 0.05);
  const double hi = p.get("v0_max", 1.95);
  const int points = p.get("points", 100);
  p.finish();
  if (!(lo > 0.0) || !(hi < 2.0) || !(lo < hi)) {
    throw ConfigError("period-curve grid must satisfy 0 < v0_min < v0_max < 2");
  }
  if (points < 2) throw ConfigError("period-curve needs at least 2 points");

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  const ResolvedSystem rs = resolve_system(cfg, false);
  const OutputContext ctx = make_context("period-curve", cfg, rs, p);

  Table table{"period_curve", {"v0", "c", "T_c", "T_oracle"}, {}};
  for (const auto& row : period_curve(grid)) table.add({row.v0, row.c, row.T_c, row.T_oracle});
  announce(write_table(table, ctx));
  return kExitOk;
}

int run_strobo_scan(const RunConfig& cfg) {
  Params p(cfg.experiment);
  const double t0 = p.get("t0", 0.0);
  const int iterations = p.get("iterations", 300);
  const std::string recipe = p.get<std::string>("recipe", "axis");
  const int count = p.get("count", 30);
  const double escape = p.get("escape_speed", 10.0);
  const double eps = cfg.system.epsilon;
  const double half_width = p.get("half_width", eps > 0.0 ? 2.0 * eps : 0.05);
  std::optional<PlanarState> from, to;
  if (recipe == "line") {
    if (!p.has("from") || !p.has("to")) throw ConfigError("recipe 'line' needs experiment.from and experiment.to");
    from = point_param(p.raw("from"), "experiment.from");
    to = point_param(p.raw("to"), "experiment.to");
    p.record("from", point_json(*from));
    p.record("to", point_json(*to));
  } else if (recipe != "axis" && recipe != "diagonal") {
    throw ConfigError("recipe must be 'axis', 'diagonal' or 'line'");
  }
  p.finish();
  if (iterations < 1 || count < 1) throw ConfigError("iterations and count must be positive");

  const ResolvedSystem rs = resolve_system(cfg, true);
  if (recipe == "axis") {
    const double v0 = require_resonance(rs).v0;
    from = PlanarState(0.0, v0 - half_width);
    to = PlanarState(0.0, v0 + half_width);
  } else if (recipe == "diagonal") {
    const double v1 = diagonal_crossing(require_resonance(rs).c);
    from = PlanarState(v1 - half_width, v1 - half_width);
    to = PlanarState(v1 + half_width, v1 + half_width);
  }
  const SystemSpec sys{rs.forcing, rs.epsilon};
  const std::vector<PlanarState> seeds = seed_line(*from, *to, count);
  const auto results = scan(seeds, t0, sys, rs.forcing.period(), ScanOptions{iterations, escape});
  const OutputContext ctx = make_context("strobo-scan", cfg, rs, p);

  Table points{"strobo_scan", {"seed_id", "iter", "u", "v"}, {}};
  Table status{"strobo_scan_status", {"seed_id", "u0", "v0", "status", "iterations", "message"}, {}};
  for (std::size_t s = 0; s < results.size(); ++s) {
    const auto& pts = results[s].orbit.points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      points.add({static_cast<long long>(s), static_cast<long long>(k), pts[k].u(), pts[k].v()});
    }
    status.add({static_cast<long long>(s), seeds[s].u(), seeds[s].v(), std::string(to_string(results[s].status)),
                static_cast<long long>(pts.size()) - 1, results[s].message});
  }
  announce(write_table(points, ctx));
  announce(write_table(status, ctx));
  return kExitOk;
}

int run_melnikov(const RunConfig& cfg) {
  Params p(cfg.experiment);
  const int samples = p.get("samples", 256);
  p.finish();

  const ResolvedSystem rs = resolve_system(cfg, true);
  const ResonanceSpec& spec = require_resonance(rs);
  const PlanarState x0 = cfg.resonance.x0 ? *cfg.resonance.x0 : PlanarState(0.0, spec.v0);
  const MelnikovProfile profile = melnikov_profile(x0, spec, rs.forcing, samples);
  const OutputContext ctx = make_context("melnikov", cfg, rs, p);

  Table values{"melnikov", {"t0", "M"}, {}};
  for (const auto& s : profile.samples) values.add({s.t0, s.value});
  Table zeros{"melnikov_zeros", {"status", "index", "t0", "slope"}, {}};
  for (std::size_t i = 0; i < profile.zeros.size(); ++i) {
    zeros.add({std::string("simple"), static_cast<long long>(i), profile.zeros[i].t0, profile.zeros[i].slope});
  }
  if (profile.identically_zero) {
    zeros.add({std::string("identically_zero"), std::string(), std::string(), std::string()});
  } else if (profile.zeros.empty()) {
    zeros.add({std::string("no_simple_zeros"), std::string(), std::string(), std::string()});
  }
  announce(write_table(values, ctx));
  announce(write_table(zeros, ctx));
  if (profile.identically_zero) {
    std::cout << "Melnikov function is identically zero (max |M| = " << format_number(profile.max_abs, 3)
              << ")\n";
  }
  return kExitOk;
}

int run_find_po(const RunConfig& cfg) {
  Params p(cfg.experiment);
  const int samples = p.get("samples", 96);
  const std::string solver_name = p.get<std::string>("solver", "strobo");
  const auto seed_index = p.optional<int>("seed_zero_index");
  const auto continue_to = p.optional<double>("continue_to");
  const int closure_samples = p.get("closure_samples", 600);
  NewtonOptions opts;
  opts.residual_tol = p.get("residual_tol", opts.residual_tol);
  opts.max_iters = p.get("max_iters", opts.max_iters);
  p.finish();
  if (solver_name != "strobo" && solver_name != "poincare") throw ConfigError("solver must be 'strobo' or 'poincare'");
  if (closure_samples < 1) throw ConfigError("closure_samples must be positive");
  const SolverKind solver = solver_name == "strobo" ? SolverKind::Strobo : SolverKind::Poincare;

  const ResolvedSystem rs = resolve_system(cfg, true);
  const ResonanceSpec& spec = require_resonance(rs);
  if (continue_to && !(*continue_to >= rs.epsilon)) throw ConfigError("continue_to must not be below epsilon");
  const PlanarState x0 = cfg.resonance.x0 ? *cfg.resonance.x0 : PlanarState(0.0, spec.v0);
  if (solver == SolverKind::Poincare && x0.u() != 0.0) {
    throw ConfigError("the poincare solver needs x0 on the section u = 0");
  }
  const double T = rs.forcing.period();
  const OutputContext ctx = make_context("find-po", cfg, rs, p);

  const MelnikovProfile profile = melnikov_profile(x0, spec, rs.forcing, samples);
  std::vector<NewtonSeed> seeds;
  try {
    seeds = melnikov_seeds(profile);
  } catch (const Error& e) {
    std::cerr << "find-po: " << e.what() << '\n';
    return kExitNumerical;
  }
  std::vector<std::size_t> chosen;
  if (seed_index) {
    if (*seed_index < 0 || *seed_index >= static_cast<int>(seeds.size())) {
      throw ConfigError("seed_zero_index " + std::to_string(*seed_index) + " out of range (" +
                        std::to_string(seeds.size()) + " simple zeros)");
    }
    chosen.push_back(static_cast<std::size_t>(*seed_index));
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) chosen.push_back(i);
  }

  Table orbits{"orbits",
               {"seed_index", "zero_t0", "status", "epsilon", "u", "v", "t0", "m", "n", "loops", "trace",
                "mult1_re", "mult1_im", "mult2_re", "mult2_im", "stability", "residual", "newton_steps",
                "duplicate", "message"},
               {}};
  Table log{"newton_log", {"seed_index", "iter", "u", "v", "t0", "residual"}, {}};
  Table cont{"continuation", {"seed_index", "step", "epsilon", "u", "v", "t0", "trace", "stability", "residual"}, {}};
  Table closure{"closure", {"seed_index", "t", "u", "v"}, {}};

  struct Outcome {
    std::size_t seed;
    std::optional<PeriodicOrbitRecord> record;
    std::string status;
    std::string message;
    int steps = 0;
    double loops = std::nan("");
  };
  std::vector<Outcome> outcomes;
  bool all_ok = true;
  const SystemSpec sys{rs.forcing, rs.epsilon};
  for (std::size_t idx : chosen) {
    const NewtonSeed& seed = seeds[idx];
    Outcome out{idx, std::nullopt, "converged", "", 0};
    try {
      NewtonResult result = solver == SolverKind::Strobo
                                ? newton_strobo(seed.x0, seed.t0, sys, spec.m, T, opts)
                                : newton_poincare(seed.x0.v(), seed.t0, sys, spec.n, spec.m, T, opts);
      out.steps = result.report.steps();
      for (std::size_t k = 0; k < result.report.iterates.size(); ++k) {
        const auto& it = result.report.iterates[k];
        if (solver == SolverKind::Strobo) {
          log.add({static_cast<long long>(idx), static_cast<long long>(k), it.unknowns[0], it.unknowns[1], seed.t0,
                   it.residual});
        } else {
          log.add({static_cast<long long>(idx), static_cast<long long>(k), 0.0, it.unknowns[0], it.unknowns[1],
                   it.residual});
        }
      }
      if (!result.record) {
        out.status = std::string(to_string(result.report.failure));
        out.message = result.report.message;
        all_ok = false;
      } else {
        out.record = result.record;
        if (continue_to && *continue_to > rs.epsilon) {
          const ContinuationResult branch =
              continue_in_epsilon(*result.record, rs.forcing, T, solver, *continue_to, {}, opts);
          for (std::size_t k = 0; k < branch.branch.size(); ++k) {
            const auto& r = branch.branch[k];
            cont.add({static_cast<long long>(idx), static_cast<long long>(k), r.epsilon, r.x_eps.u(), r.x_eps.v(),
                      r.t0, r.monodromy.trace(), std::string(to_string(r.stability)), r.residual});
          }
          out.record = branch.branch.back();
          if (!branch.reached_target) {
            out.status = "continuation_stalled";
            out.message = branch.message;
            all_ok = false;
          }
        }
        const PeriodicOrbitRecord& rec = *out.record;
        const SystemSpec final_sys{rs.forcing, rec.epsilon};
        const double duration = rec.m * T;
        for (const auto& s : sample_trajectory(rec.x_eps, rec.t0, final_sys, duration, closure_samples)) {
          closure.add({static_cast<long long>(idx), s.t, s.x.u(), s.x.v()});
        }
        out.loops = loops_from_angle(accumulated_angle(rec.x_eps, rec.t0, final_sys, duration));
      }
    } catch (const Error& e) {
      out.record.reset();
      out.status = "error";
      out.message = e.what();
      all_ok = false;
    }
    outcomes.push_back(std::move(out));
  }

  // Orbits reached from several zeros are flagged after their first occurrence.
  std::map<double, std::vector<std::size_t>> by_epsilon;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].record) by_epsilon[outcomes[i].record->epsilon].push_back(i);
  }
  std::vector<bool> duplicate(outcomes.size(), false);
  for (const auto& [eps, members] : by_epsilon) {
    std::vector<PeriodicOrbitRecord> recs;
    for (std::size_t i : members) recs.push_back(*outcomes[i].record);
    std::vector<bool> keep(members.size(), false);
    for (std::size_t k : distinct_orbits(recs, rs.forcing, T)) keep[k] = true;
    for (std::size_t k = 0; k < members.size(); ++k) duplicate[members[k]] = !keep[k];
  }

  const double nan = std::nan("");
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    const double zero_t0 = seeds[o.seed].t0;
    if (o.record) {
      const auto& r = *o.record;
      orbits.add({static_cast<long long>(o.seed), zero_t0, o.status, r.epsilon, r.x_eps.u(), r.x_eps.v(), r.t0,
                  static_cast<long long>(r.m), static_cast<long long>(r.n), o.loops, r.monodromy.trace(),
                  r.multipliers[0].real(), r.multipliers[0].imag(), r.multipliers[1].real(),
                  r.multipliers[1].imag(), std::string(to_string(r.stability)), r.residual,
                  static_cast<long long>(o.steps), static_cast<long long>(duplicate[i]), o.message});
    } else {
      orbits.add({static_cast<long long>(o.seed), zero_t0, o.status, rs.epsilon, nan, nan, nan,
                  static_cast<long long>(spec.m), static_cast<long long>(spec.n), nan, nan, nan, nan, nan, nan,
                  std::string(), nan, static_cast<long long>(o.steps), 0LL, o.message});
    }
  }
  announce(write_table(orbits, ctx));
  announce(write_table(log, ctx));
  announce(write_table(cont, ctx));
  announce(write_table(closure, ctx));
  return all_ok ? kExitOk : kExitNumerical;
}

int run_command(std::string_view name, const RunConfig& cfg) {
  try {
    if (name == "phase-portrait") return run_phase_portrait(cfg);
    if (name == "period-curve") return run_period_curve(cfg);
    if (name == "strobo-scan") return run_strobo_scan(cfg);
    if (name == "melnikov") return run_melnikov(cfg);
    if (name == "find-po") return run_find_po(cfg);
    std::cerr << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::InvalidArgument:
      case ErrorKind::OutOfRange:
      case ErrorKind::Unattainable:
      case ErrorKind::SpecMismatch:
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
      default:
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace subharmonic::cli
