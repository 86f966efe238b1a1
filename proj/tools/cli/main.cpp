#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct RawFlags {
  std::string config, out, forcing;
  double eps = 0.0, t0 = 0.0, v0 = 0.0;
  int m = 0, n = 0;
};

template <class T>
std::optional<T> if_given(const CLI::Option* opt, const T& value) {
  return opt->count() ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace subharmonic::cli;

  CLI::App app{"Subharmonic periodic orbits of the forced pendulum u'' + sin u = eps g(t)"};
  app.require_subcommand(1);
  RawFlags raw;

  struct Bound {
    CLI::App* sub;
    CLI::Option *config, *out, *eps, *t0, *m, *n, *v0, *forcing;
  };
  std::vector<Bound> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"phase-portrait", "Trajectories of a seed grid (columns seed_id,t,u,v,H)"},
      {"period-curve", "Period of the unperturbed orbits through (0, v0) with the elliptic-integral check"},
      {"strobo-scan", "Iterates of the stroboscopic map from a line of seeds"},
      {"melnikov", "Subharmonic Melnikov function and its simple zeros"},
      {"find-po", "Periodic orbits seeded at Melnikov zeros, optionally continued in epsilon"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs.push_back({sub,
                    sub->add_option("--config", raw.config, "JSON run configuration")->check(CLI::ExistingFile),
                    sub->add_option("--out", raw.out, "Output directory"),
                    sub->add_option("--eps", raw.eps, "Perturbation size epsilon"),
                    sub->add_option("--t0", raw.t0, "Initial phase"),
                    sub->add_option("--m", raw.m, "Map period m"),
                    sub->add_option("--n", raw.n, "Loops n"),
                    sub->add_option("--v0", raw.v0, "Axis velocity of the resonant level"),
                    sub->add_option("--forcing", raw.forcing, "Forcing terms, e.g. \"1*sin(1),4*cos(2)\"")});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (const Bound& b : subs) {
    if (!b.sub->parsed()) continue;
    RunConfig cfg;
    try {
      if (b.config->count()) cfg = load_config(raw.config);
      FlagOverrides flags;
      flags.out = if_given(b.out, raw.out);
      flags.eps = if_given(b.eps, raw.eps);
      flags.t0 = if_given(b.t0, raw.t0);
      flags.m = if_given(b.m, raw.m);
      flags.n = if_given(b.n, raw.n);
      flags.v0 = if_given(b.v0, raw.v0);
      flags.forcing = if_given(b.forcing, raw.forcing);
      apply_overrides(cfg, flags);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    return run_command(b.sub->get_name(), cfg);
  }
  return kExitConfig;
}
