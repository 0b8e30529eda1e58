// Command-line front end: run experiment configs, paper-style presets,
// single-link optimization, and the invariant self-checks.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "molhop/experiments.hpp"
#include "molhop/optimizer.hpp"
#include "molhop/simulator.hpp"

namespace {

using namespace molhop;

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
  int histories = 0;
  std::string engine;
  std::string out_dir;
  int workers = 0;
};

void apply_flags(ExperimentSpec& spec, const CommonFlags& flags) {
  if (flags.seed_set) spec.seed = flags.seed;
  if (flags.trials > 0) spec.trials = flags.trials;
  if (flags.histories > 0) spec.histories = flags.histories;
  if (!flags.engine.empty()) {
    if (flags.engine == "analytical") spec.engine = EngineChoice::Analytical;
    else if (flags.engine == "sim") spec.engine = EngineChoice::Simulation;
    else spec.engine = EngineChoice::Both;
  }
  if (!flags.out_dir.empty()) spec.output_dir = flags.out_dir;
  if (flags.workers > 0) spec.workers = flags.workers;
}

int run_spec(const ExperimentSpec& spec) {
  std::printf("== %s (%s, %s, sweep %s over %zu points)\n", spec.name.c_str(),
              to_string(spec.scheme).c_str(), to_string(spec.protocol).c_str(),
              spec.sweep_variable.c_str(), spec.sweep_values.size());
  const auto rows = run_experiment(spec);
  emit_results(rows, spec, spec.output_dir);
  for (const auto& row : rows) {
    std::printf("  %-4s %-12g", spec.sweep_variable.c_str(), row.value);
    if (row.failed) {
      std::printf(" FAILED\n");
      continue;
    }
    if (row.analytical) std::printf("  analytical %.6g", *row.analytical);
    if (row.simulated) std::printf("  sim %.6g (se %.2g)", *row.simulated, *row.simulated_se);
    if (row.selected_threshold) std::printf("  xi* %g", *row.selected_threshold);
    std::printf("\n");
  }
  std::printf("wrote %s/%s.csv\n", spec.output_dir.c_str(), spec.name.c_str());
  return 0;
}

int cmd_optimize(const std::string& target, const std::string& config_path,
                 const CommonFlags& flags) {
  ExperimentSpec spec = load_config(config_path);
  apply_flags(spec, flags);
  const DerivedConfigs cfg = derive_configs(spec, spec.sweep_values.front());
  const SingleLink link = first_hop_link(cfg);

  if (target == "na") {
    const double avg = average_optimal_na(link, 12, 1000, spec.seed);
    std::vector<double> grid;
    for (double n = 100; n <= 50000; n = std::max(n + 1, std::floor(n * 1.01))) grid.push_back(n);
    const auto bf = brute_force_opt_na(link, grid, 12, 400, spec.seed);
    std::printf("closed-form average optimal N_A: %.1f\n", avg);
    std::printf("brute-force optimum: N_A=%g (error %.6g)\n", bf.argmin, bf.min_error);
    std::printf("error at closed-form value: %.6g\n",
                link_error_at(link, std::round(avg), link.threshold, 12, 400, spec.seed));
  } else {
    const double avg = average_optimal_xi(link, 12, 1000, spec.seed);
    std::vector<double> grid;
    for (double x = 1; x <= 100; ++x) grid.push_back(x);
    const auto bf = brute_force_opt_xi(link, grid, 12, 400, spec.seed);
    std::printf("closed-form average optimal xi: %.2f\n", avg);
    std::printf("brute-force optimum: xi=%g (error %.6g)\n", bf.argmin, bf.min_error);
    std::printf("error at closed-form value: %.6g\n",
                link_error_at(link, link.molecules_per_bit, std::round(avg), 12, 400, spec.seed));
  }
  return 0;
}

int check(bool ok, const char* name, int& failures) {
  std::printf("%-52s %s\n", name, ok ? "PASS" : "FAIL");
  if (!ok) ++failures;
  return ok ? 0 : 1;
}

int cmd_validate(bool quick) {
  int failures = 0;

  // closed-form kernels agree with each other
  {
    const double d = 250e-9, t = 100e-6, D = 4.365e-10;
    const double v = 4.0 / 3.0 * 3.14159265358979323846 * 45e-9 * 45e-9 * 45e-9;
    const double a = p_ob(d, t, v, D);
    const double c = concentration({d, 0, 0}, t, 1.0, D) * v;
    check(std::abs(a - c) < 1e-18, "p_ob consistent with concentration * volume", failures);
  }
  // Poisson CDF routes agree
  {
    bool ok = true;
    for (int xi = 1; xi <= 100 && ok; ++xi) {
      for (double mean : {0.1, 1.0, 10.0, 50.0}) {
        if (std::abs(poisson_cdf(xi, mean) - poisson_cdf_gamma(xi, mean)) > 1e-10) ok = false;
      }
    }
    check(ok, "poisson_cdf matches incomplete-gamma route to 1e-10", failures);
  }
  // schedule structure
  {
    const auto fd = make_schedule(Duplex::Full, 50, 2);
    const auto hd = make_schedule(Duplex::Half, 50, 2);
    check(fd.total_intervals == 52 && hd.total_intervals == 101,
          "schedule interval counts (K = L+Q, 2L+Q-1)", failures);
  }
  // simulator impulse mean vs closed form
  if (!quick) {
    const double D = 4.365e-10;
    const double r = 45e-9;
    const double v = 4.0 / 3.0 * 3.14159265358979323846 * r * r * r;
    const double expect = 1e4 * p_ob(250e-9, 100e-6, v, D);
    double total = 0;
    const int trials = 400;
    for (int i = 0; i < trials; ++i) {
      ParticleStore store(1);
      release(store, 1, {0, 0, 0}, 10000);
      Rng rng(99, i);
      brownian_step(store, 100e-6, {D}, rng);
      total += static_cast<double>(sample_count(store, 1, {250e-9, 0, 0}, r));
    }
    const double mean = total / trials;
    const double se = std::sqrt(expect / trials);
    check(std::abs(mean - expect) < 4 * se, "impulse observation mean matches closed form",
          failures);
  }
  // determinism of a small experiment
  {
    ExperimentSpec spec;
    spec.name = "validate";
    spec.scheme = Scheme::MultiMolecule;
    spec.relay_count = 1;
    spec.sweep_variable = "xi";
    spec.sweep_values = {10, 20};
    spec.engine = EngineChoice::Both;
    spec.trials = 20;
    spec.histories = 40;
    spec.length = 10;
    spec.budget = 2000;
    spec.workers = 1;
    auto r1 = run_experiment(spec);
    spec.workers = 2;
    auto r2 = run_experiment(spec);
    bool ok = r1.size() == r2.size();
    for (size_t i = 0; ok && i < r1.size(); ++i) {
      ok = r1[i].analytical == r2[i].analytical && r1[i].simulated == r2[i].simulated;
    }
    check(ok, "experiment results independent of worker count", failures);
  }

  std::printf("%s\n", failures == 0 ? "all checks passed" : "CHECKS FAILED");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-hop diffusion-based molecular communication toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "base RNG seed")->each([&](std::string) {
      flags.seed_set = true;
    });
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials per grid point");
    cmd->add_option("--histories", flags.histories, "analytical history realizations");
    cmd->add_option("--engine", flags.engine, "analytical|sim|both")
        ->check(CLI::IsMember({"analytical", "sim", "both"}));
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--workers", flags.workers, "worker threads (0 = hardware)");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  add_common(run);

  std::string preset_name;
  bool list_presets = false;
  auto* preset = app.add_subcommand("preset", "run a named figure preset");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list_presets, "list preset names");
  add_common(preset);

  std::string opt_target;
  std::string opt_config;
  auto* optimize = app.add_subcommand("optimize", "single-link parameter optimization");
  optimize->add_option("target", opt_target, "na|xi")
      ->required()
      ->check(CLI::IsMember({"na", "xi"}));
  optimize->add_option("config", opt_config, "config file")->required();
  add_common(optimize);

  bool quick = false;
  auto* validate_cmd = app.add_subcommand("validate", "run the invariant self-checks");
  validate_cmd->add_flag("--quick", quick, "skip the slower checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentSpec spec = load_config(config_path);
      apply_flags(spec, flags);
      if (spec.variants.empty()) return run_spec(spec);
      int rc = 0;
      for (const auto& v : spec.variants) rc |= run_spec(apply_variant(spec, v));
      return rc;
    }
    if (preset->parsed()) {
      if (list_presets) {
        for (const auto& n : preset_names()) std::printf("%s\n", n.c_str());
        return 0;
      }
      if (preset_name.empty()) {
        std::fprintf(stderr, "preset: name required (use --list)\n");
        return 1;
      }
      ExperimentSpec spec = figure_preset(preset_name);
      apply_flags(spec, flags);
      if (spec.variants.empty()) return run_spec(spec);
      int rc = 0;
      for (const auto& v : spec.variants) {
        ExperimentSpec vs = apply_variant(spec, v);
        rc |= run_spec(vs);
      }
      return rc;
    }
    if (optimize->parsed()) return cmd_optimize(opt_target, opt_config, flags);
    if (validate_cmd->parsed()) return cmd_validate(quick);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
