#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "molhop/analysis.hpp"
#include "molhop/simulator.hpp"

namespace molhop {

enum class EngineChoice { Analytical, Simulation, Both };

// Automatic choice of the fixed threshold part per grid point:
//   None - use detection.xi as given
//   PerHop - closed-form average optimum of an individual hop
//   Network - numerical minimization of the end-to-end analytical error
enum class AutoThreshold { None, PerHop, Network };

struct VariantSpec {
  std::string label;
  std::vector<std::pair<std::string, std::string>> overrides;  // key -> value text
};

struct ExperimentSpec {
  std::string name{"experiment"};
  Scheme scheme{Scheme::MultiMolecule};
  Protocol protocol{Protocol::FD};
  double x_d_m{1e-6};
  int relay_count{1};
  double radius_m{45e-9};
  double diffusion_m2_s{4.365e-10};
  double bit_interval_s{200e-6};
  int samples_per_interval{10};
  double sample_spacing_s{20e-6};
  double p1{0.5};
  int length{50};
  double budget{20000};
  bool split_budget{true};
  double fixed_threshold{10};
  AutoThreshold auto_threshold{AutoThreshold::None};
  std::string sweep_variable;        // xi | na | q | t
  std::vector<double> sweep_values;
  EngineChoice engine{EngineChoice::Analytical};
  int trials{2000};
  int histories{400};
  std::uint64_t seed{1};
  int workers{0};
  std::string output_dir{"results"};
  std::vector<VariantSpec> variants;  // presets only; not part of the file schema
};

struct ResultRow {
  double value{0};
  std::optional<double> analytical;
  std::optional<double> simulated;
  std::optional<double> simulated_se;
  long long trials{0};
  double wall_s{0};
  bool failed{false};
  std::optional<double> selected_threshold;  // when auto threshold is active
};

ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec load_config(const std::string& path);

// Serializes a fully resolved spec (plus per-row metadata) in the same
// key-value format load_config reads.
std::string manifest_text(const ExperimentSpec& spec, const std::vector<ResultRow>& rows);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// Applies one variant's overrides; the result carries no variants.
ExperimentSpec apply_variant(const ExperimentSpec& spec, const VariantSpec& variant);

ExperimentSpec figure_preset(const std::string& name);
std::vector<std::string> preset_names();

void emit_results(const std::vector<ResultRow>& rows, const ExperimentSpec& spec,
                  const std::string& out_dir);

// Configuration pieces derived from a spec at one sweep point.
struct DerivedConfigs {
  NetworkTopology topology;
  TimingConfig timing;
  ProtocolConfig protocol;
  SourceModel source;
};
DerivedConfigs derive_configs(const ExperimentSpec& spec, double sweep_value);

// End-to-end analytical error for a derived configuration.
double analytical_error(const DerivedConfigs& cfg, int histories, std::uint64_t seed,
                        int workers = 0);

// Numerically optimal fixed threshold of the end-to-end analytical error.
struct ThresholdSearchResult {
  double threshold{1};
  double error{1};
};
ThresholdSearchResult optimal_fixed_threshold(const DerivedConfigs& cfg, int histories,
                                              std::uint64_t seed, int workers = 0);

// Single-link view of the first hop (used by `optimize` and the per-hop
// automatic threshold rule).
SingleLink first_hop_link(const DerivedConfigs& cfg);

}  // namespace molhop
