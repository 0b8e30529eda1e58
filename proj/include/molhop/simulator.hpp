#pragma once

#include <cstdint>
#include <vector>

#include "molhop/detection.hpp"
#include "molhop/model.hpp"
#include "molhop/rng.hpp"

namespace molhop {

// Raw particle population, one position array per molecule type. Molecules
// are never destroyed; the store size equals the cumulative releases.
struct ParticleStore {
  struct TypeStore {
    std::vector<float> x, y, z;
  };
  std::vector<TypeStore> types;  // index type_id - 1

  explicit ParticleStore(int n_types) : types(n_types) {}
  long long count(int type_id) const {
    return static_cast<long long>(types[type_id - 1].x.size());
  }
  long long total() const {
    long long n = 0;
    for (const auto& t : types) n += static_cast<long long>(t.x.size());
    return n;
  }
};

// Inserts `count` molecules of the given type at the node center
// (impulsive point release).
void release(ParticleStore& store, int type_id, const Vec3& center_m, long long count);

// Advances every molecule by one time step: independent zero-mean Gaussian
// displacement per axis with std sqrt(2 D dt).
void brownian_step(ParticleStore& store, double dt_s,
                   const std::vector<double>& diffusion_by_type, Rng& rng);

// Number of type molecules whose centers lie within the sampling sphere
// (boundary inclusive).
long long sample_count(const ParticleStore& store, int type_id, const Vec3& center_m,
                       double radius_m);

struct SimulationConfig {
  NetworkTopology topology;
  TimingConfig timing;
  ProtocolConfig protocol;
  SourceModel source;
  // Detections are replaced by the transmitted bits (debug/alignment checks).
  bool force_perfect_detection{false};
  // Resolve every molecule at every sample time; disables the far-field
  // jump composition (slow; for validating the accelerated paths).
  bool exact_paths{false};
};

struct TrialResult {
  std::uint64_t seed{0};
  std::vector<int> source_bits;
  // detected[k][b-1]: node k's detection of source bit b (k = 1..Q+1)
  std::vector<std::vector<int>> detected;
  // errors of node k's detections against the source bits (index 0 unused)
  std::vector<int> per_hop_errors;
  int end_to_end_errors{0};
};

TrialResult run_trial(const SimulationConfig& config, std::uint64_t seed);

// One physics realization evaluated under several fixed-threshold values.
// Molecule paths are independent of the decisions, so potential emission
// events can be simulated once and re-selected per threshold.
std::vector<TrialResult> run_trial_thresholds(const SimulationConfig& config,
                                              const std::vector<double>& thresholds,
                                              std::uint64_t seed);

struct ErrorEstimate {
  long long trials{0};
  long long bits{0};
  long long errors{0};
  double rate{0};
  double standard_error{0};
};

ErrorEstimate estimate_error(const SimulationConfig& config, int n_trials,
                             std::uint64_t base_seed, int workers = 0);

// Shared-physics sweep over fixed thresholds; entry i aggregates trial
// results under thresholds[i].
std::vector<ErrorEstimate> estimate_error_thresholds(const SimulationConfig& config,
                                                     const std::vector<double>& thresholds,
                                                     int n_trials, std::uint64_t base_seed,
                                                     int workers = 0);

}  // namespace molhop
