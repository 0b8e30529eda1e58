#pragma once

#include <cstdint>
#include <vector>

#include "molhop/channel.hpp"
#include "molhop/detection.hpp"
#include "molhop/model.hpp"

namespace molhop {

// One modeled relay history: the source bits flipped by per-bit biased coin
// tosses (flip probability = the upstream error probability for that bit).
struct HistorySurrogate {
  std::vector<int> detected;            // per source bit, 1..L at [b-1]
  std::vector<double> flip_probability; // per source bit
  std::uint64_t seed{0};
};

// Per-bit-interval conditional and combined error probabilities for one
// stage of the chain (probability the stage's detection differs from the
// source bit, given the source bit value).
struct ErrorProfile {
  std::vector<double> conditional0;  // P_e[j | W_S[j]=0]
  std::vector<double> conditional1;  // P_e[j | W_S[j]=1]
  std::vector<double> combined;      // P1*cond1 + P0*cond0
  double averaged{0};                // mean of combined over bit intervals
};

// Expected error in one bit interval of a single link (Poisson means for the
// "current bit 0/1" hypotheses already include the ISI of the given history).
double single_link_error(double p1, double threshold, double mean_given_zero,
                         double mean_given_one);

// A single transmitter-receiver pair plus its operating point.
struct SingleLink {
  ObservationKernel kernel;
  double molecules_per_bit{0};  // N_A
  double p1{0.5};
  double threshold{1.0};        // xi
  int intervals{50};            // history horizon (bit intervals)
};

// History-averaged error in bit interval j: exact enumeration of the 2^(j-1)
// histories up to `enumeration_limit`, seeded Monte Carlo sampling beyond.
double average_single_link_error(const SingleLink& link, int j, int enumeration_limit,
                                 int mc_histories, std::uint64_t seed);

// Averaged over all bit intervals 1..link.intervals.
double average_single_link_error(const SingleLink& link, int enumeration_limit,
                                 int mc_histories, std::uint64_t seed);

// ISI statistics of sampled/enumerated histories, used by the optimizer and
// the averaged-error evaluations. `isi_basis` is the per-unit-N_A mean from
// past bits only; weights are normalized per bit interval.
struct HistoryStat {
  int j;
  double weight;
  double isi_basis;
};
std::vector<HistoryStat> sample_history_stats(const ObservationKernel& kernel, int intervals,
                                              double p1, int enumeration_limit,
                                              int mc_histories, std::uint64_t seed);

HistorySurrogate coin_toss_surrogate(const std::vector<int>& source_bits,
                                     const std::vector<double>& flip_probabilities,
                                     std::uint64_t seed);

// Full analytical engine for one network configuration.
struct AnalysisConfig {
  NetworkTopology topology;
  TimingConfig timing;
  ProtocolConfig protocol;
  SourceModel source;
  int enumeration_limit{12};
  int history_samples{1000};
  double kernel_truncate_tol{0.0};  // 0 = full-history kernels
};

class AnalysisEngine {
 public:
  explicit AnalysisEngine(AnalysisConfig config);
  // Injected kernels (synthetic channels for validation).
  AnalysisEngine(AnalysisConfig config, NetworkKernels kernels);

  struct Realization {
    std::vector<ErrorProfile> stages;          // stage 1..Q+1 at [s-1]
    std::vector<HistorySurrogate> surrogates;  // per stage
  };

  // Conditional expected error profiles for one source realization; the relay
  // histories are modeled by one coin-toss surrogate per stage.
  Realization evaluate_realization(const std::vector<int>& source_bits,
                                   std::uint64_t surrogate_seed) const;

  const AnalysisConfig& config() const { return config_; }
  const BitSchedule& schedule() const { return schedule_; }
  const NetworkKernels& kernels() const { return kernels_; }
  ThresholdPolicy policy_for(int node) const;

 private:
  AnalysisConfig config_;
  BitSchedule schedule_;
  NetworkKernels kernels_;
};

struct NetworkErrorResult {
  std::vector<ErrorProfile> per_stage;
  double end_to_end{0};  // last stage, averaged over bit intervals
};

// Averages evaluate_realization over seeded random source realizations (and
// surrogate draws). Deterministic for fixed seed, independent of workers.
NetworkErrorResult expected_error(const AnalysisEngine& engine, int realizations,
                                  std::uint64_t seed, int workers = 0);

// Spec'd entry points; all run on the shared recursion.
double two_hop_error(const AnalysisEngine& engine, const std::vector<int>& source_bits, int j,
                     std::uint64_t surrogate_seed);
double multi_hop_error(const AnalysisEngine& engine, const std::vector<int>& source_bits, int j,
                       std::uint64_t surrogate_seed);
double half_duplex_error(const AnalysisEngine& engine, const std::vector<int>& source_bits,
                         int j, std::uint64_t surrogate_seed);

}  // namespace molhop
