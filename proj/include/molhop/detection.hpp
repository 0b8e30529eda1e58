#pragma once

#include <vector>

#include "molhop/channel.hpp"
#include "molhop/model.hpp"

namespace molhop {

enum class ThresholdKind {
  Fixed,
  BackwardIsi,        // BI adaptation (full duplex)
  SelfInterference,   // SI adaptation (full duplex)
  SelfAndBackward,    // SI + BI combined (full duplex)
  BackwardIsiHalf,    // BI adaptation on the half-duplex slot structure
};

struct ThresholdPolicy {
  ThresholdKind kind{ThresholdKind::Fixed};
  double fixed_xi{1.0};
};

// Per-node decision bookkeeping: detected bits indexed by bit interval
// (entry 0 unused; silent intervals stay 0).
struct DetectionState {
  std::vector<int> detected_by_interval;

  explicit DetectionState(int total_intervals) : detected_by_interval(total_intervals + 1, 0) {}
  void record(int interval, int bit) { detected_by_interval[interval] = bit; }
};

// Equal-weight sum of the interval's samples against a (possibly adaptive,
// real-valued) threshold; boundary counts as detection.
int weighted_sum_decide(const std::vector<long long>& sample_counts, double threshold);
int weighted_sum_decide(long long sample_sum, double threshold);

// Backward-ISI adaptive threshold at relay `relay` in bit interval j:
// the fixed part plus the count expected from the downstream neighbour's
// re-transmissions of the relay's own detected history (entries up to j-2).
double threshold_bi(double fixed_xi, int relay, int relay_count, int interval_j,
                    const std::vector<int>& detected_by_interval,
                    const ObservationKernel& downstream_kernel, double molecules_per_bit);

// Self-interference adaptive threshold: fixed part plus the count expected
// from the relay's own emissions (history up to j-1, self-observation kernel).
double threshold_si(double fixed_xi, int interval_j,
                    const std::vector<int>& detected_by_interval,
                    const ObservationKernel& self_kernel, double molecules_per_bit);

// Combined SI + BI threshold for full-duplex single-molecule relaying. The BI
// part is suppressed at the last relay, where backward-ISI cannot occur.
double threshold_fd_si_bi(double fixed_xi, int relay, int relay_count, int interval_j,
                          const std::vector<int>& detected_by_interval,
                          const ObservationKernel& self_kernel,
                          const ObservationKernel* downstream_kernel,
                          double molecules_per_bit_self, double molecules_per_bit_downstream);

// Half-duplex BI threshold at slot l (parity of l must match the relay's
// detect slots: even relays detect in even intervals, odd in odd).
double threshold_hd_bi(double fixed_xi, int relay, int relay_count, int interval_l,
                       const std::vector<int>& detected_by_interval,
                       const ObservationKernel& downstream_kernel, double molecules_per_bit);

// Threshold policy a node runs under a given protocol. The last relay and
// the destination always use the fixed threshold.
ThresholdPolicy policy_for_node(const ProtocolConfig& config, int node, int relay_count);

// Evaluates whichever adaptive rule the policy selects.
double adaptive_threshold(const ThresholdPolicy& policy, int node, int relay_count,
                          int interval, const std::vector<int>& detected_by_interval,
                          const NetworkKernels& kernels,
                          const std::vector<long long>& molecules_per_bit);

}  // namespace molhop
