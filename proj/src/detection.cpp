#include "molhop/detection.hpp"

#include <numeric>
#include <stdexcept>

namespace molhop {

int weighted_sum_decide(long long sample_sum, double threshold) {
  return static_cast<double>(sample_sum) >= threshold ? 1 : 0;
}

int weighted_sum_decide(const std::vector<long long>& sample_counts, double threshold) {
  if (sample_counts.empty()) throw std::invalid_argument("weighted_sum_decide: need M >= 1 samples");
  const long long sum = std::accumulate(sample_counts.begin(), sample_counts.end(), 0LL);
  return weighted_sum_decide(sum, threshold);
}

namespace {

// Expected count at the current detection interval from re-emissions of the
// detected history. A bit detected in interval i re-enters the channel
// `forward_delay` intervals later (one hop of forwarding per interval), so
// its contribution at interval j arrives at lag j - i - forward_delay. The
// newest history entry therefore lands at lag zero: the dominant
// same-interval interference term is part of the expectation.
double expected_from_history(const std::vector<int>& detected_by_interval, int interval_j,
                             int upto, int forward_delay, const ObservationKernel& kernel,
                             double molecules_per_bit) {
  double acc = 0.0;
  const int last = std::min<int>(upto, static_cast<int>(detected_by_interval.size()) - 1);
  for (int i = 1; i <= last; ++i) {
    if (detected_by_interval[i]) acc += kernel.sum(interval_j - i - forward_delay);
  }
  return molecules_per_bit * acc;
}

void check_bi_applicable(int relay, int relay_count) {
  if (relay >= relay_count) {
    throw std::invalid_argument(
        "backward-ISI adaptation is undefined at the last relay and the destination");
  }
  if (relay < 1) throw std::invalid_argument("backward-ISI adaptation applies to relays only");
}

}  // namespace

double threshold_bi(double fixed_xi, int relay, int relay_count, int interval_j,
                    const std::vector<int>& detected_by_interval,
                    const ObservationKernel& downstream_kernel, double molecules_per_bit) {
  check_bi_applicable(relay, relay_count);
  // detected bit -> forwarded downstream -> re-emitted: two intervals
  return fixed_xi + expected_from_history(detected_by_interval, interval_j, interval_j - 2, 2,
                                          downstream_kernel, molecules_per_bit);
}

double threshold_si(double fixed_xi, int interval_j,
                    const std::vector<int>& detected_by_interval,
                    const ObservationKernel& self_kernel, double molecules_per_bit) {
  // own detections are re-emitted in the next interval
  return fixed_xi + expected_from_history(detected_by_interval, interval_j, interval_j - 1, 1,
                                          self_kernel, molecules_per_bit);
}

double threshold_fd_si_bi(double fixed_xi, int relay, int relay_count, int interval_j,
                          const std::vector<int>& detected_by_interval,
                          const ObservationKernel& self_kernel,
                          const ObservationKernel* downstream_kernel,
                          double molecules_per_bit_self, double molecules_per_bit_downstream) {
  double xi = threshold_si(fixed_xi, interval_j, detected_by_interval, self_kernel,
                           molecules_per_bit_self);
  if (relay < relay_count) {
    if (downstream_kernel == nullptr) {
      throw std::invalid_argument("threshold_fd_si_bi: downstream kernel required below the last relay");
    }
    xi += expected_from_history(detected_by_interval, interval_j, interval_j - 2, 2,
                                *downstream_kernel, molecules_per_bit_downstream);
  }
  return xi;
}

double threshold_hd_bi(double fixed_xi, int relay, int relay_count, int interval_l,
                       const std::vector<int>& detected_by_interval,
                       const ObservationKernel& downstream_kernel, double molecules_per_bit) {
  check_bi_applicable(relay, relay_count);
  if ((interval_l % 2) != (relay % 2)) {
    throw std::invalid_argument("threshold_hd_bi: slot parity inconsistent with relay index");
  }
  return fixed_xi + expected_from_history(detected_by_interval, interval_l, interval_l - 2, 2,
                                          downstream_kernel, molecules_per_bit);
}

ThresholdPolicy policy_for_node(const ProtocolConfig& config, int node, int relay_count) {
  ThresholdPolicy p;
  p.fixed_xi = config.fixed_threshold;
  if (node < 1 || node > relay_count) return p;  // destination (and source): fixed
  switch (config.protocol) {
    case Protocol::FD:
    case Protocol::HD:
      break;
    case Protocol::FD_A:
      if (node <= relay_count - 1) p.kind = ThresholdKind::BackwardIsi;
      break;
    case Protocol::FD_A_SI:
      p.kind = ThresholdKind::SelfInterference;
      break;
    case Protocol::FD_A_BI_SI:
      p.kind = node <= relay_count - 1 ? ThresholdKind::SelfAndBackward
                                       : ThresholdKind::SelfInterference;
      break;
    case Protocol::HD_A_BI:
      if (node <= relay_count - 1) p.kind = ThresholdKind::BackwardIsiHalf;
      break;
  }
  return p;
}

double adaptive_threshold(const ThresholdPolicy& policy, int node, int relay_count,
                          int interval, const std::vector<int>& detected_by_interval,
                          const NetworkKernels& kernels,
                          const std::vector<long long>& molecules_per_bit) {
  switch (policy.kind) {
    case ThresholdKind::Fixed:
      return policy.fixed_xi;
    case ThresholdKind::BackwardIsi:
      return threshold_bi(policy.fixed_xi, node, relay_count, interval, detected_by_interval,
                          kernels.at(node + 1, node),
                          static_cast<double>(molecules_per_bit[node + 1]));
    case ThresholdKind::SelfInterference:
      return threshold_si(policy.fixed_xi, interval, detected_by_interval,
                          kernels.at(node, node),
                          static_cast<double>(molecules_per_bit[node]));
    case ThresholdKind::SelfAndBackward:
      return threshold_fd_si_bi(
          policy.fixed_xi, node, relay_count, interval, detected_by_interval,
          kernels.at(node, node),
          node < relay_count ? &kernels.at(node + 1, node) : nullptr,
          static_cast<double>(molecules_per_bit[node]),
          node < relay_count ? static_cast<double>(molecules_per_bit[node + 1]) : 0.0);
    case ThresholdKind::BackwardIsiHalf:
      return threshold_hd_bi(policy.fixed_xi, node, relay_count, interval,
                             detected_by_interval, kernels.at(node + 1, node),
                             static_cast<double>(molecules_per_bit[node + 1]));
  }
  return policy.fixed_xi;
}

}  // namespace molhop
