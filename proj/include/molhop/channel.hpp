#pragma once

#include <vector>

#include "molhop/model.hpp"

namespace molhop {

// Local concentration (molecules/m^3) at `offset_m` from an impulsive point
// source of `n_molecules` released at t=0 into free space.
double concentration(const Vec3& offset_m, double t_s, double n_molecules,
                     double diffusion_m2_s);

// Probability that one molecule released at t=0 a distance `distance_m` away
// is inside an observer of volume `observer_volume_m3` at time t (uniform
// concentration assumption; clamped to [0,1]).
double p_ob(double distance_m, double t_s, double observer_volume_m3, double diffusion_m2_s);

// Probability that a molecule released at a node's own center at t=0 is still
// inside its radius at time t (emitter == observer limit).
double p_self(double t_s, double node_radius_m, double diffusion_m2_s);

// Pr(X < threshold) for X Poisson with the given mean. Real-valued thresholds
// follow the detector's ">= threshold" convention: the sum runs over all
// integers below `threshold`.
double poisson_cdf(double threshold, double mean);

// Same CDF through the regularized upper incomplete gamma function,
// Q(ceil(s), mean); an independent numeric route.
double poisson_cdf_gamma(double s, double mean);

// Continuous CDF approximation with the factorial replaced by Stirling's
// formula, integrated by adaptive quadrature with the half-step bound that
// aligns the integral with the discrete sum.
double poisson_cdf_stirling(double threshold, double mean);

// Per-(emitter, observer) table of observation probabilities at the sampling
// times, indexed by interval lag and sample number.
struct ObservationKernel {
  int emitter{0};
  int observer{0};
  int molecule_type{0};
  int memory{0};   // lags 0 .. memory-1
  int samples{0};  // M
  std::vector<double> per_sample;  // [lag * samples + (m-1)]
  std::vector<double> lag_sums;    // per-lag sum over samples

  double p(int lag, int m) const { return per_sample[lag * samples + (m - 1)]; }
  double sum(int lag) const {
    return (lag >= 0 && lag < memory) ? lag_sums[lag] : 0.0;
  }
};

// Builds the kernel for one directed (emitter, observer) pair. Uses the
// self-observation probability when emitter == observer. `memory` bounds the
// ISI horizon in intervals; `truncate_tol` > 0 drops trailing lags whose
// per-bit sum falls below it.
ObservationKernel make_kernel(const NetworkTopology& topology, int emitter, int observer,
                              const TimingConfig& timing, int memory,
                              double truncate_tol = 0.0);

// Expected observed count in interval j due to one emitter's sequence
// (interval-indexed, entries in {0,1}).
double mean_observed(const std::vector<int>& emit_sequence, const ObservationKernel& kernel,
                     int interval, double molecules_per_bit);

// All kernels of a network plus the emitter lists per observer.
struct NetworkKernels {
  TimingConfig timing;
  int node_count{0};
  std::vector<ObservationKernel> kernels;  // dense [emitter * node_count + observer]
  std::vector<std::vector<int>> emitters_of;  // per observer: type-matching transmitters

  const ObservationKernel& at(int emitter, int observer) const {
    return kernels[emitter * node_count + observer];
  }
};

NetworkKernels make_network_kernels(const NetworkTopology& topology, const TimingConfig& timing,
                                    int memory, double truncate_tol = 0.0);

// Poisson-superposition mean of the complete received signal at `observer` in
// interval j: the sum of mean_observed over every type-matching emitter.
double complete_signal_mean(const NetworkKernels& kernels,
                            const std::vector<std::vector<int>>& sequences, int observer,
                            int interval, const std::vector<long long>& molecules_per_bit);

}  // namespace molhop
