#include "molhop/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace molhop {

double concentration(const Vec3& offset_m, double t_s, double n_molecules,
                     double diffusion_m2_s) {
  if (t_s <= 0) throw std::invalid_argument("concentration: t must be positive");
  const double r2 = offset_m.x * offset_m.x + offset_m.y * offset_m.y + offset_m.z * offset_m.z;
  const double four_dt = 4.0 * diffusion_m2_s * t_s;
  const double denom = std::pow(std::numbers::pi * four_dt, 1.5);
  return n_molecules / denom * std::exp(-r2 / four_dt);
}

double p_ob(double distance_m, double t_s, double observer_volume_m3, double diffusion_m2_s) {
  if (t_s <= 0) throw std::invalid_argument("p_ob: t must be positive");
  const double four_dt = 4.0 * diffusion_m2_s * t_s;
  const double denom = std::pow(std::numbers::pi * four_dt, 1.5);
  const double p = observer_volume_m3 / denom * std::exp(-distance_m * distance_m / four_dt);
  return std::clamp(p, 0.0, 1.0);
}

double p_self(double t_s, double node_radius_m, double diffusion_m2_s) {
  if (t_s <= 0) throw std::invalid_argument("p_self: t must be positive");
  const double sdt = std::sqrt(diffusion_m2_s * t_s);
  const double a = node_radius_m / (2.0 * sdt);
  const double p = std::erf(a) - node_radius_m * std::exp(-a * a) /
                                     std::sqrt(std::numbers::pi * diffusion_m2_s * t_s);
  return std::clamp(p, 0.0, 1.0);
}

double poisson_cdf(double threshold, double mean) {
  if (threshold < 1.0) return mean > 0 ? 0.0 : (threshold > 0 ? 1.0 : 0.0);
  if (mean < 0) throw std::invalid_argument("poisson_cdf: mean must be non-negative");
  const long long top = static_cast<long long>(std::ceil(threshold)) - 1;  // sum w = 0..top
  if (mean == 0.0) return 1.0;

  if (mean < 500.0) {
    // running-ratio accumulation, term_w = term_{w-1} * mean / w
    double term = std::exp(-mean);
    double sum = term;
    for (long long w = 1; w <= top; ++w) {
      term *= mean / static_cast<double>(w);
      sum += term;
    }
    return std::clamp(sum, 0.0, 1.0);
  }

  // log-space accumulation for large means
  double max_log = -mean;
  std::vector<double> logs(static_cast<size_t>(top) + 1);
  for (long long w = 0; w <= top; ++w) {
    const double lw = -mean + w * std::log(mean) - std::lgamma(static_cast<double>(w) + 1.0);
    logs[static_cast<size_t>(w)] = lw;
    max_log = std::max(max_log, lw);
  }
  double acc = 0.0;
  for (double lw : logs) acc += std::exp(lw - max_log);
  return std::clamp(std::exp(max_log) * acc, 0.0, 1.0);
}

double poisson_cdf_gamma(double s, double mean) {
  if (s <= 0) throw std::invalid_argument("poisson_cdf_gamma: s must be positive");
  if (mean < 0) throw std::invalid_argument("poisson_cdf_gamma: mean must be non-negative");
  const double a = std::ceil(s);
  if (mean == 0.0) return 1.0;
  return boost::math::gamma_q(a, mean);
}

double poisson_cdf_stirling(double threshold, double mean) {
  if (threshold <= 0) throw std::invalid_argument("poisson_cdf_stirling: threshold must be positive");
  if (mean <= 0) throw std::invalid_argument("poisson_cdf_stirling: mean must be positive");
  // Half-step upper bound aligns the continuous integral with the discrete
  // sum over w = 0 .. ceil(threshold)-1.
  const double upper = threshold - 0.5;
  if (upper <= 0) return 0.0;

  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi * mean);
  const auto integrand = [&](double w) {
    return std::exp((w - mean) + (w + 0.5) * std::log(mean / w) - log_norm);
  };
  // substitute w = u^2 to remove the integrable w^{-1/2} endpoint singularity
  const auto g = [&](double u) { return integrand(u * u) * 2.0 * u; };

  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, 0.0, std::sqrt(upper), 12, 1e-8, &err);
  if (!(err < 1e-4 * std::max(1.0, std::abs(value)))) {
    throw std::runtime_error("poisson_cdf_stirling: quadrature did not converge");
  }
  return std::clamp(value, 0.0, 1.0);
}

namespace {

double pair_probability(const NetworkTopology& topology, int emitter, int observer,
                        double t_s) {
  const MoleculeSpec& mol = topology.molecule(topology.emit_type[emitter]);
  if (emitter == observer) {
    return p_self(t_s, topology.nodes[observer].radius_m, mol.diffusion_m2_s);
  }
  const double dx = topology.nodes[observer].position_m.x - topology.nodes[emitter].position_m.x;
  return p_ob(std::abs(dx), t_s, topology.nodes[observer].volume_m3, mol.diffusion_m2_s);
}

}  // namespace

ObservationKernel make_kernel(const NetworkTopology& topology, int emitter, int observer,
                              const TimingConfig& timing, int memory, double truncate_tol) {
  if (memory < 1) throw std::invalid_argument("make_kernel: memory must be >= 1");
  if (topology.emit_type[emitter] == 0) throw std::invalid_argument("make_kernel: node does not emit");
  ObservationKernel k;
  k.emitter = emitter;
  k.observer = observer;
  k.molecule_type = topology.emit_type[emitter];
  k.samples = timing.samples_per_interval;
  k.per_sample.reserve(static_cast<size_t>(memory) * k.samples);
  for (int lag = 0; lag < memory; ++lag) {
    double s = 0.0;
    for (int m = 1; m <= timing.samples_per_interval; ++m) {
      const double t = lag * timing.bit_interval_s + timing.sample_time_s(m);
      const double p = pair_probability(topology, emitter, observer, t);
      k.per_sample.push_back(p);
      s += p;
    }
    k.lag_sums.push_back(s);
    if (truncate_tol > 0 && lag > 0 && s < truncate_tol) break;
  }
  k.memory = static_cast<int>(k.lag_sums.size());
  return k;
}

double mean_observed(const std::vector<int>& emit_sequence, const ObservationKernel& kernel,
                     int interval, double molecules_per_bit) {
  const int upto = std::min<int>(interval, static_cast<int>(emit_sequence.size()));
  double acc = 0.0;
  for (int i = std::max(1, interval - kernel.memory + 1); i <= upto; ++i) {
    if (emit_sequence[i - 1]) acc += kernel.sum(interval - i);
  }
  return molecules_per_bit * acc;
}

NetworkKernels make_network_kernels(const NetworkTopology& topology, const TimingConfig& timing,
                                    int memory, double truncate_tol) {
  NetworkKernels nk;
  nk.timing = timing;
  nk.node_count = topology.node_count();
  nk.kernels.resize(static_cast<size_t>(nk.node_count) * nk.node_count);
  nk.emitters_of.resize(nk.node_count);
  for (int obs = 0; obs < nk.node_count; ++obs) {
    const int want = topology.detect_type[obs];
    if (want == 0) continue;
    for (int e = 0; e <= topology.relay_count; ++e) {
      if (topology.emit_type[e] != want) continue;
      nk.emitters_of[obs].push_back(e);
      nk.kernels[e * nk.node_count + obs] =
          make_kernel(topology, e, obs, timing, memory, truncate_tol);
    }
  }
  return nk;
}

double complete_signal_mean(const NetworkKernels& kernels,
                            const std::vector<std::vector<int>>& sequences, int observer,
                            int interval, const std::vector<long long>& molecules_per_bit) {
  double acc = 0.0;
  for (int e : kernels.emitters_of[observer]) {
    acc += mean_observed(sequences[e], kernels.at(e, observer), interval,
                         static_cast<double>(molecules_per_bit[e]));
  }
  return acc;
}

}  // namespace molhop
