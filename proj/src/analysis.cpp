#include "molhop/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "molhop/rng.hpp"

namespace molhop {

double single_link_error(double p1, double threshold, double mean_given_zero,
                         double mean_given_one) {
  const double miss = poisson_cdf(threshold, mean_given_one);
  const double false_alarm = 1.0 - poisson_cdf(threshold, mean_given_zero);
  return p1 * miss + (1.0 - p1) * false_alarm;
}

std::vector<HistoryStat> sample_history_stats(const ObservationKernel& kernel, int intervals,
                                              double p1, int enumeration_limit,
                                              int mc_histories, std::uint64_t seed) {
  std::vector<HistoryStat> stats;
  for (int j = 1; j <= intervals; ++j) {
    const int nhist = j - 1;
    if (nhist <= enumeration_limit) {
      const std::uint64_t count = 1ULL << nhist;
      for (std::uint64_t h = 0; h < count; ++h) {
        double w = 1.0;
        double isi = 0.0;
        for (int i = 1; i <= nhist; ++i) {
          const int bit = (h >> (i - 1)) & 1u;
          w *= bit ? p1 : (1.0 - p1);
          if (bit) isi += kernel.sum(j - i);
        }
        if (w > 0) stats.push_back({j, w, isi});
      }
    } else {
      Rng rng(seed, 0x48495354ULL + j);
      const double w = 1.0 / mc_histories;
      for (int n = 0; n < mc_histories; ++n) {
        double isi = 0.0;
        for (int i = 1; i <= nhist; ++i) {
          if (rng.bernoulli(p1)) isi += kernel.sum(j - i);
        }
        stats.push_back({j, w, isi});
      }
    }
  }
  return stats;
}

double average_single_link_error(const SingleLink& link, int j, int enumeration_limit,
                                 int mc_histories, std::uint64_t seed) {
  if (j < 1) throw std::invalid_argument("average_single_link_error: j must be >= 1");
  const double g0 = link.kernel.sum(0);
  double acc = 0.0;
  const int nhist = j - 1;
  if (nhist <= enumeration_limit) {
    const std::uint64_t count = 1ULL << nhist;
    for (std::uint64_t h = 0; h < count; ++h) {
      double w = 1.0;
      double isi = 0.0;
      for (int i = 1; i <= nhist; ++i) {
        const int bit = (h >> (i - 1)) & 1u;
        w *= bit ? link.p1 : (1.0 - link.p1);
        if (bit) isi += link.kernel.sum(j - i);
      }
      if (w == 0) continue;
      const double m0 = link.molecules_per_bit * isi;
      acc += w * single_link_error(link.p1, link.threshold, m0,
                                   m0 + link.molecules_per_bit * g0);
    }
    return acc;
  }
  Rng rng(seed, 0x534C4Bu + j);
  for (int n = 0; n < mc_histories; ++n) {
    double isi = 0.0;
    for (int i = 1; i <= nhist; ++i) {
      if (rng.bernoulli(link.p1)) isi += link.kernel.sum(j - i);
    }
    const double m0 = link.molecules_per_bit * isi;
    acc += single_link_error(link.p1, link.threshold, m0, m0 + link.molecules_per_bit * g0);
  }
  return acc / mc_histories;
}

double average_single_link_error(const SingleLink& link, int enumeration_limit,
                                 int mc_histories, std::uint64_t seed) {
  double acc = 0.0;
  for (int j = 1; j <= link.intervals; ++j) {
    acc += average_single_link_error(link, j, enumeration_limit, mc_histories, seed);
  }
  return acc / link.intervals;
}

HistorySurrogate coin_toss_surrogate(const std::vector<int>& source_bits,
                                     const std::vector<double>& flip_probabilities,
                                     std::uint64_t seed) {
  if (flip_probabilities.size() > source_bits.size()) {
    throw std::invalid_argument("coin_toss_surrogate: more flip probabilities than bits");
  }
  HistorySurrogate s;
  s.seed = seed;
  s.flip_probability = flip_probabilities;
  s.detected.resize(flip_probabilities.size());
  Rng rng(seed, 0xC01Cu);
  for (size_t i = 0; i < flip_probabilities.size(); ++i) {
    const int lambda = rng.bernoulli(flip_probabilities[i]) ? 1 : 0;
    s.detected[i] = std::abs(lambda - source_bits[i]);
  }
  return s;
}

AnalysisEngine::AnalysisEngine(AnalysisConfig config) : config_(std::move(config)) {
  validate(config_.timing);
  validate(config_.protocol);
  if (static_cast<int>(config_.protocol.molecules_per_bit.size()) !=
      config_.topology.relay_count + 1) {
    throw std::invalid_argument("molecules_per_bit must cover nodes 0..Q");
  }
  schedule_ = make_schedule(config_.protocol.duplex(), config_.source.length,
                            config_.topology.relay_count);
  kernels_ = make_network_kernels(config_.topology, config_.timing, schedule_.total_intervals,
                                  config_.kernel_truncate_tol);
}

AnalysisEngine::AnalysisEngine(AnalysisConfig config, NetworkKernels kernels)
    : config_(std::move(config)) {
  validate(config_.timing);
  validate(config_.protocol);
  schedule_ = make_schedule(config_.protocol.duplex(), config_.source.length,
                            config_.topology.relay_count);
  kernels_ = std::move(kernels);
}

ThresholdPolicy AnalysisEngine::policy_for(int node) const {
  return policy_for_node(config_.protocol, node, config_.topology.relay_count);
}

AnalysisEngine::Realization AnalysisEngine::evaluate_realization(
    const std::vector<int>& source_bits, std::uint64_t surrogate_seed) const {
  const int L = config_.source.length;
  if (static_cast<int>(source_bits.size()) != L) {
    throw std::invalid_argument("evaluate_realization: source length mismatch");
  }
  const int q = config_.topology.relay_count;
  const double p1 = config_.source.p1;
  const double p0 = 1.0 - p1;
  const auto& na = config_.protocol.molecules_per_bit;
  const int K = schedule_.total_intervals;

  Realization out;
  out.stages.resize(q + 1);
  out.surrogates.resize(q + 1);

  Rng toss_rng(surrogate_seed, 0x544F5353ULL);

  for (int s = 1; s <= q + 1; ++s) {
    ErrorProfile& profile = out.stages[s - 1];
    profile.conditional0.assign(L, 0.0);
    profile.conditional1.assign(L, 0.0);
    profile.combined.assign(L, 0.0);

    HistorySurrogate& surr = out.surrogates[s - 1];
    surr.seed = surrogate_seed;
    surr.detected.assign(L, 0);
    surr.flip_probability.assign(L, 0.0);

    const ThresholdPolicy policy = policy_for(s);
    std::vector<int> hist_by_interval(K + 1, 0);  // this stage's detections
    const int intended = s - 1;
    const ErrorProfile* prev = s >= 2 ? &out.stages[s - 2] : nullptr;

    for (int j = 1; j <= L; ++j) {
      const int d = schedule_.detect_interval(s, j);
      const double xi = adaptive_threshold(policy, s, q, d, hist_by_interval, kernels_,
                                           na);

      // Means of the complete received signal under the branch hypotheses.
      // The intended emitter's current symbol and (from the second hop on)
      // the source's copy of the current bit are split out as increments.
      double base = 0.0;
      double gain_intended = 0.0;
      double gain_source = 0.0;
      for (int e : kernels_.emitters_of[s]) {
        const ObservationKernel& k = kernels_.at(e, s);
        const double n_e = static_cast<double>(na[e]);
        double acc = 0.0;
        for (int l = std::max(1, d - k.memory + 1); l <= d; ++l) {
          const int b = schedule_.transmit_bit(e, l);
          if (b == 0) continue;
          if (e == intended && b == j) {
            gain_intended += n_e * k.sum(d - l);
            continue;
          }
          if (e == 0 && s >= 2 && b == j) {
            gain_source += n_e * k.sum(d - l);
            continue;
          }
          int value;
          if (e == 0) {
            value = source_bits[b - 1];
          } else if (e < s) {
            value = out.surrogates[e - 1].detected[b - 1];
          } else {
            // the observer's own history; downstream nodes re-transmit it
            // under the error-free forwarding assumption
            value = surr.detected[b - 1];
          }
          if (value) acc += k.sum(d - l);
        }
        base += n_e * acc;
      }

      double cond0;
      double cond1;
      if (s == 1) {
        cond1 = poisson_cdf(xi, base + gain_intended);
        cond0 = 1.0 - poisson_cdf(xi, base);
      } else {
        const double cdf_w0x1 = poisson_cdf(xi, base + gain_source);
        const double cdf_w1x1 = poisson_cdf(xi, base + gain_source + gain_intended);
        const double cdf_w0x0 = poisson_cdf(xi, base);
        const double cdf_w1x0 = poisson_cdf(xi, base + gain_intended);
        const double p_prev1 = prev->conditional1[j - 1];
        const double p_prev0 = prev->conditional0[j - 1];
        cond1 = p_prev1 * cdf_w0x1 + (1.0 - p_prev1) * cdf_w1x1;
        cond0 = p_prev0 * (1.0 - cdf_w1x0) + (1.0 - p_prev0) * (1.0 - cdf_w0x0);
      }
      const double combined = p1 * cond1 + p0 * cond0;
      profile.conditional0[j - 1] = cond0;
      profile.conditional1[j - 1] = cond1;
      profile.combined[j - 1] = combined;

      surr.flip_probability[j - 1] = combined;
      const int lambda = toss_rng.bernoulli(combined) ? 1 : 0;
      surr.detected[j - 1] = std::abs(lambda - source_bits[j - 1]);
      hist_by_interval[d] = surr.detected[j - 1];
    }
    profile.averaged = 0.0;
    for (double v : profile.combined) profile.averaged += v;
    profile.averaged /= L;
  }
  return out;
}

NetworkErrorResult expected_error(const AnalysisEngine& engine, int realizations,
                                  std::uint64_t seed, int workers) {
  if (realizations < 1) throw std::invalid_argument("expected_error: need >= 1 realization");
  const auto& cfg = engine.config();
  const int L = cfg.source.length;
  const int stages = cfg.topology.relay_count + 1;

  constexpr int kBlock = 32;
  const int n_blocks = (realizations + kBlock - 1) / kBlock;
  // per-block partial sums, reduced in block order for determinism
  std::vector<std::vector<double>> partial(n_blocks,
                                           std::vector<double>(3 * stages * L, 0.0));

  auto run_block = [&](int block) {
    auto& acc = partial[block];
    const int lo = block * kBlock;
    const int hi = std::min(realizations, lo + kBlock);
    for (int r = lo; r < hi; ++r) {
      SourceModel src = cfg.source;
      src.seed = seed * 0x9E3779B97F4A7C15ULL + 2 * r;
      const std::vector<int> bits = generate_source_bits(src);
      const auto eval = engine.evaluate_realization(bits, seed * 0x94D049BB133111EBULL + 2 * r + 1);
      for (int s = 0; s < stages; ++s) {
        for (int j = 0; j < L; ++j) {
          acc[(3 * s + 0) * L + j] += eval.stages[s].conditional0[j];
          acc[(3 * s + 1) * L + j] += eval.stages[s].conditional1[j];
          acc[(3 * s + 2) * L + j] += eval.stages[s].combined[j];
        }
      }
    }
  };

  int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, n_blocks));
  if (n_workers == 1) {
    for (int b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int b = next.fetch_add(1);
          if (b >= n_blocks) return;
          run_block(b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  NetworkErrorResult result;
  result.per_stage.resize(stages);
  for (int s = 0; s < stages; ++s) {
    auto& p = result.per_stage[s];
    p.conditional0.assign(L, 0.0);
    p.conditional1.assign(L, 0.0);
    p.combined.assign(L, 0.0);
    for (int b = 0; b < n_blocks; ++b) {
      for (int j = 0; j < L; ++j) {
        p.conditional0[j] += partial[b][(3 * s + 0) * L + j];
        p.conditional1[j] += partial[b][(3 * s + 1) * L + j];
        p.combined[j] += partial[b][(3 * s + 2) * L + j];
      }
    }
    for (int j = 0; j < L; ++j) {
      p.conditional0[j] /= realizations;
      p.conditional1[j] /= realizations;
      p.combined[j] /= realizations;
    }
    p.averaged = 0.0;
    for (double v : p.combined) p.averaged += v;
    p.averaged /= L;
  }
  result.end_to_end = result.per_stage.back().averaged;
  return result;
}

double two_hop_error(const AnalysisEngine& engine, const std::vector<int>& source_bits, int j,
                     std::uint64_t surrogate_seed) {
  if (engine.config().topology.relay_count != 1) {
    throw std::invalid_argument("two_hop_error: configuration must have exactly one relay");
  }
  return multi_hop_error(engine, source_bits, j, surrogate_seed);
}

double multi_hop_error(const AnalysisEngine& engine, const std::vector<int>& source_bits, int j,
                       std::uint64_t surrogate_seed) {
  if (engine.config().topology.relay_count < 1) {
    throw std::invalid_argument("multi_hop_error: not a relay network");
  }
  if (j < 1 || j > engine.config().source.length) {
    throw std::invalid_argument("multi_hop_error: bit interval out of range");
  }
  const auto eval = engine.evaluate_realization(source_bits, surrogate_seed);
  return eval.stages.back().combined[j - 1];
}

double half_duplex_error(const AnalysisEngine& engine, const std::vector<int>& source_bits,
                         int j, std::uint64_t surrogate_seed) {
  if (engine.config().protocol.duplex() != Duplex::Half) {
    throw std::invalid_argument("half_duplex_error: protocol is not half-duplex");
  }
  return multi_hop_error(engine, source_bits, j, surrogate_seed);
}

}  // namespace molhop
