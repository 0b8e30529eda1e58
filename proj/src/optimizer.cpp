#include "molhop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace molhop {

long long round_half_away(double v) { return std::llround(v); }

namespace {

// conditional means for the current interval given a history prefix
struct Means {
  double m0;
  double m1;
};

Means conditional_means(const SingleLink& link, int j, const std::vector<int>& history) {
  if (static_cast<int>(history.size()) < j - 1) {
    throw std::invalid_argument("history shorter than j-1 bits");
  }
  double isi = 0.0;
  for (int i = 1; i <= j - 1; ++i) {
    if (history[i - 1]) isi += link.kernel.sum(j - i);
  }
  const double m0 = link.molecules_per_bit * isi;
  return {m0, m0 + link.molecules_per_bit * link.kernel.sum(0)};
}

}  // namespace

std::optional<double> optimal_na(const SingleLink& link, int j, const std::vector<int>& history) {
  const Means m = conditional_means(link, j, history);
  if (m.m0 <= 0.0) return std::nullopt;  // no ISI: the log ratio diverges
  const double g0 = link.kernel.sum(0);
  const double prior = std::log(link.p1 / (1.0 - link.p1));
  const double value = (prior + link.threshold * std::log(m.m1 / m.m0)) / g0;
  return std::max(0.0, static_cast<double>(round_half_away(value)));
}

std::optional<double> optimal_xi(const SingleLink& link, int j, const std::vector<int>& history) {
  const Means m = conditional_means(link, j, history);
  if (m.m0 <= 0.0) return std::nullopt;
  const double g0 = link.kernel.sum(0);
  const double prior = std::log((1.0 - link.p1) / link.p1);
  const double value = (prior + link.molecules_per_bit * g0) / std::log(m.m1 / m.m0);
  return std::max(1.0, static_cast<double>(round_half_away(value)));
}

namespace {

enum class Target { Na, Xi };

double average_optimal(const SingleLink& link, Target target, int enumeration_limit,
                       int mc_histories, std::uint64_t seed) {
  const auto stats = sample_history_stats(link.kernel, link.intervals, link.p1,
                                          enumeration_limit, mc_histories, seed);
  const double g0 = link.kernel.sum(0);
  double acc = 0.0;
  double weight = 0.0;
  for (const auto& st : stats) {
    const double m0 = link.molecules_per_bit * st.isi_basis;
    if (m0 <= 0.0) continue;
    const double m1 = m0 + link.molecules_per_bit * g0;
    double v;
    if (target == Target::Na) {
      const double prior = std::log(link.p1 / (1.0 - link.p1));
      v = std::max(0.0, static_cast<double>(round_half_away(
                            (prior + link.threshold * std::log(m1 / m0)) / g0)));
    } else {
      const double prior = std::log((1.0 - link.p1) / link.p1);
      v = std::max(1.0, static_cast<double>(round_half_away(
                            (prior + link.molecules_per_bit * g0) / std::log(m1 / m0))));
    }
    acc += st.weight * v;
    weight += st.weight;
  }
  if (weight <= 0.0) {
    // degenerate (no ISI anywhere, e.g. a single interval): brute force
    if (target == Target::Na) {
      std::vector<double> grid;
      for (double n = 100; n <= 50000; n = std::max(n + 1, n * 1.05)) grid.push_back(std::floor(n));
      return brute_force_opt_na(link, grid, enumeration_limit, mc_histories, seed).argmin;
    }
    std::vector<double> grid;
    for (int x = 1; x <= 200; ++x) grid.push_back(x);
    return brute_force_opt_xi(link, grid, enumeration_limit, mc_histories, seed).argmin;
  }
  return acc / weight;
}

}  // namespace

double average_optimal_na(const SingleLink& link, int enumeration_limit, int mc_histories,
                          std::uint64_t seed) {
  return average_optimal(link, Target::Na, enumeration_limit, mc_histories, seed);
}

double average_optimal_xi(const SingleLink& link, int enumeration_limit, int mc_histories,
                          std::uint64_t seed) {
  return average_optimal(link, Target::Xi, enumeration_limit, mc_histories, seed);
}

double link_error_at(const SingleLink& link, double na, double xi, int enumeration_limit,
                     int mc_histories, std::uint64_t seed) {
  const auto stats = sample_history_stats(link.kernel, link.intervals, link.p1,
                                          enumeration_limit, mc_histories, seed);
  const double g0 = link.kernel.sum(0);
  double acc = 0.0;
  for (const auto& st : stats) {
    const double m0 = na * st.isi_basis;
    acc += st.weight * single_link_error(link.p1, xi, m0, m0 + na * g0);
  }
  return acc / link.intervals;
}

namespace {

BruteForceResult brute_force(const SingleLink& link, const std::vector<double>& grid,
                             Target target, int enumeration_limit, int mc_histories,
                             std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("brute force: empty parameter range");
  const auto stats = sample_history_stats(link.kernel, link.intervals, link.p1,
                                          enumeration_limit, mc_histories, seed);
  const double g0 = link.kernel.sum(0);
  BruteForceResult best;
  best.min_error = 2.0;
  for (double candidate : grid) {
    const double na = target == Target::Na ? candidate : link.molecules_per_bit;
    const double xi = target == Target::Xi ? candidate : link.threshold;
    double acc = 0.0;
    for (const auto& st : stats) {
      const double m0 = na * st.isi_basis;
      acc += st.weight * single_link_error(link.p1, xi, m0, m0 + na * g0);
    }
    acc /= link.intervals;
    if (acc < best.min_error) {
      best.min_error = acc;
      best.argmin = candidate;
    }
  }
  return best;
}

}  // namespace

BruteForceResult brute_force_opt_xi(const SingleLink& link, const std::vector<double>& grid,
                                    int enumeration_limit, int mc_histories,
                                    std::uint64_t seed) {
  return brute_force(link, grid, Target::Xi, enumeration_limit, mc_histories, seed);
}

BruteForceResult brute_force_opt_na(const SingleLink& link, const std::vector<double>& grid,
                                    int enumeration_limit, int mc_histories,
                                    std::uint64_t seed) {
  return brute_force(link, grid, Target::Na, enumeration_limit, mc_histories, seed);
}

}  // namespace molhop
