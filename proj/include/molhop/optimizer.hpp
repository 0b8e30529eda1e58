#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "molhop/analysis.hpp"

namespace molhop {

// Closed-form per-interval optima for a single link (release count and
// detection threshold). Both need ISI from at least one past "1" bit; with an
// all-zero history the log ratio diverges and std::nullopt is returned so the
// caller can fall back to the brute-force search.

// Optimal number of molecules released for bit "1" in interval j, given the
// history and the receiver threshold. Evaluated at the link's operating N_A
// (the conditional-mean ratio is what the formula consumes).
std::optional<double> optimal_na(const SingleLink& link, int j, const std::vector<int>& history);

// Optimal detection threshold in interval j for a fixed release count;
// clamped to >= 1.
std::optional<double> optimal_xi(const SingleLink& link, int j, const std::vector<int>& history);

// Averages of the per-(interval, history) optima over enumerated/sampled
// histories and all intervals. Falls back to the brute-force optimum when no
// history produces a defined formula value (e.g. a one-interval link).
double average_optimal_na(const SingleLink& link, int enumeration_limit, int mc_histories,
                          std::uint64_t seed);
double average_optimal_xi(const SingleLink& link, int enumeration_limit, int mc_histories,
                          std::uint64_t seed);

struct BruteForceResult {
  double argmin{0};
  double min_error{1};
};

// Exhaustive sweep of the history-averaged link error over a parameter grid;
// ties break toward the smaller parameter value.
BruteForceResult brute_force_opt_xi(const SingleLink& link, const std::vector<double>& grid,
                                    int enumeration_limit, int mc_histories, std::uint64_t seed);
BruteForceResult brute_force_opt_na(const SingleLink& link, const std::vector<double>& grid,
                                    int enumeration_limit, int mc_histories, std::uint64_t seed);

// Link error at an explicit operating point, averaged over histories and
// intervals (the brute-force objective).
double link_error_at(const SingleLink& link, double na, double xi, int enumeration_limit,
                     int mc_histories, std::uint64_t seed);

// Nearest integer, halves away from zero.
long long round_half_away(double v);

}  // namespace molhop
