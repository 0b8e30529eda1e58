#include <doctest.h>

#include <cmath>
#include <numbers>

#include "molhop/optimizer.hpp"

using namespace molhop;

namespace {
constexpr double kD = 4.365e-10;
constexpr double kRadius = 45e-9;
const TimingConfig kTiming{200e-6, 10, 20e-6};

SingleLink table2_link(double distance, double na, double xi, int intervals = 50) {
  const auto topo = build_topology(distance, 0, kRadius, Scheme::MultiMolecule, kD);
  SingleLink link;
  link.kernel = make_kernel(topo, 0, 1, kTiming, intervals + 1);
  link.molecules_per_bit = na;
  link.p1 = 0.5;
  link.threshold = xi;
  link.intervals = intervals;
  return link;
}

// a synthetic link whose mean ratio is exactly e^2
SingleLink ratio_e2_link(double g0, double xi, double na) {
  SingleLink link;
  link.kernel.emitter = 0;
  link.kernel.observer = 1;
  link.kernel.molecule_type = 1;
  link.kernel.memory = 2;
  link.kernel.samples = 1;
  const double g1 = g0 / (std::exp(2.0) - 1.0);  // m1/m0 = (g1+g0)/g1 = e^2
  link.kernel.per_sample = {g0, g1};
  link.kernel.lag_sums = {g0, g1};
  link.molecules_per_bit = na;
  link.p1 = 0.5;
  link.threshold = xi;
  link.intervals = 2;
  return link;
}
}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("closed-form release count") {
  // P1=P0, xi=10, m1/m0 = e^2, sum of P_ob(t_m) = 0.01 -> 10*2/0.01 = 2000
  const auto link = ratio_e2_link(0.01, 10, 1234);
  const std::vector<int> history = {1};
  const auto na = optimal_na(link, 2, history);
  REQUIRE(na.has_value());
  CHECK(*na == doctest::Approx(2000.0));

  // doubling the threshold doubles the optimum exactly at equal priors
  auto link2 = link;
  link2.threshold = 20;
  CHECK(*optimal_na(link2, 2, history) == doctest::Approx(2.0 * *na));

  // no ISI: the log ratio diverges, formula declines
  CHECK(!optimal_na(link, 1, {}).has_value());
  CHECK(!optimal_na(link, 2, std::vector<int>{0}).has_value());
}

TEST_CASE("closed-form threshold") {
  // N_A * sum P_ob = 20, ratio e^2 -> 20/2 = 10
  const auto link = ratio_e2_link(0.01, 5, 2000);
  const std::vector<int> history = {1};
  const auto xi = optimal_xi(link, 2, history);
  REQUIRE(xi.has_value());
  CHECK(*xi == doctest::Approx(10.0));

  // scales linearly with the release count
  auto link2 = link;
  link2.molecules_per_bit = 4000;
  CHECK(*optimal_xi(link2, 2, history) == doctest::Approx(20.0));

  // clamped to >= 1 in extreme regimes
  auto weak = ratio_e2_link(1e-6, 5, 10);
  CHECK(*optimal_xi(weak, 2, history) == 1.0);

  CHECK(!optimal_xi(link, 2, std::vector<int>{0}).has_value());
}

TEST_CASE("per-interval threshold formula tracks the grid argmin") {
  // Table-2 regime: d = 250 nm, T = 200 us, M = 10, N_A = 2000
  const auto link = table2_link(250e-9, 2000, 5);
  const std::vector<int> history = {1, 0, 1, 1};  // some ISI present
  const int j = 5;
  const auto formula = optimal_xi(link, j, history);
  REQUIRE(formula.has_value());

  // exhaustive minimization of the per-interval error over integer xi
  double isi = 0;
  for (int i = 1; i < j; ++i) isi += history[i - 1] * link.kernel.sum(j - i);
  const double m0 = link.molecules_per_bit * isi;
  const double m1 = m0 + link.molecules_per_bit * link.kernel.sum(0);
  int best_xi = 1;
  double best = 2;
  for (int xi = 1; xi <= 100; ++xi) {
    const double e = single_link_error(0.5, xi, m0, m1);
    if (e < best) { best = e; best_xi = xi; }
  }
  CHECK(std::abs(*formula - best_xi) <= 1.0);
}

TEST_CASE("remark-3 equivalence of the two formulas") {
  const auto link = table2_link(250e-9, 2000, 5);
  const std::vector<int> history = {1, 0, 1, 1};
  const auto xi = optimal_xi(link, 5, history);
  REQUIRE(xi.has_value());
  auto at_opt = link;
  at_opt.threshold = *xi;
  const auto na_back = optimal_na(at_opt, 5, history);
  REQUIRE(na_back.has_value());
  // solving one formula at the other's optimum recovers the operating point
  // within the rounding granularity of both
  const double rel = std::abs(*na_back - link.molecules_per_bit) / link.molecules_per_bit;
  CHECK(rel < 0.5 / *xi + 1e-6);
}

TEST_CASE("averaged optima") {
  const auto link = table2_link(250e-9, 2000, 5, 30);
  const double xi_avg = average_optimal_xi(link, 12, 400, 3);
  CHECK(xi_avg >= 1.0);
  CHECK(xi_avg < 100.0);
  const double na_avg = average_optimal_na(link, 12, 400, 3);
  CHECK(na_avg > 0.0);

  // constant-ISI channel: the averaged optimum equals the per-interval value
  auto flat = ratio_e2_link(0.01, 10, 1000);
  flat.intervals = 2;
  CHECK(average_optimal_na(flat, 12, 100, 1) == doctest::Approx(2000.0));

  // single interval: no history anywhere, falls back to the brute force
  auto single = table2_link(250e-9, 2000, 5, 1);
  const double fallback = average_optimal_xi(single, 12, 100, 1);
  std::vector<double> grid;
  for (int x = 1; x <= 200; ++x) grid.push_back(x);
  CHECK(fallback == brute_force_opt_xi(single, grid, 12, 100, 1).argmin);
}

TEST_CASE("brute force") {
  const auto link = table2_link(250e-9, 2000, 5, 25);
  SUBCASE("single-point range") {
    const auto r = brute_force_opt_xi(link, {7}, 12, 200, 2);
    CHECK(r.argmin == 7);
    CHECK(r.min_error == doctest::Approx(link_error_at(link, 2000, 7, 12, 200, 2)));
  }
  SUBCASE("empty range rejected") {
    CHECK_THROWS(brute_force_opt_xi(link, {}, 12, 200, 2));
  }
  SUBCASE("ties break toward the smaller value") {
    // a flat stretch exists at saturated error when xi is far too large
    std::vector<double> grid = {400, 500, 600};
    const auto r = brute_force_opt_xi(link, grid, 12, 100, 2);
    CHECK(r.argmin == 400);
  }
  SUBCASE("finds the interior minimum") {
    std::vector<double> grid;
    for (int x = 1; x <= 60; ++x) grid.push_back(x);
    const auto r = brute_force_opt_xi(link, grid, 12, 300, 2);
    CHECK(r.argmin > 1);
    CHECK(r.argmin < 60);
    // neighbours are no better
    CHECK(link_error_at(link, 2000, r.argmin - 1, 12, 300, 2) >= r.min_error);
    CHECK(link_error_at(link, 2000, r.argmin + 1, 12, 300, 2) >= r.min_error);
  }
}

TEST_CASE("formula optimum is near the grid optimum") {
  // averaged closed-form threshold lands within 5% error of the grid minimum
  const auto link = table2_link(250e-9, 2000, 5, 30);
  std::vector<double> grid;
  for (int x = 1; x <= 100; ++x) grid.push_back(x);
  const auto bf = brute_force_opt_xi(link, grid, 12, 400, 9);
  const double xi_formula = std::round(average_optimal_xi(link, 12, 400, 9));
  const double err_formula = link_error_at(link, 2000, xi_formula, 12, 400, 9);
  CHECK(err_formula <= 1.05 * bf.min_error);
}

TEST_CASE("rounding halves away from zero") {
  CHECK(round_half_away(2.5) == 3);
  CHECK(round_half_away(-2.5) == -3);
  CHECK(round_half_away(2.4) == 2);
}

}  // TEST_SUITE
