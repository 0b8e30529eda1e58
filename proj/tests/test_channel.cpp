#include <doctest.h>

#include <cmath>
#include <numbers>

#include "molhop/channel.hpp"
#include "molhop/rng.hpp"

using namespace molhop;

namespace {
constexpr double kD = 4.365e-10;
constexpr double kRadius = 45e-9;
const double kVolume = 4.0 / 3.0 * std::numbers::pi * kRadius * kRadius * kRadius;

// frozen oracle values (40-digit evaluation of the closed forms)
constexpr double kPob250nm100us = 6.5686250488e-4;
constexpr double kPself20us = 1.01468066537e-2;
constexpr double kPself100us = 9.33071305304e-4;
constexpr double kPself400us = 1.17243718119e-4;
constexpr double kConc20000 = 3.4417420439e22;
constexpr double kPoisCdf5_5 = 0.440493285065;
}  // namespace

TEST_SUITE("channel") {

TEST_CASE("concentration closed form") {
  const double c0 = concentration({0, 0, 0}, 1e-4, 1.0, kD);
  CHECK(c0 == doctest::Approx(std::pow(4.0 * std::numbers::pi * kD * 1e-4, -1.5)).epsilon(1e-12));
  CHECK(concentration({250e-9, 0, 0}, 1e-4, 20000.0, kD) ==
        doctest::Approx(kConc20000).epsilon(1e-9));
  // t^{-3/2} decay toward zero
  CHECK(concentration({250e-9, 0, 0}, 1e2, 20000.0, kD) <
        1e-8 * concentration({250e-9, 0, 0}, 1e-4, 20000.0, kD));
  CHECK_THROWS(concentration({0, 0, 0}, 0.0, 1.0, kD));
}

TEST_CASE("observation probability") {
  CHECK(p_ob(250e-9, 1e-4, kVolume, kD) == doctest::Approx(kPob250nm100us).epsilon(1e-9));
  CHECK(p_ob(250e-9, 1e4, kVolume, kD) < 1e-12);
  CHECK(p_ob(250e-9, 1e-4, 2 * kVolume, kD) ==
        doctest::Approx(2 * p_ob(250e-9, 1e-4, kVolume, kD)).epsilon(1e-12));
  // consistency with the concentration Green's function on a grid
  for (double d : {150e-9, 250e-9, 500e-9, 1e-6}) {
    for (double t = 1e-6; t <= 1.0; t *= 10) {
      const double via_conc = concentration({d, 0, 0}, t, 1.0, kD) * kVolume;
      CHECK(p_ob(d, t, kVolume, kD) ==
            doctest::Approx(std::min(1.0, via_conc)).epsilon(1e-12));
    }
  }
}

TEST_CASE("self-observation probability") {
  CHECK(p_self(20e-6, kRadius, kD) == doctest::Approx(kPself20us).epsilon(1e-9));
  CHECK(p_self(100e-6, kRadius, kD) == doctest::Approx(kPself100us).epsilon(1e-9));
  CHECK(p_self(400e-6, kRadius, kD) == doctest::Approx(kPself400us).epsilon(1e-9));
  CHECK(p_self(1e-12, kRadius, kD) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p_self(10.0, kRadius, kD) < 1e-9);
  // bounded and decaying over a log grid
  double prev = 2.0;
  for (double t = 1e-6; t <= 1.0; t *= 2) {
    const double p = p_self(t, kRadius, kD);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("poisson cdf") {
  CHECK(poisson_cdf(1, 0.0) == 1.0);
  CHECK(poisson_cdf(7, 0.0) == 1.0);
  CHECK(poisson_cdf(1, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-12));
  CHECK(poisson_cdf(5, 5.0) == doctest::Approx(kPoisCdf5_5).epsilon(1e-10));
  // monotone: non-increasing in mean, non-decreasing in threshold
  for (double mean : {0.5, 2.0, 10.0}) {
    CHECK(poisson_cdf(4, mean) >= poisson_cdf(4, mean + 1.0));
    CHECK(poisson_cdf(4, mean) <= poisson_cdf(5, mean));
  }
  // real-valued thresholds: Pr(X < 5.3) counts X <= 5
  CHECK(poisson_cdf(5.3, 2.0) == doctest::Approx(poisson_cdf(6, 2.0)).epsilon(1e-12));
}

TEST_CASE("poisson cdf through the incomplete gamma") {
  CHECK(poisson_cdf_gamma(3, 0.0) == 1.0);
  CHECK(poisson_cdf_gamma(1, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-12));
  CHECK(poisson_cdf_gamma(5, 5.0) == doctest::Approx(kPoisCdf5_5).epsilon(1e-10));
  for (int xi = 1; xi <= 100; ++xi) {
    for (double mean : {0.1, 1.0, 10.0, 50.0}) {
      CHECK(std::abs(poisson_cdf(xi, mean) - poisson_cdf_gamma(xi, mean)) < 1e-10);
    }
  }
  // large-mean log-space path agrees with the gamma route
  CHECK(std::abs(poisson_cdf(600, 600.0) - poisson_cdf_gamma(600, 600.0)) < 1e-9);
}

TEST_CASE("stirling-approximated cdf") {
  CHECK(poisson_cdf_stirling(0.4, 5.0) == 0.0);
  const double v = poisson_cdf_stirling(5, 5.0);
  CHECK(std::abs(v - kPoisCdf5_5) < 0.05);
  CHECK(v == doctest::Approx(0.455038419).epsilon(1e-5));
  double prev = 0.0;
  for (double xi = 1; xi <= 20; xi += 1) {
    const double p = poisson_cdf_stirling(xi, 8.0);
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("kernel tables") {
  const auto topo = build_topology(1e-6, 1, kRadius, Scheme::SingleMolecule, kD);
  const TimingConfig timing{200e-6, 10, 20e-6};
  const auto k = make_kernel(topo, 0, 1, timing, 40);
  REQUIRE(k.memory == 40);
  for (int lag = 0; lag < k.memory; ++lag) {
    for (int m = 1; m <= timing.samples_per_interval; ++m) {
      CHECK(k.p(lag, m) >= 0.0);
      CHECK(k.p(lag, m) <= 1.0);
      CHECK(k.p(lag, m) == doctest::Approx(p_ob(500e-9, lag * 200e-6 + m * 20e-6,
                                                kVolume, kD)).epsilon(1e-12));
    }
  }
  CHECK(k.sum(39) < k.sum(1));
  CHECK(k.sum(40) == 0.0);  // beyond memory

  // self-kernel uses the self-observation probability
  const auto ks = make_kernel(topo, 1, 1, timing, 5);
  CHECK(ks.p(0, 1) == doctest::Approx(p_self(20e-6, kRadius, kD)).epsilon(1e-12));

  // truncation drops negligible tails
  const auto kt = make_kernel(topo, 0, 1, timing, 400, 1e-6);
  CHECK(kt.memory < 400);
  CHECK(kt.memory > 100);
  CHECK(kt.lag_sums[kt.memory - 2] >= 1e-6);
}

TEST_CASE("mean observed") {
  const auto topo = build_topology(1e-6, 1, kRadius, Scheme::SingleMolecule, kD);
  const TimingConfig timing{200e-6, 10, 20e-6};
  const auto k = make_kernel(topo, 0, 1, timing, 30);

  CHECK(mean_observed(std::vector<int>(20, 0), k, 15, 1e4) == 0.0);
  std::vector<int> single(20, 0);
  single[14] = 1;
  CHECK(mean_observed(single, k, 15, 1e4) == doctest::Approx(1e4 * k.sum(0)).epsilon(1e-12));

  // Poisson superposition: means add over emitter partitions
  Rng rng(11, 0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> s1(25), s2(25), both(25);
    for (int i = 0; i < 25; ++i) {
      s1[i] = rng.bernoulli(0.5);
      s2[i] = rng.bernoulli(0.5);
      both[i] = s1[i] + s2[i] > 0 ? 1 : 0;
    }
    // disjoint overlap case: when both transmit, superpose as two emitters
    const double sum_means = mean_observed(s1, k, 20, 5e3) + mean_observed(s2, k, 20, 5e3);
    double direct = 0.0;
    for (int i = 1; i <= 20; ++i) {
      direct += 5e3 * (s1[i - 1] + s2[i - 1]) * k.sum(20 - i);
    }
    CHECK(sum_means == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("complete signal mean") {
  const TimingConfig timing{200e-6, 10, 20e-6};
  SUBCASE("multi-molecule reduces to the single emitter") {
    const auto topo = build_topology(1e-6, 1, kRadius, Scheme::MultiMolecule, kD);
    const auto nk = make_network_kernels(topo, timing, 30);
    REQUIRE(nk.emitters_of[1] == std::vector<int>{0});
    std::vector<std::vector<int>> seqs(3, std::vector<int>(20, 0));
    seqs[0][4] = 1;
    seqs[0][9] = 1;
    const double direct = mean_observed(seqs[0], nk.at(0, 1), 12, 1e4);
    CHECK(complete_signal_mean(nk, seqs, 1, 12, {10000, 10000}) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("single-molecule relay sees source plus itself") {
    const auto topo = build_topology(600e-9, 1, kRadius, Scheme::SingleMolecule, kD);
    const auto nk = make_network_kernels(topo, timing, 30);
    REQUIRE(nk.emitters_of[1] == std::vector<int>{0, 1});
    std::vector<std::vector<int>> seqs(3, std::vector<int>(20, 0));
    seqs[0][9] = 1;
    seqs[1][10] = 1;
    const double expect = mean_observed(seqs[0], nk.at(0, 1), 12, 5000) +
                          mean_observed(seqs[1], nk.at(1, 1), 12, 5000);
    CHECK(complete_signal_mean(nk, seqs, 1, 12, {5000, 5000}) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(complete_signal_mean(nk, std::vector<std::vector<int>>(3, std::vector<int>(20, 0)),
                               1, 12, {5000, 5000}) == 0.0);
  }
}

}  // TEST_SUITE
