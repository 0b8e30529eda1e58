#include <doctest.h>

#include <cmath>
#include <numbers>

#include "molhop/analysis.hpp"
#include "molhop/rng.hpp"

using namespace molhop;

namespace {
constexpr double kD = 4.365e-10;
constexpr double kRadius = 45e-9;
const double kVolume = 4.0 / 3.0 * std::numbers::pi * kRadius * kRadius * kRadius;
const TimingConfig kTiming{200e-6, 10, 20e-6};

AnalysisConfig mm_two_hop_config(int length, double xi, long long na) {
  AnalysisConfig cfg;
  cfg.topology = build_topology(1e-6, 1, kRadius, Scheme::MultiMolecule, kD);
  cfg.timing = kTiming;
  cfg.protocol.scheme = Scheme::MultiMolecule;
  cfg.protocol.protocol = Protocol::FD;
  cfg.protocol.fixed_threshold = xi;
  cfg.protocol.molecules_per_bit = {na, na};
  cfg.source.p1 = 0.5;
  cfg.source.length = length;
  return cfg;
}

// interference-free synthetic channel: every hop has the same single-lag
// kernel and there is no self/backward coupling
NetworkKernels synthetic_chain_kernels(const NetworkTopology& topo, int samples, double g0) {
  NetworkKernels nk;
  nk.timing = kTiming;
  nk.node_count = topo.node_count();
  nk.kernels.resize(static_cast<size_t>(nk.node_count) * nk.node_count);
  nk.emitters_of.resize(nk.node_count);
  for (int s = 1; s <= topo.relay_count + 1; ++s) {
    nk.emitters_of[s] = {s - 1};
    ObservationKernel k;
    k.emitter = s - 1;
    k.observer = s;
    k.molecule_type = s;
    k.memory = 1;
    k.samples = samples;
    k.per_sample.assign(samples, g0 / samples);
    k.lag_sums = {g0};
    nk.kernels[(s - 1) * nk.node_count + s] = std::move(k);
  }
  return nk;
}
}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("single-link error expression") {
  // frozen Poisson-sum oracle value for xi=5, m1=10, m0=1, P1=1/2
  CHECK(single_link_error(0.5, 5, 1.0, 10.0) ==
        doctest::Approx(0.0164562674522).epsilon(1e-10));
  // perfect separation
  CHECK(single_link_error(0.5, 10, 0.0, 1e4) < 1e-12);
  // indistinguishable hypotheses at equal priors give exactly 1/2
  CHECK(single_link_error(0.5, 7, 3.3, 3.3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("history-averaged single-link error") {
  const auto topo = build_topology(500e-9, 0, kRadius, Scheme::MultiMolecule, kD);
  SingleLink link;
  link.kernel = make_kernel(topo, 0, 1, kTiming, 40);
  link.molecules_per_bit = 8000;
  link.p1 = 0.5;
  link.threshold = 8;
  link.intervals = 20;

  // j = 1: no history to average over
  const double m1 = link.molecules_per_bit * link.kernel.sum(0);
  CHECK(average_single_link_error(link, 1, 12, 100, 1) ==
        doctest::Approx(single_link_error(0.5, 8, 0.0, m1)).epsilon(1e-12));

  // all-zero source never raises a false alarm
  SingleLink zeros = link;
  zeros.p1 = 0.0;
  CHECK(average_single_link_error(zeros, 5, 12, 100, 1) == doctest::Approx(0.0));

  // Monte Carlo sampling agrees with exact enumeration
  const double exact = average_single_link_error(link, 10, 12, 0, 7);
  const double mc = average_single_link_error(link, 10, 0, 40000, 7);
  CHECK(std::abs(exact - mc) < 3.0 * 0.5 / std::sqrt(40000.0));
}

TEST_CASE("coin-toss surrogate") {
  std::vector<int> bits(10000);
  Rng rng(3, 0);
  for (auto& b : bits) b = rng.bernoulli(0.5);

  const auto id = coin_toss_surrogate(bits, std::vector<double>(bits.size(), 0.0), 1);
  CHECK(id.detected == bits);
  const auto comp = coin_toss_surrogate(bits, std::vector<double>(bits.size(), 1.0), 1);
  for (size_t i = 0; i < bits.size(); ++i) CHECK(comp.detected[i] == 1 - bits[i]);

  const auto half = coin_toss_surrogate(bits, std::vector<double>(bits.size(), 0.5), 99);
  int agree = 0;
  for (size_t i = 0; i < bits.size(); ++i) agree += half.detected[i] == bits[i];
  CHECK(std::abs(agree / 10000.0 - 0.5) < 3.0 * std::sqrt(0.25 / 10000.0));

  // deterministic under the seed
  CHECK(coin_toss_surrogate(bits, std::vector<double>(bits.size(), 0.5), 99).detected ==
        half.detected);
}

TEST_CASE("two-hop recursion against a hand-rolled oracle") {
  const int L = 12;
  AnalysisConfig cfg = mm_two_hop_config(L, 20, 10000);
  const AnalysisEngine engine(cfg);

  std::vector<int> bits = {1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0};
  const auto eval = engine.evaluate_realization(bits, 424242);

  // independent evaluation: direct formulas, gamma-route CDF
  auto g = [&](int lag) {
    double s = 0;
    for (int m = 1; m <= kTiming.samples_per_interval; ++m) {
      s += p_ob(500e-9, lag * kTiming.bit_interval_s + m * kTiming.sample_spacing_s,
                kVolume, kD);
    }
    return s;  // both hops are geometrically identical here
  };
  auto cdf = [](double xi, double mean) {
    return mean == 0.0 ? 1.0 : poisson_cdf_gamma(xi, mean);
  };
  const double na = 10000, xi = 20;
  const auto& surr = eval.surrogates[0].detected;

  for (int j = 1; j <= L; ++j) {
    double isi1 = 0;
    for (int i = 1; i < j; ++i) isi1 += bits[i - 1] * g(j - i);
    const double m0 = na * isi1;
    const double m1 = m0 + na * g(0);
    const double cond1_h1 = cdf(xi, m1);
    const double cond0_h1 = 1.0 - cdf(xi, m0);
    CHECK(eval.stages[0].conditional1[j - 1] == doctest::Approx(cond1_h1).epsilon(1e-9));
    CHECK(eval.stages[0].conditional0[j - 1] == doctest::Approx(cond0_h1).epsilon(1e-9));

    // second hop: the relay re-transmits its detected bits one interval later
    double isi2 = 0;
    for (int i = 1; i < j; ++i) isi2 += surr[i - 1] * g(j - i);
    const double base = na * isi2;
    const double with = base + na * g(0);
    const double cond1_e2e = cond1_h1 * cdf(xi, base) + (1 - cond1_h1) * cdf(xi, with);
    const double cond0_e2e =
        cond0_h1 * (1 - cdf(xi, with)) + (1 - cond0_h1) * (1 - cdf(xi, base));
    CHECK(eval.stages[1].conditional1[j - 1] == doctest::Approx(cond1_e2e).epsilon(1e-8));
    CHECK(eval.stages[1].conditional0[j - 1] == doctest::Approx(cond0_e2e).epsilon(1e-8));
    const double combined = 0.5 * cond1_e2e + 0.5 * cond0_e2e;
    CHECK(two_hop_error(engine, bits, j, 424242) == doctest::Approx(combined).epsilon(1e-8));
  }
}

TEST_CASE("error profile structure") {
  AnalysisConfig cfg = mm_two_hop_config(10, 15, 8000);
  const AnalysisEngine engine(cfg);
  std::vector<int> bits = {1, 1, 0, 1, 0, 0, 0, 1, 1, 0};
  const auto eval = engine.evaluate_realization(bits, 5);
  for (const auto& stage : eval.stages) {
    for (int j = 0; j < 10; ++j) {
      CHECK(stage.combined[j] >= 0.0);
      CHECK(stage.combined[j] <= 1.0);
      // prior decomposition holds exactly
      CHECK(stage.combined[j] ==
            doctest::Approx(0.5 * stage.conditional1[j] + 0.5 * stage.conditional0[j])
                .epsilon(1e-15));
    }
  }
  // bit-identical reproducibility
  const auto again = engine.evaluate_realization(bits, 5);
  CHECK(again.stages[1].combined == eval.stages[1].combined);
  CHECK(again.surrogates[0].detected == eval.surrogates[0].detected);
}

TEST_CASE("degenerate channel always misses") {
  AnalysisConfig cfg = mm_two_hop_config(6, 4, 5000);
  NetworkKernels dead = synthetic_chain_kernels(cfg.topology, 10, 0.0);
  const AnalysisEngine engine(cfg, dead);
  std::vector<int> bits = {1, 0, 1, 1, 0, 1};
  const auto eval = engine.evaluate_realization(bits, 1);
  for (int j = 0; j < 6; ++j) {
    CHECK(eval.stages[0].combined[j] == doctest::Approx(0.5).epsilon(1e-15));  // = P1
  }
}

TEST_CASE("xor cascade on interference-free kernels") {
  // per-hop miss probability delta, zero false alarms: the expected error
  // after kappa hops is the xor-cascade closed form with eps = P1 * delta
  const int q = 4;
  AnalysisConfig cfg;
  cfg.topology = build_topology(1e-6, q, kRadius, Scheme::MultiMolecule, kD);
  cfg.timing = kTiming;
  cfg.protocol.scheme = Scheme::MultiMolecule;
  cfg.protocol.protocol = Protocol::FD;
  cfg.protocol.fixed_threshold = 12;
  cfg.protocol.molecules_per_bit.assign(q + 1, 3000);
  cfg.source.p1 = 0.5;
  cfg.source.length = 8;

  const double g0 = 2.4e-3;
  const AnalysisEngine engine(cfg, synthetic_chain_kernels(cfg.topology, 10, g0));
  std::vector<int> bits = {1, 0, 0, 1, 1, 0, 1, 0};
  const auto eval = engine.evaluate_realization(bits, 77);

  const double delta = poisson_cdf(12, 3000 * g0);
  const double eps = 0.5 * delta;
  for (int stage = 1; stage <= q + 1; ++stage) {
    const double expect = 0.5 * (1.0 - std::pow(1.0 - 2.0 * eps, stage));
    for (int j = 0; j < 8; ++j) {
      CHECK(std::abs(eval.stages[stage - 1].combined[j] - expect) < 1e-12);
      CHECK(eval.stages[stage - 1].conditional0[j] == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("half duplex equals full duplex on an interference-free channel") {
  AnalysisConfig fd_cfg;
  fd_cfg.topology = build_topology(600e-9, 1, kRadius, Scheme::SingleMolecule, kD);
  fd_cfg.timing = kTiming;
  fd_cfg.protocol.scheme = Scheme::SingleMolecule;
  fd_cfg.protocol.protocol = Protocol::FD;
  fd_cfg.protocol.fixed_threshold = 9;
  fd_cfg.protocol.molecules_per_bit = {5000, 5000};
  fd_cfg.source.p1 = 0.5;
  fd_cfg.source.length = 10;

  AnalysisConfig hd_cfg = fd_cfg;
  hd_cfg.protocol.protocol = Protocol::HD;

  // same single-lag hop kernels in both modes, no self/backward coupling
  const auto kfd = synthetic_chain_kernels(fd_cfg.topology, 10, 3.1e-3);
  const AnalysisEngine fd(fd_cfg, kfd);
  const AnalysisEngine hd(hd_cfg, kfd);

  std::vector<int> bits = {1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
  for (int j = 1; j <= 10; ++j) {
    CHECK(std::abs(multi_hop_error(fd, bits, j, 3) - half_duplex_error(hd, bits, j, 3)) <
          1e-12);
  }
}

TEST_CASE("multi-hop entry points guard their preconditions") {
  AnalysisConfig cfg = mm_two_hop_config(6, 10, 5000);
  const AnalysisEngine engine(cfg);
  std::vector<int> bits = {1, 0, 1, 0, 1, 0};
  CHECK_THROWS(multi_hop_error(engine, bits, 0, 1));
  CHECK_THROWS(multi_hop_error(engine, bits, 7, 1));
  CHECK_THROWS(half_duplex_error(engine, bits, 1, 1));  // not a HD protocol

  AnalysisConfig direct = cfg;
  direct.topology = build_topology(1e-6, 0, kRadius, Scheme::MultiMolecule, kD);
  direct.protocol.molecules_per_bit = {5000};
  const AnalysisEngine single(direct);
  CHECK_THROWS(multi_hop_error(single, bits, 1, 1));  // not a relay network
}

TEST_CASE("perfect hops give vanishing error") {
  AnalysisConfig cfg = mm_two_hop_config(6, 30, 4000);
  // mean 400 against threshold 30, no ISI
  const AnalysisEngine engine(cfg, synthetic_chain_kernels(cfg.topology, 10, 0.1));
  std::vector<int> bits = {1, 1, 0, 1, 0, 1};
  for (int j = 1; j <= 6; ++j) {
    CHECK(multi_hop_error(engine, bits, j, 2) < 1e-12);
  }
}

TEST_CASE("averaged network error is deterministic and worker-independent") {
  AnalysisConfig cfg = mm_two_hop_config(12, 18, 9000);
  const AnalysisEngine engine(cfg);
  const auto a = expected_error(engine, 96, 11, 1);
  const auto b = expected_error(engine, 96, 11, 2);
  CHECK(a.end_to_end == b.end_to_end);
  for (int j = 0; j < 12; ++j) {
    CHECK(a.per_stage[1].combined[j] == b.per_stage[1].combined[j]);
  }
  const auto c = expected_error(engine, 96, 12, 1);
  CHECK(c.end_to_end != a.end_to_end);  // seed actually matters
}

}  // TEST_SUITE
