#include "molhop/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "molhop/channel.hpp"

namespace molhop {

void release(ParticleStore& store, int type_id, const Vec3& center_m, long long count) {
  if (count < 0) throw std::invalid_argument("release: count must be non-negative");
  auto& t = store.types[type_id - 1];
  t.x.insert(t.x.end(), count, static_cast<float>(center_m.x));
  t.y.insert(t.y.end(), count, static_cast<float>(center_m.y));
  t.z.insert(t.z.end(), count, static_cast<float>(center_m.z));
}

void brownian_step(ParticleStore& store, double dt_s,
                   const std::vector<double>& diffusion_by_type, Rng& rng) {
  if (dt_s < 0) throw std::invalid_argument("brownian_step: dt must be non-negative");
  for (size_t f = 0; f < store.types.size(); ++f) {
    auto& t = store.types[f];
    const float sigma = static_cast<float>(std::sqrt(2.0 * diffusion_by_type[f] * dt_s));
    for (size_t i = 0; i < t.x.size(); ++i) {
      t.x[i] += sigma * rng.normal_f();
      t.y[i] += sigma * rng.normal_f();
      t.z[i] += sigma * rng.normal_f();
    }
  }
}

long long sample_count(const ParticleStore& store, int type_id, const Vec3& center_m,
                       double radius_m) {
  const auto& t = store.types[type_id - 1];
  const float cx = static_cast<float>(center_m.x);
  const float cy = static_cast<float>(center_m.y);
  const float cz = static_cast<float>(center_m.z);
  const float r2 = static_cast<float>(radius_m * radius_m);
  long long n = 0;
  for (size_t i = 0; i < t.x.size(); ++i) {
    const float dx = t.x[i] - cx;
    const float dy = t.y[i] - cy;
    const float dz = t.z[i] - cz;
    if (dx * dx + dy * dy + dz * dz <= r2) ++n;
  }
  return n;
}

namespace {

// Skip-tolerance exponents: a span of samples may be jumped over when
// exp(-x^2 / (4 D span)) is below these scales (x = distance to the nearest
// observer surface). Leakage per skipped sample stays below
// V (4 pi D t0)^{-3/2} e^{-z}, which is negligible against count noise.
constexpr double kSkipExponent = 18.0;   // within-interval sample skips
constexpr double kSleepExponent = 26.0;  // whole-interval skips

struct Observer {
  int node{};
  float cx{};
  float r{};
  float r2{};
};

struct BatchEntry {
  std::int32_t observer_slot;  // obs_index * (K*M) + (interval-1)*M + (m-1)
  std::uint32_t count;
};

// One potential emission event: `emitter` releasing at `interval` the
// transmission of source bit `bit`.
struct Batch {
  int emitter{};
  int interval{};
  int bit{};
  std::vector<BatchEntry> entries;
};

struct TypeGeometry {
  std::vector<Observer> observers;
  int last_detect_interval{0};
  double diffusion{0};
};

class TrialEngine {
 public:
  TrialEngine(const SimulationConfig& cfg, std::uint64_t seed)
      : cfg_(cfg), seed_(seed) {
    validate(cfg.timing);
    validate(cfg.protocol);
    if (static_cast<int>(cfg.protocol.molecules_per_bit.size()) !=
        cfg.topology.relay_count + 1) {
      throw std::invalid_argument("molecules_per_bit must cover nodes 0..Q");
    }
    schedule_ = make_schedule(cfg.protocol.duplex(), cfg.source.length,
                              cfg.topology.relay_count);
    K_ = schedule_.total_intervals;
    M_ = cfg.timing.samples_per_interval;

    const int n_types = static_cast<int>(cfg.topology.molecules.size());
    geometry_.resize(n_types);
    for (int f = 1; f <= n_types; ++f) {
      auto& g = geometry_[f - 1];
      g.diffusion = cfg.topology.molecule(f).diffusion_m2_s;
      for (int k = 1; k <= cfg.topology.relay_count + 1; ++k) {
        if (cfg.topology.detect_type[k] != f) continue;
        Observer o;
        o.node = k;
        o.cx = static_cast<float>(cfg.topology.nodes[k].position_m.x);
        o.r = static_cast<float>(cfg.topology.nodes[k].radius_m);
        o.r2 = o.r * o.r;
        g.observers.push_back(o);
        for (int l = K_; l >= 1; --l) {
          if (schedule_.detects(k, l)) {
            g.last_detect_interval = std::max(g.last_detect_interval, l);
            break;
          }
        }
      }
    }

    SourceModel src = cfg.source;
    src.seed = seed;
    source_bits_ = generate_source_bits(src);

    const bool adaptive = cfg.protocol.protocol != Protocol::FD &&
                          cfg.protocol.protocol != Protocol::HD;
    if (adaptive) {
      kernels_ = make_network_kernels(cfg.topology, cfg.timing, K_);
    }
  }

  void simulate_physics() {
    const auto& na = cfg_.protocol.molecules_per_bit;
    for (int e = 0; e <= cfg_.topology.relay_count; ++e) {
      const int type = cfg_.topology.emit_type[e];
      if (type == 0 || na[e] == 0) continue;
      for (int l = 1; l <= K_; ++l) {
        const int b = schedule_.transmit_bit(e, l);
        if (b == 0) continue;
        if (e == 0 && source_bits_[b - 1] == 0) continue;  // known silent
        Batch batch;
        batch.emitter = e;
        batch.interval = l;
        batch.bit = b;
        simulate_batch(batch, type, na[e]);
        batches_.push_back(std::move(batch));
      }
    }
  }

  TrialResult decode(double fixed_threshold) const {
    ProtocolConfig proto = cfg_.protocol;
    proto.fixed_threshold = fixed_threshold;
    const int q = cfg_.topology.relay_count;
    const int L = cfg_.source.length;
    const int n_nodes = q + 2;

    std::vector<std::vector<long long>> signal(n_nodes);  // [node][(l-1)*M + m-1]
    for (int k = 1; k <= q + 1; ++k) {
      if (cfg_.topology.detect_type[k] != 0) signal[k].assign(static_cast<size_t>(K_) * M_, 0);
    }
    std::vector<std::vector<int>> detected(n_nodes, std::vector<int>(L, 0));
    std::vector<std::vector<int>> hist(n_nodes, std::vector<int>(K_ + 1, 0));
    std::vector<ThresholdPolicy> policy(n_nodes);
    for (int k = 1; k <= q + 1; ++k) policy[k] = policy_for_node(proto, k, q);

    // observer slot base offsets per type (as used when recording batches)
    size_t next_batch = 0;
    std::vector<size_t> order(batches_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return batches_[a].interval < batches_[b].interval;
    });

    for (int l = 1; l <= K_; ++l) {
      // releases at the start of interval l whose transmit bit decided to 1
      while (next_batch < order.size() && batches_[order[next_batch]].interval == l) {
        const Batch& batch = batches_[order[next_batch]];
        ++next_batch;
        bool real = true;
        if (batch.emitter >= 1) real = detected[batch.emitter][batch.bit - 1] == 1;
        if (!real) continue;
        const int type = cfg_.topology.emit_type[batch.emitter];
        const auto& obs = geometry_[type - 1].observers;
        for (const BatchEntry& entry : batch.entries) {
          const int oi = entry.observer_slot / (K_ * M_);
          const int slot = entry.observer_slot % (K_ * M_);
          signal[obs[oi].node][slot] += entry.count;
        }
      }

      // decisions at the end of interval l
      for (int k = 1; k <= q + 1; ++k) {
        const int b = schedule_.detect_bit(k, l);
        if (b == 0) continue;
        int bit;
        if (cfg_.force_perfect_detection) {
          bit = k == 1 ? source_bits_[b - 1] : detected[k - 1][b - 1];
        } else {
          long long sum = 0;
          const auto& row = signal[k];
          for (int m = 0; m < M_; ++m) sum += row[static_cast<size_t>(l - 1) * M_ + m];
          const double xi = policy[k].kind == ThresholdKind::Fixed
                                ? policy[k].fixed_xi
                                : adaptive_threshold(policy[k], k, q, l, hist[k], kernels_,
                                                     proto.molecules_per_bit);
          bit = weighted_sum_decide(sum, xi);
        }
        detected[k][b - 1] = bit;
        hist[k][l] = bit;
      }
    }

    TrialResult out;
    out.seed = seed_;
    out.source_bits = source_bits_;
    out.detected.assign(n_nodes, {});
    out.per_hop_errors.assign(n_nodes, 0);
    for (int k = 1; k <= q + 1; ++k) {
      out.detected[k] = detected[k];
      int errs = 0;
      for (int b = 0; b < L; ++b) errs += detected[k][b] != source_bits_[b];
      out.per_hop_errors[k] = errs;
    }
    out.end_to_end_errors = out.per_hop_errors[q + 1];
    return out;
  }

 private:
  void simulate_batch(Batch& batch, int type, long long count) {
    const TypeGeometry& geo = geometry_[type - 1];
    const int last = geo.last_detect_interval;
    if (batch.interval > last || geo.observers.empty()) return;

    const double T = cfg_.timing.bit_interval_s;
    const double t0 = cfg_.timing.sample_spacing_s;
    const double D = geo.diffusion;
    const float sigma_t0 = static_cast<float>(std::sqrt(2.0 * D * t0));
    const double gap = T - M_ * t0;
    const float sigma_gap = static_cast<float>(gap > 0 ? std::sqrt(2.0 * D * gap) : 0.0);
    // allowed span (seconds) per unit squared surface distance
    const double skip_rate = 1.0 / (4.0 * D * kSkipExponent);
    const double sleep_rate = 1.0 / (4.0 * D * kSleepExponent);

    const float ex = static_cast<float>(
        cfg_.topology.nodes[batch.emitter].position_m.x);

    // dense per-batch accumulation, compressed to sparse entries afterwards
    const size_t grid_size = geo.observers.size() * static_cast<size_t>(K_) * M_;
    if (grid_.size() < grid_size) grid_.resize(grid_size);
    std::memset(grid_.data(), 0, grid_size * sizeof(std::uint32_t));

    Rng rng(seed_ ^ 0x50C5A1B3u,
            0xBA7C4ull * (static_cast<std::uint64_t>(batch.emitter) * (K_ + 1) + batch.interval));

    for (long long mol = 0; mol < count; ++mol) {
      float px = ex, py = 0.0f, pz = 0.0f;
      int l = batch.interval;
      while (l <= last) {
        // nearest distance to an observer surface
        float best = std::numeric_limits<float>::max();
        for (const Observer& o : geo.observers) {
          const float dx = px - o.cx;
          const float d2 = dx * dx + py * py + pz * pz;
          if (d2 < best) best = d2;
        }
        float x_surf = std::sqrt(best) - geo.observers[0].r;
        if (x_surf < 0) x_surf = 0;

        if (!cfg_.exact_paths && x_surf > 0) {
          const double sleep_span = static_cast<double>(x_surf) * x_surf * sleep_rate;
          const int n = static_cast<int>(sleep_span / T);
          if (n >= 1) {
            const int hop = std::min(n, last - l + 1);
            const float s = static_cast<float>(std::sqrt(2.0 * D * hop * T));
            px += s * rng.normal_f();
            py += s * rng.normal_f();
            pz += s * rng.normal_f();
            l += hop;
            continue;
          }
        }

        // resolve this interval's samples
        int m = 0;
        while (m < M_) {
          int hop = 1;
          if (!cfg_.exact_paths && x_surf > 0) {
            const double span = static_cast<double>(x_surf) * x_surf * skip_rate;
            hop = std::clamp(static_cast<int>(span / t0), 1, M_ - m);
          }
          float s = sigma_t0;
          if (hop > 1) s = static_cast<float>(std::sqrt(2.0 * D * hop * t0));
          px += s * rng.normal_f();
          py += s * rng.normal_f();
          pz += s * rng.normal_f();
          m += hop;
          // landing is a sample time: count containment
          const float yz = py * py + pz * pz;
          float best2 = std::numeric_limits<float>::max();
          for (size_t oi = 0; oi < geo.observers.size(); ++oi) {
            const Observer& o = geo.observers[oi];
            const float dx = px - o.cx;
            const float d2 = dx * dx + yz;
            if (d2 <= o.r2) {
              grid_[oi * (static_cast<size_t>(K_) * M_) +
                    static_cast<size_t>(l - 1) * M_ + (m - 1)] += 1;
            }
            if (d2 < best2) best2 = d2;
          }
          x_surf = std::sqrt(best2) - geo.observers[0].r;
          if (x_surf < 0) x_surf = 0;
        }
        if (sigma_gap > 0) {
          px += sigma_gap * rng.normal_f();
          py += sigma_gap * rng.normal_f();
          pz += sigma_gap * rng.normal_f();
        }
        ++l;
      }
    }

    for (size_t i = 0; i < grid_size; ++i) {
      if (grid_[i]) batch.entries.push_back({static_cast<std::int32_t>(i), grid_[i]});
    }
  }

  const SimulationConfig& cfg_;
  std::uint64_t seed_;
  BitSchedule schedule_;
  int K_{0};
  int M_{0};
  std::vector<TypeGeometry> geometry_;
  std::vector<int> source_bits_;
  std::vector<Batch> batches_;
  NetworkKernels kernels_;
  mutable std::vector<std::uint32_t> grid_;
};

}  // namespace

TrialResult run_trial(const SimulationConfig& config, std::uint64_t seed) {
  TrialEngine engine(config, seed);
  engine.simulate_physics();
  return engine.decode(config.protocol.fixed_threshold);
}

std::vector<TrialResult> run_trial_thresholds(const SimulationConfig& config,
                                              const std::vector<double>& thresholds,
                                              std::uint64_t seed) {
  TrialEngine engine(config, seed);
  engine.simulate_physics();
  std::vector<TrialResult> out;
  out.reserve(thresholds.size());
  for (double xi : thresholds) out.push_back(engine.decode(xi));
  return out;
}

std::vector<ErrorEstimate> estimate_error_thresholds(const SimulationConfig& config,
                                                     const std::vector<double>& thresholds,
                                                     int n_trials, std::uint64_t base_seed,
                                                     int workers) {
  if (n_trials < 1) throw std::invalid_argument("estimate_error: need >= 1 trial");
  const size_t n_xi = thresholds.size();
  std::vector<std::atomic<long long>> errors(n_xi);
  for (auto& e : errors) e.store(0);

  int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, n_trials));

  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n_trials) return;
      const auto results = run_trial_thresholds(config, thresholds, base_seed + t);
      for (size_t i = 0; i < n_xi; ++i) {
        errors[i].fetch_add(results[i].end_to_end_errors);
      }
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<ErrorEstimate> out(n_xi);
  const long long bits = static_cast<long long>(n_trials) * config.source.length;
  for (size_t i = 0; i < n_xi; ++i) {
    out[i].trials = n_trials;
    out[i].bits = bits;
    out[i].errors = errors[i].load();
    out[i].rate = static_cast<double>(out[i].errors) / bits;
    out[i].standard_error = std::sqrt(out[i].rate * (1.0 - out[i].rate) / bits);
  }
  return out;
}

ErrorEstimate estimate_error(const SimulationConfig& config, int n_trials,
                             std::uint64_t base_seed, int workers) {
  return estimate_error_thresholds(config, {config.protocol.fixed_threshold}, n_trials,
                                   base_seed, workers)[0];
}

}  // namespace molhop
