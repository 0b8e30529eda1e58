#include "molhop/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molhop/rng.hpp"

namespace molhop {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::MultiMolecule: return "MM-MH";
    case Scheme::TwoMolecule: return "2M-MH";
    case Scheme::SingleMolecule: return "SM-MH";
  }
  return "?";
}

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::FD: return "FD";
    case Protocol::FD_A: return "FD-A";
    case Protocol::FD_A_SI: return "FD-A-SI";
    case Protocol::HD: return "HD";
    case Protocol::FD_A_BI_SI: return "FD-A-BI-SI";
    case Protocol::HD_A_BI: return "HD-A-BI";
  }
  return "?";
}

std::string to_string(Duplex d) { return d == Duplex::Full ? "FD" : "HD"; }

void validate(const TimingConfig& timing) {
  if (timing.bit_interval_s <= 0) throw std::invalid_argument("bit interval must be positive");
  if (timing.samples_per_interval < 1) throw std::invalid_argument("need at least one sample per interval");
  if (timing.sample_spacing_s <= 0) throw std::invalid_argument("sample spacing must be positive");
  if (timing.samples_per_interval * timing.sample_spacing_s > timing.bit_interval_s * (1 + 1e-9)) {
    throw std::invalid_argument("M*t0 exceeds the bit interval");
  }
}

void validate(const ProtocolConfig& config) {
  bool legal = false;
  switch (config.scheme) {
    case Scheme::MultiMolecule:
      legal = config.protocol == Protocol::FD;
      break;
    case Scheme::TwoMolecule:
      legal = config.protocol == Protocol::FD || config.protocol == Protocol::FD_A;
      break;
    case Scheme::SingleMolecule:
      legal = config.protocol == Protocol::FD || config.protocol == Protocol::FD_A_SI ||
              config.protocol == Protocol::HD || config.protocol == Protocol::FD_A_BI_SI ||
              config.protocol == Protocol::HD_A_BI;
      break;
  }
  if (!legal) {
    throw std::invalid_argument("protocol " + to_string(config.protocol) +
                                " is not defined for scheme " + to_string(config.scheme));
  }
  if (config.fixed_threshold < 1.0) throw std::invalid_argument("threshold must be >= 1");
  for (long long n : config.molecules_per_bit) {
    if (n < 0) throw std::invalid_argument("molecule budget must be non-negative");
  }
}

NetworkTopology build_topology(double x_d_m, int relay_count, double radius_m, Scheme scheme,
                               double diffusion_m2_s) {
  if (x_d_m <= 0) throw std::invalid_argument("destination distance must be positive");
  if (relay_count < 0) throw std::invalid_argument("relay count must be non-negative");
  if (radius_m <= 0) throw std::invalid_argument("node radius must be positive");
  if (diffusion_m2_s <= 0) throw std::invalid_argument("diffusion coefficient must be positive");
  if (scheme == Scheme::TwoMolecule && relay_count == 0) {
    // Q=0 degenerates to a single link; keep the single-type description.
  }

  NetworkTopology topo;
  topo.scheme = scheme;
  topo.x_d_m = x_d_m;
  topo.relay_count = relay_count;

  const int q = relay_count;
  const double volume = 4.0 / 3.0 * std::numbers::pi * radius_m * radius_m * radius_m;
  for (int k = 0; k <= q + 1; ++k) {
    NodeSpec node;
    node.index = k;
    node.position_m = {k * x_d_m / (q + 1), 0.0, 0.0};
    node.radius_m = radius_m;
    node.volume_m3 = volume;
    topo.nodes.push_back(node);
  }

  int n_types = 1;
  switch (scheme) {
    case Scheme::MultiMolecule: n_types = q + 1; break;
    case Scheme::TwoMolecule: n_types = q == 0 ? 1 : 2; break;
    case Scheme::SingleMolecule: n_types = 1; break;
  }
  for (int f = 1; f <= n_types; ++f) topo.molecules.push_back({f, diffusion_m2_s});

  topo.detect_type.assign(q + 2, 0);
  topo.emit_type.assign(q + 2, 0);
  for (int k = 0; k <= q + 1; ++k) {
    int detect = 0;
    int emit = 0;
    switch (scheme) {
      case Scheme::MultiMolecule:
        detect = k >= 1 ? k : 0;
        emit = k <= q ? k + 1 : 0;
        break;
      case Scheme::TwoMolecule:
        // even-index nodes emit A1 and detect A2; odd-index the reverse
        if (n_types == 1) {
          detect = k >= 1 ? 1 : 0;
          emit = k <= q ? 1 : 0;
        } else {
          emit = k <= q ? (k % 2 == 0 ? 1 : 2) : 0;
          detect = k >= 1 ? (k % 2 == 0 ? 2 : 1) : 0;
        }
        break;
      case Scheme::SingleMolecule:
        detect = k >= 1 ? 1 : 0;
        emit = k <= q ? 1 : 0;
        break;
    }
    topo.detect_type[k] = detect;
    topo.emit_type[k] = emit;
  }
  return topo;
}

BitSchedule make_schedule(Duplex mode, int length, int relay_count) {
  if (length < 1) throw std::invalid_argument("message length must be >= 1");
  if (relay_count < 0) throw std::invalid_argument("relay count must be non-negative");
  BitSchedule s;
  s.mode = mode;
  s.relay_count = relay_count;
  s.length = length;
  s.total_intervals = mode == Duplex::Full ? length + relay_count
                                           : 2 * length + relay_count - 1;
  return s;
}

int BitSchedule::transmit_bit(int node, int interval) const {
  if (node < 0 || node > relay_count) return 0;  // destination never transmits
  if (interval < 1 || interval > total_intervals) return 0;
  if (mode == Duplex::Full) {
    const int b = interval - node;
    return (b >= 1 && b <= length) ? b : 0;
  }
  const int d = interval - node;
  if (d < 1 || d % 2 == 0) return 0;
  const int b = (d + 1) / 2;
  return (b >= 1 && b <= length) ? b : 0;
}

int BitSchedule::detect_bit(int node, int interval) const {
  if (node < 1 || node > relay_count + 1) return 0;  // source never detects
  if (interval < 1 || interval > total_intervals) return 0;
  if (mode == Duplex::Full) {
    const int b = interval - node + 1;
    return (b >= 1 && b <= length) ? b : 0;
  }
  const int d = interval - node;
  if (d < 0 || d % 2 != 0) return 0;
  const int b = d / 2 + 1;
  return (b >= 1 && b <= length) ? b : 0;
}

int BitSchedule::transmit_interval(int node, int bit) const {
  return mode == Duplex::Full ? node + bit : node + 2 * bit - 1;
}

int BitSchedule::detect_interval(int node, int bit) const {
  return mode == Duplex::Full ? node + bit - 1 : node + 2 * bit - 2;
}

std::vector<int> pad_sequence(const std::vector<int>& bits, int node,
                              const BitSchedule& schedule) {
  if (node < 0 || node > schedule.relay_count) {
    throw std::invalid_argument("pad_sequence: node index out of transmitting range");
  }
  if (static_cast<int>(bits.size()) != schedule.length) {
    throw std::invalid_argument("pad_sequence: payload length mismatch");
  }
  std::vector<int> out(schedule.total_intervals, 0);
  for (int l = 1; l <= schedule.total_intervals; ++l) {
    const int b = schedule.transmit_bit(node, l);
    if (b > 0) out[l - 1] = bits[b - 1];
  }
  return out;
}

std::vector<int> generate_source_bits(const SourceModel& source) {
  if (source.p1 < 0 || source.p1 > 1) throw std::invalid_argument("P1 must lie in [0,1]");
  if (source.length < 1) throw std::invalid_argument("message length must be >= 1");
  Rng rng(source.seed, 0xB175u);
  std::vector<int> bits(source.length);
  for (auto& b : bits) b = rng.bernoulli(source.p1) ? 1 : 0;
  return bits;
}

std::vector<long long> split_budget(long long total, int relay_count) {
  if (total < 0) throw std::invalid_argument("budget must be non-negative");
  const int n = relay_count + 1;
  std::vector<long long> out(n, total / n);
  const long long rem = total % n;
  for (long long i = 0; i < rem; ++i) out[i] += 1;
  return out;
}

}  // namespace molhop
