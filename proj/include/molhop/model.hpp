#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace molhop {

// Relaying scheme: one molecule type per hop, two alternating types, or a
// single shared type for the whole network.
enum class Scheme { MultiMolecule, TwoMolecule, SingleMolecule };

enum class Duplex { Full, Half };

// Relaying protocols (scheme + duplex mode + threshold adaptation).
enum class Protocol { FD, FD_A, FD_A_SI, HD, FD_A_BI_SI, HD_A_BI };

std::string to_string(Scheme s);
std::string to_string(Protocol p);
std::string to_string(Duplex d);

struct Vec3 {
  double x{0}, y{0}, z{0};
};

// Node kappa of the chain: 0 = source, 1..Q = relays, Q+1 = destination.
// Nodes sit on the x axis; receivers are passive spheres.
struct NodeSpec {
  int index{0};
  Vec3 position_m{};
  double radius_m{0};
  double volume_m3{0};
};

struct MoleculeSpec {
  int type_id{0};  // 1-based, A_1 .. A_F
  double diffusion_m2_s{0};
};

struct NetworkTopology {
  Scheme scheme{Scheme::MultiMolecule};
  double x_d_m{0};
  int relay_count{0};  // Q
  std::vector<NodeSpec> nodes;          // size Q+2
  std::vector<MoleculeSpec> molecules;  // size = number of molecule types
  std::vector<int> detect_type;         // per node; 0 = detects nothing (source)
  std::vector<int> emit_type;           // per node; 0 = emits nothing (destination)

  int node_count() const { return static_cast<int>(nodes.size()); }
  int destination() const { return relay_count + 1; }
  const MoleculeSpec& molecule(int type_id) const { return molecules[type_id - 1]; }
  double spacing_m() const { return x_d_m / (relay_count + 1); }
};

// Bit interval T, M samples per interval spaced t0 apart. Sample m of
// interval j is taken at global time (j-1)T + m*t0.
struct TimingConfig {
  double bit_interval_s{0};   // T
  int samples_per_interval{0};  // M
  double sample_spacing_s{0};   // t0

  double sample_time_s(int m) const { return m * sample_spacing_s; }
  double global_sample_time_s(int j, int m) const {
    return (j - 1) * bit_interval_s + sample_time_s(m);
  }
};

void validate(const TimingConfig& timing);

struct SourceModel {
  double p1{0.5};
  int length{50};  // L
  std::uint64_t seed{0};

  double p0() const { return 1.0 - p1; }
};

// Transmit/detect slot structure of the chain. For full duplex, node kappa
// transmits bit b in interval kappa+b and detects bit b in interval
// kappa+b-1. For half duplex the slots are spread two intervals apart and
// adjacent nodes alternate parity.
struct BitSchedule {
  Duplex mode{Duplex::Full};
  int relay_count{0};  // Q
  int length{0};       // L
  int total_intervals{0};  // K

  // bit index (1..L) carried by node's transmission in `interval`, 0 if silent
  int transmit_bit(int node, int interval) const;
  // bit index detected by node in `interval`, 0 if not a detect slot
  int detect_bit(int node, int interval) const;
  int transmit_interval(int node, int bit) const;
  int detect_interval(int node, int bit) const;
  bool detects(int node, int interval) const { return detect_bit(node, interval) > 0; }
};

struct ProtocolConfig {
  Scheme scheme{Scheme::MultiMolecule};
  Protocol protocol{Protocol::FD};
  double fixed_threshold{1.0};  // xi
  // molecules released per bit "1", per transmitting node 0..Q
  std::vector<long long> molecules_per_bit;

  Duplex duplex() const {
    return (protocol == Protocol::HD || protocol == Protocol::HD_A_BI) ? Duplex::Half
                                                                       : Duplex::Full;
  }
};

// checks protocol/scheme legality and basic ranges
void validate(const ProtocolConfig& config);

NetworkTopology build_topology(double x_d_m, int relay_count, double radius_m, Scheme scheme,
                               double diffusion_m2_s);

BitSchedule make_schedule(Duplex mode, int length, int relay_count);

// Zero-pads an L-bit payload into node kappa's length-K transmit sequence.
std::vector<int> pad_sequence(const std::vector<int>& bits, int node,
                              const BitSchedule& schedule);

std::vector<int> generate_source_bits(const SourceModel& source);

// Equal split of the baseline budget over the Q+1 transmitting nodes;
// remainders go to the lowest-index nodes so the total is preserved exactly.
std::vector<long long> split_budget(long long total, int relay_count);

}  // namespace molhop
