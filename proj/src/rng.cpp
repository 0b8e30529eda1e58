#include "molhop/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace molhop {
namespace {

// Marsaglia-Tsang ziggurat tables for the standard normal (128 layers,
// 32-bit variant). Built once at startup.
struct ZigguratTables {
  std::uint32_t kn[128];
  float wn[128];
  float fn[128];

  ZigguratTables() {
    const double m1 = 2147483648.0;
    double dn = 3.442619855899;
    double tn = dn;
    const double vn = 9.91256303526217e-3;

    const double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = static_cast<float>(q / m1);
    wn[127] = static_cast<float>(dn / m1);
    fn[0] = 1.0f;
    fn[127] = static_cast<float>(std::exp(-0.5 * dn * dn));
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = static_cast<float>(std::exp(-0.5 * dn * dn));
      wn[i] = static_cast<float>(dn / m1);
    }
  }
};

const ZigguratTables zig;

constexpr double kTail = 3.442619855899;
constexpr double kInvU32 = 2.3283064365386963e-10;  // 2^-32

}  // namespace

float Rng::normal_f() {
  for (;;) {
    const std::uint64_t u = next_u64();
    const std::int32_t hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(u));
    const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
    if (static_cast<std::uint32_t>(std::abs(hz)) < zig.kn[iz]) {
      return static_cast<float>(hz) * zig.wn[iz];
    }
    if (iz == 0) {
      // tail beyond +-kTail
      double x;
      double y;
      do {
        x = -std::log((static_cast<double>(u >> 32) + 0.5) * kInvU32) / kTail;
        y = -std::log((static_cast<double>(next_u64() >> 32) + 0.5) * kInvU32);
      } while (y + y < x * x);
      return hz > 0 ? static_cast<float>(kTail + x) : static_cast<float>(-kTail - x);
    }
    const double x = static_cast<double>(hz) * zig.wn[iz];
    const double u2 = (static_cast<double>(next_u64() >> 32) + 0.5) * kInvU32;
    if (zig.fn[iz] + u2 * (zig.fn[iz - 1] - zig.fn[iz]) < std::exp(-0.5 * x * x)) {
      return static_cast<float>(x);
    }
  }
}

}  // namespace molhop
