#include <doctest.h>

#include <cmath>

#include "molhop/rng.hpp"

using namespace molhop;

TEST_SUITE("rng") {

TEST_CASE("streams are deterministic and distinct") {
  Rng a(42, 7);
  Rng b(42, 7);
  Rng c(42, 8);
  bool same = true;
  bool distinct = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    if (va != b.next_u64()) same = false;
    if (va != c.next_u64()) distinct = true;
  }
  CHECK(same);
  CHECK(distinct);
}

TEST_CASE("uniform is in [0,1) with balanced mean") {
  Rng rng(1, 0);
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // mean 1/2, sd of mean = 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal moments") {
  Rng rng(3, 1);
  const int n = 2000000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  int tail3 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
    if (std::abs(x) > 3.0) ++tail3;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  const double skew = s3 / n;
  const double kurt = s4 / n;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(skew) < 5.0 * std::sqrt(15.0 / n));
  CHECK(std::abs(kurt - 3.0) < 5.0 * std::sqrt(96.0 / n));
  // Pr(|X|>3) = 0.0026998
  const double p3 = 0.0026998;
  CHECK(std::abs(static_cast<double>(tail3) / n - p3) <
        5.0 * std::sqrt(p3 * (1 - p3) / n));
}

TEST_CASE("normal extreme tail reachable") {
  Rng rng(9, 2);
  float max_abs = 0;
  for (int i = 0; i < 4000000; ++i) {
    max_abs = std::max(max_abs, std::abs(rng.normal_f()));
  }
  CHECK(max_abs > 3.8f);  // tail layer must fire
  CHECK(max_abs < 7.0f);
}

}  // TEST_SUITE
