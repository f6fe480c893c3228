#include <doctest.h>

#include <cmath>

#include "misspec/rng.hpp"
#include "misspec/stats.hpp"

using namespace misspec;

TEST_CASE("philox4x32-10 reference vectors") {
  // Known-answer vectors from the Random123 distribution
  auto out = rng::Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = rng::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = rng::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are deterministic and land in (0,1)") {
  const rng::Stream a(123456789, 7, 3);
  const rng::Stream b(123456789, 7, 3);
  const rng::Stream c(123456789, 8, 3);
  bool all_equal = true, any_diff = false;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = a.uniform(i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    all_equal = all_equal && (u == b.uniform(i));
    any_diff = any_diff || (u != c.uniform(i));
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("normal quantile matches the normal cdf") {
  CHECK(rng::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double p : {1e-6, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0 - 1e-6}) {
    const double x = rng::normal_quantile(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-7));
  }
}

TEST_CASE("normal draws have the right first two moments") {
  const rng::Stream s(2024, 0, 1);
  const std::size_t n = 200000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = s.normal(i);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / double(n);
  const double var = sq / double(n) - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
