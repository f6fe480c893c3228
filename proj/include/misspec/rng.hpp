#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace misspec::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  Stateless:
// block i of stream (seed, replication, role) is a pure function of its
// counter, which is what makes replications bit-identical under any thread
// scheduling and paths reconstructible from their seed triple.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Inverse standard normal CDF, Acklam's rational approximation
// (relative error < 1.15e-9 across the full open interval).
inline double normal_quantile(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Stream roles keep draws for unrelated purposes on disjoint counters.
enum class Role : std::uint32_t {
  kPathNoise = 1,
  kLatticePos = 2,
  kLatticeNeg = 3,
  kReference = 4,
  kProbe = 5,
};

inline std::uint32_t role_word(Role role, std::uint32_t subchannel = 0) {
  return static_cast<std::uint32_t>(role) | (subchannel << 8);
}

// One logical random stream: (seed, replication, role) keys the counter space,
// the draw index walks it.  Random access by index, no mutable state.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint32_t replication, std::uint32_t role)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        replication_(replication),
        role_(role) {}

  // i-th uniform in (0, 1); two per Philox block.
  double uniform(std::uint64_t i) const {
    const std::uint64_t block_index = i >> 1;
    const auto words = Philox4x32::block(
        {std::uint32_t(block_index), std::uint32_t(block_index >> 32), replication_, role_}, key_);
    const std::uint64_t bits = (i & 1) == 0
                                   ? (std::uint64_t(words[1]) << 32) | words[0]
                                   : (std::uint64_t(words[3]) << 32) | words[2];
    return double(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  double normal(std::uint64_t i) const { return normal_quantile(uniform(i)); }

private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t replication_;
  std::uint32_t role_;
};

}  // namespace misspec::rng
