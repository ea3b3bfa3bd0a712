#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace jackmc {

// Deterministic, seedable generator used by every sampler in the library.
// xoshiro256++ core with SplitMix64 stream derivation: a (seed, stream) pair
// fully determines the output sequence on every platform, which is what makes
// same-seed reruns byte-identical.  The distribution methods below are fixed
// algorithms (Box-Muller, Marsaglia-Tsang) rather than std::<random>
// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed;
    (void)splitmix64(sm);  // decorrelate from the raw user seed
    sm += stream * 0x9e3779b97f4a7c15ULL;
    for (auto& word : s_) word = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard real normal N(0, 1), Box-Muller with one cached variate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * kPi * uniform();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Standard complex normal: E z = 0, E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  // Gamma(shape, scale) by Marsaglia-Tsang squeeze; shape < 1 via the
  // u^(1/shape) boost.
  double gamma(double shape, double scale = 1.0) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("Rng::gamma: shape and scale must be > 0");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
        return d * v * scale;
    }
  }

  // chi^2_nu and chi_nu (nu need not be an integer).
  double chi_squared(double nu) { return gamma(0.5 * nu, 2.0); }
  double chi(double nu) { return std::sqrt(chi_squared(nu)); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  static constexpr double kInvSqrt2 = 0.70710678118654752440;

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace jackmc
