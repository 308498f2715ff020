#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ontikit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic random source. All draws go through explicit 53-bit
// conversions of mt19937_64 output, so a seed fully determines every sample
// independently of standard-library distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform in [0, n)
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    int k = static_cast<int>(uniform01() * n);
    return k < n ? k : n - 1;
  }

  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  // Index drawn from nonnegative weights by inverse CDF.
  int sample_discrete(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("Rng::sample_discrete: empty weights");
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::invalid_argument("Rng::sample_discrete: zero total weight");
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // Uniform draw from the probability simplex (flat Dirichlet),
  // via normalized unit exponentials.
  std::vector<double> simplex(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::simplex: n must be positive");
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform01());
      total += x;
    }
    if (total <= 0.0) { w.assign(w.size(), 1.0); total = static_cast<double>(n); }
    for (auto& x : w) x /= total;
    return w;
  }

private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::mt19937_64 gen_;
};

}  // namespace ontikit
