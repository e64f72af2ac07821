#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pcut {

// mt19937_64 with fixed draw functions so streams are identical across
// platforms and standard-library versions (std::normal_distribution is not
// portable across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, no state caching so the stream is a pure function of the
  // number of calls.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t next_u64() { return gen_(); }

  // index in [0, n)
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) %
           (n == 0 ? 1 : n);
  }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 step; used to derive independent per-task seeds from a base
// seed and a task index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t idx) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (idx + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pcut
