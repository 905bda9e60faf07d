#ifndef PROJUNIQ_RANDOM_HPP
#define PROJUNIQ_RANDOM_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "projuniq/exact/scalar.hpp"

namespace projuniq {

/// Seeded generator with platform-independent draws. std::uniform_*_distribution
/// is implementation-defined, so ranges are reduced by rejection here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    return lo + static_cast<long>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// p/q with p ∈ [−max_num, max_num], q ∈ [1, max_den].
  Rational uniform_rational(long max_num, long max_den) {
    Rational r(uniform_int(-max_num, max_num), uniform_int(1, max_den));
    r.canonicalize();
    return r;
  }

  /// Rational in [0, 1) on a 2^bits grid.
  Rational unit(unsigned bits = 30) {
    Rational r(Integer(static_cast<unsigned long>(uniform_index(1UL << bits))), Integer(1));
    r /= Rational(Integer(1) << bits);
    return r;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(i)]);
  }

  /// Independent child stream (splitmix64 of the next draw).
  Rng split() {
    std::uint64_t z = eng_() + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace projuniq

#endif  // PROJUNIQ_RANDOM_HPP
