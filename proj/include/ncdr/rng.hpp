#ifndef NCDR_RNG_HPP_
#define NCDR_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ncdr {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Folds a list of integers into one seed; used to derive independent
/// streams, e.g. derive_seed({base, m, n, trial}).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Seeded generator whose output is identical on every platform:
/// std::mt19937_64 (fully specified by the standard) seeded with mix64(seed),
/// uniforms from the top 53 bits and normals by Box-Muller. The standard
/// library distributions are avoided since their algorithms are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Uniform integer in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// k distinct indices from [0, n), via a partial Fisher-Yates shuffle.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncdr

#endif  // NCDR_RNG_HPP_
