#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vmv {

/// Brownian increments of one level: N particles, 2^level steps, m components.
struct Increments {
  int level = 0;
  std::size_t particles = 0;
  std::size_t dim = 0;
  std::vector<double> data;  // [i][j][c]

  std::size_t steps() const { return std::size_t{1} << level; }
  std::span<const double> at(std::size_t i, std::size_t j) const {
    return {data.data() + (i * steps() + j) * dim, dim};
  }
};

/// Increments at the finest level n_max, coarsenable to any level <= n_max.
/// Coarse increments are pairwise sums of the next finer level, so each one
/// equals the sum of its 2^(n_max - n) finest increments and the totals agree
/// bit-for-bit across levels.
class BrownianStore {
 public:
  BrownianStore(std::uint64_t master_seed, std::size_t particles, std::size_t dim, int n_max);

  std::uint64_t master_seed() const { return seed_; }
  std::size_t particles() const { return finest_.particles; }
  std::size_t dim() const { return finest_.dim; }
  int n_max() const { return finest_.level; }
  const Increments& finest() const { return finest_; }

  /// Increments at level n; throws std::invalid_argument for n > n_max.
  Increments coarsen(int n) const;

 private:
  std::uint64_t seed_;
  Increments finest_;
};

BrownianStore make_brownian(std::uint64_t master_seed, std::size_t particles, std::size_t dim, int n_max);

/// W at the end of every level-n step for particle i, component c, summed
/// pairwise (agrees exactly with the same sum taken at any finer level).
std::vector<double> brownian_path(const Increments& inc, std::size_t i, std::size_t c);

}  // namespace vmv
