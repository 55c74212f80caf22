#include "vmv/brownian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vmv/parallel.hpp"
#include "vmv/rng.hpp"

namespace vmv {

BrownianStore::BrownianStore(std::uint64_t master_seed, std::size_t particles, std::size_t dim, int n_max)
    : seed_(master_seed) {
  if (particles == 0 || dim == 0) throw std::invalid_argument("BrownianStore: need N >= 1 and m >= 1");
  if (n_max < 0 || n_max > 24) throw std::invalid_argument("BrownianStore: n_max must lie in [0, 24]");
  finest_.level = n_max;
  finest_.particles = particles;
  finest_.dim = dim;
  const std::size_t steps = finest_.steps();
  finest_.data.resize(particles * steps * dim);
  const double scale = std::sqrt(std::ldexp(1.0, -n_max));
  const std::uint64_t key = derive_seed(master_seed, stream::brownian);
  parallel_for(particles, [&](std::size_t i) {
    double* out = finest_.data.data() + i * steps * dim;
    for (std::size_t j = 0; j < steps; ++j)
      for (std::size_t c = 0; c < dim; ++c) out[j * dim + c] = scale * standard_normal(key, i, j, c);
  });
}

Increments BrownianStore::coarsen(int n) const {
  if (n < 0 || n > n_max())
    throw std::invalid_argument("coarsen: level " + std::to_string(n) + " outside [0, " +
                                std::to_string(n_max()) + "]");
  Increments cur = finest_;
  while (cur.level > n) {
    Increments next;
    next.level = cur.level - 1;
    next.particles = cur.particles;
    next.dim = cur.dim;
    const std::size_t steps = next.steps();
    next.data.resize(cur.particles * steps * cur.dim);
    for (std::size_t i = 0; i < cur.particles; ++i)
      for (std::size_t j = 0; j < steps; ++j)
        for (std::size_t c = 0; c < cur.dim; ++c)
          next.data[(i * steps + j) * cur.dim + c] = cur.at(i, 2 * j)[c] + cur.at(i, 2 * j + 1)[c];
    cur = std::move(next);
  }
  return cur;
}

BrownianStore make_brownian(std::uint64_t master_seed, std::size_t particles, std::size_t dim, int n_max) {
  return BrownianStore(master_seed, particles, dim, n_max);
}

std::vector<double> brownian_path(const Increments& inc, std::size_t i, std::size_t c) {
  const std::size_t steps = inc.steps();
  std::vector<double> w(steps + 1, 0.0);
  // W(t_k) = sum over the binary decomposition of k of the matching
  // dyadic block sums, each formed by the same pairwise tree
  std::vector<std::vector<double>> tree{std::vector<double>(steps)};
  for (std::size_t j = 0; j < steps; ++j) tree[0][j] = inc.at(i, j)[c];
  while (tree.back().size() > 1) {
    const auto& lo = tree.back();
    std::vector<double> up(lo.size() / 2);
    for (std::size_t j = 0; j < up.size(); ++j) up[j] = lo[2 * j] + lo[2 * j + 1];
    tree.push_back(std::move(up));
  }
  for (std::size_t k = 1; k <= steps; ++k) {
    double acc = 0.0;
    std::size_t pos = 0;
    for (std::size_t lvl = tree.size(); lvl-- > 0;) {
      const std::size_t width = std::size_t{1} << lvl;
      if (k - pos >= width) {
        acc += tree[lvl][pos / width];
        pos += width;
      }
    }
    w[k] = acc;
  }
  return w;
}

}  // namespace vmv
