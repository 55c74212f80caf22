#include "vmv/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace vmv {

std::vector<std::size_t> min_cost_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw std::invalid_argument("min_cost_assignment: cost matrix is not n x n");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based shortest augmenting path formulation; column 0 is a sentinel
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      const double* row = cost.data() + (i0 - 1) * n;
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col(n);
  for (std::size_t j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
  return col;
}

}  // namespace vmv
