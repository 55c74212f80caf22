#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "vmv/grid.hpp"
#include "vmv/kernel.hpp"

namespace vmv {

/// A two-time function on a grid: an optional evaluable kernel plus a
/// tabulated part. Node values are kernel(t_i, t_j) + values(i, j).
///
/// Between nodes the tabulated part is linear, except on the cell touching
/// the diagonal, where it follows a power law c * lag^a fitted to the two
/// nearest nodes. This keeps integrable diagonal singularities such as
/// lag^(n(1-alpha)-1) exact for the iterated power kernel.
struct KernelTable {
  TriGrid grid;
  std::optional<Kernel> kernel;
  TriTable values;

  static KernelTable from_kernel(const Kernel& k, const TriGrid& grid);
  static KernelTable from_values(const TriGrid& grid, TriTable values);

  double at(std::size_t i, std::size_t j) const;
  /// All node values as a plain table.
  TriTable tabulate() const;
};

/// (a * b)(t_i, s_j) = int_{s_j}^{t_i} a(t_i, u) b(u, s_j) du by product
/// integration: evaluable parts are sampled at Gauss points strictly inside
/// each cell, and the cells adjacent to a singular endpoint are integrated
/// against exact moments, so no kernel is ever evaluated on the diagonal.
/// The result is purely tabulated.
KernelTable convolve(const KernelTable& a, const KernelTable& b);

struct ResolventTable {
  TriGrid grid;
  Kernel kernel;
  TriTable values;                  // R(t_i, s_j), j < i
  std::size_t terms_used = 0;
  double tail_norm = 0.0;
  std::vector<double> term_norms;   // sup_i int_0^{t_i} R_n(t_i, s) ds
  bool converged = false;           // false when max_terms ran out while still decaying
};

/// Sums R = R_1 + R_2 + ..., R_1 = K, R_{n+1} = K * R_n. Stops once a term norm
/// drops below tol after three consecutive decreases.
///
/// Throws DivergenceError if the one-cell integral of K already reaches 1
/// (smallness check) or if the term norms are not decaying after max_terms.
ResolventTable resolvent_sum(const Kernel& k, const TriGrid& grid, double tol = 1e-12,
                             std::size_t max_terms = 200);

/// R_1, ..., R_n tabulated on the grid.
std::vector<TriTable> resolvent_terms(const Kernel& k, const TriGrid& grid, std::size_t n);

struct IdentityResiduals {
  double left = 0.0;   // max |R - K - K*R|
  double right = 0.0;  // max |R - K - R*K|
};

IdentityResiduals verify_resolvent_identity(const Kernel& k, const ResolventTable& r);

/// t_i -> g(t_i) + int_0^{t_i} R(t_i, s) g(s) ds with g linear between nodes.
/// Returns one value per grid node. Throws std::invalid_argument for negative g.
std::vector<double> gronwall_bound(const ResolventTable& r, const std::function<double(double)>& g);

}  // namespace vmv
