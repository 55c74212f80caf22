#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vmv/brownian.hpp"
#include "vmv/measure.hpp"
#include "vmv/model.hpp"

namespace vmv {

/// t if t >= 2^-n, else 2^-n. Requires t in [0, 1].
double tilde_t(double t, int n);
/// [2^n s] / 2^n if s >= 2^-n, else 2^-(n+1). Requires s in (0, 1).
double tilde_s(double s, int n);

/// Particle states on the level-n grid t_k = k 2^-n, k = 0..2^n. Column k is
/// stored as the empirical measure of time t_k.
struct Ensemble {
  int level = 0;
  std::size_t particles = 0;
  std::size_t dim = 0;
  std::vector<EmpiricalMeasure> measures;

  std::size_t steps() const { return std::size_t{1} << level; }
  double time(std::size_t k) const;
  std::span<const double> state(std::size_t i, std::size_t k) const { return measures[k].point(i); }
};

struct SimOptions {
  /// Tabulate kernel values for separable models. Results are bit-identical
  /// with and without the table.
  bool use_kernel_table = true;
};

/// Explicit dyadic Euler scheme for the interacting particle system:
///   X_k = X_0 + sum_{j<k} b(t~_k, s~_j, X_j, mu_j) 2^-n
///             + sum_{j<k} sigma(t~_k, s~_j, X_j, mu_j) dW_j,
/// with s~_j = t_j for j >= 1 and 2^-(n+1) for j = 0. Requires horizon 1,
/// n <= store.n_max() and N <= store.particles(); particle i uses the store's
/// path i. Both sums run over the dyadic blocks of [0, t_k), each summed
/// pairwise, so state-independent noise terms add up exactly as the coarsened
/// increments do. Throws BlowUpError on a non-finite state.
Ensemble euler_simulate(const Model& model, int n, std::size_t particles, const BrownianStore& store,
                        const SimOptions& opts = {});

/// Successive approximations: sweep 1 is X_0 everywhere; sweep r+1 evaluates
/// the coefficient sums along sweep r with kernel arguments (t_k, t_j).
/// If `gaps` is given it receives sup_{i,k} |X^{r+1} - X^r| for r = 1..iterations-1.
Ensemble picard_simulate(const Model& model, int n, std::size_t particles, const BrownianStore& store,
                         int iterations, std::vector<double>* gaps = nullptr);

/// max over coarse grid times of (1/N) sum_i |X_fine - X_coarse|^p.
double coupled_error(const Ensemble& coarse, const Ensemble& fine, double p);
double coupled_error(const Model& model, std::size_t particles, int n_coarse, int n_fine,
                     const BrownianStore& store, double p);

/// sup_{i,k} |a - b| over states on the same grid.
double sup_distance(const Ensemble& a, const Ensemble& b);

}  // namespace vmv
