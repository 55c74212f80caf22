#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vmv {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
  std::size_t size() const { return nodes.size(); }
};

const GaussRule& gauss8();
const GaussRule& gauss10();

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // change of the extrapolated estimate at the last level
  int levels = 0;
  bool converged = false;
};

/// Integrates g over (0, length] on the geometric mesh
/// length * [2^-(l+1), 2^-l], l = 0, 1, ..., with a 10-point Gauss rule per
/// panel. The argument of g is the distance from the graded endpoint, so
/// callers can evaluate singular integrands without cancellation.
///
/// The unresolved piece (0, length * 2^-(l+1)) is accounted for by Wynn's
/// epsilon acceleration of the panel partial sums, which is exact for sums of
/// power laws. Iteration stops once the accelerated total moves by less than
/// `tol`; if the panel contributions never decay (a non-integrable endpoint)
/// the result is flagged unconverged.
QuadResult graded_integral(const std::function<double(double)>& g, double length,
                           double tol, int max_levels = 40, int min_levels = 0);

/// graded_integral for n integrands sharing evaluation points; g fills all n
/// values at once. Iteration continues until every component has converged.
std::vector<QuadResult> graded_integral_n(const std::function<void(double, std::span<double>)>& g,
                                         std::size_t n, double length, double tol,
                                         int max_levels = 40, int min_levels = 0);

/// Integral of f over [a, b], graded toward both endpoints. f receives
/// (x, distance to a, distance to b).
QuadResult graded_interval(const std::function<double(double, double, double)>& f,
                           double a, double b, double tol, int max_levels = 40);

/// Plain Gauss rule over [a, b].
double gauss_integral(const std::function<double(double)>& f, double a, double b,
                      const GaussRule& rule);

/// Lagrange basis polynomials through the nodes of `rule`, evaluated at x.
void lagrange_basis(const GaussRule& rule, double x, std::span<double> out);

}  // namespace vmv
