#include "vmv/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace vmv {
namespace {

template <unsigned N>
struct MappedRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};
  GaussRule rule;

  MappedRule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    // boost stores the non-negative half of the symmetric rule on [-1, 1]
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
      pts.emplace_back(x[i], w[i]);
      if (x[i] != 0.0) pts.emplace_back(-x[i], w[i]);
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < N; ++i) {
      nodes[i] = 0.5 * (pts[i].first + 1.0);
      weights[i] = 0.5 * pts[i].second;
    }
    rule = GaussRule{std::span<const double>(nodes), std::span<const double>(weights)};
  }
};

}  // namespace

const GaussRule& gauss8() {
  static const MappedRule<8> r;
  return r.rule;
}

const GaussRule& gauss10() {
  static const MappedRule<10> r;
  return r.rule;
}

double gauss_integral(const std::function<double(double)>& f, double a, double b,
                      const GaussRule& rule) {
  const double h = b - a;
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) acc += rule.weights[q] * f(a + h * rule.nodes[q]);
  return acc * h;
}

namespace {

// Diagonal element of Wynn's epsilon table built from partial sums, using at
// most `max_even` columns. Partial sums of a geometric mixture with k
// components are summed exactly by column 2k.
double wynn_estimate(const std::vector<double>& sums, int max_even) {
  const int n = static_cast<int>(sums.size());
  const int cols = std::min(max_even, (n - 1) / 2 * 2);
  if (cols < 2) return sums.back();
  const int start = n - 1 - cols;
  std::vector<double> prev(cols + 2, 0.0);  // e_{k-1}
  std::vector<double> cur(sums.begin() + start, sums.end());  // e_k
  for (int k = 0; k < cols; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) return cur[i + 1];
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur.back();
}

}  // namespace

std::vector<QuadResult> graded_integral_n(const std::function<void(double, std::span<double>)>& g,
                                         std::size_t n, double length, double tol, int max_levels,
                                         int min_levels) {
  const GaussRule& rule = gauss10();
  std::vector<QuadResult> out(n);
  if (!(length > 0.0)) {
    for (auto& r : out) r.converged = true;
    return out;
  }

  struct Track {
    std::vector<double> sums;
    double sum = 0.0, prev_c = 0.0, prev_prev_c = 0.0;
    double prev_est = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<Track> tr(n);
  std::vector<double> vals(n), c(n);
  for (int l = 0; l < max_levels; ++l) {
    const double hi = std::ldexp(length, -l);
    const double lo = 0.5 * hi;
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      g(lo + lo * rule.nodes[q], vals);
      for (std::size_t k = 0; k < n; ++k) c[k] += rule.weights[q] * vals[k];
    }
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      Track& t = tr[k];
      QuadResult& o = out[k];
      const double ck = c[k] * lo;
      o.levels = l + 1;
      if (!std::isfinite(ck)) {
        o.value = ck;
        o.error = std::numeric_limits<double>::infinity();
        o.converged = false;
        for (auto& r : out) r.converged = false;
        return out;
      }
      t.sum += ck;
      t.sums.push_back(t.sum);
      // the unresolved remainder can only be summed if the panels are shrinking
      const bool decaying = l >= 2 && std::abs(ck) <= std::abs(t.prev_c) * (1.0 - 1e-9) &&
                            std::abs(t.prev_c) <= std::abs(t.prev_prev_c) * (1.0 - 1e-9);
      const bool vanished = l >= 2 && ck == 0.0 && t.prev_c == 0.0;
      double est = std::numeric_limits<double>::quiet_NaN();
      if (vanished) {
        est = t.sum;
      } else if (decaying) {
        est = wynn_estimate(t.sums, 6);
      }
      o.value = std::isfinite(est) ? est : t.sum;
      if (std::isfinite(est) && std::isfinite(t.prev_est)) {
        o.error = std::abs(est - t.prev_est);
        o.converged = l >= min_levels && o.error <= tol;
      } else {
        o.error = std::numeric_limits<double>::infinity();
        o.converged = false;
      }
      all_done = all_done && o.converged;
      t.prev_est = est;
      t.prev_prev_c = t.prev_c;
      t.prev_c = ck;
    }
    if (all_done) return out;
  }
  return out;
}

QuadResult graded_integral(const std::function<double(double)>& g, double length, double tol,
                           int max_levels, int min_levels) {
  return graded_integral_n([&](double d, std::span<double> out) { out[0] = g(d); }, 1, length,
                           tol, max_levels, min_levels)[0];
}

QuadResult graded_interval(const std::function<double(double, double, double)>& f, double a,
                           double b, double tol, int max_levels) {
  const double half = 0.5 * (b - a);
  const double mid = a + half;
  const QuadResult left = graded_integral(
      [&](double d) { return f(a + d, d, (b - a) - d); }, half, 0.5 * tol, max_levels);
  const QuadResult right = graded_integral(
      [&](double d) { return f(b - d, (b - a) - d, d); }, b - mid, 0.5 * tol, max_levels);
  return QuadResult{left.value + right.value, left.error + right.error,
                    std::max(left.levels, right.levels), left.converged && right.converged};
}

void lagrange_basis(const GaussRule& rule, double x, std::span<double> out) {
  const std::size_t n = rule.size();
  for (std::size_t g = 0; g < n; ++g) {
    double v = 1.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == g) continue;
      v *= (x - rule.nodes[q]) / (rule.nodes[g] - rule.nodes[q]);
    }
    out[g] = v;
  }
}

}  // namespace vmv
