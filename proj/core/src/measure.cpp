#include "vmv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vmv/assignment.hpp"

namespace vmv {

EmpiricalMeasure::EmpiricalMeasure(std::size_t dim, std::vector<double> points)
    : dim_(dim), points_(std::move(points)), mean_(dim, 0.0) {
  if (dim_ == 0) throw std::invalid_argument("EmpiricalMeasure: dimension must be positive");
  if (points_.empty() || points_.size() % dim_ != 0)
    throw std::invalid_argument("EmpiricalMeasure: need N >= 1 points of dimension " + std::to_string(dim_));
  for (double x : points_)
    if (!std::isfinite(x)) throw std::invalid_argument("EmpiricalMeasure: non-finite coordinate");
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim_; ++k) mean_[k] += points_[i * dim_ + k];
  for (double& m : mean_) m /= static_cast<double>(n);
}

EmpiricalMeasure EmpiricalMeasure::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("EmpiricalMeasure: no points");
  const std::size_t d = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("EmpiricalMeasure: rows of unequal dimension");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return EmpiricalMeasure(d, std::move(flat));
}

namespace {

void require_compatible(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  if (mu.dim() != nu.dim())
    throw std::invalid_argument("w2: dimensions differ (" + std::to_string(mu.dim()) + " vs " +
                                std::to_string(nu.dim()) + ")");
  if (mu.size() != nu.size())
    throw std::invalid_argument("w2: sizes differ (" + std::to_string(mu.size()) + " vs " +
                                std::to_string(nu.size()) + ")");
}

double sq_dist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

std::vector<double> sorted_by_index(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return out;
}

}  // namespace

double w2_sorted(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_compatible(mu, nu);
  if (mu.dim() != 1) throw std::invalid_argument("w2_sorted: requires d = 1");
  const auto a = sorted_by_index(mu.data());
  const auto b = sorted_by_index(nu.data());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

double w2_matching(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_compatible(mu, nu);
  const std::size_t n = mu.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = sq_dist(mu.point(i), nu.point(j));
  const auto col = min_cost_assignment(cost, n);
  // summing the matched costs in sorted order makes the value exactly symmetric
  std::vector<double> matched(n);
  for (std::size_t i = 0; i < n; ++i) matched[i] = cost[i * n + col[i]];
  std::sort(matched.begin(), matched.end());
  double s = 0.0;
  for (double c : matched) s += c;
  return std::sqrt(s / static_cast<double>(n));
}

double w2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_compatible(mu, nu);
  return mu.dim() == 1 ? w2_sorted(mu, nu) : w2_matching(mu, nu);
}

double w2_bruteforce(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_compatible(mu, nu);
  const std::size_t n = mu.size();
  if (n > 8) throw std::invalid_argument("w2_bruteforce: N must be at most 8");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += sq_dist(mu.point(i), nu.point(perm[i]));
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(n));
}

double w2_to_dirac0(const EmpiricalMeasure& mu) {
  double s = 0.0;
  for (double x : mu.data()) s += x * x;
  return std::sqrt(s / static_cast<double>(mu.size()));
}

double moment(const EmpiricalMeasure& mu, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("moment: q must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double r2 = 0.0;
    for (double x : mu.point(i)) r2 += x * x;
    s += q == 2.0 ? r2 : std::pow(r2, 0.5 * q);
  }
  return s / static_cast<double>(mu.size());
}

}  // namespace vmv
