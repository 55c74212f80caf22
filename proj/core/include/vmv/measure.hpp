#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vmv {

/// Equal-weight empirical measure (1/N) sum_i delta_{x_i} on R^d.
/// Points are stored row-major, N x d.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::size_t dim, std::vector<double> points);
  static EmpiricalMeasure from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return points_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dim_, dim_}; }
  std::span<const double> data() const { return points_; }
  /// Barycentre, computed once at construction.
  std::span<const double> mean() const { return mean_; }

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> mean_;
};

/// Exact W2 between equal-size measures: order statistics for d = 1,
/// optimal assignment otherwise.
double w2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// W2 through the assignment solver regardless of dimension.
double w2_matching(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// W2 by pairing sorted samples; d = 1 only.
double w2_sorted(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// Minimum over all N! permutations; N <= 8.
double w2_bruteforce(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// W2(mu, delta_0) = sqrt((1/N) sum |x_i|^2).
double w2_to_dirac0(const EmpiricalMeasure& mu);

/// (1/N) sum |x_i|^q, q >= 1.
double moment(const EmpiricalMeasure& mu, double q);

}  // namespace vmv
