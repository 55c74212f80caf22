#pragma once

#include <span>
#include <vector>

namespace vmv {

/// Ordinary least-squares fit of log(y) against log(x).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural-log intercept
  double r_squared = 0.0;
  std::vector<bool> used;  // which input pairs entered the fit
  bool identifiable = false;
};

/// Pairs with y <= floor are dropped; the fit needs two distinct x values among
/// the survivors, otherwise `identifiable` is false and slope/intercept are 0.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double floor = 0.0);

}  // namespace vmv
