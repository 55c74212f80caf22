#include "vmv/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vmv {

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double floor) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  LogLogFit fit;
  fit.used.assign(x.size(), false);

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw std::invalid_argument("fit_loglog: abscissae must be positive");
    if (y[i] > floor && std::isfinite(y[i])) {
      fit.used[i] = true;
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) return fit;

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) return fit;

  fit.identifiable = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // perfect fits (including constant y) count as fully explained
  fit.r_squared = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
  return fit;
}

}  // namespace vmv
