#include "vmv/model.hpp"

#include <cmath>
#include <stdexcept>

#include "vmv/rng.hpp"

namespace vmv {

InitialCondition InitialCondition::deterministic(std::vector<double> xi) {
  if (xi.empty()) throw std::invalid_argument("initial condition: empty value");
  for (double x : xi)
    if (!std::isfinite(x)) throw std::invalid_argument("initial condition: non-finite value");
  return InitialCondition(Kind::deterministic, std::move(xi), 0.0);
}

InitialCondition InitialCondition::gaussian(std::vector<double> mean, double stddev) {
  if (mean.empty()) throw std::invalid_argument("initial condition: empty mean");
  for (double x : mean)
    if (!std::isfinite(x)) throw std::invalid_argument("initial condition: non-finite mean");
  if (!(stddev >= 0.0) || !std::isfinite(stddev))
    throw std::invalid_argument("initial condition: stddev must be finite and >= 0");
  return InitialCondition(Kind::gaussian, std::move(mean), stddev);
}

void InitialCondition::sample(std::uint64_t seed, std::size_t i, std::span<double> out) const {
  if (out.size() != value_.size()) throw std::invalid_argument("initial condition: dimension mismatch");
  if (kind_ == Kind::deterministic) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = value_[c];
    return;
  }
  const std::uint64_t key = derive_seed(seed, stream::initial);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = value_[c] + stddev_ * standard_normal(key, i, 0, c);
}

Model separable_model(const Kernel& kb, const Kernel& ks, MeanFieldFn f, MeanFieldFn g,
                      std::size_t d, std::size_t m, InitialCondition x0, double lipschitz_f,
                      double growth_f) {
  if (d == 0 || m == 0) throw std::invalid_argument("separable_model: d and m must be positive");
  if (x0.dim() != d) throw std::invalid_argument("separable_model: initial condition has wrong dimension");
  if (!f || !g) throw std::invalid_argument("separable_model: f and g are required");
  Model out{"separable", d, m, {}, {}, {}, x0, kb.meta().horizon, SeparableParts{kb, ks, f, g}, std::nullopt};
  out.drift = [kb, f](double t, double s, std::span<const double> x, const EmpiricalMeasure& mu,
                      std::span<double> o) {
    f(x, mu.mean(), o);
    const double k = kb(t, s);
    for (double& v : o) v = k * v;
  };
  out.diffusion = [ks, g](double t, double s, std::span<const double> x, const EmpiricalMeasure& mu,
                          std::span<double> o) {
    g(x, mu.mean(), o);
    const double k = ks(t, s);
    for (double& v : o) v = k * v;
  };
  // H2/H3 with K1 = K3 = L kb and K2 = K4 = L^2 ks^2
  auto scaled = [](const Kernel& k, double c, bool square, const char* name) {
    KernelMeta meta = k.meta();
    return Kernel(name,
                  [k, c, square](double t, double s, double lag) {
                    const double v = k.at(t, s, lag);
                    return square ? c * c * v * v : c * v;
                  },
                  meta);
  };
  out.regularity.kernels = {scaled(kb, lipschitz_f, false, "K1"), scaled(ks, lipschitz_f, true, "K2"),
                            scaled(kb, growth_f, false, "K3"), scaled(ks, growth_f, true, "K4")};
  out.regularity.lipschitz_f = lipschitz_f;
  out.regularity.growth_f = growth_f;
  const auto& gb = kb.meta().declared_gamma;
  const auto& gs = ks.meta().declared_gamma;
  if (gb && gs) out.regularity.gamma = std::min(*gb, *gs);
  out.regularity.delta = out.regularity.gamma;
  return out;
}

Model mean_field_ou(double a, double sigma0, InitialCondition x0) {
  if (!std::isfinite(a) || !std::isfinite(sigma0))
    throw std::invalid_argument("mean_field_ou: parameters must be finite");
  if (x0.dim() != 1) throw std::invalid_argument("mean_field_ou: initial condition must be scalar");
  const Kernel one = constant_kernel(1.0);
  Model out = separable_model(
      one, one,
      [a](std::span<const double> x, std::span<const double> mean, std::span<double> o) {
        o[0] = a * (mean[0] - x[0]);
      },
      [sigma0](std::span<const double>, std::span<const double>, std::span<double> o) { o[0] = sigma0; },
      1, 1, std::move(x0), std::abs(a), std::max(std::abs(a), std::abs(sigma0)));
  out.name = "mean_field_ou";
  out.ou = OuParams{a, sigma0};
  return out;
}

OuLaw ou_oracle(double a, double sigma0, double m0, double v0, double t) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("ou_oracle: v0 must be >= 0");
  const double s2 = sigma0 * sigma0;
  if (a == 0.0) return {m0, v0 + s2 * t};
  const double stat = s2 / (2.0 * a);
  return {m0, stat + (v0 - stat) * std::exp(-2.0 * a * t)};
}

}  // namespace vmv
