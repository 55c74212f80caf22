#include "vmvcli/builders.hpp"

#include <algorithm>
#include <cmath>

namespace vmvcli {

vmv::Kernel kernel_from(Config& cfg, const std::string& section) {
  const std::string kind = cfg.text(section, "kind", std::nullopt, {"constant", "power", "fbm", "exp_conv"});
  if (kind == "constant") return vmv::constant_kernel(cfg.number(section, "c", 1.0));
  if (kind == "power") return vmv::power_kernel(cfg.number(section, "alpha"));
  if (kind == "fbm") {
    const double H = cfg.number(section, "H");
    return vmv::fbm_kernel(H, cfg.number(section, "quad_tol", 1e-8));
  }
  const double lambda = cfg.number(section, "lambda");
  return vmv::exp_conv_kernel(lambda, cfg.number(section, "rho"));
}

vmv::InitialCondition x0_from(Config& cfg) {
  const std::string kind = cfg.text("x0", "kind", "deterministic", {"deterministic", "gaussian"});
  if (kind == "deterministic") return vmv::InitialCondition::deterministic({cfg.number("x0", "value", 0.0)});
  const double mean = cfg.number("x0", "mean", 0.0);
  return vmv::InitialCondition::gaussian({mean}, cfg.number("x0", "stddev", 1.0));
}

vmv::Model model_from(Config& cfg) {
  const std::string kind = cfg.text("model", "kind", std::nullopt, {"mean_field_ou", "separable"});
  if (kind == "mean_field_ou") {
    const double a = cfg.number("model", "a", 1.0);
    const double sigma0 = cfg.number("model", "sigma0", 1.0);
    return vmv::mean_field_ou(a, sigma0, x0_from(cfg));
  }
  const vmv::Kernel kb = kernel_from(cfg, "kernel_b");
  const vmv::Kernel ks = kernel_from(cfg, "kernel_s");
  const double fm = cfg.number("model", "f_mean", 0.0), fx = cfg.number("model", "f_x", 0.0),
               fc = cfg.number("model", "f_const", 0.0);
  const double gm = cfg.number("model", "g_mean", 0.0), gx = cfg.number("model", "g_x", 0.0),
               gc = cfg.number("model", "g_const", 1.0);
  const double lip = std::max(std::abs(fm) + std::abs(fx), std::abs(gm) + std::abs(gx));
  const double growth = std::max({lip, std::abs(fc), std::abs(gc)});
  vmv::Model m = vmv::separable_model(
      kb, ks,
      [fm, fx, fc](std::span<const double> x, std::span<const double> mean, std::span<double> o) {
        o[0] = fm * mean[0] + fx * x[0] + fc;
      },
      [gm, gx, gc](std::span<const double> x, std::span<const double> mean, std::span<double> o) {
        o[0] = gm * mean[0] + gx * x[0] + gc;
      },
      1, 1, x0_from(cfg), lip, growth);
  return m;
}

}  // namespace vmvcli
