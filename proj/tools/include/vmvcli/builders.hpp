#pragma once

#include <string>

#include "vmv/kernel.hpp"
#include "vmv/model.hpp"
#include "vmvcli/config.hpp"

namespace vmvcli {

/// `kind = "constant" | "power" | "fbm" | "exp_conv"` plus c, alpha, H,
/// lambda, rho (and quad_tol for fbm).
vmv::Kernel kernel_from(Config& cfg, const std::string& section);

/// `[x0] kind = "deterministic" | "gaussian"`, value or mean, stddev.
vmv::InitialCondition x0_from(Config& cfg);

/// `[model] kind = "mean_field_ou"` with a, sigma0, or `kind = "separable"`
/// with kernels in [kernel_b] and [kernel_s] and scalar maps
///   f(x, m) = f_mean m + f_x x + f_const,  g(x, m) = g_mean m + g_x x + g_const.
vmv::Model model_from(Config& cfg);

}  // namespace vmvcli
