#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vmv {

struct KernelMeta {
  double horizon = 1.0;
  bool singular_at_diagonal = false;
  bool singular_at_zero = false;
  std::optional<double> declared_gamma;  // Hoelder exponent, in (0, 1]
  std::optional<double> declared_alpha;  // integrability exponent, > 1
  bool nonnegative = true;
};

/// Two-time weight K(t, s) on 0 <= s < t <= horizon.
///
/// The evaluator receives the lag t - s as a separate argument so that
/// callers which know the lag exactly (quadrature graded toward the diagonal)
/// do not lose it to cancellation. Kernels are immutable and eval is pure.
class Kernel {
 public:
  using Fn = std::function<double(double t, double s, double lag)>;

  Kernel(std::string name, Fn fn, KernelMeta meta);

  double operator()(double t, double s) const { return fn_(t, s, t - s); }
  /// Evaluation with an exactly known lag = t - s.
  double at(double t, double s, double lag) const { return fn_(t, s, lag); }

  const KernelMeta& meta() const { return meta_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
  KernelMeta meta_;
};

Kernel constant_kernel(double c, double horizon = 1.0);

/// (t - s)^-alpha, 0 < alpha < 1/2.
Kernel power_kernel(double alpha, double horizon = 1.0);

/// Kernel of fractional Brownian motion written as a Wiener integral:
///
///   K(t,s) = c_H (t-s)^(H-1/2)
///          + c_H (1/2-H) int_s^t (th-s)^(H-3/2) (1 - (s/th)^(1/2-H)) dth,
///   c_H = sqrt(2H Gamma(3/2-H) / (Gamma(H+1/2) Gamma(2-2H))).
///
/// The inner integral is evaluated on a mesh graded toward th = s to absolute
/// accuracy quad_tol; a QuadratureError is thrown if that accuracy is not
/// reached.
Kernel fbm_kernel(double H, double quad_tol = 1e-8, double horizon = 1.0);

/// Normalising constant c_H of fbm_kernel.
double fbm_constant(double H);

/// exp(-lambda (t-s)) (t-s)^-rho, 0 < rho < 1/2.
Kernel exp_conv_kernel(double lambda, double rho, double horizon = 1.0);

struct ProbeReport {
  double exponent_estimate = 0.0;
  double constant_estimate = 0.0;
  std::vector<std::pair<double, double>> samples;  // (lag or time, modulus)
  double r_squared = 0.0;
  bool identifiable = true;  // false when every modulus was numerically zero
};

/// sup over grid_times of int_0^t K(t,s)^beta ds. Throws NonIntegrableError
/// when the quadrature keeps growing under refinement.
ProbeReport integrability_probe(const Kernel& k, double beta, std::span<const double> grid_times,
                                double tol = 1e-10);

enum class ProbeMode {
  l1_shift,  // int_0^t |K(t',s) - K(t,s)| ds
  l2_shift,  // int_0^t |K(t',s) - K(t,s)|^2 ds
  l2_tail,   // int_t^t' K(t',s)^2 ds
};

std::optional<ProbeMode> parse_probe_mode(const std::string& s);
std::string to_string(ProbeMode m);

/// Modulus of continuity at base_t for each lag (t' = base_t + lag), with a
/// least-squares fit of log modulus against log lag. Moduli below 1e-14 are
/// excluded from the fit.
ProbeReport hoelder_probe(const Kernel& k, ProbeMode mode, double base_t,
                          std::span<const double> lags, double tol = 1e-12);

}  // namespace vmv
