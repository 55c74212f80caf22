#include "vmv/kernel.hpp"

#include "vmv/errors.hpp"
#include "vmv/quadrature.hpp"
#include "vmv/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vmv {
namespace {

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("kernel horizon must be positive and finite");
}

std::string format_name(const std::string& kind,
                        std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.precision(17);
  os << kind << '(';
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) os << ", ";
    os << key << '=' << value;
    first = false;
  }
  os << ')';
  return os.str();
}

}  // namespace

Kernel::Kernel(std::string name, Fn fn, KernelMeta meta)
    : name_(std::move(name)), fn_(std::move(fn)), meta_(meta) {
  if (!fn_) throw std::invalid_argument("kernel evaluator is empty");
  require_horizon(meta_.horizon);
  if (meta_.declared_gamma && !(*meta_.declared_gamma > 0.0 && *meta_.declared_gamma <= 1.0))
    throw std::invalid_argument("declared_gamma must lie in (0, 1]");
  if (meta_.declared_alpha && !(*meta_.declared_alpha > 1.0))
    throw std::invalid_argument("declared_alpha must exceed 1");
}

Kernel constant_kernel(double c, double horizon) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant_kernel: c must be >= 0");
  KernelMeta meta;
  meta.horizon = horizon;
  meta.declared_gamma = 1.0;
  return Kernel(format_name("constant", {{"c", c}}), [c](double, double, double) { return c; }, meta);
}

Kernel power_kernel(double alpha, double horizon) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("power_kernel: alpha must lie in (0, 1/2)");
  KernelMeta meta;
  meta.horizon = horizon;
  meta.singular_at_diagonal = true;
  meta.declared_gamma = 0.5 - alpha;
  meta.declared_alpha = 1.0 / (2.0 * alpha);
  return Kernel(format_name("power", {{"alpha", alpha}}),
                [alpha](double, double, double lag) { return std::pow(lag, -alpha); }, meta);
}

Kernel exp_conv_kernel(double lambda, double rho, double horizon) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("exp_conv_kernel: lambda must be finite");
  if (!(rho > 0.0 && rho < 0.5))
    throw std::invalid_argument("exp_conv_kernel: rho must lie in (0, 1/2)");
  KernelMeta meta;
  meta.horizon = horizon;
  meta.singular_at_diagonal = true;
  meta.declared_gamma = 0.5 - rho;
  meta.declared_alpha = 1.0 / (2.0 * rho);
  return Kernel(format_name("exp_conv", {{"lambda", lambda}, {"rho", rho}}),
                [lambda, rho](double, double, double lag) {
                  return std::exp(-lambda * lag) * std::pow(lag, -rho);
                },
                meta);
}

double fbm_constant(double H) {
  if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("fbm: H must lie in (0, 1)");
  return std::sqrt(2.0 * H * std::tgamma(1.5 - H) / (std::tgamma(H + 0.5) * std::tgamma(2.0 - 2.0 * H)));
}

Kernel fbm_kernel(double H, double quad_tol, double horizon) {
  if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("fbm_kernel: H must lie in (0, 1)");
  if (!(quad_tol > 0.0)) throw std::invalid_argument("fbm_kernel: quad_tol must be positive");
  KernelMeta meta;
  meta.horizon = horizon;
  meta.singular_at_diagonal = H < 0.5;
  meta.singular_at_zero = H != 0.5;
  if (2.0 * H <= 1.0) meta.declared_gamma = 2.0 * H;
  if (H < 0.5) meta.declared_alpha = 1.0 / (1.0 - 2.0 * H);
  const double cH = fbm_constant(H);
  const std::string name = format_name("fbm", {{"H", H}, {"quad_tol", quad_tol}});

  if (H == 0.5) return Kernel(name, [](double, double, double) { return 1.0; }, meta);

  const double a = 0.5 - H;
  const double inner_tol = 0.5 * quad_tol / (cH * std::abs(a));
  auto fn = [cH, H, a, inner_tol](double, double s, double lag) {
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    // integrand in u = th - s; the bracket is evaluated without cancellation
    auto g = [H, a, s](double u) {
      return std::pow(u, H - 1.5) * -std::expm1(-a * std::log1p(u / s));
    };
    double inner = 0.0;
    if (lag <= s) {
      const QuadResult r = graded_integral(g, lag, inner_tol);
      if (!r.converged) throw QuadratureError("fbm_kernel inner integral did not converge", r.error);
      inner = r.value;
    } else {
      // below u = s the integrand is a power of u; above it, a power of u/s
      const QuadResult near = graded_integral(g, s, 0.5 * inner_tol);
      const int scales = static_cast<int>(std::ceil(std::log2((lag - s) / s))) + 2;
      const QuadResult far = graded_integral([&](double v) { return g(s + v); }, lag - s,
                                             0.5 * inner_tol, std::max(60, scales + 20), scales);
      if (!near.converged || !far.converged)
        throw QuadratureError("fbm_kernel inner integral did not converge", near.error + far.error);
      inner = near.value + far.value;
    }
    return cH * std::pow(lag, H - 0.5) + cH * a * inner;
  };
  return Kernel(name, fn, meta);
}

ProbeReport integrability_probe(const Kernel& k, double beta, std::span<const double> grid_times,
                                double tol) {
  if (!(beta >= 1.0)) throw std::invalid_argument("integrability_probe: beta must be >= 1");
  if (grid_times.empty()) throw std::invalid_argument("integrability_probe: no grid times");
  ProbeReport rep;
  double sup = 0.0;
  for (double t : grid_times) {
    if (!(t > 0.0 && t <= k.meta().horizon))
      throw std::invalid_argument("integrability_probe: grid times must lie in (0, T]");
    const QuadResult r = graded_interval(
        [&](double s, double, double to_t) { return std::pow(std::abs(k.at(t, s, to_t)), beta); },
        0.0, t, tol);
    if (!r.converged || !std::isfinite(r.value))
      throw NonIntegrableError("kernel^" + std::to_string(beta) + " is not integrable on (0, " +
                                   std::to_string(t) + ")",
                               t);
    rep.samples.emplace_back(t, r.value);
    sup = std::max(sup, r.value);
  }
  rep.constant_estimate = sup;

  std::vector<double> xs, ys;
  for (const auto& [t, v] : rep.samples) {
    xs.push_back(t);
    ys.push_back(v);
  }
  const LogLogFit fit = fit_loglog(xs, ys, 1e-14);
  rep.identifiable = fit.identifiable;
  rep.exponent_estimate = fit.slope;
  rep.r_squared = fit.r_squared;
  return rep;
}

std::optional<ProbeMode> parse_probe_mode(const std::string& s) {
  if (s == "l1_shift") return ProbeMode::l1_shift;
  if (s == "l2_shift") return ProbeMode::l2_shift;
  if (s == "l2_tail") return ProbeMode::l2_tail;
  return std::nullopt;
}

std::string to_string(ProbeMode m) {
  switch (m) {
    case ProbeMode::l1_shift: return "l1_shift";
    case ProbeMode::l2_shift: return "l2_shift";
    case ProbeMode::l2_tail: return "l2_tail";
  }
  return "unknown";
}

ProbeReport hoelder_probe(const Kernel& k, ProbeMode mode, double base_t,
                          std::span<const double> lags, double tol) {
  if (lags.size() < 2) throw std::invalid_argument("hoelder_probe: need at least 2 lags");
  const double T = k.meta().horizon;
  if (!(base_t >= 0.0 && base_t < T)) throw std::invalid_argument("hoelder_probe: base_t outside [0, T)");
  for (double lag : lags) {
    if (!(lag > 0.0)) throw std::invalid_argument("hoelder_probe: lags must be positive");
    if (base_t + lag > T * (1.0 + 1e-15)) throw std::invalid_argument("hoelder_probe: base_t + lag exceeds T");
  }
  if (mode != ProbeMode::l2_tail && !(base_t > 0.0))
    throw std::invalid_argument("hoelder_probe: shift modes need base_t > 0");

  ProbeReport rep;
  std::vector<double> moduli;
  for (double lag : lags) {
    const double t = base_t;
    const double tp = base_t + lag;
    QuadResult r;
    switch (mode) {
      case ProbeMode::l1_shift:
      case ProbeMode::l2_shift: {
        const bool squared = mode == ProbeMode::l2_shift;
        r = graded_interval(
            [&](double s, double, double to_t) {
              const double diff = k.at(tp, s, lag + to_t) - k.at(t, s, to_t);
              return squared ? diff * diff : std::abs(diff);
            },
            0.0, t, tol);
        break;
      }
      case ProbeMode::l2_tail:
        r = graded_interval(
            [&](double s, double, double to_tp) {
              const double v = k.at(tp, s, to_tp);
              return v * v;
            },
            t, tp, tol);
        break;
    }
    if (!r.converged) throw QuadratureError("hoelder_probe quadrature did not converge", r.error);
    rep.samples.emplace_back(lag, r.value);
    moduli.push_back(r.value);
  }

  const LogLogFit fit = fit_loglog(lags, moduli, 1e-14);
  rep.identifiable = fit.identifiable;
  rep.exponent_estimate = fit.identifiable ? fit.slope : 0.0;
  rep.constant_estimate = fit.identifiable ? std::exp(fit.intercept) : 0.0;
  rep.r_squared = fit.identifiable ? fit.r_squared : 0.0;
  return rep;
}

}  // namespace vmv
