#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmv/kernel.hpp"
#include "vmv/measure.hpp"

namespace vmv {

/// Drift b(t, s, x, mu) -> R^d written into `out`.
using DriftFn = std::function<void(double t, double s, std::span<const double> x,
                                   const EmpiricalMeasure& mu, std::span<double> out)>;
/// Diffusion sigma(t, s, x, mu) -> d x m matrix, row-major, written into `out`.
using DiffusionFn = DriftFn;

/// Lipschitz map of (x, mean(mu)) used by separable models.
using MeanFieldFn = std::function<void(std::span<const double> x, std::span<const double> mean,
                                       std::span<double> out)>;

/// Declared regularity. Kernels K1..K4 bound the Lipschitz (K1, K2) and
/// growth (K3, K4) moduli of the coefficients; gamma and delta are the
/// time-Hoelder and s-shift exponents.
struct RegularityDecl {
  std::vector<Kernel> kernels;
  std::optional<double> gamma;
  std::optional<double> delta;
  double lipschitz_f = 0.0;
  double growth_f = 0.0;
};

class InitialCondition {
 public:
  enum class Kind { deterministic, gaussian };

  static InitialCondition deterministic(std::vector<double> xi);
  /// Independent N(mean, stddev^2 I) draws per particle.
  static InitialCondition gaussian(std::vector<double> mean, double stddev);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return value_.size(); }
  std::span<const double> value() const { return value_; }
  double stddev() const { return stddev_; }
  /// X_0 of particle i, a pure function of (seed, i).
  void sample(std::uint64_t seed, std::size_t i, std::span<double> out) const;

 private:
  InitialCondition(Kind k, std::vector<double> v, double sd) : kind_(k), value_(std::move(v)), stddev_(sd) {}
  Kind kind_;
  std::vector<double> value_;
  double stddev_;
};

struct SeparableParts {
  Kernel kb;
  Kernel ks;
  MeanFieldFn f;  // -> R^d
  MeanFieldFn g;  // -> d x m, row-major
};

struct OuParams {
  double a = 0.0;
  double sigma0 = 0.0;
};

struct Model {
  std::string name;
  std::size_t d = 1;
  std::size_t m = 1;
  DriftFn drift;
  DiffusionFn diffusion;
  RegularityDecl regularity;
  InitialCondition x0 = InitialCondition::deterministic({0.0});
  double horizon = 1.0;
  /// Present for separable models; lets the scheme tabulate kernel values.
  std::optional<SeparableParts> separable;
  /// Present for mean_field_ou; enables the analytic limit law.
  std::optional<OuParams> ou;
};

/// b = kb(t,s) f(x, mean(mu)), sigma = ks(t,s) g(x, mean(mu)).
Model separable_model(const Kernel& kb, const Kernel& ks, MeanFieldFn f, MeanFieldFn g,
                      std::size_t d, std::size_t m, InitialCondition x0, double lipschitz_f,
                      double growth_f);

/// d = m = 1, K = 1, b = a (mean(mu) - x), sigma = sigma0.
Model mean_field_ou(double a, double sigma0, InitialCondition x0);

struct OuLaw {
  double mean = 0.0;
  double variance = 0.0;
};

/// Law at time t of the McKean-Vlasov limit of mean_field_ou started from a
/// law with mean m0 and variance v0.
OuLaw ou_oracle(double a, double sigma0, double m0, double v0, double t);

}  // namespace vmv
