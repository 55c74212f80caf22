#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vmv/brownian.hpp"
#include "vmv/model.hpp"

namespace vmv {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural-log intercept
  bool fitted = false;
  /// All errors were exactly zero: the scheme is exact and there is no rate.
  bool exact_scheme = false;
  /// Indices of nonpositive errors left out of the fit.
  std::vector<std::size_t> excluded;
};

/// Least-squares fit of log(error) against log(size). Nonpositive errors are
/// excluded (and listed) as long as two positive ones remain; all-zero errors
/// give exact_scheme and no fit. Throws std::invalid_argument otherwise.
RateFit fit_rate(const std::vector<double>& sizes, const std::vector<double>& errors);

enum class ExponentVariant { as_printed, concentration };

/// Decay exponents of the two terms of the propagation-of-chaos bound
/// N^-first (times log(1+N) when log_modified) + N^-second.
struct ChaosRate {
  double first = 0.0;
  double second = 0.0;
  bool log_modified = false;
  /// min(first, second): decay exponent of the whole bound.
  double bound = 0.0;
  /// The bound does not decay in N (bound <= 0).
  bool non_decaying = false;
  ExponentVariant variant = ExponentVariant::concentration;
};

/// Cases p > d/2, p = d/2 (q != 2p) and p < d/2 (q != d/(d-p)). The second
/// exponent is (q-p)/q for `concentration` and (p-q)/q read literally for
/// `as_printed`. Requires q > p >= 1 and d >= 1.
ChaosRate chaos_rate_exponent(double p, int d, double q,
                              ExponentVariant variant = ExponentVariant::concentration);

enum class Reference { finest_level, ou_oracle, large_n };

struct StudyConfig {
  Model model;
  std::uint64_t seed = 1;
  double p = 2.0;
  /// Coarse levels of a strong-rate study, strictly increasing.
  std::vector<int> levels;
  /// Particle counts of a chaos study, strictly increasing.
  std::vector<std::size_t> Ns;
  Reference reference = Reference::finest_level;
  /// Strong-rate study: particle count and reference (finest) level.
  std::size_t particles = 256;
  int n_fine = 10;
  /// Chaos study: simulation level and, in large_n mode, reference size.
  int n_ref = 7;
  std::size_t n_ref_particles = 4096;
  /// Chaos study: q of the theoretical bound, if a reference slope is wanted.
  std::optional<double> q;
  int replications = 1;
};

struct StudyRow {
  double size = 0.0;
  double error = 0.0;
  double stderr_ = 0.0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::optional<double> fitted_slope;
  std::optional<double> fitted_intercept;
  std::optional<double> theory_slope;
  bool exact_scheme = false;
  /// Rows left out of the fit (nonpositive error).
  std::vector<std::size_t> excluded_rows;
  /// Replications that blew up, with the failing step.
  std::vector<std::pair<int, std::size_t>> blown_up;
  /// Moment study: max/min ratio across levels.
  std::optional<double> ratio;
  /// Provenance as ordered key/value pairs (seeds, sizes, wall time).
  std::vector<std::pair<std::string, std::string>> manifest;
};

/// Master seed of replication r.
std::uint64_t replication_seed(std::uint64_t seed, int r);

/// Coupled error of each coarse level against n_fine, averaged over
/// replications. Each replication draws one Brownian store shared by all its
/// levels. Rows are keyed by 2^-n; the fitted slope estimates eta p.
StudyReport strong_rate_study(const StudyConfig& cfg);

/// Propagation of chaos at level n_ref. Oracle mode (mean_field_ou only)
/// couples each particle with its limit trajectory, whose drift uses the
/// analytic mean; the error is sup_k (1/N) sum_i |X^N - X|^p. Large-N mode
/// compares W2(mu^N_k, mu^ref_k)^p against one n_ref_particles run on the
/// same store; n_ref_particles must be a multiple of every N. Rows keyed by N.
StudyReport chaos_study(const StudyConfig& cfg);

/// sup over grid times of the ensemble p-moment for each level, plus the
/// max/min ratio across levels. Rows keyed by 2^-n, stderr 0.
StudyReport moment_study(const Model& model, const std::vector<int>& levels, std::size_t particles, double p,
                         const BrownianStore& store);

}  // namespace vmv
