#include "vmv/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vmv/errors.hpp"
#include "vmv/measure.hpp"
#include "vmv/parallel.hpp"
#include "vmv/regression.hpp"
#include "vmv/rng.hpp"
#include "vmv/scheme.hpp"

namespace vmv {

RateFit fit_rate(const std::vector<double>& sizes, const std::vector<double>& errors) {
  if (sizes.size() != errors.size()) throw std::invalid_argument("fit_rate: sizes and errors differ in length");
  if (sizes.size() < 2) throw std::invalid_argument("fit_rate: need at least two points");
  for (double s : sizes)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("fit_rate: sizes must be positive");
  for (double e : errors)
    if (std::isnan(e)) throw std::invalid_argument("fit_rate: errors must not be NaN");
  RateFit out;
  if (std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; })) {
    out.exact_scheme = true;
    return out;
  }
  const LogLogFit f = fit_loglog(sizes, errors);
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!f.used[i]) out.excluded.push_back(i);
  if (!f.identifiable) throw std::invalid_argument("fit_rate: fewer than two usable points");
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.fitted = true;
  return out;
}

ChaosRate chaos_rate_exponent(double p, int d, double q, ExponentVariant variant) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("chaos_rate_exponent: p must be >= 1");
  if (d < 1) throw std::invalid_argument("chaos_rate_exponent: d must be >= 1");
  if (!(q > p) || !std::isfinite(q)) throw std::invalid_argument("chaos_rate_exponent: q must exceed p");
  const double half = 0.5 * d;
  ChaosRate r;
  r.variant = variant;
  if (p >= half) {
    if (q == 2.0 * p) throw std::invalid_argument("chaos_rate_exponent: q = 2p is excluded for p >= d/2");
    r.first = 0.5;
    r.log_modified = p == half;
  } else {
    if (q == d / (d - p)) throw std::invalid_argument("chaos_rate_exponent: q = d/(d-p) is excluded for p < d/2");
    r.first = p / d;
  }
  r.second = variant == ExponentVariant::concentration ? (q - p) / q : (p - q) / q;
  r.bound = std::min(r.first, r.second);
  r.non_decaying = r.bound <= 0.0;
  return r;
}

std::uint64_t replication_seed(std::uint64_t seed, int r) {
  return derive_seed(seed, stream::replication + static_cast<std::uint64_t>(r));
}

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    if constexpr (std::is_floating_point_v<T>)
      s += num(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

template <class T>
void require_increasing(const std::vector<T>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i])) throw std::invalid_argument(std::string(what) + " must be strictly increasing");
}

void check_common(const StudyConfig& cfg) {
  if (!(cfg.p >= 2.0) || !std::isfinite(cfg.p)) throw std::invalid_argument("study: p must be >= 2");
  if (cfg.replications < 1) throw std::invalid_argument("study: replications must be >= 1");
}

struct Aggregate {
  std::vector<std::vector<double>> per_rep;  // [r][row]
  std::vector<bool> ok;
  std::vector<std::size_t> fail_step;
};

// Runs replications concurrently; each one fills its own slot, so the
// aggregation below sees the same numbers in the same order every time.
template <class Body>
Aggregate replicate(int reps, std::size_t rows, Body body) {
  Aggregate a;
  a.per_rep.assign(reps, std::vector<double>(rows, 0.0));
  a.ok.assign(reps, true);
  a.fail_step.assign(reps, 0);
  std::vector<char> ok(reps, 1);
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    try {
      body(static_cast<int>(r), a.per_rep[r]);
    } catch (const BlowUpError& e) {
      ok[r] = 0;
      a.fail_step[r] = e.step();
    }
  });
  for (int r = 0; r < reps; ++r) a.ok[r] = ok[r] != 0;
  return a;
}

void summarize(const Aggregate& a, const std::vector<double>& sizes, StudyReport& rep) {
  std::size_t good = 0;
  for (std::size_t r = 0; r < a.ok.size(); ++r) {
    if (a.ok[r])
      ++good;
    else
      rep.blown_up.emplace_back(static_cast<int>(r), a.fail_step[r]);
  }
  if (good == 0) throw NumericalError("study: every replication blew up");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.ok.size(); ++r)
      if (a.ok[r]) s += a.per_rep[r][i];
    const double mean = s / static_cast<double>(good);
    double ss = 0.0;
    for (std::size_t r = 0; r < a.ok.size(); ++r)
      if (a.ok[r]) ss += (a.per_rep[r][i] - mean) * (a.per_rep[r][i] - mean);
    const double se = good > 1 ? std::sqrt(ss / static_cast<double>(good - 1) / static_cast<double>(good)) : 0.0;
    rep.rows.push_back({sizes[i], mean, se});
  }
  std::vector<double> errs;
  for (const auto& row : rep.rows) errs.push_back(row.error);
  const auto positive = std::count_if(errs.begin(), errs.end(), [](double e) { return e > 0.0; });
  if (positive == 1 || (positive == 0 && std::any_of(errs.begin(), errs.end(), [](double e) { return e != 0.0; }))) {
    // nothing to fit, but still a valid report
    for (std::size_t i = 0; i < errs.size(); ++i)
      if (!(errs[i] > 0.0)) rep.excluded_rows.push_back(i);
    return;
  }
  const RateFit fit = fit_rate(sizes, errs);
  rep.exact_scheme = fit.exact_scheme;
  rep.excluded_rows = fit.excluded;
  if (fit.fitted) {
    rep.fitted_slope = fit.slope;
    rep.fitted_intercept = fit.intercept;
  }
}

double same_level_error(const Ensemble& a, const Ensemble& b, std::size_t particles, double p) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.measures.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < particles; ++i) {
      const auto x = a.state(i, k), y = b.state(i, k);
      double r2 = 0.0;
      for (std::size_t c = 0; c < a.dim; ++c) r2 += (x[c] - y[c]) * (x[c] - y[c]);
      acc += p == 2.0 ? r2 : std::pow(r2, 0.5 * p);
    }
    worst = std::max(worst, acc / static_cast<double>(particles));
  }
  return worst;
}

// The measure of `mu` written with every point repeated `times` times.
EmpiricalMeasure repeated(const EmpiricalMeasure& mu, std::size_t times) {
  std::vector<double> pts;
  pts.reserve(mu.size() * times * mu.dim());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t t = 0; t < times; ++t) pts.insert(pts.end(), mu.point(i).begin(), mu.point(i).end());
  return EmpiricalMeasure(mu.dim(), std::move(pts));
}

// Limit dynamics of mean_field_ou: the empirical mean is replaced by the
// analytic one, which stays at m0.
Model ou_limit(const Model& ou) {
  const double a = ou.ou->a, sigma0 = ou.ou->sigma0;
  const double m0 = ou_oracle(a, sigma0, ou.x0.value()[0], 0.0, 0.0).mean;
  Model lim = separable_model(
      constant_kernel(1.0), constant_kernel(1.0),
      [a, m0](std::span<const double> x, std::span<const double>, std::span<double> o) { o[0] = a * (m0 - x[0]); },
      [sigma0](std::span<const double>, std::span<const double>, std::span<double> o) { o[0] = sigma0; }, 1, 1,
      ou.x0, std::abs(a), std::max(std::abs(a), std::abs(sigma0)));
  lim.name = "mean_field_ou_limit";
  return lim;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void add_seeds(const StudyConfig& cfg, StudyReport& rep) {
  rep.manifest.emplace_back("master_seed", std::to_string(cfg.seed));
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < cfg.replications; ++r) seeds.push_back(replication_seed(cfg.seed, r));
  rep.manifest.emplace_back("replication_seeds", join(seeds));
}

}  // namespace

StudyReport strong_rate_study(const StudyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  check_common(cfg);
  if (cfg.reference != Reference::finest_level)
    throw std::invalid_argument("strong_rate_study: reference must be the finest level");
  require_increasing(cfg.levels, "strong_rate_study: levels");
  if (cfg.levels.front() < 0 || cfg.levels.back() >= cfg.n_fine)
    throw std::invalid_argument("strong_rate_study: levels must lie in [0, n_fine)");
  if (cfg.particles == 0) throw std::invalid_argument("strong_rate_study: particles must be >= 1");

  const std::size_t rows = cfg.levels.size();
  const Aggregate agg = replicate(cfg.replications, rows, [&](int r, std::vector<double>& out) {
    const BrownianStore store(replication_seed(cfg.seed, r), cfg.particles, cfg.model.m, cfg.n_fine);
    const Ensemble fine = euler_simulate(cfg.model, cfg.n_fine, cfg.particles, store);
    for (std::size_t l = 0; l < rows; ++l)
      out[l] = coupled_error(euler_simulate(cfg.model, cfg.levels[l], cfg.particles, store), fine, cfg.p);
  });

  StudyReport rep;
  std::vector<double> sizes;
  for (int n : cfg.levels) sizes.push_back(std::ldexp(1.0, -n));
  summarize(agg, sizes, rep);
  rep.manifest.emplace_back("study", "strong_rate");
  rep.manifest.emplace_back("model", cfg.model.name);
  add_seeds(cfg, rep);
  rep.manifest.emplace_back("coupling", "one Brownian store per replication, shared by all levels");
  rep.manifest.emplace_back("levels", join(cfg.levels));
  rep.manifest.emplace_back("n_fine", std::to_string(cfg.n_fine));
  rep.manifest.emplace_back("particles", std::to_string(cfg.particles));
  rep.manifest.emplace_back("p", num(cfg.p));
  rep.manifest.emplace_back("replications", std::to_string(cfg.replications));
  rep.manifest.emplace_back("wall_time_s", num(elapsed(start)));
  return rep;
}

StudyReport chaos_study(const StudyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  check_common(cfg);
  require_increasing(cfg.Ns, "chaos_study: Ns");
  if (cfg.Ns.front() == 0) throw std::invalid_argument("chaos_study: N must be >= 1");
  if (cfg.n_ref < 0) throw std::invalid_argument("chaos_study: n_ref must be >= 0");
  const std::size_t rows = cfg.Ns.size();
  const std::size_t nmax = cfg.Ns.back();

  Aggregate agg;
  if (cfg.reference == Reference::ou_oracle) {
    if (!cfg.model.ou) throw std::invalid_argument("chaos_study: oracle mode needs a model with an analytic law");
    const Model limit = ou_limit(cfg.model);
    agg = replicate(cfg.replications, rows, [&](int r, std::vector<double>& out) {
      const BrownianStore store(replication_seed(cfg.seed, r), nmax, cfg.model.m, cfg.n_ref);
      const Ensemble lim = euler_simulate(limit, cfg.n_ref, nmax, store);
      for (std::size_t l = 0; l < rows; ++l) {
        const Ensemble sys = euler_simulate(cfg.model, cfg.n_ref, cfg.Ns[l], store);
        out[l] = same_level_error(sys, lim, cfg.Ns[l], cfg.p);
      }
    });
  } else if (cfg.reference == Reference::large_n) {
    for (std::size_t n : cfg.Ns)
      if (cfg.n_ref_particles % n != 0)
        throw std::invalid_argument("chaos_study: n_ref_particles must be a multiple of every N");
    agg = replicate(cfg.replications, rows, [&](int r, std::vector<double>& out) {
      const BrownianStore store(replication_seed(cfg.seed, r), cfg.n_ref_particles, cfg.model.m, cfg.n_ref);
      const Ensemble ref = euler_simulate(cfg.model, cfg.n_ref, cfg.n_ref_particles, store);
      for (std::size_t l = 0; l < rows; ++l) {
        const Ensemble sys = euler_simulate(cfg.model, cfg.n_ref, cfg.Ns[l], store);
        const std::size_t times = cfg.n_ref_particles / cfg.Ns[l];
        double worst = 0.0;
        for (std::size_t k = 0; k < ref.measures.size(); ++k) {
          const double w = w2(times == 1 ? sys.measures[k] : repeated(sys.measures[k], times), ref.measures[k]);
          worst = std::max(worst, cfg.p == 2.0 ? w * w : std::pow(w, cfg.p));
        }
        out[l] = worst;
      }
    });
  } else {
    throw std::invalid_argument("chaos_study: reference must be ou_oracle or large_n");
  }

  StudyReport rep;
  std::vector<double> sizes(cfg.Ns.begin(), cfg.Ns.end());
  summarize(agg, sizes, rep);
  if (cfg.q) rep.theory_slope = -chaos_rate_exponent(cfg.p, static_cast<int>(cfg.model.d), *cfg.q).bound;
  rep.manifest.emplace_back("study", "chaos");
  rep.manifest.emplace_back("model", cfg.model.name);
  rep.manifest.emplace_back("reference", cfg.reference == Reference::ou_oracle ? "ou_oracle" : "large_n");
  add_seeds(cfg, rep);
  rep.manifest.emplace_back("Ns", join(cfg.Ns));
  rep.manifest.emplace_back("n_ref", std::to_string(cfg.n_ref));
  if (cfg.reference == Reference::large_n)
    rep.manifest.emplace_back("n_ref_particles", std::to_string(cfg.n_ref_particles));
  rep.manifest.emplace_back("p", num(cfg.p));
  rep.manifest.emplace_back("replications", std::to_string(cfg.replications));
  rep.manifest.emplace_back("wall_time_s", num(elapsed(start)));
  return rep;
}

StudyReport moment_study(const Model& model, const std::vector<int>& levels, std::size_t particles, double p,
                         const BrownianStore& store) {
  const auto start = std::chrono::steady_clock::now();
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("moment_study: p must be >= 2");
  require_increasing(levels, "moment_study: levels");
  StudyReport rep;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n : levels) {
    const Ensemble e = euler_simulate(model, n, particles, store);
    double sup = 0.0;
    for (const auto& mu : e.measures) sup = std::max(sup, moment(mu, p));
    rep.rows.push_back({std::ldexp(1.0, -n), sup, 0.0});
    lo = std::min(lo, sup);
    hi = std::max(hi, sup);
  }
  rep.ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  rep.manifest.emplace_back("study", "moment");
  rep.manifest.emplace_back("model", model.name);
  rep.manifest.emplace_back("master_seed", std::to_string(store.master_seed()));
  rep.manifest.emplace_back("levels", join(levels));
  rep.manifest.emplace_back("particles", std::to_string(particles));
  rep.manifest.emplace_back("p", num(p));
  rep.manifest.emplace_back("wall_time_s", num(elapsed(start)));
  return rep;
}

}  // namespace vmv
