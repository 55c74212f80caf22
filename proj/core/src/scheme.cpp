#include "vmv/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vmv/errors.hpp"
#include "vmv/grid.hpp"
#include "vmv/parallel.hpp"

namespace vmv {

double tilde_t(double t, int n) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("tilde_t: t must lie in [0, 1]");
  const double step = std::ldexp(1.0, -n);
  return t >= step ? t : step;
}

double tilde_s(double s, int n) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("tilde_s: s must lie in (0, 1)");
  const double step = std::ldexp(1.0, -n);
  if (s < step) return 0.5 * step;
  return std::ldexp(std::floor(std::ldexp(s, n)), -n);
}

double Ensemble::time(std::size_t k) const { return std::ldexp(static_cast<double>(k), -level); }

namespace {

enum class Args { euler, picard };

struct Setup {
  const Model& model;
  int n;
  std::size_t particles;
  Increments inc;
  std::vector<double> x0;  // [i][c]
};

Setup prepare(const Model& model, int n, std::size_t particles, const BrownianStore& store, const char* who) {
  const std::string w(who);
  if (model.horizon != 1.0) throw std::invalid_argument(w + ": model horizon must be 1");
  if (n < 0 || n > store.n_max())
    throw std::invalid_argument(w + ": level " + std::to_string(n) + " outside [0, " +
                                std::to_string(store.n_max()) + "]");
  if (particles == 0 || particles > store.particles())
    throw std::invalid_argument(w + ": particle count must lie in [1, " + std::to_string(store.particles()) + "]");
  if (store.dim() != model.m) throw std::invalid_argument(w + ": Brownian dimension does not match model noise");
  if (!model.drift || !model.diffusion) throw std::invalid_argument(w + ": model has no coefficients");
  Setup s{model, n, particles, store.coarsen(n), std::vector<double>(particles * model.d)};
  for (std::size_t i = 0; i < particles; ++i)
    model.x0.sample(store.master_seed(), i, std::span<double>(s.x0.data() + i * model.d, model.d));
  return s;
}

EmpiricalMeasure column_measure(std::size_t d, std::vector<double> col, std::size_t k, const char* who) {
  for (double x : col)
    if (!std::isfinite(x)) throw BlowUpError(std::string(who) + ": non-finite particle state", k);
  return EmpiricalMeasure(d, std::move(col));
}

// f and g of a separable model evaluated along one column.
void fill_mean_field(const SeparableParts& sep, const EmpiricalMeasure& mu, std::size_t d, std::size_t m,
                     std::span<double> fcol, std::span<double> gcol) {
  const std::size_t n = mu.size();
  for (std::size_t i = 0; i < n; ++i) {
    sep.f(mu.point(i), mu.mean(), fcol.subspan(i * d, d));
    sep.g(mu.point(i), mu.mean(), gcol.subspan(i * d * m, d * m));
  }
}

// Sum of v[0..k) over the dyadic blocks of [0, k), largest first, each block
// summed pairwise. This is the order in which coarse Brownian increments are
// built from fine ones, so sums of increments agree exactly across levels.
// Overwrites v.
double dyadic_sum(double* v, std::size_t k) {
  double acc = 0.0;
  std::size_t pos = 0;
  for (std::size_t width = std::bit_floor(k); width > 0; width >>= 1) {
    if (k - pos < width) continue;
    double* blk = v + pos;
    for (std::size_t st = 1; st < width; st <<= 1)
      for (std::size_t q = 0; q + st < width; q += 2 * st) blk[q] += blk[q + st];
    acc += blk[0];
    pos += width;
  }
  return acc;
}

// One pass of the coefficient sums. With src == nullptr the columns feeding
// the sums are the ones being built (the Euler scheme); otherwise they come
// from the previous Picard sweep.
Ensemble run(const Setup& su, Args args, const Ensemble* src, bool use_table, const char* who) {
  const Model& model = su.model;
  const std::size_t d = model.d, m = model.m, np = su.particles;
  const int n = su.n;
  const std::size_t steps = std::size_t{1} << n;
  const double h = std::ldexp(1.0, -n);

  std::vector<double> targ(steps + 1), sarg(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double tk = std::ldexp(static_cast<double>(k), -n);
    targ[k] = args == Args::euler ? tilde_t(tk, n) : tk;
  }
  for (std::size_t j = 0; j < steps; ++j) {
    const double tj = std::ldexp(static_cast<double>(j), -n);
    sarg[j] = args == Args::euler ? tilde_s(tj + 0.5 * h, n) : tj;
  }

  const bool table = use_table && model.separable.has_value();
  TriTable kb, ks;
  std::vector<double> fcache, gcache;  // [j][i][.]
  if (table) {
    const auto& sep = *model.separable;
    kb = TriTable(steps);
    ks = TriTable(steps);
    parallel_for(steps, [&](std::size_t idx) {
      const std::size_t k = idx + 1;
      for (std::size_t j = 0; j < k; ++j) {
        kb(k, j) = sep.kb(targ[k], sarg[j]);
        ks(k, j) = sep.ks(targ[k], sarg[j]);
      }
    });
    fcache.resize(steps * np * d);
    gcache.resize(steps * np * d * m);
  }
  auto fill_column = [&](std::size_t j, const EmpiricalMeasure& mu) {
    fill_mean_field(*model.separable, mu, d, m, std::span<double>(fcache.data() + j * np * d, np * d),
                    std::span<double>(gcache.data() + j * np * d * m, np * d * m));
  };

  Ensemble out;
  out.level = n;
  out.particles = np;
  out.dim = d;
  out.measures.reserve(steps + 1);
  out.measures.push_back(EmpiricalMeasure(d, su.x0));
  const Ensemble& from = src ? *src : out;
  if (table && src) {
    for (std::size_t j = 0; j < steps; ++j) fill_column(j, src->measures[j]);
  }
  if (table && !src) fill_column(0, out.measures[0]);

  for (std::size_t k = 1; k <= steps; ++k) {
    std::vector<double> col(np * d);
    parallel_for(np, [&](std::size_t i) {
      // per-step terms, [c][j]
      std::vector<double> drift(d * k), diff(d * k), b(d), s(d * m);
      for (std::size_t j = 0; j < k; ++j) {
        const auto dw = su.inc.at(i, j);
        if (table) {
          const double kbv = kb(k, j), ksv = ks(k, j);
          const double* f = fcache.data() + (j * np + i) * d;
          const double* g = gcache.data() + (j * np + i) * d * m;
          for (std::size_t c = 0; c < d; ++c) {
            drift[c * k + j] = kbv * f[c] * h;
            double acc = 0.0;
            for (std::size_t r = 0; r < m; ++r) acc += ksv * g[c * m + r] * dw[r];
            diff[c * k + j] = acc;
          }
        } else {
          const auto x = from.state(i, j);
          const auto& mu = from.measures[j];
          model.drift(targ[k], sarg[j], x, mu, b);
          model.diffusion(targ[k], sarg[j], x, mu, s);
          for (std::size_t c = 0; c < d; ++c) {
            drift[c * k + j] = b[c] * h;
            double acc = 0.0;
            for (std::size_t r = 0; r < m; ++r) acc += s[c * m + r] * dw[r];
            diff[c * k + j] = acc;
          }
        }
      }
      for (std::size_t c = 0; c < d; ++c)
        col[i * d + c] = su.x0[i * d + c] + dyadic_sum(drift.data() + c * k, k) + dyadic_sum(diff.data() + c * k, k);
    }, 4);
    out.measures.push_back(column_measure(d, std::move(col), k, who));
    if (table && !src && k < steps) fill_column(k, out.measures[k]);
  }
  return out;
}

}  // namespace

Ensemble euler_simulate(const Model& model, int n, std::size_t particles, const BrownianStore& store,
                        const SimOptions& opts) {
  const Setup su = prepare(model, n, particles, store, "euler_simulate");
  return run(su, Args::euler, nullptr, opts.use_kernel_table, "euler_simulate");
}

double sup_distance(const Ensemble& a, const Ensemble& b) {
  if (a.level != b.level || a.particles != b.particles || a.dim != b.dim)
    throw std::invalid_argument("sup_distance: ensembles live on different grids");
  double sup = 0.0;
  for (std::size_t k = 0; k < a.measures.size(); ++k)
    for (std::size_t i = 0; i < a.particles; ++i) {
      const auto x = a.state(i, k), y = b.state(i, k);
      double r2 = 0.0;
      for (std::size_t c = 0; c < a.dim; ++c) r2 += (x[c] - y[c]) * (x[c] - y[c]);
      sup = std::max(sup, std::sqrt(r2));
    }
  return sup;
}

Ensemble picard_simulate(const Model& model, int n, std::size_t particles, const BrownianStore& store,
                         int iterations, std::vector<double>* gaps) {
  if (iterations < 1) throw std::invalid_argument("picard_simulate: iterations must be >= 1");
  const Setup su = prepare(model, n, particles, store, "picard_simulate");
  Ensemble cur;
  cur.level = n;
  cur.particles = particles;
  cur.dim = model.d;
  cur.measures.assign((std::size_t{1} << n) + 1, EmpiricalMeasure(model.d, su.x0));
  if (gaps) gaps->clear();
  for (int r = 2; r <= iterations; ++r) {
    Ensemble next = run(su, Args::picard, &cur, true, "picard_simulate");
    if (gaps) gaps->push_back(sup_distance(next, cur));
    cur = std::move(next);
  }
  return cur;
}

double coupled_error(const Ensemble& coarse, const Ensemble& fine, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("coupled_error: p must be >= 1");
  if (fine.level <= coarse.level) throw std::invalid_argument("coupled_error: fine level must exceed coarse level");
  if (fine.particles != coarse.particles || fine.dim != coarse.dim)
    throw std::invalid_argument("coupled_error: ensembles differ in size or dimension");
  const std::size_t ratio = std::size_t{1} << (fine.level - coarse.level);
  double worst = 0.0;
  for (std::size_t k = 0; k <= coarse.steps(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < coarse.particles; ++i) {
      const auto x = coarse.state(i, k), y = fine.state(i, k * ratio);
      double r2 = 0.0;
      for (std::size_t c = 0; c < coarse.dim; ++c) r2 += (x[c] - y[c]) * (x[c] - y[c]);
      acc += p == 2.0 ? r2 : std::pow(r2, 0.5 * p);
    }
    worst = std::max(worst, acc / static_cast<double>(coarse.particles));
  }
  return worst;
}

double coupled_error(const Model& model, std::size_t particles, int n_coarse, int n_fine,
                     const BrownianStore& store, double p) {
  if (n_coarse >= n_fine) throw std::invalid_argument("coupled_error: need n_coarse < n_fine");
  const Ensemble fine = euler_simulate(model, n_fine, particles, store);
  const Ensemble coarse = euler_simulate(model, n_coarse, particles, store);
  return coupled_error(coarse, fine, p);
}

}  // namespace vmv
