#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vmv/experiments.hpp"
#include "vmv/parallel.hpp"

using namespace vmv;

namespace {

MeanFieldFn constant_map(double v) {
  return [v](std::span<const double>, std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), v);
  };
}

Model frozen(double b, double sigma, double xi) {
  return separable_model(constant_kernel(1.0), constant_kernel(1.0), constant_map(b), constant_map(sigma), 1, 1,
                         InitialCondition::deterministic({xi}), 0.0, 1.0);
}

bool same_rows(const StudyReport& a, const StudyReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].size != b.rows[i].size || a.rows[i].error != b.rows[i].error ||
        a.rows[i].stderr_ != b.rows[i].stderr_)
      return false;
  return true;
}

}  // namespace

TEST_CASE("rate fits on synthetic data") {
  std::vector<double> h, e;
  for (int n = 2; n <= 6; ++n) {
    h.push_back(std::ldexp(1.0, -n));
    e.push_back(3.0 * std::ldexp(1.0, -n));
  }
  auto f = fit_rate(h, e);
  CHECK(f.fitted);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  f = fit_rate(h, std::vector<double>(5, 0.2));
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-13));

  std::vector<double> ns{8, 32, 128, 512}, ce;
  for (double n : ns) ce.push_back(2.0 / std::sqrt(n));
  CHECK(fit_rate(ns, ce).slope == doctest::Approx(-0.5).epsilon(1e-13));

  ce[1] = 0.0;
  f = fit_rate(ns, ce);
  CHECK(f.fitted);
  REQUIRE(f.excluded.size() == 1);
  CHECK(f.excluded[0] == 1);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-13));

  f = fit_rate(ns, std::vector<double>(4, 0.0));
  CHECK(f.exact_scheme);
  CHECK_FALSE(f.fitted);
  CHECK_THROWS_AS(fit_rate(ns, {0.0, 0.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({1.0, -2.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("chaos rate exponents") {
  auto r = chaos_rate_exponent(2, 1, 4.5);
  CHECK(r.first == 0.5);
  CHECK(r.second == doctest::Approx(2.5 / 4.5));
  CHECK(r.bound == 0.5);
  CHECK_FALSE(r.log_modified);
  CHECK_FALSE(r.non_decaying);

  r = chaos_rate_exponent(2, 4, 5);
  CHECK(r.log_modified);
  CHECK(r.first == 0.5);
  CHECK(r.second == doctest::Approx(0.6));
  CHECK(r.bound == 0.5);

  r = chaos_rate_exponent(2, 1, 4.5, ExponentVariant::as_printed);
  CHECK(r.second == doctest::Approx(-2.5 / 4.5));
  CHECK(r.non_decaying);

  r = chaos_rate_exponent(1, 6, 3);
  CHECK(r.first == doctest::Approx(1.0 / 6.0));
  CHECK(r.bound == doctest::Approx(1.0 / 6.0));

  CHECK_THROWS_AS(chaos_rate_exponent(2, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(chaos_rate_exponent(2, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(chaos_rate_exponent(1, 4, 4.0 / 3.0), std::invalid_argument);
  CHECK_THROWS_AS(chaos_rate_exponent(2, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(chaos_rate_exponent(0.5, 1, 2), std::invalid_argument);
}

TEST_CASE("strong rate study") {
  StudyConfig cfg;
  cfg.model = frozen(0.0, 1.0, 0.5);
  cfg.levels = {2, 3, 4};
  cfg.n_fine = 6;
  cfg.particles = 8;
  cfg.replications = 3;
  const auto exact = strong_rate_study(cfg);
  CHECK(exact.exact_scheme);
  CHECK_FALSE(exact.fitted_slope);
  for (const auto& row : exact.rows) CHECK(row.error == 0.0);

  cfg.model = mean_field_ou(1.0, 1.0, InitialCondition::deterministic({1.0}));
  cfg.levels = {2, 3, 4, 5};
  cfg.n_fine = 8;
  cfg.particles = 32;
  cfg.replications = 4;
  const auto ou = strong_rate_study(cfg);
  REQUIRE(ou.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(ou.rows[i].size == std::ldexp(1.0, -cfg.levels[i]));
    CHECK(ou.rows[i].stderr_ > 0.0);
    if (i) CHECK(ou.rows[i].error < ou.rows[i - 1].error);
  }
  REQUIRE(ou.fitted_slope);
  CHECK(*ou.fitted_slope > 0.4);
  {
    ScopedThreadCount four(4);
    CHECK(same_rows(ou, strong_rate_study(cfg)));
  }

  cfg.levels = {3, 8};
  CHECK_THROWS_AS(strong_rate_study(cfg), std::invalid_argument);
  cfg.levels = {4, 3};
  CHECK_THROWS_AS(strong_rate_study(cfg), std::invalid_argument);
  cfg.levels = {3};
  cfg.p = 1.5;
  CHECK_THROWS_AS(strong_rate_study(cfg), std::invalid_argument);
}

TEST_CASE("blown-up replications are excluded") {
  StudyConfig cfg;
  // explodes only on paths whose first increment is positive
  cfg.model = separable_model(
      constant_kernel(1.0), constant_kernel(1.0),
      [](auto x, auto, auto out) { out[0] = x[0] > 0.0 ? std::nan("") : 0.0; }, constant_map(1.0), 1, 1,
      InitialCondition::deterministic({0.0}), 0.0, 1.0);
  cfg.levels = {1, 2};
  cfg.n_fine = 3;
  cfg.particles = 1;
  cfg.replications = 12;
  const auto rep = strong_rate_study(cfg);
  CHECK(rep.blown_up.size() > 0);
  CHECK(rep.blown_up.size() < 12);
}

TEST_CASE("chaos study") {
  StudyConfig cfg;
  cfg.model = mean_field_ou(1.0, 1.0, InitialCondition::deterministic({0.0}));
  cfg.reference = Reference::ou_oracle;
  cfg.Ns = {4, 16, 64};
  cfg.n_ref = 5;
  cfg.replications = 4;
  cfg.q = 5.0;
  const auto rep = chaos_study(cfg);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[1].error < rep.rows[0].error);
  CHECK(rep.rows[2].error < rep.rows[1].error);
  REQUIRE(rep.fitted_slope);
  CHECK(*rep.fitted_slope < -0.3);
  CHECK(*rep.theory_slope == -0.5);

  cfg.reference = Reference::large_n;
  cfg.Ns = {4, 16};
  cfg.n_ref_particles = 16;
  const auto self = chaos_study(cfg);
  CHECK(self.rows[1].error == 0.0);
  CHECK(self.rows[0].error > 0.0);
  cfg.n_ref_particles = 24;
  CHECK_THROWS_AS(chaos_study(cfg), std::invalid_argument);

  cfg.reference = Reference::ou_oracle;
  cfg.model = frozen(0.0, 1.0, 0.0);
  CHECK_THROWS_AS(chaos_study(cfg), std::invalid_argument);
}

TEST_CASE("moment study") {
  const auto store = make_brownian(4, 16, 1, 6);
  const auto still = moment_study(frozen(0.0, 0.0, 1.5), {2, 4, 6}, 16, 4.0, store);
  for (const auto& row : still.rows) CHECK(row.error == doctest::Approx(std::pow(1.5, 4.0)));
  CHECK(*still.ratio == doctest::Approx(1.0));
  const auto twice = moment_study(frozen(0.0, 0.0, 3.0), {2, 4, 6}, 16, 4.0, store);
  for (std::size_t i = 0; i < 3; ++i) CHECK(twice.rows[i].error == doctest::Approx(16.0 * still.rows[i].error));

  const auto ou = moment_study(mean_field_ou(1.0, 1.0, InitialCondition::deterministic({1.0})), {3, 4, 5, 6}, 16,
                               4.0, store);
  CHECK(*ou.ratio >= 1.0);
  CHECK(*ou.ratio < 4.0);
  CHECK_THROWS_AS(moment_study(frozen(0, 0, 1), {2}, 16, 1.0, store), std::invalid_argument);
}
