#include <doctest.h>

#include "vmv/quadrature.hpp"
#include "vmv/regression.hpp"

#include <cmath>
#include <vector>

using namespace vmv;

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (const GaussRule* rule : {&gauss8(), &gauss10()}) {
    const int exact_degree = 2 * static_cast<int>(rule->size()) - 1;
    for (int p = 0; p <= exact_degree; ++p) {
      const double v = gauss_integral([p](double x) { return std::pow(x, p); }, 0.0, 2.0, *rule);
      CHECK(v == doctest::Approx(std::pow(2.0, p + 1) / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("graded integral of endpoint power singularities") {
  for (double a : {-0.75, -0.5, -0.25, 0.0, 0.3, 1.0, 2.5}) {
    const QuadResult r = graded_integral([a](double u) { return std::pow(u, a); }, 0.7, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::pow(0.7, a + 1) / (a + 1)).epsilon(1e-12));
  }
}

TEST_CASE("graded integral of a smooth integrand") {
  const QuadResult r = graded_integral([](double u) { return std::exp(u); }, 1.0, 1e-13);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("non-integrable endpoint is flagged") {
  const QuadResult r = graded_integral([](double u) { return 1.0 / u; }, 1.0, 1e-10);
  CHECK_FALSE(r.converged);
  const QuadResult r2 = graded_integral([](double u) { return std::pow(u, -1.2); }, 1.0, 1e-10);
  CHECK_FALSE(r2.converged);
}

TEST_CASE("two-sided graded interval") {
  // int_0^1 s^-1/4 (1-s)^-1/4 ds = B(3/4, 3/4)
  const QuadResult r = graded_interval(
      [](double, double dl, double dr) { return std::pow(dl, -0.25) * std::pow(dr, -0.25); }, 0.0,
      1.0, 1e-13);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::beta(0.75, 0.75)).epsilon(1e-11));
}

TEST_CASE("lagrange basis is a partition of unity and interpolates nodes") {
  const GaussRule& rule = gauss8();
  std::vector<double> l(rule.size());
  for (double x : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    lagrange_basis(rule, x, l);
    double sum = 0.0;
    for (double v : l) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  lagrange_basis(rule, rule.nodes[3], l);
  CHECK(l[3] == doctest::Approx(1.0));
  CHECK(std::abs(l[2]) < 1e-14);
}

TEST_CASE("log-log fit") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  const LogLogFit f = fit_loglog(x, y);
  CHECK(f.identifiable);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));

  std::vector<double> zeros(4, 0.0);
  CHECK_FALSE(fit_loglog(x, zeros, 1e-14).identifiable);
}
