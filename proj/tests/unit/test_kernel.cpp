#include <doctest.h>

#include "oracles.hpp"
#include "vmv/errors.hpp"
#include "vmv/kernel.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace vmv;

namespace {

std::vector<Kernel> builtin_kernels() {
  return {constant_kernel(0.0),     constant_kernel(2.0),       power_kernel(0.1),
          power_kernel(0.45),       exp_conv_kernel(1.0, 0.25), exp_conv_kernel(0.0, 0.4),
          fbm_kernel(0.3),          fbm_kernel(0.5),            fbm_kernel(0.7)};
}

std::vector<double> dyadic_lags(int from, int to) {
  std::vector<double> lags;
  for (int e = from; e <= to; ++e) lags.push_back(std::ldexp(1.0, -e));
  return lags;
}

}  // namespace

TEST_CASE("constant kernel") {
  CHECK(constant_kernel(0.0)(1.0, 0.3) == 0.0);
  CHECK(constant_kernel(1.0)(0.7, 0.2) == 1.0);
  const double times[] = {1.0};
  CHECK(integrability_probe(constant_kernel(2.5), 1.0, times).constant_estimate ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(constant_kernel(-1.0), std::invalid_argument);
  CHECK_FALSE(constant_kernel(1.0).meta().singular_at_diagonal);
}

TEST_CASE("power kernel") {
  const Kernel k = power_kernel(0.25);
  CHECK(k(1.0, 0.75) == doctest::Approx(std::pow(0.25, -0.25)).epsilon(1e-15));
  CHECK(k(1.0, 0.75) == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(k.meta().singular_at_diagonal);
  CHECK(*k.meta().declared_gamma == doctest::Approx(0.25));
  CHECK_THROWS_AS(power_kernel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(power_kernel(0.5), std::invalid_argument);
  CHECK_THROWS_AS(power_kernel(-0.1), std::invalid_argument);

  // int_0^1 (1-s)^-1/2 ds = 2
  const double times[] = {1.0};
  CHECK(integrability_probe(k, 2.0, times).constant_estimate == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fbm kernel at H = 1/2 is the Brownian kernel") {
  CHECK(fbm_constant(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  const Kernel k = fbm_kernel(0.5);
  for (double s : {0.0001, 0.2, 0.5, 0.999}) CHECK(k(1.0, s) == 1.0);
  CHECK_FALSE(k.meta().singular_at_diagonal);
  CHECK_THROWS_AS(fbm_kernel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(fbm_kernel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(fbm_kernel(0.3, 0.0), std::invalid_argument);
}

TEST_CASE("fbm kernel matches tanh-sinh oracle") {
  for (double H : {0.2, 0.3, 0.7, 0.85}) {
    const Kernel k = fbm_kernel(H, 1e-10);
    for (auto [t, s] : {std::pair{1.0, 0.5}, {0.6, 0.59}, {0.3, 0.01}, {1.0, 0.001}, {0.9, 0.4}}) {
      const double ref = oracle::fbm_kernel(H, t, s);
      CHECK(k(t, s) == doctest::Approx(ref).epsilon(1e-8));
    }
    CHECK(k.meta().singular_at_diagonal == (H < 0.5));
    CHECK(k.meta().singular_at_zero);
  }
  CHECK(*fbm_kernel(0.3).meta().declared_gamma == doctest::Approx(0.6));
}

TEST_CASE("fbm kernel converges as quad_tol shrinks") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double H : {0.3, 0.7}) {
    double tol = 1e-6;
    for (int round = 0; round < 3; ++round) {
      const Kernel coarse = fbm_kernel(H, tol);
      const Kernel fine = fbm_kernel(H, tol / 2);
      for (int p = 0; p < 20; ++p) {
        const double t = 0.05 + 0.95 * unif(gen);
        const double s = t * unif(gen) + 1e-6;
        CHECK(std::abs(coarse(t, s) - fine(t, s)) < tol);
      }
      tol /= 2;
    }
  }
}

TEST_CASE("fbm l2_tail exponent between two lags") {
  // independent oracle: tanh-sinh of the squared oracle kernel over the tail
  const double H = 0.3;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto tail = [&](double tp) {
    return ts.integrate([&](double s) { double v = oracle::fbm_kernel(H, tp, s); return v * v; },
                        0.5, tp, 1e-11);
  };
  const double oracle_exponent = std::log(tail(0.6) / tail(0.51)) / std::log(0.1 / 0.01);
  CHECK(oracle_exponent == doctest::Approx(0.6).epsilon(0.05));

  const double lags[] = {0.01, 0.1};
  const ProbeReport rep = hoelder_probe(fbm_kernel(H), ProbeMode::l2_tail, 0.5, lags);
  CHECK(rep.exponent_estimate == doctest::Approx(oracle_exponent).epsilon(1e-5));
}

TEST_CASE("exp_conv kernel") {
  const Kernel reduced = exp_conv_kernel(0.0, 0.3);
  const Kernel pw = power_kernel(0.3);
  for (double s : {0.0, 0.2, 0.9, 0.99}) CHECK(reduced(1.0, s) == pw(1.0, s));

  const double v = exp_conv_kernel(1.0, 0.25)(1.0, 0.75);
  CHECK(v == doctest::Approx(std::exp(-0.25) * std::pow(0.25, -0.25)).epsilon(1e-15));
  CHECK(v == doctest::Approx(1.1014).epsilon(1e-4));

  double prev = exp_conv_kernel(0.0, 0.25)(0.8, 0.3);
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    const double cur = exp_conv_kernel(lambda, 0.25)(0.8, 0.3);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(exp_conv_kernel(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("builtin kernels are finite and nonnegative on the open triangle") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const Kernel& k : builtin_kernels()) {
    for (int p = 0; p < 50; ++p) {
      double a = unif(gen), b = unif(gen);
      if (a == b) continue;
      const double t = std::max(a, b), s = std::min(a, b) + 1e-9;
      if (s >= t) continue;
      const double v = k(t, s);
      CHECK(std::isfinite(v));
      if (k.meta().nonnegative) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("integrability probe") {
  const double half_one[] = {0.5, 1.0};
  const ProbeReport c = integrability_probe(constant_kernel(1.0), 2.0, half_one);
  CHECK(c.constant_estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.samples.size() == 2);

  const double one[] = {1.0};
  CHECK(integrability_probe(power_kernel(0.25), 1.0, one).constant_estimate ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK_THROWS_AS(integrability_probe(power_kernel(0.25), 4.0, one), NonIntegrableError);
  CHECK_THROWS_AS(integrability_probe(power_kernel(0.25), 0.5, one), std::invalid_argument);
  const double outside[] = {1.5};
  CHECK_THROWS_AS(integrability_probe(power_kernel(0.25), 1.0, outside), std::invalid_argument);

  const double grid[] = {0.25, 0.5, 0.75, 1.0};
  for (const Kernel& k : builtin_kernels()) {
    const ProbeReport r = integrability_probe(k, 1.0, grid);
    CHECK(std::isfinite(r.constant_estimate));
    CHECK(r.r_squared >= 0.0);
    CHECK(r.r_squared <= 1.0);
  }
}

TEST_CASE("hoelder probe") {
  const auto lags = dyadic_lags(4, 10);

  const ProbeReport flat = hoelder_probe(constant_kernel(1.0), ProbeMode::l1_shift, 0.5, lags);
  CHECK_FALSE(flat.identifiable);
  CHECK(flat.samples.size() == lags.size());

  for (double alpha : {0.1, 0.25, 0.4}) {
    const auto two_decades = dyadic_lags(3, 10);
    const ProbeReport r = hoelder_probe(power_kernel(alpha), ProbeMode::l2_tail, 0.3, two_decades, 1e-8);
    CHECK(r.exponent_estimate == doctest::Approx(1.0 - 2.0 * alpha).epsilon(0.1));
    CHECK(r.r_squared > 0.999);
  }
  // closed form: int_t^t' (t'-s)^-1/2 ds = 2 lag^1/2
  const ProbeReport p = hoelder_probe(power_kernel(0.25), ProbeMode::l2_tail, 0.5, lags);
  CHECK(p.exponent_estimate == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.constant_estimate == doctest::Approx(2.0).epsilon(1e-9));

  const ProbeReport f = hoelder_probe(fbm_kernel(0.7), ProbeMode::l2_tail, 0.5, lags);
  CHECK(std::abs(f.exponent_estimate - 1.4) < 0.05);

  // shift moduli of the power kernel are positive and shrink with the lag
  const ProbeReport s1 = hoelder_probe(power_kernel(0.25), ProbeMode::l1_shift, 0.5, lags);
  const ProbeReport s2 = hoelder_probe(power_kernel(0.25), ProbeMode::l2_shift, 0.5, lags);
  CHECK(s1.exponent_estimate > 0.0);
  CHECK(s2.exponent_estimate > 0.0);

  const double one_lag[] = {0.1};
  CHECK_THROWS_AS(hoelder_probe(power_kernel(0.25), ProbeMode::l2_tail, 0.5, one_lag),
                  std::invalid_argument);
  const double too_long[] = {0.1, 0.7};
  CHECK_THROWS_AS(hoelder_probe(power_kernel(0.25), ProbeMode::l2_tail, 0.5, too_long),
                  std::invalid_argument);
}
