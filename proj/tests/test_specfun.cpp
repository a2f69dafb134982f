#include "doctest.h"

#include "dfa/quadrature.hpp"
#include "dfa/scalar.hpp"
#include "dfa/specfun.hpp"

using namespace dfa;

namespace {

// independent series oracle for J0, long double accumulation
long double j0_series(long double x) {
  long double term = 1, sum = 1;
  for (int j = 1; j < 200; ++j) {
    term *= -(x * x / 4.0L) / (j * (long double)j);
    sum += term;
    if (std::abs(term) < 1e-20L * std::abs(sum)) break;
  }
  return sum;
}

// integral-representation oracle: K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt,
// evaluated in scaled form e^{-x} int e^{-x(cosh t - 1)} cosh(nu t) dt so the
// quadrature tolerance stays relative even when K itself is ~1e-14
double k_integral(double nu, double x) {
  auto f = [&](double t) {
    return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
  };
  return std::exp(-x) * integrate_to_infinity(f, 0.0, 1e-13);
}

}  // namespace

TEST_CASE("quadrature sanity") {
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3).epsilon(1e-12));
  // endpoint singularity 1/sqrt(x)
  CHECK(tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-8));
  // log singularity
  CHECK(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pfq: 0F0 is exp") {
  PFQParams p;
  p.argument = Complex(0, 0.6);
  auto r = pfq(p);
  CHECK(std::abs(r.value - std::exp(Complex(0, 0.6))) < 1e-13);
}

TEST_CASE("pfq: 1F1(1/2;1;-2l^2) = I0(l^2) e^{-l^2}") {
  for (double l : {0.1, 0.5, 1.0, 2.0}) {
    PFQParams p;
    p.numerator = {Rational(1, 2)};
    p.denominator = {Rational(1)};
    p.argument = Complex(-2 * l * l, 0);
    const double expected = bessel_i0(l * l) * std::exp(-l * l);
    CHECK(std::abs(pfq(p).value.real() - expected) < 1e-10 * std::abs(expected));
  }
}

TEST_CASE("pfq: 1F1(1/2;1;4i l a) = J0(2 l |a|) e^{2i l a}") {
  const double l = 0.7, a = 0.4;
  PFQParams p;
  p.numerator = {Rational(1, 2)};
  p.denominator = {Rational(1)};
  p.argument = Complex(0, 4 * l * a);
  const Complex expected = bessel_j0(2 * l * a) * std::exp(Complex(0, 2 * l * a));
  CHECK(std::abs(pfq(p).value - expected) < 1e-12);
}

TEST_CASE("pfq: parameter validation and caps") {
  PFQParams p;
  p.numerator = {Rational(1, 2), Rational(1, 3)};
  p.denominator = {Rational(1)};
  CHECK_THROWS_AS(pfq(p), std::invalid_argument);  // p > q

  PFQParams bad;
  bad.numerator = {Rational(1, 2)};
  bad.denominator = {Rational(-2)};
  CHECK_THROWS_AS(pfq(bad), std::invalid_argument);

  PFQParams big;
  big.argument = Complex(-500, 0);
  CHECK_THROWS_AS(pfq(big), NonConvergenceError);
}

TEST_CASE("bessel j0/i0 basics and series oracle") {
  CHECK(bessel_j0(0) == 1.0);
  CHECK(bessel_i0(0) == 1.0);
  for (double x : {0.5, 2.0, 7.0}) {
    CHECK(std::abs(bessel_j0(x) - double(j0_series(x))) < 1e-12);
    // J0(x) = 0F1(; 1; -x^2/4)
    PFQParams p;
    p.denominator = {Rational(1)};
    p.argument = Complex(-x * x / 4, 0);
    CHECK(std::abs(bessel_j0(x) - pfq(p).value.real()) < 1e-12);
  }
}

TEST_CASE("bessel K: small-x behavior and integral oracle") {
  CHECK_THROWS_AS(bessel_k(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0, -1.0), std::domain_error);

  const double x = 1e-6;
  const double gamma = 0.57721566490153286;
  const double limit = -std::log(x / 2) - gamma;
  CHECK(std::abs(bessel_k(0, x) - limit) < 1e-4 * limit);

  CHECK(std::abs(bessel_k(0, 1.0) - k_integral(0, 1.0)) < 1e-8 * k_integral(0, 1.0));
  CHECK(std::abs(bessel_k(0.25, 1.0) - k_integral(0.25, 1.0)) <
        1e-8 * k_integral(0.25, 1.0));
  // deep into the asymptotic regime
  CHECK(std::abs(bessel_k(0, 30.0) - k_integral(0, 30.0)) <
        1e-8 * k_integral(0, 30.0));
  // close to the singular endpoint
  CHECK(std::abs(bessel_k(0.25, 1e-8) - k_integral(0.25, 1e-8)) <
        1e-8 * k_integral(0.25, 1e-8));
}

TEST_CASE("whittaker: K0 identity and asymptotics") {
  CHECK_THROWS_AS(whittaker_w(0, 0, -1.0), std::domain_error);
  for (double z : {0.1, 1.0, 5.0}) {
    const double expected = std::sqrt(z / M_PI) * bessel_k(0, z / 2);
    CHECK(std::abs(whittaker_w(0, 0, z) - expected) < 1e-7 * expected);
  }
  // W_{k,m}(z) ~ e^{-z/2} z^k as z -> inf
  const double z = 40;
  const double kappa = 0.25;
  const double ratio =
      whittaker_w(kappa, kappa, z) / (std::exp(-z / 2) * std::pow(z, kappa));
  CHECK(std::abs(ratio - 1.0) < 0.05);
}
