#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dfa/quadrature.hpp"
#include "dfa/rational.hpp"

namespace dfa {

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PFQParams {
  std::vector<Rational> numerator;
  std::vector<Rational> denominator;
  std::complex<double> argument;
};

struct PFQResult {
  std::complex<double> value;
  double abs_error = 0;  // size of the last accepted term
  int terms = 0;
};

namespace detail {

// Kahan-compensated accumulator in extended precision; the alternating
// arguments the deformation series produce (down to -32 lambda^2 (f,f))
// lose many digits to cancellation without it.
struct CompensatedSum {
  std::complex<long double> sum{0, 0}, carry{0, 0};
  void add(std::complex<long double> x) {
    const std::complex<long double> y = x - carry;
    const std::complex<long double> t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Generalized hypergeometric series pFq(a; b; z), p <= q (entire case).
/// Term recurrence with compensated long double summation; terminates when
/// the running term drops below rel_tol of the accumulated value.
///
/// The series converges for all z, but for large |z| with cancellation
/// (negative real part, or large imaginary part) the biggest intermediate
/// term exceeds the final value by a factor that eats the mantissa: the
/// result keeps roughly 19 - log10(max_term / |sum|) digits. Rather than
/// return junk the evaluation tracks that ratio and refuses when the
/// cancellation-limited relative error passes 1e-6; abs_error reports the
/// bound either way. A hard |z| <= 400 cap bounds the term count.
inline PFQResult pfq(const PFQParams& params, double rel_tol = 1e-13) {
  if (params.numerator.size() > params.denominator.size())
    throw std::invalid_argument("pfq: requires p <= q");
  for (const auto& b : params.denominator)
    if (b.den() == 1 && b.num() <= 0)
      throw std::invalid_argument("pfq: nonpositive integer denominator parameter");
  if (std::abs(params.argument) > 400.0)
    throw NonConvergenceError("pfq: argument cap exceeded");

  constexpr int max_terms = 100000;
  constexpr long double ulp = 1.1e-19L;  // long double mantissa
  const std::complex<long double> z(params.argument.real(),
                                    params.argument.imag());
  detail::CompensatedSum acc;
  std::complex<long double> term{1, 0};
  long double max_term = 1;
  acc.add(term);
  auto step_ratio = [&](int j) {
    std::complex<long double> ratio = z / (long double)(j + 1);
    for (const auto& a : params.numerator)
      ratio *= (long double)a.to_double() + j;
    for (const auto& b : params.denominator)
      ratio /= (long double)b.to_double() + j;
    return ratio;
  };
  for (int j = 0; j < max_terms; ++j) {
    term *= step_ratio(j);
    acc.add(term);
    max_term = std::max(max_term, std::abs(term));
    const long double scale = std::max((long double)1, std::abs(acc.sum));
    if (std::abs(term) < rel_tol * scale) {
      // one confirmation term guards against early zero-crossings
      if (std::abs(term * step_ratio(j + 1)) < rel_tol * scale) {
        const long double cancel_err = ulp * max_term;
        if (cancel_err > 1e-6L * std::abs(acc.sum))
          throw NonConvergenceError(
              "pfq: catastrophic cancellation, result would carry fewer than "
              "6 significant digits");
        PFQResult r;
        r.value = {double(acc.sum.real()), double(acc.sum.imag())};
        r.abs_error = double(std::abs(term) + cancel_err);
        r.terms = j + 2;
        return r;
      }
    }
  }
  throw NonConvergenceError("pfq: iteration cap exceeded");
}

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

inline double bessel_i0(double x) { return std::cyl_bessel_i(0.0, std::abs(x)); }

/// Modified Bessel K_nu for the orders the densities need (0 and 1/4).
inline double bessel_k(double nu, double x) {
  if (x <= 0) throw std::domain_error("bessel_k: requires x > 0");
  return std::cyl_bessel_k(nu, x);
}

/// Whittaker W_{kappa,mu}(z) through the integral representation
///   W = e^{-z/2} z^kappa / Gamma(mu - kappa + 1/2)
///       * int_0^inf t^{mu-kappa-1/2} (1 + t/z)^{mu+kappa-1/2} e^{-t} dt,
/// valid for mu - kappa + 1/2 > 0. The kappa = mu = (n-1)/4 cases sit on
/// the degenerate line where Kummer-function formulas break down, so the
/// integral is evaluated directly (substituting t = u^2 removes the
/// endpoint singularity).
inline double whittaker_w(double kappa, double mu, double z) {
  if (z <= 0) throw std::domain_error("whittaker_w: requires z > 0");
  const double s = mu - kappa + 0.5;
  if (s <= 0) throw std::domain_error("whittaker_w: requires mu - kappa + 1/2 > 0");
  const double q = mu + kappa - 0.5;
  // int_0^inf t^{s-1} (1+t/z)^q e^{-t} dt with t = u^2
  auto integrand = [&](double u) {
    return 2.0 * std::pow(u, 2 * s - 1) * std::pow(1.0 + u * u / z, q) *
           std::exp(-u * u);
  };
  const double integral = integrate_to_infinity(integrand, 0.0, 1e-13);
  return std::exp(-z / 2) * std::pow(z, kappa) * integral / std::tgamma(s);
}

}  // namespace dfa
