#pragma once

#include <cmath>
#include <complex>

#include "dfa/rational.hpp"

namespace dfa {

/// Traits binding the algebra templates to a coefficient field.
/// Two instantiations are supported: std::complex<double> (numeric mode,
/// simplification prunes below a tolerance) and RationalComplex (exact
/// mode, used by the property suites so algebraic laws hold identically).
template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<std::complex<double>> {
  using scalar = std::complex<double>;
  using real = double;

  static constexpr bool exact = false;
  static constexpr double prune_tol = 1e-12;

  static scalar zero() { return {0.0, 0.0}; }
  static scalar one() { return {1.0, 0.0}; }
  static scalar i() { return {0.0, 1.0}; }
  static scalar conj(const scalar& z) { return std::conj(z); }
  static bool is_negligible(const scalar& z) { return std::abs(z) <= prune_tol; }
  static real from_rational(const Rational& r) { return r.to_double(); }
  static scalar from_real(real x) { return {x, 0.0}; }
  static scalar div_int(const scalar& z, long long n) { return z / double(n); }
};

template <>
struct scalar_traits<RationalComplex> {
  using scalar = RationalComplex;
  using real = Rational;

  static constexpr bool exact = true;

  static scalar zero() { return {}; }
  static scalar one() { return {Rational(1)}; }
  static scalar i() { return RationalComplex::i(); }
  static scalar conj(const scalar& z) { return z.conj(); }
  static bool is_negligible(const scalar& z) { return z.is_zero(); }
  static Rational from_rational(const Rational& r) { return r; }
  static scalar from_real(const Rational& x) { return {x}; }
  static scalar div_int(const scalar& z, long long n) {
    return z * RationalComplex(Rational(1, n));
  }
};

using Complex = std::complex<double>;

}  // namespace dfa
