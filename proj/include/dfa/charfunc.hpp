#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "dfa/quadrature.hpp"
#include "dfa/scalar.hpp"
#include "dfa/specfun.hpp"

namespace dfa {

using CharFn = std::function<Complex(double)>;
using DensityFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// closed-form characteristic functions

/// chi_0: Gaussian, variance (f,f).
inline Complex char_free(double lambda, double ff) {
  return std::exp(Complex(-0.5 * lambda * lambda * ff, 0));
}

/// chi_d: Gaussian displaced to mean 2 zeta(f).
inline Complex char_displaced(double lambda, double ff, double zf) {
  return std::exp(Complex(-0.5 * lambda * lambda * ff, 2 * lambda * zf));
}

/// chi_c: mixture over powers of the displacement, weights |xi_k|^2 / N.
inline Complex char_mixture(double lambda, double ff, double zf,
                            const std::vector<Complex>& xi) {
  double n = 0;
  for (const auto& x : xi) n += std::norm(x);
  if (n == 0) throw std::invalid_argument("char_mixture: all-zero xi");
  Complex sum{0, 0};
  for (std::size_t k = 0; k < xi.size(); ++k)
    sum += std::norm(xi[k]) * char_displaced(lambda, ff, double(k) * zf);
  return sum / n;
}

inline double gaussian_density(double x, double mean, double variance) {
  return std::exp(-(x - mean) * (x - mean) / (2 * variance)) /
         std::sqrt(2 * std::numbers::pi * variance);
}

/// rho_c: matching Gaussian mixture at means 2 k zeta(f).
inline double dens_mixture(double x, double ff, double zf,
                           const std::vector<Complex>& xi) {
  double n = 0;
  for (const auto& w : xi) n += std::norm(w);
  if (n == 0) throw std::invalid_argument("dens_mixture: all-zero xi");
  double sum = 0;
  for (std::size_t k = 0; k < xi.size(); ++k)
    sum += std::norm(xi[k]) * gaussian_density(x, 2 * double(k) * zf, ff);
  return sum / n;
}

/// chi_C: n-measurement mixture over distinct functionals. F enters the
/// quadratic form through its real symmetric part (complex Hermitian Gram
/// matrices contribute a real form only via that part).
inline Complex char_multi_displaced(const Eigen::VectorXd& lambda,
                                    const Eigen::MatrixXd& f_sym,
                                    const std::vector<Eigen::VectorXd>& zeta_of_f,
                                    const std::vector<Complex>& xi) {
  if (f_sym.rows() != lambda.size())
    throw std::invalid_argument("char_multi_displaced: dimension mismatch");
  double n = 0;
  for (const auto& x : xi) n += std::norm(x);
  if (n == 0) throw std::invalid_argument("char_multi_displaced: all-zero xi");
  const double quad = lambda.dot(f_sym * lambda);
  Complex sum{0, 0};
  for (std::size_t m = 0; m < xi.size(); ++m) {
    if (int(zeta_of_f[m].size()) != lambda.size())
      throw std::invalid_argument("char_multi_displaced: zeta table mismatch");
    sum += std::norm(xi[m]) *
           std::exp(Complex(-0.5 * quad, 2 * lambda.dot(zeta_of_f[m])));
  }
  return sum / n;
}

/// rho_C: shifted multivariate Gaussian mixture, shifts 2 zeta_m(f_j).
inline double dens_multi_displaced(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& f_sym,
                                   const std::vector<Eigen::VectorXd>& zeta_of_f,
                                   const std::vector<Complex>& xi) {
  const int n = int(x.size());
  double norm = 0;
  for (const auto& w : xi) norm += std::norm(w);
  const double det = f_sym.determinant();
  const Eigen::MatrixXd inv = f_sym.inverse();
  const double front =
      1.0 / std::sqrt(std::pow(2 * std::numbers::pi, n) * det);
  double sum = 0;
  for (std::size_t m = 0; m < xi.size(); ++m) {
    Eigen::VectorXd shifted = x - 2.0 * zeta_of_f[m];
    sum += std::norm(xi[m]) * front * std::exp(-0.5 * shifted.dot(inv * shifted));
  }
  return sum / norm;
}

/// chi_J: Gaussian times J0(2 lambda |alpha|).
inline Complex char_defI(double lambda, double ff, double abs_alpha) {
  return char_free(lambda, ff) * bessel_j0(2 * lambda * abs_alpha);
}

/// rho_J: Gaussian convolved with the arcsine density on |u| < 2|alpha|
/// (kernel 1/sqrt(4 alpha^2 - u^2), normalized by 1/pi). Substituting
/// u = 2|alpha| sin(theta) turns it into a smooth integral.
inline double dens_defI(double x, double ff, double abs_alpha,
                        double tol = 1e-10) {
  if (abs_alpha == 0) return gaussian_density(x, 0, ff);
  auto integrand = [&](double theta) {
    return gaussian_density(x - 2 * abs_alpha * std::sin(theta), 0, ff);
  };
  return adaptive_simpson(integrand, -std::numbers::pi / 2, std::numbers::pi / 2,
                          tol) /
         std::numbers::pi;
}

/// Tabulated pFq parameters for i(a-a^dag) + alpha (d+d^dag)^k, k = 0..6.
/// Odd k: (k-1) numerators (2m-1)/(2k) skipping 1/2, denominators m/k and 1,
/// argument -4^{k-1} (lambda alpha)^2. Even k >= 2: numerators (2m-1)/k for
/// m <= k/2, denominators m/(k/2) and 1, argument 4^{k/2} i lambda alpha.
inline PFQParams defI_power_pfq(int k, double lambda, Complex alpha) {
  if (k < 0 || k > 6) throw std::invalid_argument("defI_power: k outside table");
  PFQParams p;
  if (k == 0) {
    p.argument = 2.0 * Complex(0, 1) * lambda * alpha;
    return p;
  }
  if (k % 2 == 1) {
    for (int m = 1; m <= k; ++m)
      if (2 * m - 1 != k) p.numerator.emplace_back(2 * m - 1, 2 * k);
    for (int m = 1; m < k; ++m) p.denominator.emplace_back(m, k);
    p.denominator.emplace_back(1);
    p.argument = -std::pow(4.0, k - 1) * lambda * lambda * alpha * alpha;
  } else {
    for (int m = 1; m <= k / 2; ++m) p.numerator.emplace_back(2 * m - 1, k);
    for (int m = 1; m < k / 2; ++m) p.denominator.emplace_back(m, k / 2);
    p.denominator.emplace_back(1);
    p.argument = std::pow(4.0, k / 2) * Complex(0, 1) * lambda * alpha;
  }
  return p;
}

inline Complex char_defI_power(double lambda, double ff, Complex alpha, int k,
                               double rel_tol = 1e-13) {
  return char_free(lambda, ff) * pfq(defI_power_pfq(k, lambda, alpha), rel_tol).value;
}

/// Tabulated kFk parameters for i(a-a^dag)(d+d^dag)^k: numerators
/// (2m-1)/(2k) for m = 1..k, denominators m/k for m < k and 1, argument
/// -2 * 4^{k-1} lambda^2 (f,f).
inline PFQParams defII_power_pfq(int k, double lambda, double ff) {
  if (k < 1 || k > 6) throw std::invalid_argument("defII_power: k outside table");
  PFQParams p;
  for (int m = 1; m <= k; ++m) p.numerator.emplace_back(2 * m - 1, 2 * k);
  for (int m = 1; m < k; ++m) p.denominator.emplace_back(m, k);
  p.denominator.emplace_back(1);
  p.argument = -2.0 * std::pow(4.0, k - 1) * lambda * lambda * ff;
  return p;
}

inline Complex char_defII_power(double lambda, double ff, int k,
                                double rel_tol = 1e-13) {
  return pfq(defII_power_pfq(k, lambda, ff), rel_tol).value;
}

/// n-measurement chi_P: 1F1(1/2; 1; -2 lambda^T F lambda).
inline Complex char_defII_multi(const Eigen::VectorXd& lambda,
                                const Eigen::MatrixXd& f_sym) {
  PFQParams p;
  p.numerator.emplace_back(1, 2);
  p.denominator.emplace_back(1);
  p.argument = -2.0 * lambda.dot(f_sym * lambda);
  return pfq(p).value;
}

// ---------------------------------------------------------------------------
// closed-form densities

/// rho_P: exp(-x^2/16ff) K0(x^2/16ff) / sqrt(8 pi^3 ff). Integrable log
/// singularity at x = 0.
inline double dens_defII(double x, double ff) {
  if (x == 0) throw std::domain_error("dens_defII: singular at x = 0");
  const double z = x * x / (16 * ff);
  return std::exp(-z) * bessel_k(0, z) /
         std::sqrt(8 * std::pow(std::numbers::pi, 3) * ff);
}

/// rho_P2: exp(-x^2/64ff) K_{1/4}(x^2/64ff) / sqrt(64 pi^3 ff).
inline double dens_defII_k2(double x, double ff) {
  if (x == 0) throw std::domain_error("dens_defII_k2: singular at x = 0");
  const double z = x * x / (64 * ff);
  return std::exp(-z) * bessel_k(0.25, z) /
         std::sqrt(64 * std::pow(std::numbers::pi, 3) * ff);
}

/// n-measurement density: with q = x^T F^{-1} x,
///   exp(-q/16) W_{(n-1)/4,(n-1)/4}(q/8)
///   / (2^{(3n-3)/4} q^{(n+1)/4} sqrt(pi^{n+1} det F)).
inline double dens_defII_multi(const Eigen::VectorXd& x,
                               const Eigen::MatrixXd& f_sym) {
  const int n = int(x.size());
  const double det = f_sym.determinant();
  if (std::abs(det) < 1e-300)
    throw std::invalid_argument("dens_defII_multi: singular Gram matrix");
  const double q = x.dot(f_sym.inverse() * x);
  if (q <= 0) throw std::domain_error("dens_defII_multi: singular at x = 0");
  const double kappa = (n - 1) / 4.0;
  return std::exp(-q / 16) * whittaker_w(kappa, kappa, q / 8) /
         (std::pow(2.0, (3.0 * n - 3) / 4) * std::pow(q, (n + 1) / 4.0) *
          std::sqrt(std::pow(std::numbers::pi, n + 1) * det));
}

/// Closed n = 2 form: exp(-q/8) / sqrt(8 pi^3 q det F).
inline double dens_defII_2d_closed(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& f_sym) {
  const double det = f_sym.determinant();
  const double q = x.dot(f_sym.inverse() * x);
  if (q <= 0) throw std::domain_error("dens_defII_2d_closed: singular at x = 0");
  return std::exp(-q / 8) / std::sqrt(8 * std::pow(std::numbers::pi, 3) * q * det);
}

// ---------------------------------------------------------------------------
// numerical cross-verification machinery

/// Fourier transform int e^{i lambda x} rho(x) dx with singularity-aware
/// segmentation: the unit segments touching zero (where every singular
/// density here lives) go through tanh-sinh, the rest through adaptive
/// Simpson, outward until the contributions die off.
inline Complex density_char(const DensityFn& density, double lambda,
                            double x_max, double tol = 1e-9) {
  auto f = [&](double x) {
    return std::exp(Complex(0, lambda * x)) * density(x);
  };
  Complex total = tanh_sinh(f, 0.0, 1.0, tol / 8) + tanh_sinh(f, -1.0, 0.0, tol / 8);
  for (int side : {+1, -1}) {
    int quiet = 0;
    for (double lo = 1; lo < x_max; lo += 1) {
      const Complex piece = side > 0 ? adaptive_simpson(f, lo, lo + 1, tol / 8)
                                     : adaptive_simpson(f, -lo - 1, -lo, tol / 8);
      total += piece;
      if (std::abs(piece) < tol / 4) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
    }
  }
  return total;
}

/// Max over the grid of |FT(density)(lambda) - char_fn(lambda)|.
inline double verify_fourier(const CharFn& char_fn, const DensityFn& density,
                             const std::vector<double>& lambda_grid,
                             double x_max, double tol = 1e-9) {
  double max_err = 0;
  for (double lam : lambda_grid) {
    const Complex ft = density_char(density, lam, x_max, tol);
    max_err = std::max(max_err, std::abs(ft - char_fn(lam)));
  }
  return max_err;
}

/// 2-d characteristic function of a radial density g(r) at radial frequency
/// s: 2 pi int_0^inf g(r) J0(s r) r dr (the Hankel-transform reduction of
/// the radially symmetric Fourier integral).
inline double radial_char_2d(const DensityFn& radial_density, double s,
                             double tol = 1e-10) {
  auto f = [&](double r) { return radial_density(r) * bessel_j0(s * r) * r; };
  const double core = tanh_sinh(f, 0.0, 1.0, tol / 4);
  const double rest = integrate_to_infinity(f, 1.0, tol / 4);
  return 2 * std::numbers::pi * (core + rest);
}

/// P(X > t) for a density with at worst an integrable singularity at 0.
inline double upper_tail(const DensityFn& density, double t, double tol = 1e-12) {
  auto f = [&](double x) { return density(x); };
  if (t <= 0) throw std::invalid_argument("upper_tail: requires t > 0");
  return integrate_to_infinity(f, t, tol);
}

inline double gaussian_upper_tail(double t, double variance) {
  return 0.5 * std::erfc(t / std::sqrt(2 * variance));
}

struct MomentTable {
  std::vector<double> value;  // value[j] = j-th moment, j = 0..order
  std::vector<double> error;  // Richardson-residual estimate per entry
  bool noise_floor_exceeded = false;
};

/// Moments from derivatives of the characteristic function at zero:
/// central finite differences, Richardson-extrapolated over three step
/// halvings; moment_j = chi^{(j)}(0) / i^j.
inline MomentTable moments_from_char(const CharFn& char_fn, int order,
                                     double step = 0.1) {
  if (order > 12) throw std::invalid_argument("moments_from_char: order > 12");
  MomentTable t;
  t.value.resize(order + 1);
  t.error.resize(order + 1);
  t.value[0] = char_fn(0.0).real();
  t.error[0] = 0;
  for (int j = 1; j <= order; ++j) {
    std::vector<long double> binom(j + 1);
    binom[0] = 1;
    for (int i = 1; i <= j; ++i)
      binom[i] = binom[i - 1] * (j - i + 1) / i;
    auto diff = [&](double h) {
      Complex acc{0, 0};
      for (int i = 0; i <= j; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        acc += sign * double(binom[i]) * char_fn((j / 2.0 - i) * h);
      }
      return acc / std::pow(h, j);
    };
    // Richardson on the O(h^2) error series
    Complex d0 = diff(step), d1 = diff(step / 2), d2 = diff(step / 4);
    Complex r1 = (4.0 * d1 - d0) / 3.0;
    Complex r2 = (4.0 * d2 - d1) / 3.0;
    Complex rr = (16.0 * r2 - r1) / 15.0;
    const Complex moment = rr / std::pow(Complex(0, 1), j);
    t.value[j] = moment.real();
    t.error[j] = std::abs(rr - r2) + std::abs(moment.imag());
    if (t.error[j] > std::abs(t.value[j]) && std::abs(t.value[j]) > 1e-8)
      t.noise_floor_exceeded = true;
  }
  return t;
}

// ---------------------------------------------------------------------------
// exact Taylor coefficients of the closed forms (the symbolic bridge)

/// Truncated power series in lambda, complex coefficients.
struct PowerSeries {
  std::vector<Complex> c;

  explicit PowerSeries(int order) : c(order + 1, Complex{0, 0}) {}
  int order() const { return int(c.size()) - 1; }

  static PowerSeries exp_linear(Complex g, int order) {
    // e^{g lambda}
    PowerSeries s(order);
    Complex t{1, 0};
    for (int n = 0; n <= order; ++n) {
      s.c[n] = t;
      t *= g / double(n + 1);
    }
    return s;
  }
  static PowerSeries exp_quadratic(Complex g, int order) {
    // e^{g lambda^2}
    PowerSeries s(order);
    Complex t{1, 0};
    for (int m = 0; 2 * m <= order; ++m) {
      s.c[2 * m] = t;
      t *= g / double(m + 1);
    }
    return s;
  }
  /// pFq(a; b; g lambda^power) as a series in lambda.
  static PowerSeries pfq_series(const std::vector<Rational>& a,
                                const std::vector<Rational>& b, Complex g,
                                int power, int order) {
    PowerSeries s(order);
    Complex term{1, 0};
    for (int j = 0; j * power <= order; ++j) {
      s.c[j * power] = term;
      Complex ratio = g / double(j + 1);
      for (const auto& x : a) ratio *= x.to_double() + j;
      for (const auto& x : b) ratio /= x.to_double() + j;
      term *= ratio;
    }
    return s;
  }

  PowerSeries operator*(const PowerSeries& o) const {
    PowerSeries r(order());
    for (int i = 0; i <= order(); ++i)
      for (int j = 0; i + j <= order(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  PowerSeries& operator+=(const PowerSeries& o) {
    for (int i = 0; i <= order(); ++i) c[i] += o.c[i];
    return *this;
  }
  PowerSeries scaled(Complex s) const {
    PowerSeries r = *this;
    for (auto& x : r.c) x *= s;
    return r;
  }

  /// moment_n = n! c_n / i^n
  std::vector<Complex> moments() const {
    std::vector<Complex> m(c.size());
    double fact = 1;
    for (int n = 0; n <= order(); ++n) {
      if (n > 0) fact *= n;
      m[n] = c[n] * fact / std::pow(Complex(0, 1), n);
    }
    return m;
  }
};

inline PowerSeries taylor_char_free(double ff, int order) {
  return PowerSeries::exp_quadratic({-0.5 * ff, 0}, order);
}
inline PowerSeries taylor_char_displaced(double ff, double zf, int order) {
  return taylor_char_free(ff, order) * PowerSeries::exp_linear({0, 2 * zf}, order);
}
inline PowerSeries taylor_char_mixture(double ff, double zf,
                                       const std::vector<Complex>& xi, int order) {
  double n = 0;
  for (const auto& x : xi) n += std::norm(x);
  PowerSeries s(order);
  for (std::size_t k = 0; k < xi.size(); ++k)
    s += taylor_char_displaced(ff, double(k) * zf, order)
             .scaled(std::norm(xi[k]) / n);
  return s;
}
inline PowerSeries taylor_char_defI(double ff, double abs_alpha, int order) {
  // J0(2 lambda a) = 0F1(; 1; -(lambda a)^2)
  auto j0 = PowerSeries::pfq_series({}, {Rational(1)},
                                    {-abs_alpha * abs_alpha, 0}, 2, order);
  return taylor_char_free(ff, order) * j0;
}
inline PowerSeries taylor_char_defI_power(double ff, Complex alpha, int k,
                                          int order) {
  PFQParams shape = defI_power_pfq(k, 1.0, 1.0);  // parameter lists only
  PowerSeries f(order);
  if (k == 0) {
    f = PowerSeries::exp_linear(2.0 * Complex(0, 1) * alpha, order);
  } else if (k % 2 == 1) {
    f = PowerSeries::pfq_series(shape.numerator, shape.denominator,
                                -std::pow(4.0, k - 1) * alpha * alpha, 2, order);
  } else {
    f = PowerSeries::pfq_series(shape.numerator, shape.denominator,
                                std::pow(4.0, k / 2) * Complex(0, 1) * alpha, 1,
                                order);
  }
  return taylor_char_free(ff, order) * f;
}
inline PowerSeries taylor_char_defII_power(double ff, int k, int order) {
  PFQParams shape = defII_power_pfq(k, 1.0, 1.0);
  return PowerSeries::pfq_series(shape.numerator, shape.denominator,
                                 {-2.0 * std::pow(4.0, k - 1) * ff, 0}, 2, order);
}

}  // namespace dfa
