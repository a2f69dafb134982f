#pragma once

#include <random>
#include <string>

#include "dfa/charfunc.hpp"
#include "dfa/parser.hpp"
#include "dfa/state.hpp"

namespace dfa {

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0;  // worst numeric deviation observed, 0 for exact checks
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string name, bool pass, double residual = 0,
           std::string detail = "") {
    checks.push_back({std::move(name), pass, residual, std::move(detail)});
  }
};

namespace verify_detail {

struct ExactGen {
  std::mt19937 rng;
  explicit ExactGen(unsigned seed) : rng(seed) {}

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }
  Rational rational(int max_num = 3, int max_den = 3) {
    return Rational(uniform(-max_num, max_num), uniform(1, max_den));
  }
  RationalComplex coeff() { return {rational(), rational()}; }

  ModelContext<RationalComplex> model(int nf, int nz) {
    ModelContext<RationalComplex> m;
    for (int i = 0; i < nf; ++i) m.test_functions.push_back("f" + std::to_string(i));
    m.gram.assign(nf, std::vector<RationalComplex>(nf));
    for (int i = 0; i < nf; ++i) {
      m.gram[i][i] = RationalComplex(Rational(uniform(1, 3)));
      for (int j = i + 1; j < nf; ++j) {
        RationalComplex z = coeff();
        m.gram[i][j] = z;
        m.gram[j][i] = z.conj();
      }
    }
    for (int zi = 0; zi < nz; ++zi) {
      m.zeta_basis.push_back("z" + std::to_string(zi));
      std::vector<Rational> row;
      for (int i = 0; i < nf; ++i) row.push_back(rational(2, 2));
      m.zeta_values.push_back(std::move(row));
    }
    return m;
  }

  Polynomial<RationalComplex> word(const ModelContext<RationalComplex>& m,
                                   int max_degree) {
    WordKey k;
    int budget = uniform(0, max_degree);
    int nc = uniform(0, budget);
    for (int i = 0; i < nc; ++i)
      k.creators.push_back(uniform(0, int(m.num_functions()) - 1));
    std::sort(k.creators.begin(), k.creators.end());
    int na = uniform(0, budget - nc);
    for (int i = 0; i < na; ++i)
      k.annihilators.push_back(uniform(0, int(m.num_functions()) - 1));
    std::sort(k.annihilators.begin(), k.annihilators.end());
    k.displacement = DisplacementExponent(m.num_zetas());
    if (budget - nc - na > 0)
      for (auto& c : k.displacement.coeffs) c = rational(2, 2);
    RationalComplex c = coeff();
    if (c.is_zero()) c = RationalComplex(Rational(1));
    return Polynomial<RationalComplex>::word(std::move(k), c);
  }

  Polynomial<RationalComplex> poly(const ModelContext<RationalComplex>& m,
                                   int max_degree, int max_terms = 3) {
    Polynomial<RationalComplex> p;
    int n = uniform(1, max_terms);
    for (int i = 0; i < n; ++i) p += word(m, max_degree);
    return p;
  }
};

}  // namespace verify_detail

/// Randomized algebraic laws in exact-coefficient mode plus the
/// non-associativity demonstration for the formal number operator.
inline SuiteReport run_algebra_suite(int instances = 1000, unsigned seed = 1) {
  using PQ = Polynomial<RationalComplex>;
  SuiteReport report{"algebra"};
  verify_detail::ExactGen g(seed);

  int assoc_fail = 0, adj_fail = 0, group_fail = 0, confluence_fail = 0;
  for (int it = 0; it < instances; ++it) {
    auto m = g.model(g.uniform(2, 3), g.uniform(1, 2));
    auto a = g.poly(m, 4), b = g.poly(m, 4), c = g.poly(m, 4);
    if (multiply(multiply(a, b, m), c, m) != multiply(a, multiply(b, c, m), m))
      ++assoc_fail;
    if (adjoint(multiply(a, b, m)) != multiply(adjoint(b), adjoint(a), m))
      ++adj_fail;

    DisplacementExponent k1(m.num_zetas()), k2(m.num_zetas());
    for (auto& x : k1.coeffs) x = g.rational();
    for (auto& x : k2.coeffs) x = g.rational();
    auto prod =
        normal_form(RationalComplex(Rational(1)), {gen_d(k1), gen_d(k2)}, m);
    WordKey expected;
    expected.displacement = k1 + k2;
    if (prod != PQ::word(expected, RationalComplex(Rational(1)))) ++group_fail;

    // confluence: split reduction vs left-to-right reduction
    auto w = g.word(m, 3);
    auto v = g.word(m, 3);
    auto u = g.word(m, 3);
    auto left = multiply(multiply(w, v, m), u, m);
    auto right = multiply(w, multiply(v, u, m), m);
    if (left != right) ++confluence_fail;
  }
  report.add("associativity", assoc_fail == 0, assoc_fail);
  report.add("adjoint_antihomomorphism", adj_fail == 0, adj_fail);
  report.add("displacement_group_law", group_fail == 0, group_fail);
  report.add("confluence", confluence_fail == 0, confluence_fail);

  // number operator: discrepancy vanishes iff zeta(f) = zeta(g)
  int discrepancy_fail = 0;
  for (int it = 0; it < 100; ++it) {
    auto m = g.model(2, 1);
    const auto zf = m.zeta_values[0][0], zg = m.zeta_values[0][1];
    auto d = number_op_discrepancy(0, 1, m);
    const bool should_vanish = (zf == zg) || m.gram[1][0].is_zero();
    if (d.empty() != should_vanish) ++discrepancy_fail;
  }
  report.add("number_op_discrepancy_iff", discrepancy_fail == 0, discrepancy_fail);
  return report;
}

/// Finite-scale positivity of the vacuum and two conjugated states over the
/// full degree-<=2 word basis.
inline SuiteReport run_positivity_suite(const ModelContext<Complex>& model,
                                        double tol = 1e-9) {
  SuiteReport report{"positivity"};
  auto basis = word_basis(model, 2);

  auto run = [&](const std::string& name, const StateFunctional<Complex>& s) {
    auto r = gram_psd_check(s, basis, model, tol);
    report.add(name, r.psd, -std::min(0.0, r.min_eigenvalue),
               "min eigenvalue " + std::to_string(r.min_eigenvalue) + ", basis " +
                   std::to_string(basis.size()));
  };
  run("vacuum_psd", StateFunctional<Complex>::vacuum());

  const std::size_t nz = model.num_zetas();
  auto dw = [&](Rational k, Complex c) {
    WordKey key;
    key.displacement = DisplacementExponent::unit(nz, 0, k);
    return Polynomial<Complex>::word(key, c);
  };
  run("displaced_psd", StateFunctional<Complex>::conjugated(dw(Rational(1), {1, 0}),
                                                            model));
  run("mixture_psd",
      StateFunctional<Complex>::conjugated(
          dw(Rational(1), {0.6, 0.2}) + dw(Rational(-2), {0, 0.7}), model));
  return report;
}

/// BCH exponential identities, exact at truncation orders 0..max_order.
inline SuiteReport run_bch_suite(int max_order = 6) {
  using PQ = Polynomial<RationalComplex>;
  SuiteReport report{"bch"};
  verify_detail::ExactGen g(7);
  auto m = g.model(2, 1);
  const Rational zf = m.zeta_values[0][0];

  auto disp = [&](Rational k) {
    WordKey key;
    key.displacement = DisplacementExponent::unit(1, 0, k);
    return PQ::word(key, RationalComplex(Rational(1)));
  };
  const RationalComplex il{Rational(0), Rational(3, 7)};
  const Rational k(2);
  auto dk = disp(k);
  auto a = normal_form(RationalComplex(Rational(1)), {gen_a(0)}, m);
  auto ad = normal_form(RationalComplex(Rational(1)), {gen_ad(0)}, m);

  bool eq4 = true, eq5 = true;
  for (int order = 0; order <= max_order; ++order) {
    auto shifted = ad + PQ::scalar(RationalComplex(k * zf));
    eq4 = eq4 && multiply(dk, exp_truncated(ad.scaled(il), order, m), m) ==
                     multiply(exp_truncated(shifted.scaled(il), order, m), dk, m);
    auto shifted_a = a + PQ::scalar(RationalComplex(k * zf));
    eq5 = eq5 && multiply(dk, exp_truncated(a.scaled(il), order, m), m) ==
                     multiply(exp_truncated(shifted_a.scaled(il), order, m), dk, m);
  }
  report.add("creator_exponential_shift", eq4);
  report.add("annihilator_exponential_shift", eq5);

  // e^X a = (a + zeta(f) Y) e^X, checked per order:
  //   X^j a / j! = a X^j / j! + zeta(f) Y X^{j-1} / (j-1)!
  const RationalComplex alpha{Rational(1, 2), Rational(1, 3)};
  auto x = disp(Rational(1)).scaled(alpha) - disp(Rational(-1)).scaled(alpha.conj());
  auto y = disp(Rational(1)).scaled(alpha) + disp(Rational(-1)).scaled(alpha.conj());
  bool eq6 = true;
  auto xpow = PQ::unit();
  RationalComplex inv_fact(Rational(1));
  auto prev = PQ::zero();
  for (int j = 0; j <= max_order; ++j) {
    if (j > 0) {
      xpow = multiply(xpow, x, m);
      inv_fact = inv_fact * RationalComplex(Rational(1, j));
    }
    auto lhs = multiply(xpow, a, m).scaled(inv_fact);
    auto rhs = multiply(a, xpow, m).scaled(inv_fact) +
               multiply(y, prev, m).scaled(RationalComplex(zf));
    eq6 = eq6 && (lhs == rhs);
    prev = xpow.scaled(inv_fact);
  }
  report.add("displacement_exponential_shift", eq6);
  return report;
}

/// Moment identity, closed-form special-function identities, and the
/// Taylor-coefficient bridge between closed forms and symbolic moments.
inline SuiteReport run_charfunc_suite() {
  SuiteReport report{"charfunc"};
  auto m = make_simple_model<Complex>(1.0, 0.5);
  auto vac = StateFunctional<Complex>::vacuum();

  // phi_0((a - a^dag)^{2j}) = (-(f,f))^j (2j)!/(2^j j!), exact pattern
  {
    auto x = normal_form(Complex{1, 0}, {gen_a(0)}, m) -
             normal_form(Complex{1, 0}, {gen_ad(0)}, m);
    double worst = 0;
    auto p = Polynomial<Complex>::unit();
    double expected = 1;
    for (int j = 1; j <= 6; ++j) {
      p = multiply(p, multiply(x, x, m), m);
      expected *= -(2.0 * j - 1);  // (2j)!/(2^j j!) = (2j-1)!!
      const double got = vacuum_expect(p).real();
      worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
    report.add("vacuum_even_moment_identity", worst < 1e-12, worst);
  }

  // 1F1(1/2;1;-2l^2) = I0(l^2) e^{-l^2}; 1F1(1/2;1;4i l a) = J0(2l|a|) e^{2i l a}
  {
    double worst = 0;
    for (int i = 0; i <= 60; ++i) {
      const double l = 3.0 * i / 60;
      PFQParams p;
      p.numerator = {Rational(1, 2)};
      p.denominator = {Rational(1)};
      p.argument = Complex(-2 * l * l, 0);
      worst = std::max(worst, std::abs(pfq(p).value.real() -
                                       bessel_i0(l * l) * std::exp(-l * l)));
      const double a = 0.6;
      PFQParams q = p;
      q.argument = Complex(0, 4 * l * a);
      worst = std::max(
          worst, std::abs(pfq(q).value - bessel_j0(2 * l * a) *
                                             std::exp(Complex(0, 2 * l * a))));
    }
    report.add("bessel_identities", worst < 1e-10, worst);
  }

  // Taylor bridge through order 8, relative 1e-9
  {
    auto bridge = [&](const PowerSeries& series,
                      const Polynomial<Complex>& field,
                      const StateFunctional<Complex>& s,
                      const ModelContext<Complex>& mm) {
      auto from_char = series.moments();
      double worst = 0;
      auto p = Polynomial<Complex>::unit();
      for (int n = 0; n <= series.order(); ++n) {
        if (n > 0) p = multiply(p, field, mm);
        const Complex sym = s(p, mm);
        const double scale = std::max(1.0, std::abs(sym));
        worst = std::max(worst, std::abs(from_char[n] - sym) / scale);
      }
      return worst;
    };

    double worst = 0;
    worst = std::max(worst, bridge(taylor_char_free(1.0, 8),
                                   build_field(FieldKind::free_field, 0, m), vac, m));
    auto disp_state = StateFunctional<Complex>::conjugated(
        Polynomial<Complex>::word(
            WordKey{{}, DisplacementExponent::unit(1, 0), {}}, {1, 0}),
        m);
    worst = std::max(worst, bridge(taylor_char_displaced(1.0, 0.5, 8),
                                   build_field(FieldKind::free_field, 0, m),
                                   disp_state, m));
    std::vector<Complex> xi{{0.5, 0}, {0, 0.8}, {0.3, 0.3}};
    auto mixture = Polynomial<Complex>::zero();
    for (std::size_t kk = 0; kk < xi.size(); ++kk)
      mixture += Polynomial<Complex>::word(
          WordKey{{}, DisplacementExponent::unit(1, 0, Rational(long(kk))), {}},
          xi[kk]);
    auto mix_state = StateFunctional<Complex>::conjugated(mixture, m);
    worst = std::max(worst, bridge(taylor_char_mixture(1.0, 0.5, xi, 8),
                                   build_field(FieldKind::free_field, 0, m),
                                   mix_state, m));

    ModelContext<Complex> ma = m;
    ma.alpha = {Complex{0.6, 0}};
    worst = std::max(worst,
                     bridge(taylor_char_defI(1.0, 0.6, 8),
                            build_field(FieldKind::def_one, 0, ma), vac, ma));
    for (int k = 1; k <= 3; ++k) {
      worst = std::max(
          worst, bridge(taylor_char_defI_power(1.0, {0.6, 0}, k, 8),
                        build_field(FieldKind::def_one_power, 0, ma, k), vac, ma));
      worst = std::max(
          worst, bridge(taylor_char_defII_power(1.0, k, 8),
                        build_field(FieldKind::def_two_power, 0, m, k), vac, m));
    }
    report.add("taylor_bridge_order8", worst < 1e-9, worst);
  }
  return report;
}

/// Fourier consistency of every closed-form (chi, rho) pair, plus the
/// Whittaker reductions.
inline SuiteReport run_fourier_suite() {
  SuiteReport report{"fourier"};
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(-4.0 + 8.0 * i / 16);

  {
    auto chi = [](double l) { return char_free(l, 1.0); };
    auto rho = [](double x) { return gaussian_density(x, 0, 1.0); };
    const double err = verify_fourier(chi, rho, grid, 10.0, 1e-11);
    report.add("gaussian_pair", err < 1e-9, err);
  }
  {
    auto chi = [](double l) { return char_defII_power(l, 1.0, 1); };
    auto rho = [](double x) { return dens_defII(x, 1.0); };
    const double err = verify_fourier(chi, rho, grid, 25.0);
    report.add("defII_k1_pair", err < 1e-5, err);
  }
  {
    // k = 2 argument grows like -8 lambda^2, so the grid stays inside the
    // series' cancellation-safe range
    std::vector<double> grid2;
    for (int i = 0; i <= 16; ++i) grid2.push_back(-2.0 + 4.0 * i / 16);
    auto chi = [](double l) { return char_defII_power(l, 1.0, 2); };
    auto rho = [](double x) { return dens_defII_k2(x, 1.0); };
    const double err = verify_fourier(chi, rho, grid2, 40.0);
    report.add("defII_k2_pair", err < 1e-5, err);
  }
  {
    auto chi = [](double l) { return char_defI(l, 1.0, 1.0); };
    auto rho = [](double x) { return dens_defI(x, 1.0, 1.0); };
    const double err = verify_fourier(chi, rho, grid, 10.0);
    report.add("defI_convolution_pair", err < 1e-5, err);
  }
  {
    // n = 2: radial Hankel transform of the whitened density vs 1F1
    auto radial = [](double r) {
      return std::exp(-r * r / 8) / (std::sqrt(8 * std::pow(M_PI, 3)) * r);
    };
    double worst = 0;
    for (double s : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      PFQParams p;
      p.numerator = {Rational(1, 2)};
      p.denominator = {Rational(1)};
      p.argument = Complex(-2 * s * s, 0);
      worst = std::max(worst,
                       std::abs(radial_char_2d(radial, s) - pfq(p).value.real()));
    }
    report.add("defII_n2_radial_pair", worst < 1e-5, worst);
  }
  {
    // Whittaker consistency: n = 1 vs the K0 closed form
    Eigen::MatrixXd f1(1, 1);
    f1 << 1.0;
    double worst = 0;
    for (double x = 0.25; x <= 6.0; x += 0.25) {
      Eigen::VectorXd v(1);
      v << x;
      const double a = dens_defII_multi(v, f1);
      const double b = dens_defII(x, 1.0);
      worst = std::max(worst, std::abs(a - b) / b);
    }
    report.add("whittaker_n1_reduction", worst < 1e-7, worst);

    Eigen::MatrixXd f2(2, 2);
    f2 << 1.0, 0.4, 0.4, 2.0;
    double worst2 = 0;
    for (double x : {0.3, 1.0, 2.2})
      for (double y : {-1.4, 0.6, 1.8}) {
        Eigen::VectorXd v(2);
        v << x, y;
        const double a = dens_defII_multi(v, f2);
        const double b = dens_defII_2d_closed(v, f2);
        worst2 = std::max(worst2, std::abs(a - b) / b);
      }
    report.add("whittaker_n2_closed_form", worst2 < 1e-7, worst2);
  }
  return report;
}

/// Variance-by-quadrature and heavy-tail ratios of the deformation-II
/// densities against the equal-variance Gaussian.
inline SuiteReport run_tails_suite() {
  SuiteReport report{"tails"};
  const double ff = 1.0;
  auto rho1 = [&](double x) { return dens_defII(x, ff); };
  auto rho2 = [&](double x) { return dens_defII_k2(x, ff); };

  auto variance = [](const DensityFn& rho) {
    auto x2rho = [&](double x) { return x * x * rho(x); };
    return 2 * (tanh_sinh(x2rho, 0.0, 1.0, 1e-12) +
                integrate_to_infinity(x2rho, 1.0, 1e-12));
  };
  const double v1 = variance(rho1);
  report.add("variance_defII_k1", std::abs(v1 - 2 * ff) < 1e-4 * 2 * ff,
             std::abs(v1 - 2 * ff) / (2 * ff));
  const double v2 = variance(rho2);
  report.add("variance_defII_k2", std::abs(v2 - 6 * ff) < 1e-4 * 6 * ff,
             std::abs(v2 - 6 * ff) / (6 * ff));

  const double sigma = std::sqrt(2 * ff);
  const struct {
    double nsigma, expected;
  } targets[] = {{3.66, 10}, {4.84, 100}, {5.76, 1000}};
  for (const auto& t : targets) {
    const double ratio = upper_tail(rho1, t.nsigma * sigma) /
                         gaussian_upper_tail(t.nsigma * sigma, 2 * ff);
    const double rel = std::abs(ratio - t.expected) / t.expected;
    report.add("tail_ratio_" + std::to_string(t.nsigma).substr(0, 4), rel <= 0.15,
               rel, "ratio " + std::to_string(ratio));
  }
  return report;
}

inline std::vector<SuiteReport> run_suites(const std::string& suite,
                                           const ModelContext<Complex>& model,
                                           double psd_tol = 1e-9) {
  std::vector<SuiteReport> reports;
  const bool all = suite == "all";
  if (all || suite == "algebra") reports.push_back(run_algebra_suite());
  if (all || suite == "positivity")
    reports.push_back(run_positivity_suite(model, psd_tol));
  if (all || suite == "bch") reports.push_back(run_bch_suite());
  if (all || suite == "charfunc") reports.push_back(run_charfunc_suite());
  if (all || suite == "fourier") reports.push_back(run_fourier_suite());
  if (all || suite == "tails") reports.push_back(run_tails_suite());
  if (reports.empty()) throw std::invalid_argument("unknown suite: " + suite);
  return reports;
}

}  // namespace dfa
