#include "doctest.h"

#include <random>

#include "dfa/state.hpp"

using namespace dfa;
using P = Polynomial<Complex>;

namespace {

ModelContext<Complex> simple(double ff = 1.0, double zf = 0.5) {
  return make_simple_model<Complex>(ff, zf);
}

ModelContext<Complex> pair_model() {
  ModelContext<Complex> m;
  m.test_functions = {"f1", "f2"};
  m.gram = {{{1, 0}, {0.5, 0.25}}, {{0.5, -0.25}, {2, 0}}};
  m.zeta_basis = {"z1"};
  m.zeta_values = {{0.5, 1.0}};
  m.validate();
  return m;
}

P disp(Rational k, std::size_t nz = 1) {
  WordKey key;
  key.displacement = DisplacementExponent::unit(nz, 0, k);
  return P::word(key, Complex{1, 0});
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("vacuum expectation basics") {
  auto m = pair_model();
  CHECK(vacuum_expect(P::unit()) == Complex{1, 0});
  CHECK(vacuum_expect(disp(Rational(1))) == Complex{0, 0});
  auto p = normal_form(Complex{1, 0}, {gen_a(0), gen_ad(1)}, m);
  CHECK(vacuum_expect(p) == m.gram[1][0]);  // (f2, f1)
}

TEST_CASE("vacuum moments of a - a^dag") {
  auto m = simple();
  auto x = normal_form(Complex{1, 0}, {gen_a(0)}, m);
  x -= normal_form(Complex{1, 0}, {gen_ad(0)}, m);
  for (int j = 1; j <= 5; ++j) {
    const double expected =
        std::pow(-1.0, j) * factorial(2 * j) / (std::pow(2.0, j) * factorial(j));
    auto v = vacuum_expect(power(x, 2 * j, m));
    CHECK(std::abs(v - Complex{expected, 0}) < 1e-9 * std::abs(expected));
  }
}

TEST_CASE("displaced state") {
  auto m = simple(1.0, 0.7);
  auto s = StateFunctional<Complex>::conjugated(disp(Rational(1)), m);
  CHECK(std::abs(s(P::unit(), m) - Complex{1, 0}) < 1e-12);
  auto field = build_field(FieldKind::free_field, 0, m);
  CHECK(std::abs(s(field, m) - Complex{1.4, 0}) < 1e-12);
}

TEST_CASE("mixture-conjugated state") {
  auto m = simple(1.0, 0.5);
  auto xi = disp(Rational(1)) + disp(Rational(2));
  auto s = StateFunctional<Complex>::conjugated(xi, m);
  auto field = build_field(FieldKind::free_field, 0, m);
  // (2*0.5 + 2*1.0)/2
  CHECK(std::abs(s(field, m) - Complex{1.5, 0}) < 1e-12);
}

TEST_CASE("conjugating element must be displacement-only") {
  auto m = simple();
  auto bad = normal_form(Complex{1, 0}, {gen_ad(0)}, m);
  CHECK_THROWS_AS(StateFunctional<Complex>::conjugated(bad, m), StateError);
  CHECK_THROWS_AS(StateFunctional<Complex>::conjugated(P::zero(), m), StateError);
}

TEST_CASE("moment examples") {
  auto m = simple();
  auto vac = StateFunctional<Complex>::vacuum();
  CHECK(std::abs(moment(vac, build_field(FieldKind::free_field, 0, m), 2, m).value -
                 Complex{1, 0}) < 1e-12);
  CHECK(std::abs(moment(vac, build_field(FieldKind::def_two_power, 0, m, 1), 2, m)
                     .value -
                 Complex{2, 0}) < 1e-12);
  CHECK(std::abs(moment(vac, build_field(FieldKind::def_two_power, 0, m, 2), 2, m)
                     .value -
                 Complex{6, 0}) < 1e-12);

  // non-Hermitian input is flagged
  auto r = moment(vac, normal_form(Complex{1, 0}, {gen_a(0)}, m), 2, m);
  CHECK(r.hermitian_warning);
}

TEST_CASE("psd: trivial and hand-evaluated bases") {
  auto m = simple();
  auto vac = StateFunctional<Complex>::vacuum();
  auto r = gram_psd_check(vac, {P::unit()}, m);
  CHECK(r.psd);
  CHECK(r.min_eigenvalue == doctest::Approx(1.0));

  // {1, d, ad(f1) d}: crossing d pulls in -zeta, so the matrix is
  // [[1,0,0],[0,1,-1/2],[0,-1/2,5/4]] with least eigenvalue (9-sqrt(17))/8
  auto basis = std::vector<P>{
      P::unit(), disp(Rational(1)),
      multiply(normal_form(Complex{1, 0}, {gen_ad(0)}, m), disp(Rational(1)), m)};
  auto r3 = gram_psd_check(vac, basis, m);
  CHECK(r3.psd);
  CHECK(r3.min_eigenvalue >= -1e-12);
  CHECK(r3.min_eigenvalue == doctest::Approx((9.0 - std::sqrt(17.0)) / 8));
}

TEST_CASE("psd: full degree-2 basis, random PSD gram") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 3; ++trial) {
    ModelContext<Complex> m;
    m.test_functions = {"f1", "f2"};
    Eigen::MatrixXcd b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = Complex(u(rng), u(rng));
    Eigen::MatrixXcd g = b * b.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(2, 2);
    m.gram = {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}};
    m.zeta_basis = {"z1"};
    m.zeta_values = {{u(rng), u(rng)}};
    m.validate();

    auto basis = word_basis(m, 2);
    auto vac = StateFunctional<Complex>::vacuum();
    CHECK(gram_psd_check(vac, basis, m).psd);

    auto xi = disp(Rational(1)).scaled({0.8, 0.1}) + disp(Rational(-2)).scaled({0, 0.5});
    auto s = StateFunctional<Complex>::conjugated(xi, m);
    CHECK(gram_psd_check(s, basis, m).psd);
  }
}

TEST_CASE("displacement sector selection") {
  auto m = pair_model();
  auto vac = StateFunctional<Complex>::vacuum();
  auto xi = disp(Rational(1)) + disp(Rational(2)).scaled({0.5, 0.5});
  auto s = StateFunctional<Complex>::conjugated(xi, m);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> idx(0, 1);
  for (int it = 0; it < 50; ++it) {
    WordKey k;
    for (int c = idx(rng); c-- > 0;) k.creators.push_back(idx(rng));
    for (int a = idx(rng); a-- > 0;) k.annihilators.push_back(idx(rng));
    std::sort(k.creators.begin(), k.creators.end());
    std::sort(k.annihilators.begin(), k.annihilators.end());
    // the mixture can only bridge displacement gaps in {-1, 0, 1}, so any
    // word with |net exponent| >= 3 (or a fractional one) must vanish
    k.displacement = DisplacementExponent::unit(
        1, 0, it % 2 ? Rational(7, 2) : Rational(3 + it % 3));
    auto w = P::word(k, Complex{0.3, 0.7});
    CHECK(std::abs(vac(w, m)) < 1e-12);
    CHECK(std::abs(s(w, m)) < 1e-12);
  }
}

TEST_CASE("conjugated-state consistency with the shift substitution") {
  auto m = pair_model();
  auto s = StateFunctional<Complex>::conjugated(disp(Rational(1)), m);
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> idx(0, 1);
  std::uniform_real_distribution<double> u(-1, 1);

  auto zeta = [&](int f) { return m.zeta_values[0][f]; };
  for (int it = 0; it < 30; ++it) {
    // random canonical word, degree <= 3
    WordKey k;
    int deg = std::uniform_int_distribution<int>(0, 3)(rng);
    int nc = std::uniform_int_distribution<int>(0, deg)(rng);
    for (int i = 0; i < nc; ++i) k.creators.push_back(idx(rng));
    for (int i = 0; i < deg - nc; ++i) k.annihilators.push_back(idx(rng));
    std::sort(k.creators.begin(), k.creators.end());
    std::sort(k.annihilators.begin(), k.annihilators.end());
    k.displacement = DisplacementExponent(1);
    auto w = P::word(k, Complex{u(rng), u(rng)});

    // shifted copy: a_f -> a_f + zeta(f), a^dag_f -> a^dag_f + zeta(f)
    auto shifted = P::scalar(w.terms().begin()->second);
    for (int g : k.creators) {
      auto gen = normal_form(Complex{1, 0}, {gen_ad(g)}, m) +
                 P::scalar(Complex{zeta(g), 0});
      shifted = multiply(shifted, gen, m);
    }
    for (int f : k.annihilators) {
      auto gen = normal_form(Complex{1, 0}, {gen_a(f)}, m) +
                 P::scalar(Complex{zeta(f), 0});
      shifted = multiply(shifted, gen, m);
    }
    CHECK(std::abs(s(w, m) - vacuum_expect(shifted)) < 1e-10);
  }
}
