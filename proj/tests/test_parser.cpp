#include "doctest.h"

#include <random>

#include "dfa/parser.hpp"

using namespace dfa;
using P = Polynomial<Complex>;

namespace {

ModelContext<Complex> model() {
  return parse_model(R"({
    "test_functions": ["f1", "f2"],
    "gram": [[1, [0.5, 0.25]], [[0.5, -0.25], 2]],
    "zeta": {"names": ["z1"], "values": [[0.5, 1.0]]},
    "alpha": {"f1": [0.4, 0]}
  })");
}

}  // namespace

TEST_CASE("parse and elaborate the abstract commutator") {
  auto m = model();
  auto p = elaborate(parse_expr("a(f1)*ad(f1)"), m);
  CHECK(p.coefficient(WordKey{}) == m.gram[0][0]);
  CHECK(p.coefficient(WordKey{{0}, {}, {0}}) == Complex{1, 0});
}

TEST_CASE("dag of a displacement") {
  auto m = model();
  auto p = elaborate(parse_expr("dag(d(1,z1))"), m);
  WordKey k;
  k.displacement = DisplacementExponent::unit(1, 0, Rational(-1));
  CHECK(p == P::word(k, Complex{1, 0}));
}

TEST_CASE("power node matches the power operation") {
  auto m = model();
  auto parsed = elaborate(parse_expr("(a(f1)-ad(f1))^2"), m);
  auto x = normal_form(Complex{1, 0}, {gen_a(0)}, m);
  x -= normal_form(Complex{1, 0}, {gen_ad(0)}, m);
  CHECK(max_coeff_distance(parsed, power(x, 2, m)) < 1e-14);
}

TEST_CASE("scalars, i, rationals in displacements") {
  auto m = model();
  auto p = elaborate(parse_expr("(1+2i)*a(f1)"), m);
  CHECK(p.coefficient(WordKey{{}, {}, {0}}) == Complex{1, 2});

  auto q = elaborate(parse_expr("i*d(-2/3,z1)"), m);
  WordKey k;
  k.displacement = DisplacementExponent::unit(1, 0, Rational(-2, 3));
  CHECK(q == P::word(k, Complex{0, 1}));

  // default functional name when the model declares exactly one
  CHECK(elaborate(parse_expr("d(1)"), m) == elaborate(parse_expr("d(1,z1)"), m));
}

TEST_CASE("formatting fixed points") {
  auto m = model();
  CHECK(format_canonical(P::unit(), m) == "1");
  CHECK(format_canonical(P::zero(), m) == "0");
  WordKey k{{0}, DisplacementExponent::unit(1, 0), {1}};
  CHECK(format_canonical(P::word(k, Complex{1, 0}), m) == "ad(f1)*d(1,z1)*a(f2)");
  CHECK(format_canonical(P::word(k, Complex{-2, 0}), m) == "-2*ad(f1)*d(1,z1)*a(f2)");
}

TEST_CASE("round trip on random polynomials") {
  auto m = model();
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> deg(0, 3), idx(0, 1), nterms(1, 4);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> knum(-2, 2), kden(1, 2);
  for (int it = 0; it < 200; ++it) {
    P p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
      WordKey k;
      int d = deg(rng);
      int nc = std::uniform_int_distribution<int>(0, d)(rng);
      for (int i = 0; i < nc; ++i) k.creators.push_back(idx(rng));
      for (int i = 0; i < d - nc; ++i) k.annihilators.push_back(idx(rng));
      std::sort(k.creators.begin(), k.creators.end());
      std::sort(k.annihilators.begin(), k.annihilators.end());
      k.displacement = DisplacementExponent::unit(1, 0, Rational(knum(rng), kden(rng)));
      p.add_term(k, Complex{u(rng), u(rng)});
    }
    auto text = format_canonical(p, m);
    auto back = elaborate(parse_expr(text), m);
    CHECK(max_coeff_distance(p, back) < 1e-9);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(
      parse_model(R"({"test_functions": ["f1"], "gram": [[[0, 1]]]})"),
      ModelError);  // non-real diagonal
  CHECK_THROWS_AS(parse_model(R"({
        "test_functions": ["f1", "f2"],
        "gram": [[0, 1], [1, 0]]
      })"),
                  ModelError);  // non-positive diagonal
  CHECK_THROWS_AS(parse_model(R"({
        "test_functions": ["f1", "f2"],
        "gram": [[1, [0.5, 0.1]], [[0.5, 0.1], 1]]
      })"),
                  ModelError);  // not Hermitian
  CHECK_THROWS_AS(parse_model(R"({
        "test_functions": ["f1", "f1"],
        "gram": [[1, 0], [0, 1]]
      })"),
                  ModelError);  // duplicate names
  CHECK_THROWS_AS(parse_model("not json"), ModelError);
  CHECK_THROWS_AS(parse_model(R"({"test_functions": ["f1"], "gram": [[1], [1]]})"),
                  ModelError);  // dimension mismatch

  // complex Hermitian off-diagonal is fine
  auto m = parse_model(R"({
    "test_functions": ["f1", "f2"],
    "gram": [[1, [0.3, 0.4]], [[0.3, -0.4], 2]]
  })");
  CHECK(m.gram[0][1] == Complex{0.3, 0.4});
  CHECK(m.num_zetas() == 0);
}

TEST_CASE("errors carry position info") {
  try {
    parse_expr("a(f1) + * d(1)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  auto m = model();
  CHECK_THROWS_AS(elaborate(parse_expr("a(nope)"), m), ModelError);
  CHECK_THROWS_AS(elaborate(parse_expr("d(1,zz)"), m), ModelError);
}

TEST_CASE("fuzz: random token soup errors cleanly") {
  const std::string alphabet = "ad()*^+-0123456789/;,.if dag";
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  auto m = model();
  int parsed_ok = 0;
  for (int it = 0; it < 3000; ++it) {
    std::string s;
    for (int i = len(rng); i-- > 0;) s += alphabet[pick(rng)];
    try {
      auto e = parse_expr(s);
      elaborate(e, m);
      ++parsed_ok;
    } catch (const ParseError&) {
    } catch (const ModelError&) {
    } catch (const std::out_of_range&) {  // stod/stoll overflow on digit runs
    }
  }
  CHECK(parsed_ok >= 0);  // reaching here means no crash
}
