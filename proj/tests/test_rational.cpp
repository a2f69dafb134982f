#include "doctest.h"

#include "dfa/rational.hpp"

using dfa::Rational;
using dfa::RationalComplex;

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
  CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
  CHECK((Rational(3, 4) / Rational(3, 2)) == Rational(1, 2));
  CHECK(Rational(-7).str() == "-7");
  CHECK(Rational(2, 6).str() == "1/3");
}

TEST_CASE("rational ordering and errors") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK_THROWS_AS(Rational(INT64_MAX) * Rational(INT64_MAX), std::overflow_error);
}

TEST_CASE("rational complex field operations") {
  RationalComplex i = RationalComplex::i();
  CHECK(i * i == RationalComplex(Rational(-1)));
  RationalComplex z{Rational(1, 2), Rational(-1, 3)};
  CHECK(z * z.conj() ==
        RationalComplex(Rational(1, 4) + Rational(1, 9), Rational(0)));
  CHECK((z / z) == RationalComplex(Rational(1)));
  CHECK((z - z).is_zero());
}
