#include "berkhyb/error.hpp"
#include "berkhyb/log_linear.hpp"
#include "berkhyb/rational.hpp"

#include <doctest.h>

#include <cmath>

using namespace berkhyb;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(parse_rational("-7/14") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1.5"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational(""), ConfigError);
  CHECK(to_string(Rational(-3, 9)) == "-1/3");
  CHECK(to_string(Rational(5)) == "5");
}

TEST_CASE("extended rationals") {
  ExtRational inf = ExtRational::infinity();
  CHECK((inf + ExtRational(3)).is_infinite());
  CHECK(ExtRational(2) < inf);
  CHECK(min(inf, ExtRational(Rational(1, 3))) == ExtRational(Rational(1, 3)));
  CHECK(inf.str() == "inf");
}

TEST_CASE("log basis is canonical") {
  CHECK(LogLinear::log(6) == LogLinear::log(2) + LogLinear::log(3));
  CHECK(LogLinear::log(Rational(1, 2)) == -LogLinear::log(2));
  CHECK(LogLinear::log(8) == LogLinear::log(2) * Rational(3));
  CHECK((LogLinear::log(8) - LogLinear::log(2) * Rational(3)).is_zero());
  CHECK(LogLinear::inv_log(Rational(1, 2)) == -LogLinear::inv_log(2));
  CHECK(LogLinear::log(1).is_zero());
}

TEST_CASE("signs and comparisons") {
  CHECK((LogLinear::log(3) - LogLinear::log(2)).sign() == 1);
  CHECK(LogLinear::log(2) < LogLinear(1));
  CHECK(LogLinear::log(3) > LogLinear(1));
  CHECK(LogLinear().sign() == 0);
  CHECK(max(LogLinear::log(5), LogLinear(2)) == LogLinear(2));
  CHECK(std::abs(LogLinear::log(2).to_double() - std::log(2.0)) < 1e-15);
  CHECK(std::abs(LogLinear::inv_log(2, 3).to_double() - 3 / std::log(2.0)) < 1e-14);
}

TEST_CASE("multiplying by a logarithm stays in the basis") {
  CHECK(LogLinear(3).times_log(Rational(1, 2)) == LogLinear::log(Rational(1, 2), 3));
  CHECK(LogLinear::inv_log(Rational(1, 2), 5).times_log(Rational(1, 2)) == LogLinear(5));
  LogLinear x = LogLinear(2) + LogLinear::inv_log(Rational(1, 2), Rational(-1, 3));
  CHECK(x.times_log(Rational(1, 2)).div_log(Rational(1, 2)) == x);
  CHECK_THROWS_AS(LogLinear::log(2).times_log(2), UnsupportedRepresentationError);
}
