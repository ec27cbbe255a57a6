#include "berkhyb/error.hpp"
#include "berkhyb/valuation.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace berkhyb;
using testing_util::poly;

TEST_CASE("monomial valuation examples") {
  std::vector<Rational> w{Rational(1, 2), Rational(1, 3)};
  CHECK(monomial_valuation(poly({"z1", "z2"}, {{1, 0}}), w) == ExtRational(Rational(1, 2)));
  CHECK(monomial_valuation(LaurentSeries::zero({"z1", "z2"}), w).is_infinite());
  CHECK(monomial_valuation(poly({"z1", "z2"}, {{2, 0}, {1, 1}}), w) == ExtRational(Rational(5, 6)));
}

TEST_CASE("quasi-monomial points validate their weights") {
  auto seg = testing_util::segment();
  CHECK_NOTHROW(QuasiMonomialPoint(seg, 2, {Rational(1, 3), Rational(2, 3)}));
  CHECK_THROWS_AS(QuasiMonomialPoint(seg, 2, {Rational(1, 2), Rational(1, 3)}), ValidationError);
  CHECK_THROWS_AS(QuasiMonomialPoint(seg, 2, {Rational(-1), Rational(2)}), ValidationError);
  CHECK_THROWS_AS(QuasiMonomialPoint(seg, 2, {Rational(1)}), ValidationError);
}

TEST_CASE("qm_eval on the segment") {
  auto seg = testing_util::segment();
  QuasiMonomialPoint v(seg, 2, {Rational(1, 4), Rational(3, 4)});
  CHECK(qm_eval(v, poly({"D1", "D2"}, {{1, 0}})) == ExtRational(Rational(1, 4)));
  CHECK(qm_eval(v, poly({"D1", "D2"}, {{2, 0}, {0, 1}})) == ExtRational(Rational(1, 2)));
  CHECK(qm_eval(v, poly({"D1", "D2"}, {{-1, 1}})) == ExtRational(Rational(1, 2)));
  CHECK(qm_eval(v, LaurentSeries::zero({"D1"})).is_infinite());
  // Variables off the stratum count as units.
  QuasiMonomialPoint vertex(seg, 0, {Rational(1)});
  CHECK(qm_eval(vertex, poly({"D2"}, {{5}})) == ExtRational(0));
  CHECK_THROWS_AS(qm_eval(v, poly({"w"}, {{1}})), ConfigError);
}

TEST_CASE("divisorial points") {
  auto bl = testing_util::blowup();
  QuasiMonomialPoint vE = divisorial_point(bl, 2);
  CHECK(vE.weights() == std::vector<Rational>{Rational(1, 2)});
  CHECK(divisorial_point(bl, 0).weights() == std::vector<Rational>{Rational(1)});
  // z1 pulls back to z1' e; ord_E = 1 and b_E = 2.
  CHECK(qm_eval(vE, poly({"D1p", "E"}, {{1, 1}})) == ExtRational(Rational(1, 2)));
  CHECK_THROWS(divisorial_point(bl, 7));
}

TEST_CASE("normalization v(t) = 1 and homogeneity") {
  std::mt19937_64 rng(7);
  for (auto model : {testing_util::segment(), testing_util::triangle(), testing_util::blowup()}) {
    for (int k = 0; k < 50; ++k) {
      std::size_t s = rng() % model->strata().size();
      const auto& idx = model->strata()[s].indices;
      std::vector<Rational> w;
      Rational norm = 0;
      for (auto i : idx) {
        std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 9);
        w.push_back(a);
        norm += Rational(a * model->mult(i));
      }
      for (auto& x : w) x /= norm;
      QuasiMonomialPoint v(model, s, w);
      CHECK(qm_eval(v, poly({"t"}, {{1}})) == ExtRational(1));
      // t as the product of local equations.
      Exponent e;
      std::vector<std::string> vars;
      for (std::size_t i = 0; i < model->num_components(); ++i) {
        vars.push_back(model->components()[i].label);
        e.push_back(model->mult(i));
      }
      CHECK(qm_eval(v, LaurentSeries::monomial(vars, e)) == ExtRational(1));
    }
  }
  std::vector<Rational> w{Rational(2, 7), Rational(3, 5)};
  LaurentSeries f = poly({"a", "b"}, {{3, -2}});
  Rational base = monomial_valuation(f, w).value();
  std::vector<Rational> w3{w[0] * 3, w[1] * 3};
  CHECK(monomial_valuation(f, w3).value() == 3 * base);
}

TEST_CASE("Gauss extension") {
  std::map<std::string, ExtRational> table{{"one", 0}, {"s0", 3}, {"a", 2}, {"b", 0}};
  CoefficientOracle v = [&](const std::string& h) { return table.at(h); };
  CHECK(gauss_extension(v, {{1, "one"}}) == ExtRational(1));
  CHECK(gauss_extension(v, {{0, "s0"}}) == ExtRational(3));
  CHECK(gauss_extension(v, {{0, "a"}, {1, "b"}}) == ExtRational(1));
  CHECK(gauss_extension(v, {}).is_infinite());
  // Trivial coefficient valuation returns ord_t.
  CoefficientOracle triv = [](const std::string&) { return ExtRational(0); };
  CHECK(gauss_extension(triv, {{4, "x"}, {-2, "y"}, {7, "z"}}) == ExtRational(-2));
}

TEST_CASE("superadditivity") {
  auto seg = testing_util::segment();
  QuasiMonomialPoint v(seg, 2, {Rational(1, 2), Rational(1, 2)});
  auto r = valuation_superadditivity_check(v, poly({"D1", "D2"}, {{1, 0}}), poly({"D1", "D2"}, {{0, 1}}));
  CHECK(r.passed);
  CHECK(r.product_equality);
  CHECK(r.v_product == ExtRational(1));
  auto s = valuation_superadditivity_check(v, poly({"D1", "D2"}, {{1, 0}}), poly({"D1", "D2"}, {{1, 0}}));
  CHECK(s.v_sum == ExtRational(Rational(1, 2)));
  CHECK(s.passed);

  std::mt19937_64 rng(11);
  auto tri = testing_util::triangle();
  QuasiMonomialPoint u(tri, 6, {Rational(1, 6), Rational(1, 3), Rational(1, 2)});
  for (int k = 0; k < 1000; ++k) {
    auto make = [&] {
      LaurentSeries f({"D1", "D2", "D3"});
      for (int i = 0; i < 8; ++i)
        f.add_term({static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4,
                    static_cast<std::int64_t>(rng() % 9) - 4},
                   Coefficient::unit());
      return f;
    };
    auto rep = valuation_superadditivity_check(u, make(), make());
    REQUIRE(rep.product_inequality);
    REQUIRE(rep.sum_inequality);
  }
}
