#include "berkhyb/convex_approx.hpp"
#include "berkhyb/error.hpp"
#include "berkhyb/tropical_metric.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace berkhyb;
using testing_util::poly;

namespace {

TropicalFSMetric metric(std::string name, std::vector<std::string> vars, std::int64_t m,
                        std::vector<std::pair<LaurentSeries, Rational>> entries) {
  TropicalFSMetric phi;
  phi.name = std::move(name);
  phi.m = m;
  phi.reference = LaurentSeries::one(vars);
  for (auto& [s, c] : entries) phi.entries.push_back({s, c});
  return phi;
}

QuasiMonomialPoint random_point(const ModelPtr& model, std::mt19937_64& rng) {
  std::size_t s = rng() % model->strata().size();
  std::vector<Rational> w;
  Rational norm = 0;
  for (auto i : model->strata()[s].indices) {
    std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 11);
    w.push_back(a);
    norm += Rational(a * model->mult(i));
  }
  for (auto& x : w) x /= norm;
  return QuasiMonomialPoint(model, s, w);
}

// m^{-1} max_alpha (log r * v(s_alpha) + c_alpha), straight from the definition.
LogLinear brute_eval(const TropicalFSMetric& phi, const QuasiMonomialPoint& v, const Rational& r) {
  bool any = false;
  LogLinear best;
  for (auto& e : phi.entries) {
    ExtRational val = qm_eval(v, e.section);
    if (val.is_infinite()) continue;
    LogLinear x = LogLinear::log(r, val.value()) + LogLinear(e.c);
    if (!any || x > best) best = x;
    any = true;
  }
  return best / Rational(phi.m);
}

}  // namespace

TEST_CASE("tfs_eval examples") {
  Rational r(1, 2);
  auto seg = testing_util::segment();
  auto trivial = metric("trivial", {"D1"}, 1, {{poly({"D1"}, {{0}}), 0}});
  QuasiMonomialPoint mid(seg, 2, {Rational(1, 2), Rational(1, 2)});
  CHECK(tfs_eval(trivial, mid, r).is_zero());

  auto two = metric("two", {"D1"}, 1, {{poly({"D1"}, {{0}}), 0}, {poly({"D1"}, {{1}}), 0}});
  CHECK(tfs_eval(two, divisorial_point(seg, 0), r).is_zero());

  auto kinked = metric("kinked", {"D1", "t"}, 1, {{poly({"D1", "t"}, {{0, 1}}), 0}, {poly({"D1", "t"}, {{1, 0}}), 0}});
  LogLinear logr = LogLinear::log(r);
  CHECK(tfs_eval(kinked, divisorial_point(seg, 0), r) == logr);
  CHECK(tfs_eval(kinked, divisorial_point(seg, 1), r).is_zero());
  CHECK(tfs_eval(kinked, mid, r) == logr / Rational(2));
}

TEST_CASE("closure operations keep pointwise semantics") {
  Rational r(1, 2);
  auto tri = testing_util::triangle();
  std::vector<std::string> vars{"D1", "D2"};
  auto f = metric("f", vars, 1, {{poly(vars, {{0, 0}}), 0}, {poly(vars, {{1, 0}}), 0}});
  auto g = metric("g", vars, 1, {{poly(vars, {{0, 0}}), 0}, {poly(vars, {{0, 1}}), Rational(1, 3)}});
  auto h = metric("h", vars, 2, {{poly(vars, {{1, 1}}), -1}, {poly(vars, {{0, 0}}), Rational(-5, 2)}});
  auto product = metric("product", vars, 1,
                        {{poly(vars, {{0, 0}}), 0},
                         {poly(vars, {{1, 0}}), 0},
                         {poly(vars, {{0, 1}}), Rational(1, 3)},
                         {poly(vars, {{1, 1}}), Rational(1, 3)}});
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    QuasiMonomialPoint v = random_point(tri, rng);
    LogLinear fv = tfs_eval(f, v, r), gv = tfs_eval(g, v, r), hv = tfs_eval(h, v, r);
    CHECK(fv == brute_eval(f, v, r));
    CHECK(hv == brute_eval(h, v, r));
    CHECK(tfs_eval(tfs_max(f, h), v, r) == max(fv, hv));
    CHECK(tfs_eval(tfs_max(f, f), v, r) == fv);
    CHECK(tfs_eval(tfs_sum(f, g), v, r) == fv + gv);
    CHECK(tfs_eval(tfs_sum(f, g), v, r) == brute_eval(product, v, r));
    CHECK(tfs_eval(tfs_sum(f, h), v, r) == fv + hv);
    CHECK(tfs_eval(tfs_shift(tfs_shift(h, Rational(7, 3)), Rational(-7, 3)), v, r) == hv);
    CHECK(tfs_eval(tfs_shift(h, 2), v, r) == hv + LogLinear(2));
    CHECK(tfs_eval(tfs_lift(h, 3), v, r) == hv);
  }
  std::vector<QuasiMonomialPoint> pts;
  for (int k = 0; k < 20; ++k) pts.push_back(random_point(tri, rng));
  CHECK(tfs_scale_check(h, 4, pts, r).passed);
  auto other = metric("other", {"D1"}, 1, {{poly({"D1"}, {{1}}), 0}});
  CHECK_THROWS_AS(tfs_max(f, other), ConfigError);
  CHECK_THROWS_AS(tfs_sum(f, other), ConfigError);
}

TEST_CASE("non-archimedean limit of the trivial metric vanishes") {
  Rational r(1, 2);
  auto phi = metric("trivial", {"z", "t"}, 1, {{poly({"z", "t"}, {{0, 0}}), 0}});
  auto res = na_limit_tfs(phi, testing_util::p1_model("p1", 1, -1), r);
  CHECK(res.all_agree);
  for (auto& v : res.vertices) CHECK(v.restriction_value.is_zero());
}

TEST_CASE("non-archimedean limit of the kinked family") {
  Rational r(1, 2);
  std::vector<std::string> vars{"z", "t"};
  auto phi = metric("kinked", vars, 1, {{poly(vars, {{0, 0}}), 0}, {poly(vars, {{1, 1}}), 0}});
  phi.model_sections = {poly(vars, {{0, 0}}), poly(vars, {{1, 0}})};
  for (auto model : {testing_util::p1_model("inf", 1, -1), testing_util::p1_model("w", 2, -1),
                     testing_util::p1_model("zero", 1, 1)}) {
    auto res = na_limit_tfs(phi, model, r);
    CHECK(res.all_agree);
    CHECK(res.continuous);
    for (auto& v : res.vertices) CHECK(v.formula_value == v.restriction_value);
  }
  // At E, phi vanishes while the model metric equals -log r.
  auto res = na_limit_tfs(phi, testing_util::p1_model("inf", 1, -1), r);
  CHECK(res.vertices[1].formula_value == LogLinear::log(r));

  // Shifting every constant by c shifts the relative potential by c.
  auto shifted = tfs_shift(phi, Rational(3, 4));
  auto res2 = na_limit_tfs(shifted, testing_util::p1_model("inf", 1, -1), r);
  for (std::size_t i = 0; i < res.vertices.size(); ++i)
    CHECK(res2.vertices[i].restriction_value == res.vertices[i].restriction_value + LogLinear(Rational(3, 4)));
}

TEST_CASE("negative orders need the meromorphic flag") {
  Rational r(1, 2);
  std::vector<std::string> vars{"z", "t"};
  auto phi = metric("pole", vars, 1, {{poly(vars, {{-1, 0}}), 0}});
  phi.model_sections = {poly(vars, {{0, 0}})};
  auto model = testing_util::p1_model("zero", 1, 1);
  CHECK_THROWS_AS(na_limit_tfs(phi, model, r), EvaluationError);
  phi.meromorphic = true;
  CHECK(na_limit_tfs(phi, model, r).all_agree);
}

TEST_CASE("curve restriction") {
  Rational r(1, 2);
  std::vector<std::string> vars{"z", "t"};
  auto c = metric("c", vars, 2, {{poly(vars, {{0, 0}}), 0}, {poly(vars, {{2, 0}}), 0}, {poly(vars, {{4, 1}}), 0}});
  auto g = tfs_curve_restriction(c, r);
  REQUIRE(g.breaks().size() == 2);
  CHECK(g.breaks()[0] == LogLinear(Rational(-1, 2)));
  CHECK(g.breaks()[1].is_zero());
  CHECK(g.slope_jump(0) == 1);
  CHECK(g.slope_jump(1) == 1);
  auto bad = c;
  bad.reference = poly(vars, {{0, 0}, {1, 0}});
  CHECK_THROWS_AS(tfs_curve_restriction(bad, r), ConfigError);
}

TEST_CASE("log-sum-exp gap") {
  CHECK(lse_max_gap({3.0}, 2) == 0.0);
  CHECK(std::abs(lse_max_gap({0.0, 0.0}, 1) - std::log(2.0) / 2) < 1e-15);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-10, 10);
  double bound = std::log(5.0) / 6;
  for (int k = 0; k < 100000; ++k) {
    std::vector<double> x(5);
    for (auto& v : x) v = U(rng);
    double gap = lse_max_gap(x, 3);
    REQUIRE(gap >= 0);
    REQUIRE(gap <= bound);
  }
  CHECK(lse_max_gap({1e300, -1e300}, 3) == 0.0);
}

TEST_CASE("convex PA approximation") {
  auto maxf = [](const std::vector<double>& x) { return *std::max_element(x.begin(), x.end()); };
  auto lse = [](const std::vector<double>& x) {
    double m = *std::max_element(x.begin(), x.end());
    double s = 0;
    for (double v : x) s += std::exp(2 * (v - m));
    return m + std::log(s) / 2;
  };
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> U(-3, 3);
  std::vector<std::vector<double>> samples;
  for (int k = 0; k < 400; ++k) samples.push_back({U(rng), U(rng)});
  for (int j = 0; j <= 4; ++j) {
    auto a = convex_pa_approximation(maxf, 2, j, samples);
    for (auto& x : samples) CHECK(std::abs(a.evaluate(x) - maxf(x)) < 1e-12);
  }
  auto err = [&](int j) {
    auto a = convex_pa_approximation(lse, 2, j, samples);
    double e = 0;
    for (auto& x : samples) {
      double d = a.evaluate(x) - lse(x);
      REQUIRE(d >= -1e-12);
      e = std::max(e, d);
    }
    return e;
  };
  CHECK(err(3) < err(1));
  auto a = convex_pa_approximation(lse, 2, 2, samples);
  bool has_e1 = false, has_e2 = false;
  for (auto& u : a.u) {
    has_e1 = has_e1 || (u[0] == 1 && u[1] == 0);
    has_e2 = has_e2 || (u[0] == 0 && u[1] == 1);
  }
  CHECK(has_e1);
  CHECK(has_e2);
  // One dominant coordinate: value is that coordinate plus a non-negative offset.
  double v = a.evaluate({10.0, -10.0});
  CHECK(v >= 10.0 - 1e-12);
  auto bad = [](const std::vector<double>& x) { return x[0] * x[0]; };
  CHECK_THROWS_AS(convex_pa_approximation(bad, 2, 1, samples), ValidationError);
  CHECK(simplex_grid(3, 2).size() == 6);
}
