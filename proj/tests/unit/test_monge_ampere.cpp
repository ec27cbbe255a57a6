#include "berkhyb/error.hpp"
#include "berkhyb/json_io.hpp"
#include "berkhyb/monge_ampere.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace berkhyb;

namespace {

TropicalFSMetric load_tfs(const std::string& name) {
  return tfs_from_json(read_json_file(testing_util::data_path("tfs/" + name + ".json")));
}

PiecewiseAffine1D clamp(const Rational& lo, const Rational& hi) {
  return PiecewiseAffine1D({LogLinear(lo), LogLinear(hi)},
                           {Line{0, LogLinear(lo)}, Line{1, LogLinear()}, Line{0, LogLinear(hi)}});
}

PiecewiseAffine1D bump() {
  // 0 outside [-1, 1], peak 1 at 0
  return PiecewiseAffine1D({LogLinear(-1), LogLinear(0), LogLinear(1)},
                           {Line{0, LogLinear()}, Line{1, LogLinear(1)}, Line{-1, LogLinear(1)}, Line{0, LogLinear()}});
}

}  // namespace

TEST_CASE("model metric masses") {
  auto t = table_from_json(read_json_file(testing_util::data_path("tables/two_comp.json")));
  auto res = ma_model_metric(t);
  CHECK(res.total_matches);
  REQUIRE(res.measure.atoms.size() == 2);
  CHECK(res.measure.atoms[0].mass == 2);
  CHECK(res.measure.atoms[1].mass == 1);
  CHECK(res.measure.total_mass() == 3);

  auto w = table_from_json(read_json_file(testing_util::data_path("tables/weighted_b2.json")));
  auto rw = ma_model_metric(w);
  CHECK(rw.total_matches);
  REQUIRE(rw.measure.atoms.size() == 1);  // D0 carries no mass
  CHECK(rw.measure.atoms[0].mass == 1);

  t.total = 4;
  CHECK_FALSE(ma_model_metric(t).total_matches);
}

TEST_CASE("curve masses are slope increases") {
  auto g = PiecewiseAffine1D::upper_envelope({Line{0, LogLinear()}, Line{1, LogLinear()}});
  auto res = ma_pa_curve(g);
  REQUIRE(res.measure.atoms.size() == 1);
  CHECK(res.measure.atoms[0].mass == 1);
  CHECK(*res.measure.atoms[0].position == LogLinear());
  CHECK(res.semipositive_ok);

  auto c = tfs_curve_restriction(load_tfs("family_c"), Rational(1, 2));
  auto rc = ma_pa_curve(c);
  REQUIRE(rc.measure.atoms.size() == 2);
  CHECK(*rc.measure.atoms[0].position == LogLinear(Rational(-1, 2)));
  CHECK(rc.measure.total_mass() == 2);

  auto concave = g * Rational(-1);
  CHECK_FALSE(ma_pa_curve(concave).semipositive_ok);
}

TEST_CASE("atoms, pairing, symmetry") {
  AtomicMeasure a{{{"x", LogLinear(), 1}, {"y", LogLinear(1), 2}}};
  AtomicMeasure b{{{"p", LogLinear(1), 2}, {"q", LogLinear(), 1}, {"z", LogLinear(5), 0}}};
  CHECK(same_atoms(a, b));
  b.atoms[0].mass = 3;
  CHECK_FALSE(same_atoms(a, b));
  auto f = clamp(-2, 0);
  CHECK(pair_integral(f, a) == LogLinear());
  AtomicMeasure neg{{{"n", LogLinear(-1), 3}}};
  CHECK(pair_integral(f, neg) == LogLinear(-3));
  for (auto& [f0, f1] : {std::pair{clamp(-2, 0), bump()}, std::pair{clamp(-1, 1), clamp(-3, Rational(1, 2))}}) {
    auto s = pairing_symmetry_check(f0, f1);
    CHECK(s.equal);
    CHECK(s.lhs == s.rhs);
  }
}

TEST_CASE("Wasserstein distance on the line") {
  CHECK(wasserstein1({{0, 1}}, {{1, 1}}) == doctest::Approx(1));
  CHECK(wasserstein1({{0, 1}}, {{0, 0.5}, {2, 0.5}}) == doctest::Approx(1));
  CHECK(wasserstein1({{0, 0.5}, {1, 0.5}}, {{1, 0.5}, {0, 0.5}}) == doctest::Approx(0));
}

TEST_CASE("complex curve measures") {
  HybridConfig cfg;
  GridSpec grid;
  grid.n_radial = 256;
  grid.n_theta = 64;
  auto b = load_tfs("family_b");
  auto mu = ma_complex_curve(b, 1e-2, cfg, grid);
  CHECK(std::abs(mu.total_mass - 1) < 1e-4);
  auto line = pushforward_log_radius(mu);
  CHECK(std::abs(line.total() + line.leakage - 1) < 1e-4);
  CHECK(wasserstein1(line.atoms, {{0.0, 1.0}}) < 2 * mu.du);

  auto lse = ma_complex_curve(b, 1e-2, cfg, grid, PotentialMode::LogSumExp);
  CHECK(std::abs(lse.total_mass - 1) < 1e-4);

  // Two atoms of mass 1 for the quadratic family.
  auto c = load_tfs("family_c");
  auto mc = ma_complex_curve(c, 1e-3, cfg, grid);
  CHECK(std::abs(mc.total_mass - 2) < 1e-4);
  auto mu0 = ma_pa_curve(tfs_curve_restriction(c, cfg.r)).measure;
  CHECK(wasserstein1(pushforward_log_radius(mc).atoms, to_numeric(mu0)) < 0.1);
}

TEST_CASE("coefficient stability") {
  auto a = load_tfs("family_a");
  auto rep = cln_stability_check(a, 1, clamp(-2, 0), {Rational(1, 10), Rational(1, 100), Rational(1, 1000)},
                                 Rational(1, 2));
  CHECK(rep.passed);
  CHECK(rep.antisymmetric);
  CHECK(rep.residual < 1e-12);
  for (auto& row : rep.rows) CHECK(row.abs_difference <= rep.fitted_C * row.sup * (1 + 1e-12));
  CHECK_THROWS(cln_stability_check(a, 7, clamp(-2, 0), {Rational(1, 10)}, Rational(1, 2)));
}
