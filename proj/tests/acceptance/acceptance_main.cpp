// One PASS/FAIL line per acceptance criterion. Tolerances are fixed below.

#include "berkhyb/convex_approx.hpp"
#include "berkhyb/dual_complex.hpp"
#include "berkhyb/error.hpp"
#include "berkhyb/harness.hpp"
#include "berkhyb/hybrid.hpp"
#include "berkhyb/json_io.hpp"
#include "berkhyb/monge_ampere.hpp"
#include "berkhyb/mz_tree.hpp"
#include "berkhyb/tropical_metric.hpp"
#include "berkhyb/valuation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

using namespace berkhyb;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

constexpr double kValEvalSeconds = 1.0;
constexpr double kPathTolerance = 1e-3;
constexpr double kPathSeconds = 5.0;
constexpr double kW1Threshold = 0.05;
constexpr double kW1MonotoneSlack = 1e-9;
constexpr double kMASeconds = 60.0;
constexpr double kLelongTolerance = 1e-3;
constexpr double kClnResidual = 0.05;

const fs::path kData = BERKHYB_DATA_DIR;

struct Outcome {
  bool passed = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ModelRegistry bundled_models() { return models_from_json(read_json_file(kData / "models/bundled.json")); }

TropicalFSMetric load_tfs(const fs::path& p) { return tfs_from_json(read_json_file(p)); }

QuasiMonomialPoint random_point(const ModelPtr& model, std::mt19937_64& rng) {
  std::size_t s = rng() % model->strata().size();
  std::vector<Rational> w;
  Rational norm = 0;
  for (auto i : model->strata()[s].indices) {
    std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 97);
    w.push_back(a);
    norm += Rational(a * model->mult(i));
  }
  for (auto& x : w) x /= norm;
  return QuasiMonomialPoint(model, s, w);
}

// 1. qm_eval against the minimum over terms.
Outcome valuation_oracle() {
  auto model = bundled_models().get("triangle");
  auto rng = make_rng(kSeed, 101);
  std::vector<std::string> pool{"t"};
  for (auto& c : model->components()) pool.push_back(c.label);

  struct Case {
    QuasiMonomialPoint v;
    LaurentSeries f;
    Rational brute;
  };
  std::vector<Case> cases;
  for (int k = 0; k < 1000; ++k) {
    QuasiMonomialPoint v = random_point(model, rng);
    auto comp_w = v.component_weights();
    std::vector<std::string> vars = pool;
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(1 + rng() % pool.size());
    std::vector<Rational> var_w;
    for (auto& name : vars) {
      if (name == "t") {
        var_w.push_back(1);
        continue;
      }
      for (std::size_t i = 0; i < model->components().size(); ++i)
        if (model->components()[i].label == name) var_w.push_back(comp_w[i]);
    }
    std::set<Exponent> exps;
    std::size_t nterms = 1 + rng() % 8;
    while (exps.size() < nterms) {
      Exponent e(vars.size());
      for (auto& x : e) x = static_cast<std::int64_t>(rng() % 21) - 10;
      exps.insert(e);
    }
    LaurentSeries f(vars);
    bool first = true;
    Rational best;
    for (auto& e : exps) {
      std::int64_t c = static_cast<std::int64_t>(rng() % 19) - 9;
      f.add_term(e, c == 0 ? Coefficient::unit() : Coefficient::explicit_value(c));
      Rational val = 0;
      for (std::size_t j = 0; j < e.size(); ++j) val += var_w[j] * e[j];
      if (first || val < best) best = val;
      first = false;
    }
    cases.push_back({v, f, best});
  }
  auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (auto& c : cases) {
    ExtRational got = qm_eval(c.v, c.f);
    if (got.is_infinite() || got.value() != c.brute) ++mismatches;
  }
  double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kValEvalSeconds,
          "1000 inputs, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) + " s"};
}

// 2. rho o i = id on the skeleton.
Outcome retraction_idempotence() {
  auto reg = bundled_models();
  auto rng = make_rng(kSeed, 102);
  std::vector<ModelPtr> models{reg.get("segment"), reg.get("triangle"), reg.get("blowup")};
  std::size_t failures = 0;
  for (int k = 0; k < 100; ++k) {
    auto& model = models[k % models.size()];
    QuasiMonomialPoint v = random_point(model, rng);
    std::size_t n = model->components().size();
    MonomialPullback id{model->name(), std::vector<std::vector<std::int64_t>>(n, std::vector<std::int64_t>(n, 0))};
    for (std::size_t i = 0; i < n; ++i) id.matrix[i][i] = 1;
    auto res = retraction(model, v, id);
    if (!(res.point == v) || res.point.component_weights() != v.component_weights()) ++failures;
  }
  return {failures == 0, "100 points on segment, triangle, blowup; " + std::to_string(failures) + " failures"};
}

// 3. Lelong-number formula against direct restriction.
Outcome na_limit_dual_route() {
  auto reg = bundled_models();
  Rational r(1, 2);
  std::size_t checked = 0, bad = 0;
  std::string first_bad;
  for (auto& entry : fs::directory_iterator(kData / "tfs")) {
    auto phi = load_tfs(entry.path());
    for (auto& name : reg.names()) {
      auto model = reg.get(name);
      if (name.rfind("p1_", 0) != 0) continue;
      auto res = na_limit_tfs(phi, model, r);
      for (auto& v : res.vertices) {
        ++checked;
        if (!(v.formula_value == v.restriction_value)) {
          ++bad;
          if (first_bad.empty()) first_bad = phi.name + "@" + name + ":" + v.label;
        }
      }
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " divisorial points, " + std::to_string(bad) +
                                       " disagreements" + (first_bad.empty() ? "" : " (" + first_bad + ")")};
}

// 4. Total mass of the model MA measure.
Outcome total_mass() {
  std::size_t tables = 0, bad = 0;
  for (auto& entry : fs::directory_iterator(kData / "tables")) {
    auto t = table_from_json(read_json_file(entry.path()));
    Rational sum = 0;
    for (auto& e : t.entries) sum += Rational(e.b) * e.intersection;
    auto res = ma_model_metric(t);
    ++tables;
    if (res.measure.total_mass() != sum || sum != t.total || !res.total_matches) ++bad;
  }
  return {bad == 0 && tables > 0, std::to_string(tables) + " tables, " + std::to_string(bad) + " mismatches"};
}

// 5. Curve measures from the PA restriction against the model tables.
Outcome curve_dual_route() {
  auto manifest = read_json_file(kData / "manifests/ma_model.json");
  std::size_t n = 0, bad = 0;
  std::string why;
  for (auto& c : manifest.at("curve_inputs")) {
    auto table = table_from_json(read_json_file(kData / "manifests" / c.at("table").get<std::string>()));
    auto phi = load_tfs(kData / "manifests" / c.at("tfs").get<std::string>());
    Rational r = rational_from_json(c.at("r"), "r");
    auto curve = ma_pa_curve(tfs_curve_restriction(phi, r));
    auto model = ma_model_metric(table);
    ++n;
    std::string w;
    if (!same_atoms(curve.measure, model.measure, &w)) {
      ++bad;
      why = table.name + ": " + w;
    }
  }
  return {bad == 0 && n == 3, std::to_string(n) + " curve inputs, " + std::to_string(bad) + " mismatches" +
                                  (why.empty() ? "" : " (" + why + ")")};
}

// 6. Path limits for f = z - t along z = 2 t^w.
Outcome path_limits() {
  HybridConfig cfg;
  std::vector<double> schedule;
  for (int k = 1; k <= 8; ++k) schedule.push_back(std::pow(10.0, -k));
  LaurentSeries f(std::vector<std::string>{"z", "t"});
  f.add_term({1, 0}, Coefficient::unit());
  f.add_term({0, 1}, Coefficient::explicit_value(-1));
  auto t0 = Clock::now();
  double worst = 0;
  bool ok = true;
  for (Rational w : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(2)}) {
    auto res = hybrid_path_limit(f, 2.0, w, cfg, schedule, kPathTolerance);
    double want = std::min(to_double(w), 1.0);
    double err = std::abs(res.limit - want);
    worst = std::max(worst, err);
    ok = ok && err <= kPathTolerance && !res.degenerate;
  }
  double secs = seconds_since(t0);
  return {ok && secs < kPathSeconds, "worst |limit - min(w,1)| = " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 7. Weak convergence of the fiber measures to the Dirac mass at u = -1.
Outcome weak_convergence() {
  auto phi = load_tfs(kData / "tfs/family_a.json");
  HybridConfig cfg;
  GridSpec grid;
  grid.n_radial = 1024;
  grid.n_theta = 1024;
  const std::vector<std::pair<double, double>> mu0{{-1.0, 1.0}};
  auto t0 = Clock::now();
  std::vector<double> w1;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    auto mu = ma_complex_curve(phi, t, cfg, grid);
    w1.push_back(wasserstein1(pushforward_log_radius(mu).atoms, mu0));
  }
  double secs = seconds_since(t0);
  bool monotone = w1[1] <= w1[0] + kW1MonotoneSlack && w1[2] <= w1[1] + kW1MonotoneSlack;
  return {w1[2] <= kW1Threshold && monotone && secs < kMASeconds,
          "W1 = " + fmt(w1[0]) + ", " + fmt(w1[1]) + ", " + fmt(w1[2]) + "; " + fmt(secs) + " s"};
}

// 8. Lelong number of log|t^2 + t^3| with bounded perturbations.
Outcome lelong() {
  std::vector<double> radii;
  for (int k = 0; k <= 32; ++k) radii.push_back(std::pow(10.0, -6.0 + k / 8.0));
  auto base = [](std::complex<double> t) { return std::log(std::abs(t * t + t * t * t)); };
  double e0 = lelong_estimate(sample_radial(base, radii, 256)).estimate;
  double worst = std::abs(e0 - 2);
  auto rng = make_rng(kSeed, 108);
  std::uniform_real_distribution<double> phase(0, 2 * M_PI);
  for (int k = 1; k <= 3; ++k) {
    double b = phase(rng);
    auto pert = [&, k, b](std::complex<double> t) { return base(t) + std::cos(k * std::arg(t) + b); };
    double e = lelong_estimate(sample_radial(pert, radii, 256)).estimate;
    worst = std::max({worst, std::abs(e - 2), std::abs(e - e0)});
  }
  return {worst <= kLelongTolerance, "estimate " + fmt(e0) + ", worst deviation " + fmt(worst)};
}

// 9. Log-sum-exp envelope.
Outcome lse_envelope() {
  auto rng = make_rng(kSeed, 109);
  std::uniform_real_distribution<double> U(-10, 10);
  std::size_t violations = 0;
  double worst_gap = 0;
  for (int k = 0; k < 100000; ++k) {
    std::size_t N = 1 + rng() % 8;
    int m = 1 + static_cast<int>(rng() % 3);
    std::vector<double> x(N);
    for (auto& v : x) v = U(rng);
    double gap = lse_max_gap(x, m);
    // Independent evaluation in long double.
    long double mx = *std::max_element(x.begin(), x.end()), s = 0;
    for (double v : x) s += std::exp(2.0L * m * (v - mx));
    long double ref = std::log(s) / (2.0L * m);
    double bound = std::log(double(N)) / (2.0 * m);
    if (gap < 0 || gap > bound || std::abs(gap - double(ref)) > 1e-12) ++violations;
    worst_gap = std::max(worst_gap, gap / std::max(bound, 1e-300));
  }
  return {violations == 0, "100000 samples, " + std::to_string(violations) + " violations"};
}

// 10. M(Z): random FS families, the crafted violator, the slope-sum identity.
Outcome mz_characterization() {
  auto rng = make_rng(kSeed, 110);
  std::size_t failures = 0, discrepancies = 0;
  std::string first;
  for (int k = 0; k < 20; ++k) {
    std::vector<MZEntry> fam;
    std::size_t size = 1 + rng() % 4;
    for (std::size_t i = 0; i < size; ++i) {
      std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100);
      if (rng() % 2) n = -n;
      fam.push_back({n, Rational(static_cast<std::int64_t>(rng() % 9) - 4, 1 + static_cast<std::int64_t>(rng() % 4))});
    }
    std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 3);
    auto verdict = mz_psh_check(mz_from_family(fam, m));

    // Slopes at the origin from exact evaluation at small parameters.
    Rational top = fam[0].c;
    for (auto& e : fam) top = std::max(top, e.c);
    std::int64_t n1 = 0, n2 = 1;
    std::set<std::int64_t> primes;
    for (auto& e : fam) {
      for (auto& [p, _] : prime_factors(e.n)) primes.insert(p);
      if (e.c != top) continue;
      n1 = std::gcd(n1, std::abs(e.n));
      n2 = std::lcm(n2, std::abs(e.n));
    }
    Rational eps(1, 1000000);
    LogLinear at0 = mz_fs_eval(fam, m, MZPoint::origin()).value;
    LogLinear sum_sp;
    for (auto p : primes) sum_sp += (mz_fs_eval(fam, m, MZPoint::prime(p, eps)).value - at0) / eps;
    LogLinear s_inf_direct = (mz_fs_eval(fam, m, MZPoint::infinity(eps)).value - at0) / eps;
    LogLinear s_inf_lcm = LogLinear::log(Rational(n2)) / Rational(m);
    LogLinear rhs = LogLinear::log(Rational(n2, n1)) / Rational(m);

    auto id = mz_family_identity(fam, m);
    bool ok = verdict.psh && sum_sp + s_inf_lcm == rhs && id.identity_holds && id.rhs == rhs &&
              id.sum_sp == sum_sp && id.s_inf_direct == s_inf_direct;
    if (s_inf_direct != s_inf_lcm) ++discrepancies;
    if (!ok) {
      ++failures;
      if (first.empty()) first = "family " + std::to_string(k);
    }
  }
  auto violator = mz_psh_check(mz_function_from_json(read_json_file(kData / "mz/slope_sum_violator.json")));
  bool violator_ok = !violator.psh && std::find(violator.reasons.begin(), violator.reasons.end(),
                                                "slope_sum_negative") != violator.reasons.end();
  return {failures == 0 && violator_ok,
          "20 families, " + std::to_string(failures) + " failures" + (first.empty() ? "" : " (" + first + ")") +
              ", violator " + (violator_ok ? "rejected" : "NOT rejected") + ", s_inf discrepancies logged: " +
              std::to_string(discrepancies)};
}

// 11. Coefficient stability of the pairing.
Outcome cln_stability() {
  auto phi = load_tfs(kData / "tfs/family_a.json");
  PiecewiseAffine1D f({LogLinear(-2), LogLinear(0)},
                      {Line{0, LogLinear(-2)}, Line{1, LogLinear()}, Line{0, LogLinear()}});
  std::vector<Rational> deltas{Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 10000)};
  auto rep = cln_stability_check(phi, 1, f, deltas, Rational(1, 2), kClnResidual);
  // The kink of the restriction sits where f has slope 1 and moves by delta / log 2.
  double sdd = 0, sss = 0;
  bool closed_form = rep.rows.size() == deltas.size();
  for (std::size_t i = 0; closed_form && i < rep.rows.size(); ++i) {
    double d = to_double(deltas[i]);
    closed_form = std::abs(rep.rows[i].abs_difference - d / std::log(2.0)) <= 1e-12;
    sdd += rep.rows[i].abs_difference * rep.rows[i].sup;
    sss += rep.rows[i].sup * rep.rows[i].sup;
  }
  double C = sdd / sss, residual = 0;
  for (auto& row : rep.rows) residual = std::max(residual, std::abs(row.abs_difference - C * row.sup) / (C * row.sup));
  return {rep.passed && closed_form && residual <= kClnResidual,
          "fitted C = " + fmt(C) + ", residual " + fmt(residual)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

// 12. Byte-identical suite outputs for a fixed seed.
Outcome reproducibility() {
  fs::path base = fs::temp_directory_path() / "berkhyb_acceptance_repro";
  fs::remove_all(base);
  RunOptions opts;
  opts.seed = kSeed;
  bool passed = true;
  for (const char* run : {"a", "b"}) {
    auto rep = run_manifest(kData / "manifests/suite.json", "suite", opts);
    passed = passed && rep.passed;
    write_outputs(rep, base / run);
  }
  auto a = read_tree(base / "a"), b = read_tree(base / "b");
  bool same = !a.empty() && a == b;
  fs::remove_all(base);
  return {same && passed, std::to_string(a.size()) + " files, " + (same ? "identical" : "DIFFERENT") +
                              (passed ? "" : ", suite checks failed")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"valuation oracle equivalence", valuation_oracle},
      {"retraction idempotence", retraction_idempotence},
      {"dual-route non-archimedean limit", na_limit_dual_route},
      {"total-mass identity", total_mass},
      {"curve measure dual route", curve_dual_route},
      {"hybrid path limits", path_limits},
      {"weak convergence of fiber measures", weak_convergence},
      {"Lelong estimation", lelong},
      {"log-sum-exp envelope", lse_envelope},
      {"M(Z) characterization", mz_characterization},
      {"coefficient stability", cln_stability},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
