#include "berkhyb/harness.hpp"

#include "berkhyb/dual_complex.hpp"
#include "berkhyb/error.hpp"
#include "berkhyb/hybrid.hpp"
#include "berkhyb/monge_ampere.hpp"
#include "berkhyb/mz_tree.hpp"
#include "berkhyb/tropical_metric.hpp"
#include "berkhyb/valuation.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;

namespace berkhyb {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"val-eval", "retract", "na-limit", "ma-model", "ma-converge",
                                              "mz-check", "lelong",  "rho-r",    "suite"};
  return kinds;
}

namespace {

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

double draw_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Collects named pass/fail lines for a report.
class Checks {
 public:
  void add(const std::string& name, bool ok, const std::string& detail = "") {
    Json c = Json::object();
    c["name"] = name;
    c["passed"] = ok;
    if (!detail.empty()) c["detail"] = detail;
    list_.push_back(c);
    passed_ = passed_ && ok;
  }
  bool passed() const { return passed_; }
  const Json& json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool passed_ = true;
};

struct Context {
  fs::path dir;  // manifest directory; relative paths resolve against it
  Json manifest;
  std::uint64_t seed = 0;
  int threads = 1;

  fs::path path(const std::string& field) const {
    const Json& v = manifest.at(field);
    if (!v.is_string()) throw ConfigError("manifest field '" + field + "' must be a path");
    return dir / v.get<std::string>();
  }
  fs::path resolve(const Json& v, const std::string& what) const {
    if (!v.is_string()) throw ConfigError(what + " must be a path string");
    return dir / v.get<std::string>();
  }
  const Json& require(const std::string& field) const {
    if (!manifest.contains(field)) throw ConfigError("manifest is missing field '" + field + "'");
    return manifest.at(field);
  }
  double number(const std::string& field, double dflt) const {
    if (!manifest.contains(field)) return dflt;
    const Json& v = manifest.at(field);
    if (!v.is_number()) throw ConfigError("manifest field '" + field + "' must be a number");
    return v.get<double>();
  }
  std::int64_t integer(const std::string& field, std::int64_t dflt) const {
    if (!manifest.contains(field)) return dflt;
    const Json& v = manifest.at(field);
    if (!v.is_number_integer()) throw ConfigError("manifest field '" + field + "' must be an integer");
    return v.get<std::int64_t>();
  }
};

double positive(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  double v = j.get<double>();
  if (!(v > 0)) throw ConfigError(what + " must be positive");
  return v;
}

std::vector<double> number_list(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of numbers");
  std::vector<double> out;
  for (auto& x : j) out.push_back(positive(x, what));
  return out;
}

ModelRegistry load_models(const Context& ctx) { return models_from_json(read_json_file(ctx.path("models"))); }

QuasiMonomialPoint point_from_json(const ModelRegistry& reg, const Json& j, const std::string& where) {
  if (!j.contains("model") || !j.contains("stratum") || !j.contains("weights"))
    throw ConfigError(where + ": a point needs model, stratum and weights");
  ModelPtr model = reg.get(j["model"].get<std::string>());
  std::vector<std::size_t> idx;
  for (auto& l : j["stratum"]) idx.push_back(model->component_index(l.get<std::string>()));
  auto s = model->find_stratum(idx);
  if (!s) throw ConfigError(where + ": stratum is not declared in model " + model->name());
  // Weights follow the listed labels; reorder to the stratum's sorted indices.
  std::vector<std::pair<std::size_t, Rational>> pairs;
  for (std::size_t k = 0; k < idx.size(); ++k)
    pairs.emplace_back(idx[k], rational_from_json(j["weights"].at(k), where + ".weights"));
  std::sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<Rational> w;
  for (auto& p : pairs) w.push_back(p.second);
  try {
    return QuasiMonomialPoint(model, *s, w);
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// Random point of a model skeleton: uniform stratum, positive integer weights rescaled to
// sum_j a_j w_j = 1.
QuasiMonomialPoint random_point(const ModelPtr& model, std::mt19937_64& rng) {
  std::size_t s = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(model->strata().size()) - 1));
  const Stratum& st = model->strata()[s];
  std::vector<Rational> w;
  Rational norm = 0;
  for (auto i : st.indices) {
    std::int64_t k = draw(rng, 1, 24);
    w.push_back(Rational(k));
    norm += Rational(k * model->mult(i));
  }
  for (auto& x : w) x /= norm;
  return QuasiMonomialPoint(model, s, w);
}

// ---------------------------------------------------------------------------------------

RunReport run_val_eval(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  ModelRegistry reg = load_models(ctx);
  Json cases = Json::array();
  if (ctx.manifest.contains("cases")) {
    for (auto& c : ctx.manifest["cases"]) {
      std::string id = c.value("id", "case");
      QuasiMonomialPoint v = point_from_json(reg, c, id);
      LaurentSeries f = laurent_from_json(c.at("f"), id + ".f");
      ExtRational got = qm_eval(v, f);
      Json row = Json::object();
      row["id"] = id;
      row["value"] = got.str();
      if (c.contains("expected")) {
        const Json& e = c["expected"];
        ExtRational want = (e.is_string() && e.get<std::string>() == "inf")
                               ? ExtRational::infinity()
                               : ExtRational(rational_from_json(e, id + ".expected"));
        row["expected"] = want.str();
        checks.add("case:" + id, got == want, got.str() + " vs " + want.str());
      }
      cases.push_back(row);
    }
  }
  results["cases"] = cases;

  if (ctx.manifest.contains("random")) {
    const Json& r = ctx.manifest["random"];
    ModelPtr model = reg.get(r.at("model").get<std::string>());
    std::int64_t count = r.value("count", 1000);
    std::int64_t max_terms = r.value("max_terms", 8);
    std::int64_t range = r.value("exp_range", 10);
    auto rng = make_rng(ctx.seed, 1);
    // Variables: t and the component labels, so every local coordinate is in play.
    std::vector<std::string> pool{"t"};
    for (auto& c : model->components()) pool.push_back(c.label);
    std::size_t max_vars = std::min<std::size_t>(r.value("max_vars", 4), pool.size());
    std::int64_t mismatches = 0, super_fail = 0;
    for (std::int64_t k = 0; k < count; ++k) {
      QuasiMonomialPoint v = random_point(model, rng);
      std::size_t nv = static_cast<std::size_t>(draw(rng, 1, static_cast<std::int64_t>(max_vars)));
      std::vector<std::string> vars(pool.begin(), pool.begin() + nv);
      auto make = [&] {
        LaurentSeries f(vars);
        std::int64_t nt = draw(rng, 1, max_terms);
        for (std::int64_t i = 0; i < nt; ++i) {
          Exponent e;
          for (std::size_t j = 0; j < nv; ++j) e.push_back(draw(rng, -range, range));
          f.add_term(e, Coefficient::explicit_value(Rational(draw(rng, 1, 9))));
        }
        return f;
      };
      LaurentSeries f = make();
      // Term-by-term minimum.
      ExtRational brute = ExtRational::infinity();
      for (auto& [e, c] : f.terms()) {
        Rational s = 0;
        for (std::size_t j = 0; j < nv; ++j) s += Rational(e[j]) * v.variable_weight(vars[j]);
        brute = min(brute, ExtRational(s));
      }
      if (!(qm_eval(v, f) == brute)) ++mismatches;
      if (k < 100) {
        LaurentSeries g = make();
        if (!valuation_superadditivity_check(v, f, g).passed) ++super_fail;
      }
    }
    Json rr = Json::object();
    rr["model"] = model->name();
    rr["count"] = count;
    rr["mismatches"] = mismatches;
    rr["superadditivity_failures"] = super_fail;
    results["random"] = rr;
    checks.add("random_oracle", mismatches == 0, std::to_string(mismatches) + " mismatches");
    checks.add("superadditivity", super_fail == 0, std::to_string(super_fail) + " failures");
  }
  return rep;
}

RunReport run_retract(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  ModelRegistry reg = load_models(ctx);
  std::vector<ModelPtr> models;
  for (auto& n : ctx.require("models_under_test")) models.push_back(reg.get(n.get<std::string>()));
  if (models.empty()) throw ConfigError("models_under_test is empty");
  std::int64_t points = ctx.integer("points", 100);
  auto rng = make_rng(ctx.seed, 2);
  std::int64_t failures = 0, ambiguous = 0;
  Json dc = Json::array();
  for (auto& m : models) {
    DualComplex d = build_dual_complex(m);
    Json o = Json::object();
    o["model"] = m->name();
    o["simplices"] = d.simplices.size();
    o["vertices"] = d.num_vertices;
    o["euler_characteristic"] = d.euler_characteristic;
    dc.push_back(o);
  }
  results["dual_complexes"] = dc;
  std::string first_failure;
  for (std::int64_t k = 0; k < points; ++k) {
    const ModelPtr& m = models[static_cast<std::size_t>(k) % models.size()];
    QuasiMonomialPoint v = random_point(m, rng);
    RetractionResult res = retraction(m, v, identity_pullback(*m));
    if (res.ambiguous) ++ambiguous;
    if (!(res.point == v)) {
      ++failures;
      if (first_failure.empty()) first_failure = v.str() + " -> " + res.point.str();
    }
  }
  Json idem = Json::object();
  idem["points"] = points;
  idem["failures"] = failures;
  idem["ambiguous"] = ambiguous;
  results["idempotence"] = idem;
  checks.add("retraction_idempotent", failures == 0,
             first_failure.empty() ? std::to_string(points) + " points" : first_failure);

  Json maps = Json::array();
  if (ctx.manifest.contains("maps")) {
    std::size_t k = 0;
    for (auto& c : ctx.manifest["maps"]) {
      std::string id = c.value("id", "map" + std::to_string(k++));
      QuasiMonomialPoint v = point_from_json(reg, c.at("point"), id + ".point");
      ModelPtr target = reg.get(c.at("target").get<std::string>());
      RetractionResult res = retraction(target, v, v.model()->pullback_to(target->name()));
      Json row = Json::object();
      row["id"] = id;
      row["source"] = to_json(v);
      row["image"] = to_json(res.point);
      row["ambiguous"] = res.ambiguous;
      if (c.contains("expected")) {
        QuasiMonomialPoint want = point_from_json(reg, c["expected"], id + ".expected");
        checks.add("map:" + id, res.point == want, res.point.str() + " vs " + want.str());
      }
      maps.push_back(row);
    }
  }
  results["maps"] = maps;
  return rep;
}

RunReport run_na_limit(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  ModelRegistry reg = load_models(ctx);
  Rational r = rational_from_json(ctx.require("r"), "r");
  Json out = Json::array();
  for (auto& c : ctx.require("cases")) {
    TropicalFSMetric phi = tfs_from_json(read_json_file(ctx.resolve(c.at("tfs"), "tfs")));
    for (auto& mn : c.at("models")) {
      ModelPtr model = reg.get(mn.get<std::string>());
      NaLimitResult res = na_limit_tfs(phi, model, r);
      std::string id = phi.name + "@" + model->name();
      Json row = Json::object();
      row["metric"] = phi.name;
      row["model"] = model->name();
      Json verts = Json::array();
      for (auto& v : res.vertices) {
        Json o = Json::object();
        o["component"] = v.label;
        o["b"] = v.b;
        o["nu"] = to_json(v.nu);
        o["formula_value"] = to_json(v.formula_value);
        o["restriction_value"] = to_json(v.restriction_value);
        o["agree"] = v.agree;
        verts.push_back(o);
      }
      row["vertices"] = verts;
      row["continuous"] = res.continuous;
      out.push_back(row);
      checks.add("dual_route:" + id, res.all_agree);
      checks.add("continuous:" + id, res.continuous);
      rep.files.emplace_back("pa_" + phi.name + "_" + model->name() + ".csv", res.psi.to_csv());
    }
  }
  results["cases"] = out;
  return rep;
}

RunReport run_ma_model(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  std::optional<ModelRegistry> reg;
  if (ctx.manifest.contains("models")) reg = load_models(ctx);
  Json tables = Json::array();
  if (ctx.manifest.contains("tables")) {
    for (auto& p : ctx.manifest["tables"]) {
      IntersectionTable t = table_from_json(read_json_file(ctx.resolve(p, "table")));
      if (reg && !t.model.empty()) t.validate_against(*reg->get(t.model));
      ModelMAResult res = ma_model_metric(t);
      Json o = Json::object();
      o["table"] = t.name;
      o["atoms"] = to_json(res.measure);
      o["total"] = to_json(res.total);
      o["declared_total"] = to_json(t.total);
      Json flags = Json::array();
      for (auto& f : res.flags) flags.push_back(f);
      o["flags"] = flags;
      tables.push_back(o);
      checks.add("total_mass:" + t.name, res.total_matches, to_string(res.total) + " vs " + to_string(t.total));
    }
  }
  results["tables"] = tables;

  Json curves = Json::array();
  if (ctx.manifest.contains("curve_inputs")) {
    for (auto& c : ctx.manifest["curve_inputs"]) {
      IntersectionTable t = table_from_json(read_json_file(ctx.resolve(c.at("table"), "table")));
      TropicalFSMetric phi = tfs_from_json(read_json_file(ctx.resolve(c.at("tfs"), "tfs")));
      Rational r = rational_from_json(c.at("r"), "r");
      PiecewiseAffine1D g = tfs_curve_restriction(phi, r);
      CurveMAResult pa = ma_pa_curve(g);
      ModelMAResult model = ma_model_metric(t);
      std::string why;
      bool same = same_atoms(pa.measure, model.measure, &why);
      Json o = Json::object();
      o["table"] = t.name;
      o["metric"] = phi.name;
      o["restriction"] = to_json(g);
      o["pa_atoms"] = to_json(pa.measure);
      o["model_atoms"] = to_json(model.measure);
      curves.push_back(o);
      checks.add("curve_dual_route:" + t.name, same, why);
    }
  }
  results["curve_inputs"] = curves;

  Json cln = Json::array();
  if (ctx.manifest.contains("cln")) {
    for (auto& c : ctx.manifest["cln"]) {
      TropicalFSMetric phi = tfs_from_json(read_json_file(ctx.resolve(c.at("tfs"), "tfs")));
      Rational r = rational_from_json(c.at("r"), "r");
      PiecewiseAffine1D f = pa1d_from_json(c.at("f"), "cln.f");
      std::vector<Rational> deltas;
      for (auto& d : c.at("deltas")) deltas.push_back(rational_from_json(d, "cln.deltas"));
      double tol = c.value("residual_tolerance", 0.05);
      ClnReport res = cln_stability_check(phi, c.at("entry").get<std::size_t>(), f, deltas, r, tol);
      Json o = Json::object();
      o["metric"] = phi.name;
      Json rows = Json::array();
      for (auto& row : res.rows) {
        Json x = Json::object();
        x["delta"] = to_json(row.delta);
        x["difference"] = to_json(row.difference);
        x["sup_distance"] = to_json(row.sup_distance);
        x["abs_difference"] = row.abs_difference;
        x["sup"] = row.sup;
        rows.push_back(x);
        rep.plot.push_back({"cln:" + phi.name, to_double(row.delta), "abs_difference", row.abs_difference});
      }
      o["rows"] = rows;
      o["fitted_C"] = res.fitted_C;
      o["residual"] = res.residual;
      o["antisymmetric"] = res.antisymmetric;
      cln.push_back(o);
      checks.add("cln:" + phi.name, res.passed, res.failure);
    }
  }
  results["cln"] = cln;

  Json sym = Json::array();
  if (ctx.manifest.contains("pairing")) {
    std::size_t k = 0;
    for (auto& c : ctx.manifest["pairing"]) {
      std::string id = "pairing" + std::to_string(k++);
      SymmetryReport s = pairing_symmetry_check(pa1d_from_json(c.at("f0"), id + ".f0"),
                                                pa1d_from_json(c.at("f1"), id + ".f1"));
      Json o = Json::object();
      o["lhs"] = to_json(s.lhs);
      o["rhs"] = to_json(s.rhs);
      sym.push_back(o);
      checks.add("symmetry:" + id, s.equal, s.lhs.str() + " vs " + s.rhs.str());
    }
  }
  results["pairing"] = sym;
  return rep;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  if (j.is_null()) return g;
  if (j.contains("n_radial")) g.n_radial = j["n_radial"].get<int>();
  if (j.contains("n_theta")) g.n_theta = j["n_theta"].get<int>();
  if (j.contains("window")) g.window = positive(j["window"], "grid.window");
  if (j.contains("mass_tolerance")) g.mass_tolerance = positive(j["mass_tolerance"], "grid.mass_tolerance");
  if (g.n_radial < 4 || g.n_theta < 4) throw ConfigError("grid needs at least 4 nodes per direction");
  return g;
}

RunReport run_ma_converge(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  TropicalFSMetric phi = tfs_from_json(read_json_file(ctx.path("tfs")));
  HybridConfig cfg;
  cfg.r = rational_from_json(ctx.require("r"), "r");
  cfg.validate();
  std::vector<double> schedule = number_list(ctx.require("schedule"), "schedule");
  GridSpec grid = grid_from_json(ctx.manifest.value("grid", Json()));
  PotentialMode mode = PotentialMode::Max;
  std::string ms = ctx.manifest.value("mode", "max");
  if (ms == "lse")
    mode = PotentialMode::LogSumExp;
  else if (ms != "max")
    throw ConfigError("mode must be 'max' or 'lse'");
  std::vector<TestFunction> tests;
  if (ctx.manifest.contains("tests"))
    for (auto& t : ctx.manifest["tests"]) {
      std::string id = t.at("id").get<std::string>();
      tests.push_back({id, pa1d_from_json(t, "tests." + id)});
    }
  double threshold = ctx.number("w1_threshold", 0.05);

  ConvergenceReport cr = weak_convergence_experiment(phi, cfg, schedule, grid, tests, mode, ctx.threads);
  results["family"] = cr.family;
  results["mu0"] = to_json(cr.mu0);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "t,test,error\n";
  csv.precision(17);
  for (auto& row : cr.rows) {
    Json o = Json::object();
    o["t"] = row.t;
    o["w1"] = row.w1;
    o["total_mass"] = row.total_mass;
    o["leakage"] = row.leakage;
    Json errs = Json::object();
    csv << row.t << ",W1," << row.w1 << "\n";
    rep.plot.push_back({cr.family, row.t, "W1", row.w1});
    for (std::size_t k = 0; k < tests.size(); ++k) {
      errs[tests[k].id] = row.errors[k];
      csv << row.t << "," << tests[k].id << "," << row.errors[k] << "\n";
      rep.plot.push_back({cr.family, row.t, "err:" + tests[k].id, row.errors[k]});
    }
    o["errors"] = errs;
    rows.push_back(o);
  }
  results["rows"] = rows;
  results["monotone"] = cr.monotone;
  rep.files.emplace_back("errors.csv", csv.str());
  checks.add("w1_final", cr.rows.back().w1 <= threshold,
             "W1 = " + std::to_string(cr.rows.back().w1) + " at t = " + std::to_string(cr.rows.back().t));
  std::string why;
  for (auto& f : cr.failures) why += (why.empty() ? "" : "; ") + f;
  checks.add("w1_non_increasing", cr.monotone, why);
  return rep;
}

Json slope_report_json(const MZSlopeReport& s) {
  Json o = Json::object();
  Json br = Json::array();
  for (auto& b : s.branches) {
    Json x = Json::object();
    x["branch"] = b.branch;
    x["s0"] = to_json(b.s0);
    x["s_end"] = to_json(b.s_end);
    x["end_neg_inf"] = b.end_neg_inf;
    x["convex"] = b.convex;
    br.push_back(x);
  }
  o["branches"] = br;
  o["s_inf"] = to_json(s.s_inf);
  o["inf_convex"] = s.inf_convex;
  o["inf_increasing"] = s.inf_increasing;
  o["slope_sum"] = to_json(s.slope_sum);
  o["default_slope_zero"] = s.default_slope_zero;
  return o;
}

Json verdict_json(const MZVerdict& v) {
  Json o = Json::object();
  o["psh"] = v.psh;
  Json r = Json::array();
  for (auto& x : v.reasons) r.push_back(x);
  o["reasons"] = r;
  o["slopes"] = slope_report_json(v.report);
  return o;
}

Json identity_json(const MZIdentityReport& id) {
  Json o = Json::object();
  o["n1"] = id.n1.str();
  o["n2"] = id.n2.str();
  o["sum_sp"] = to_json(id.sum_sp);
  o["s_inf_direct"] = to_json(id.s_inf_direct);
  o["s_inf_lcm"] = to_json(id.s_inf_lcm);
  o["lhs"] = to_json(id.lhs);
  o["rhs"] = to_json(id.rhs);
  o["identity_holds"] = id.identity_holds;
  o["s_inf_discrepancy"] = id.s_inf_discrepancy;
  return o;
}

RunReport run_mz_check(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  std::ostringstream slopes_csv;
  slopes_csv << "source,branch,s0,s_end,convex\n";
  auto slope_rows = [&](const std::string& src, const MZSlopeReport& s) {
    for (auto& b : s.branches)
      slopes_csv << src << "," << b.branch << "," << b.s0.str() << "," << b.s_end.str() << ","
                 << (b.convex ? "true" : "false") << "\n";
    slopes_csv << src << ",inf," << s.s_inf.str() << ",," << (s.inf_convex ? "true" : "false") << "\n";
  };

  Json funcs = Json::array();
  if (ctx.manifest.contains("functions")) {
    for (auto& c : ctx.manifest["functions"]) {
      fs::path p = ctx.resolve(c.at("file"), "function file");
      MZFunction f = mz_function_from_json(read_json_file(p));
      MZVerdict v = mz_psh_check(f);
      std::string id = p.stem().string();
      Json o = verdict_json(v);
      o["id"] = id;
      funcs.push_back(o);
      slope_rows(id, v.report);
      std::string expect = c.value("expect", "pass");
      bool ok = expect == "pass" ? v.psh : !v.psh;
      if (c.contains("expect_reason")) {
        std::string want = c["expect_reason"].get<std::string>();
        ok = ok && std::find(v.reasons.begin(), v.reasons.end(), want) != v.reasons.end();
      }
      std::string reasons;
      for (auto& r : v.reasons) reasons += (reasons.empty() ? "" : ",") + r;
      checks.add("function:" + id, ok, reasons);
    }
  }
  results["functions"] = funcs;

  std::vector<std::pair<std::string, std::pair<std::vector<MZEntry>, std::int64_t>>> families;
  if (ctx.manifest.contains("families")) {
    std::size_t k = 0;
    for (auto& c : ctx.manifest["families"]) {
      std::string id = c.value("id", "family" + std::to_string(k++));
      families.push_back({id, {mz_family_from_json(c.at("family"), id), c.value("m", std::int64_t{1})}});
    }
  }
  if (ctx.manifest.contains("random_families")) {
    const Json& r = ctx.manifest["random_families"];
    std::int64_t count = r.value("count", 20);
    std::int64_t max_size = r.value("max_size", 5);
    std::int64_t n_range = r.value("n_range", 60);
    std::int64_t c_den = r.value("c_den", 2);
    std::int64_t c_range = r.value("c_range", 2);
    std::int64_t m_max = r.value("m_max", 3);
    auto rng = make_rng(ctx.seed, 3);
    for (std::int64_t k = 0; k < count; ++k) {
      std::vector<MZEntry> fam;
      std::int64_t size = draw(rng, 1, max_size);
      for (std::int64_t i = 0; i < size; ++i) {
        std::int64_t n = 0;
        while (n == 0) n = draw(rng, -n_range, n_range);
        fam.push_back({n, Rational(draw(rng, -c_range * c_den, c_range * c_den), c_den)});
      }
      families.push_back({"random" + std::to_string(k), {fam, draw(rng, 1, m_max)}});
    }
  }
  Json fams = Json::array();
  std::int64_t discrepancies = 0;
  for (std::size_t k = 0; k < families.size(); ++k) {
    auto& [id, data] = families[k];
    auto& [fam, m] = data;
    MZFunction f = mz_from_family(fam, m);
    MZVerdict v = mz_psh_check(f);
    MZIdentityReport idr = mz_family_identity(fam, m);
    Json o = Json::object();
    o["id"] = id;
    o["m"] = m;
    Json fj = Json::array();
    for (auto& e : fam) fj.push_back(Json::array({e.n, to_string(e.c)}));
    o["family"] = fj;
    o["verdict"] = verdict_json(v);
    o["identity"] = identity_json(idr);
    fams.push_back(o);
    slope_rows(id, v.report);
    rep.plot.push_back({"mz", static_cast<double>(k), "slope_sum", v.report.slope_sum.to_double()});
    if (idr.s_inf_discrepancy) ++discrepancies;
    checks.add("psh:" + id, v.psh);
    checks.add("slope_sum_identity:" + id, idr.identity_holds, idr.lhs.str() + " vs " + idr.rhs.str());
  }
  results["families"] = fams;
  results["s_inf_discrepancies"] = discrepancies;

  Json wit = Json::array();
  if (ctx.manifest.contains("witness_primes")) {
    for (auto& pj : ctx.manifest["witness_primes"]) {
      std::int64_t p = pj.get<std::int64_t>();
      MZPoint::prime(p, ExtRational(0));
      MZFunction f = mz_from_family({{p, Rational(0)}}, 1);
      MZValue end = mz_fs_eval({{p, Rational(0)}}, 1, MZPoint::prime(p, ExtRational::infinity()));
      bool ok = end.neg_inf && f.branches.at(p).slopes.back() < 0;
      Json o = Json::object();
      o["p"] = p;
      o["end_value"] = end.str();
      wit.push_back(o);
      checks.add("polar_end:" + std::to_string(p), ok);
    }
  }
  results["witnesses"] = wit;
  rep.files.emplace_back("slopes.csv", slopes_csv.str());
  return rep;
}

LaurentSeries t_series(const Context& ctx) {
  LaurentSeries f = laurent_from_json(ctx.require("f"), "f");
  if (f.num_vars() != 1 || f.vars()[0] != "t") throw ConfigError("f must be a Laurent polynomial in t");
  return f;
}

std::vector<double> radii_from_json(const Json& j) {
  double lo = positive(j.at("min"), "radii.min"), hi = positive(j.at("max"), "radii.max");
  std::int64_t per = j.value("per_decade", 8);
  if (!(lo < hi) || per < 1) throw ConfigError("radii need min < max and per_decade >= 1");
  std::vector<double> out;
  double decades = std::log10(hi / lo);
  std::int64_t n = static_cast<std::int64_t>(std::llround(decades * static_cast<double>(per)));
  for (std::int64_t k = 0; k <= n; ++k) out.push_back(lo * std::pow(10.0, decades * static_cast<double>(k) / n));
  return out;
}

RunReport run_lelong(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  LaurentSeries f = t_series(ctx);
  std::vector<double> radii = radii_from_json(ctx.require("radii"));
  int angles = static_cast<int>(ctx.integer("angles", 256));
  double expected = ctx.number("expected", 0);
  double tol = ctx.number("tolerance", 1e-3);
  if (angles < 1) throw ConfigError("angles must be positive");

  auto estimate = [&](const std::string& label, const HybridFunction& phi) {
    std::vector<RadialSample> s = sample_radial(phi, radii, angles);
    LelongEstimate est = lelong_estimate(s);
    Json o = Json::object();
    o["label"] = label;
    o["estimate"] = est.estimate;
    o["intercept"] = est.intercept;
    o["band"] = est.band;
    o["drift"] = est.drift;
    o["decade_slopes"] = est.decade_slopes;
    Json w = Json::array();
    for (auto& x : est.warnings) w.push_back(x);
    o["warnings"] = w;
    for (auto& x : s) {
      rep.plot.push_back({"lelong", std::log(x.rho), "sup:" + label, x.sup});
      rep.plot.push_back({"lelong", std::log(x.rho), "fit:" + label, est.estimate * std::log(x.rho) + est.intercept});
    }
    return std::make_pair(est.estimate, o);
  };
  HybridFunction base = [f](std::complex<double> t) { return std::log(std::abs(f.evaluate({t}))); };
  auto [nu, bj] = estimate("base", base);
  Json runs = Json::array();
  runs.push_back(bj);
  checks.add("lelong_estimate", std::abs(nu - expected) <= tol,
             "estimate " + std::to_string(nu) + ", expected " + std::to_string(expected));

  if (ctx.manifest.contains("perturbations")) {
    const Json& p = ctx.manifest["perturbations"];
    std::int64_t count = p.value("count", 3);
    double amp = p.value("amplitude", 1.0);
    auto rng = make_rng(ctx.seed, 4);
    for (std::int64_t k = 0; k < count; ++k) {
      double a = draw_real(rng, -amp, amp);
      int freq = static_cast<int>(draw(rng, 1, 4));
      double phase = draw_real(rng, 0, 2 * std::numbers::pi);
      HybridFunction pert = [f, a, freq, phase](std::complex<double> t) {
        return std::log(std::abs(f.evaluate({t}))) + a * std::cos(freq * std::arg(t) + phase);
      };
      auto [nup, pj] = estimate("perturbed" + std::to_string(k), pert);
      pj["amplitude"] = a;
      pj["frequency"] = freq;
      pj["phase"] = phase;
      runs.push_back(pj);
      checks.add("perturbation_invariance:" + std::to_string(k), std::abs(nup - nu) <= tol,
                 "estimate " + std::to_string(nup));
    }
  }
  results["runs"] = runs;
  return rep;
}

RunReport run_rho_r(const Context& ctx, Checks& checks, Json& results) {
  RunReport rep;
  LaurentSeries f = t_series(ctx);
  Rational r = rational_from_json(ctx.require("r"), "r");
  HybridConfig cfg;
  cfg.r = r;
  cfg.validate();
  std::vector<double> radii = number_list(ctx.require("radii"), "radii");
  int angles = static_cast<int>(ctx.integer("angles", 8));
  double tol = ctx.number("tolerance", 1e-12);
  std::vector<HybridSample> phi;
  for (double rho : radii)
    for (int k = 0; k < angles; ++k) {
      std::complex<double> t = std::polar(rho, 2 * std::numbers::pi * k / angles);
      phi.push_back({t, hybrid_log(f, t, cfg)});
    }
  auto fwd = rho_r_forward(phi, r);
  auto back = rho_r_inverse(fwd, r, cfg.r_double());
  double worst = 0;
  std::size_t j = 0;
  for (auto& s : phi) {
    if (std::abs(s.t) > cfg.r_double()) continue;
    worst = std::max(worst, std::abs(back.at(j++).value - s.value) / std::max(1.0, std::abs(s.value)));
  }
  Json rows = Json::array();
  for (std::size_t k = 0; k < fwd.size(); k += static_cast<std::size_t>(angles)) {
    Json o = Json::object();
    o["abs_t"] = std::abs(fwd[k].t);
    o["phi"] = phi[k].value;
    o["rho_phi"] = fwd[k].value;
    rows.push_back(o);
    rep.plot.push_back({"rho-r", std::abs(fwd[k].t), "rho_phi", fwd[k].value});
  }
  results["samples"] = rows;
  results["roundtrip_error"] = worst;
  checks.add("roundtrip", worst <= tol, "max relative error " + std::to_string(worst));

  if (ctx.manifest.contains("convexity")) {
    std::size_t k = 0;
    Json conv = Json::array();
    for (auto& c : ctx.manifest["convexity"]) {
      std::vector<std::pair<Rational, Rational>> samples;
      for (auto& s : c.at("samples"))
        samples.emplace_back(rational_from_json(s.at(0), "convexity"), rational_from_json(s.at(1), "convexity"));
      ExactConvexityVerdict v = khyb_convexity_check(samples);
      bool want = c.value("expect_convex", true);
      Json o = Json::object();
      o["convex"] = v.convex;
      o["worst_violation"] = to_json(v.worst_violation);
      conv.push_back(o);
      checks.add("convexity" + std::to_string(k++), v.convex == want);
    }
    results["convexity"] = conv;
  }
  return rep;
}


RunReport run_suite(const Context& ctx, const RunOptions& opts, Checks& checks, Json& results) {
  RunReport rep;
  Json members = Json::array();
  std::vector<std::string> names;
  for (auto& m : ctx.require("manifests")) {
    fs::path p = ctx.resolve(m, "suite member");
    RunOptions o = opts;
    o.seed = ctx.seed;
    Json mj = read_json_file(p);
    if (!mj.contains("kind") || !mj["kind"].is_string()) throw ConfigError(p.string() + ": missing kind");
    std::string kind = mj["kind"].get<std::string>();
    if (kind == "suite") throw ConfigError("suites cannot nest");
    RunReport child = run_manifest(p, kind, o);
    child.name = p.stem().string();
    if (std::find(names.begin(), names.end(), child.name) != names.end())
      throw ConfigError("suite members must have distinct file names");
    names.push_back(child.name);
    Json s = Json::object();
    s["name"] = child.name;
    s["kind"] = kind;
    s["passed"] = child.passed;
    members.push_back(s);
    checks.add("member:" + child.name, child.passed);
    rep.children.push_back(std::move(child));
  }
  results["members"] = members;
  return rep;
}

}  // namespace

RunReport run_manifest(const fs::path& manifest, const std::string& kind, const RunOptions& opts) {
  Json mj = read_json_file(manifest);
  if (!mj.is_object()) throw ConfigError(manifest.string() + ": manifest must be an object");
  if (!mj.contains("kind") || mj["kind"] != kind)
    throw ConfigError(manifest.string() + ": manifest kind does not match '" + kind + "'");
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), kind) == experiment_kinds().end())
    throw ConfigError("unknown experiment kind '" + kind + "'");
  Context ctx;
  ctx.dir = manifest.parent_path();
  ctx.manifest = mj;
  ctx.threads = std::max(1, opts.threads);
  if (opts.seed)
    ctx.seed = *opts.seed;
  else if (mj.contains("seed"))
    ctx.seed = mj["seed"].get<std::uint64_t>();

  Checks checks;
  Json results = Json::object();
  RunReport rep;
  if (kind == "val-eval") rep = run_val_eval(ctx, checks, results);
  else if (kind == "retract") rep = run_retract(ctx, checks, results);
  else if (kind == "na-limit") rep = run_na_limit(ctx, checks, results);
  else if (kind == "ma-model") rep = run_ma_model(ctx, checks, results);
  else if (kind == "ma-converge") rep = run_ma_converge(ctx, checks, results);
  else if (kind == "mz-check") rep = run_mz_check(ctx, checks, results);
  else if (kind == "lelong") rep = run_lelong(ctx, checks, results);
  else if (kind == "rho-r") rep = run_rho_r(ctx, checks, results);
  else rep = run_suite(ctx, opts, checks, results);

  rep.kind = kind;
  rep.passed = checks.passed();
  Json& j = rep.json;
  j = Json::object();
  j["schema"] = kReportSchema;
  j["version"] = kVersion;
  j["kind"] = kind;
  j["seed"] = ctx.seed;
  j["manifest"] = mj;
  j["passed"] = rep.passed;
  j["checks"] = checks.json();
  j["results"] = results;
  return rep;
}

std::string plot_csv(const RunReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "experiment,t,series,value\n";
  for (auto& r : report.plot) out << r.experiment << "," << r.t << "," << r.series << "," << r.value << "\n";
  return out.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void emit_plot_data(const RunReport& report, const fs::path& path) { write_file_atomic(path, plot_csv(report)); }

namespace {

void collect(const RunReport& rep, const fs::path& dir, std::vector<std::pair<fs::path, std::string>>& out) {
  out.emplace_back(dir / "report.json", rep.json.dump(2) + "\n");
  out.emplace_back(dir / "plot.csv", plot_csv(rep));
  for (auto& [name, body] : rep.files) out.emplace_back(dir / name, body);
  for (auto& c : rep.children) collect(c, dir / c.name, out);
}

}  // namespace

void write_outputs(const RunReport& report, const fs::path& out_dir) {
  std::vector<std::pair<fs::path, std::string>> files;
  collect(report, out_dir, files);
  std::vector<fs::path> staged;
  try {
    for (auto& [p, body] : files) {
      fs::create_directories(p.parent_path());
      fs::path tmp = p;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp.string());
      out << body;
      if (!out.flush()) throw Error("write failed for " + tmp.string());
      staged.push_back(tmp);
    }
  } catch (...) {
    for (auto& t : staged) fs::remove(t);
    throw;
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::error_code ec;
    fs::rename(staged[k], files[k].first, ec);
    if (ec) throw Error("cannot rename " + staged[k].string() + ": " + ec.message());
  }
}

}  // namespace berkhyb
