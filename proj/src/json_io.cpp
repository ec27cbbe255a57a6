#include "berkhyb/json_io.hpp"

#include "berkhyb/error.hpp"

#include <fstream>
#include <sstream>

namespace berkhyb {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const Json& a = field(j, key, where);
  if (!a.is_array()) throw ConfigError(where + ": field '" + key + "' must be an array");
  return a;
}

std::string string_field(const Json& j, const char* key, const std::string& where) {
  const Json& s = field(j, key, where);
  if (!s.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return s.get<std::string>();
}

std::int64_t int_value(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::int64_t int_field(const Json& j, const char* key, const std::string& where, std::int64_t dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  return int_value(*it, where + "." + key);
}

bool bool_field(const Json& j, const char* key, const std::string& where, bool dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_boolean()) throw ConfigError(where + ": field '" + key + "' must be a boolean");
  return it->get<bool>();
}

std::vector<std::string> string_list(const Json& a, const std::string& where) {
  if (!a.is_array()) throw ConfigError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (auto& s : a) {
    if (!s.is_string()) throw ConfigError(where + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": JSON parse error at byte " + std::to_string(e.byte) + ": " +
                      e.what());
  }
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (j.is_number_float()) throw ConfigError(where + ": floating-point literal where an exact rational is required");
  throw ConfigError(where + ": expected a rational");
}

Json to_json(const Rational& q) { return to_string(q); }

LogLinear loglinear_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) return LogLinear(rational_from_json(j, where));
  LogLinear out;
  for (auto& [key, val] : j.items()) {
    if (key == "const") {
      out += LogLinear(rational_from_json(val, where + ".const"));
    } else if (key == "log" || key == "invlog") {
      if (!val.is_object()) throw ConfigError(where + "." + key + ": expected an object");
      for (auto& [arg, coef] : val.items()) {
        Rational a = parse_rational(arg);
        Rational c = rational_from_json(coef, where + "." + key + "." + arg);
        out += key == "log" ? LogLinear::log(a, c) : LogLinear::inv_log(a, c);
      }
    } else {
      throw ConfigError(where + ": unknown key '" + key + "' in a symbolic value");
    }
  }
  return out;
}

Json to_json(const LogLinear& x) {
  if (x.is_rational()) return to_json(x.constant());
  Json o = Json::object();
  if (x.constant() != 0) o["const"] = to_json(x.constant());
  Json logs = Json::object(), inv = Json::object();
  for (auto& [k, c] : x.terms()) {
    if (k.kind == BasisKey::Kind::Log)
      logs[to_string(k.arg)] = to_json(c);
    else
      inv[to_string(k.arg)] = to_json(c);
  }
  if (!logs.empty()) o["log"] = logs;
  if (!inv.empty()) o["invlog"] = inv;
  return o;
}

LaurentSeries laurent_terms_from_json(const Json& terms, const std::vector<std::string>& vars,
                                      const std::string& where) {
  if (!terms.is_array()) throw ConfigError(where + ": expected a term list");
  LaurentSeries f(vars);
  std::size_t k = 0;
  for (auto& t : terms) {
    std::string w = where + "[" + std::to_string(k++) + "]";
    const Json& e = array_field(t, "exp", w);
    if (e.size() != vars.size()) throw ConfigError(w + ": exponent length differs from the variable list");
    Exponent exp;
    for (auto& x : e) exp.push_back(int_value(x, w + ".exp"));
    Coefficient coef = Coefficient::unit();
    auto it = t.find("coef");
    if (it != t.end()) {
      if (it->is_string() && it->get<std::string>() == "unit") {
      } else if (it->is_object()) {
        Rational re = it->contains("re") ? rational_from_json((*it)["re"], w + ".coef.re") : Rational(0);
        Rational im = it->contains("im") ? rational_from_json((*it)["im"], w + ".coef.im") : Rational(0);
        coef = Coefficient::explicit_value(re, im);
      } else {
        coef = Coefficient::explicit_value(rational_from_json(*it, w + ".coef"));
      }
    }
    if (coef.is_zero()) continue;
    f.add_term(exp, coef);
  }
  return f;
}

LaurentSeries laurent_from_json(const Json& j, const std::string& where) {
  auto vars = string_list(field(j, "vars", where), where + ".vars");
  return laurent_terms_from_json(field(j, "terms", where), vars, where + ".terms");
}

namespace {

Json coef_json(const Coefficient& c) {
  if (c.is_unit()) return "unit";
  if (c.im() == 0) return to_json(c.re());
  Json o = Json::object();
  o["re"] = to_json(c.re());
  o["im"] = to_json(c.im());
  return o;
}

Json terms_json(const LaurentSeries& f) {
  Json terms = Json::array();
  for (auto& [e, c] : f.terms()) {
    Json t = Json::object();
    t["exp"] = e;
    t["coef"] = coef_json(c);
    terms.push_back(t);
  }
  return terms;
}

}  // namespace

Json to_json(const LaurentSeries& f) {
  Json o = Json::object();
  o["vars"] = f.vars();
  o["terms"] = terms_json(f);
  return o;
}

ModelRegistry models_from_json(const Json& j) {
  ModelRegistry reg;
  const Json& models = array_field(j, "models", "models file");
  for (auto& mj : models) {
    std::string name = string_field(mj, "name", "model");
    std::string w = "model '" + name + "'";
    std::vector<Component> comps;
    for (auto& c : array_field(mj, "components", w))
      comps.push_back({string_field(c, "label", w + ".components"), int_field(c, "mult", w, 1)});
    auto index_of = [&](const std::string& label) -> std::size_t {
      for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].label == label) return i;
      throw ConfigError(w + ": unknown component '" + label + "' in strata");
    };
    std::vector<Stratum> strata;
    for (auto& s : array_field(mj, "strata", w)) {
      Stratum st;
      auto labels = string_list(s, w + ".strata");
      for (auto& l : labels) {
        st.indices.push_back(index_of(l));
        st.label += (st.label.empty() ? "" : "+") + l;
      }
      strata.push_back(std::move(st));
    }
    std::map<std::string, std::map<std::string, std::int64_t>> vars;
    if (mj.contains("variables")) {
      for (auto& [v, m] : mj["variables"].items()) {
        if (!m.is_object()) throw ConfigError(w + ".variables." + v + ": expected an object");
        vars[v];  // an empty map declares a unit
        for (auto& [comp, e] : m.items()) vars[v][comp] = int_value(e, w + ".variables." + v);
      }
    }
    std::vector<MonomialPullback> pbs;
    if (mj.contains("pullbacks")) {
      for (auto& p : mj["pullbacks"]) {
        MonomialPullback pb;
        pb.target = string_field(p, "target", w + ".pullbacks");
        for (auto& row : array_field(p, "matrix", w + ".pullbacks")) {
          std::vector<std::int64_t> r;
          for (auto& x : row) r.push_back(int_value(x, w + ".pullbacks.matrix"));
          pb.matrix.push_back(std::move(r));
        }
        pbs.push_back(std::move(pb));
      }
    }
    reg.add(std::make_shared<const SncModel>(name, std::move(comps), std::move(strata), std::move(vars),
                                             std::move(pbs)));
  }
  reg.validate_pullbacks();
  return reg;
}

TropicalFSMetric tfs_from_json(const Json& j) {
  TropicalFSMetric phi;
  phi.name = string_field(j, "name", "metric");
  std::string w = "metric '" + phi.name + "'";
  auto vars = string_list(field(j, "vars", w), w + ".vars");
  phi.m = int_field(j, "m", w, 1);
  phi.degree = int_field(j, "degree", w, 0);
  phi.meromorphic = bool_field(j, "meromorphic", w, false);
  phi.reference = laurent_terms_from_json(field(j, "reference", w), vars, w + ".reference");
  if (j.contains("model_sections")) {
    std::size_t k = 0;
    for (auto& s : j["model_sections"])
      phi.model_sections.push_back(
          laurent_terms_from_json(s, vars, w + ".model_sections[" + std::to_string(k++) + "]"));
  }
  std::size_t k = 0;
  for (auto& e : array_field(j, "entries", w)) {
    std::string we = w + ".entries[" + std::to_string(k++) + "]";
    TfsEntry entry;
    entry.section = laurent_terms_from_json(field(e, "section", we), vars, we + ".section");
    entry.c = e.contains("c") ? rational_from_json(e["c"], we + ".c") : Rational(0);
    phi.entries.push_back(std::move(entry));
  }
  phi.validate();
  return phi;
}

IntersectionTable table_from_json(const Json& j) {
  IntersectionTable t;
  t.name = string_field(j, "name", "table");
  std::string w = "table '" + t.name + "'";
  if (j.contains("model")) t.model = string_field(j, "model", w);
  t.total = rational_from_json(field(j, "total", w), w + ".total");
  t.semipositive = bool_field(j, "semipositive", w, true);
  for (auto& e : array_field(j, "entries", w)) {
    IntersectionEntry ie;
    ie.label = string_field(e, "label", w + ".entries");
    ie.b = int_field(e, "b", w + ".entries", 1);
    ie.intersection = rational_from_json(field(e, "intersection", w + "." + ie.label), w + "." + ie.label);
    if (e.contains("u")) ie.u = rational_from_json(e["u"], w + "." + ie.label + ".u");
    t.entries.push_back(std::move(ie));
  }
  t.validate();
  return t;
}

PiecewiseAffine1D pa1d_from_json(const Json& j, const std::string& where) {
  std::vector<LogLinear> breaks;
  if (j.contains("breaks"))
    for (auto& b : j["breaks"]) breaks.push_back(loglinear_from_json(b, where + ".breaks"));
  std::vector<Line> pieces;
  for (auto& p : array_field(j, "pieces", where))
    pieces.push_back(Line{rational_from_json(field(p, "slope", where), where + ".slope"),
                          loglinear_from_json(field(p, "intercept", where), where + ".intercept")});
  try {
    return PiecewiseAffine1D(std::move(breaks), std::move(pieces));
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Json to_json(const PiecewiseAffine1D& f) {
  Json o = Json::object();
  Json br = Json::array();
  for (auto& b : f.breaks()) br.push_back(to_json(b));
  Json pcs = Json::array();
  for (auto& p : f.pieces()) {
    Json l = Json::object();
    l["slope"] = to_json(p.slope);
    l["intercept"] = to_json(p.intercept);
    pcs.push_back(l);
  }
  o["breaks"] = br;
  o["pieces"] = pcs;
  return o;
}

Json to_json(const AtomicMeasure& mu) {
  Json a = Json::array();
  for (auto& at : mu.atoms) {
    Json o = Json::object();
    if (!at.label.empty()) o["label"] = at.label;
    o["u"] = at.position ? to_json(*at.position) : Json(nullptr);
    o["mass"] = to_json(at.mass);
    a.push_back(o);
  }
  return a;
}

Json to_json(const QuasiMonomialPoint& v) {
  Json o = Json::object();
  o["model"] = v.model()->name();
  o["stratum"] = v.stratum().label;
  Json w = Json::array();
  for (auto& x : v.weights()) w.push_back(to_json(x));
  o["weights"] = w;
  return o;
}

namespace {

Rational eta_slope(const LogLinear& s, std::int64_t p, const std::string& where) {
  Rational k = s.log_coefficient(Rational(p));
  if (!(s == LogLinear::log(Rational(p), k)))
    throw UnsupportedRepresentationError(where + ": slope " + s.str() + " is not a rational multiple of log " +
                                         std::to_string(p));
  return k;
}

Rational eta_break(const LogLinear& b, std::int64_t p, const std::string& where) {
  Rational k = b.inv_log_coefficient(Rational(p));
  if (!(b == LogLinear::inv_log(Rational(p), k)))
    throw UnsupportedRepresentationError(where + ": break " + b.str() + " is not a rational multiple of 1/log " +
                                         std::to_string(p));
  return k;
}

void read_end(const Json& j, PadicBranch& b, const std::string& where) {
  auto it = j.find("end");
  if (it == j.end()) return;
  if (it->is_string() && it->get<std::string>() == "-inf")
    b.declared_end_neg_inf = true;
  else
    b.declared_end = rational_from_json(*it, where + ".end");
}

void write_end(Json& o, const PadicBranch& b) {
  if (b.declared_end_neg_inf)
    o["end"] = "-inf";
  else if (b.declared_end)
    o["end"] = to_json(*b.declared_end);
}

}  // namespace

MZFunction mz_function_from_json(const Json& j) {
  MZFunction f;
  f.origin = rational_from_json(field(j, "origin", "M(Z) function"), "M(Z) function.origin");
  f.default_branch.start = f.origin;
  f.default_branch.slopes = {Rational(0)};
  f.arch.start = f.origin;
  f.arch.slopes = {LogLinear()};
  f.arch.end = LogLinear(f.origin);
  if (!j.contains("branches")) return f;
  const Json& br = j["branches"];
  if (!br.is_object()) throw ConfigError("M(Z) function.branches: expected an object");
  for (auto& [key, b] : br.items()) {
    std::string w = "branch " + key;
    if (key == "inf") {
      ArchBranch a;
      a.start = b.contains("start") ? rational_from_json(b["start"], w + ".start") : f.origin;
      for (auto& s : array_field(b, "slopes", w)) a.slopes.push_back(loglinear_from_json(s, w + ".slopes"));
      if (b.contains("breaks")) {
        for (auto& x : b["breaks"]) {
          if (x.is_object() && x.contains("num"))
            a.breaks.push_back(Breakpoint{rational_from_json(x["num"], w + ".breaks.num"),
                                          loglinear_from_json(field(x, "den", w + ".breaks"), w + ".breaks.den")});
          else
            a.breaks.push_back(Breakpoint{rational_from_json(x, w + ".breaks"), LogLinear(1)});
        }
      }
      if (b.contains("end")) a.end = loglinear_from_json(b["end"], w + ".end");
      f.arch = std::move(a);
    } else if (key == "default") {
      PadicBranch d;
      d.start = b.contains("start") ? rational_from_json(b["start"], w + ".start") : f.origin;
      for (auto& s : array_field(b, "log_p", w)) d.slopes.push_back(rational_from_json(s, w + ".log_p"));
      if (b.contains("eta_breaks"))
        for (auto& x : b["eta_breaks"]) d.breaks.push_back(rational_from_json(x, w + ".eta_breaks"));
      read_end(b, d, w);
      f.default_branch = std::move(d);
    } else {
      std::int64_t p;
      try {
        std::size_t pos = 0;
        p = std::stoll(key, &pos);
        if (pos != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("M(Z) function: unknown branch '" + key + "'");
      }
      MZPoint::prime(p, ExtRational(0));  // validates primality
      PadicBranch pb;
      pb.start = b.contains("start") ? rational_from_json(b["start"], w + ".start") : f.origin;
      for (auto& s : array_field(b, "slopes", w))
        pb.slopes.push_back(eta_slope(loglinear_from_json(s, w + ".slopes"), p, w));
      if (b.contains("breaks"))
        for (auto& x : b["breaks"]) pb.breaks.push_back(eta_break(loglinear_from_json(x, w + ".breaks"), p, w));
      read_end(b, pb, w);
      f.branches.emplace(p, std::move(pb));
    }
  }
  return f;
}

Json to_json(const MZFunction& f) {
  Json o = Json::object();
  o["origin"] = to_json(f.origin);
  Json br = Json::object();
  for (auto& [p, b] : f.branches) {
    Json x = Json::object();
    x["start"] = to_json(b.start);
    Json s = Json::array(), k = Json::array();
    for (auto& v : b.slopes) s.push_back(to_json(LogLinear::log(Rational(p), v)));
    for (auto& v : b.breaks) k.push_back(to_json(LogLinear::inv_log(Rational(p), v)));
    x["slopes"] = s;
    x["breaks"] = k;
    write_end(x, b);
    br[std::to_string(p)] = x;
  }
  {
    Json x = Json::object();
    x["start"] = to_json(f.default_branch.start);
    Json s = Json::array(), k = Json::array();
    for (auto& v : f.default_branch.slopes) s.push_back(to_json(v));
    for (auto& v : f.default_branch.breaks) k.push_back(to_json(v));
    x["log_p"] = s;
    x["eta_breaks"] = k;
    write_end(x, f.default_branch);
    br["default"] = x;
  }
  {
    Json x = Json::object();
    x["start"] = to_json(f.arch.start);
    Json s = Json::array(), k = Json::array();
    for (auto& v : f.arch.slopes) s.push_back(to_json(v));
    for (auto& v : f.arch.breaks) {
      Json bp = Json::object();
      bp["num"] = to_json(v.num);
      bp["den"] = to_json(v.den);
      k.push_back(bp);
    }
    x["slopes"] = s;
    x["breaks"] = k;
    if (f.arch.end) x["end"] = to_json(*f.arch.end);
    br["inf"] = x;
  }
  o["branches"] = br;
  return o;
}

std::vector<MZEntry> mz_family_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected [[n, c], ...]");
  std::vector<MZEntry> out;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ConfigError(where + ": expected [[n, c], ...]");
    std::int64_t n = int_value(e[0], where);
    if (n == 0) throw ConfigError(where + ": n = 0 is not allowed");
    out.push_back({n, rational_from_json(e[1], where)});
  }
  return out;
}

}  // namespace berkhyb
