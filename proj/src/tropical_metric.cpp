#include "berkhyb/tropical_metric.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>
#include <cmath>

namespace berkhyb {

void TropicalFSMetric::validate() const {
  if (m <= 0) throw ConfigError("metric '" + name + "': denominator m must be positive");
  if (entries.empty()) throw ConfigError("metric '" + name + "' has no entries");
  if (reference.is_zero()) throw ConfigError("metric '" + name + "': zero reference section");
  for (auto& e : entries)
    if (e.section.vars() != vars())
      throw ConfigError("metric '" + name + "': incompatible variable sets");
  for (auto& s : model_sections)
    if (s.vars() != vars()) throw ConfigError("metric '" + name + "': incompatible variable sets");
}

std::vector<LaurentSeries> TropicalFSMetric::effective_model_sections() const {
  if (model_sections.empty()) return {reference};
  return model_sections;
}

namespace {

std::vector<Rational> point_weights(const TropicalFSMetric& phi, const QuasiMonomialPoint& v) {
  std::vector<Rational> w;
  for (auto& label : phi.vars()) w.push_back(v.variable_weight(label));
  return w;
}

}  // namespace

LogLinear tfs_eval_weights(const TropicalFSMetric& phi, const std::vector<Rational>& var_weights,
                           const Rational& r) {
  phi.validate();
  ExtRational vref = monomial_valuation(phi.reference, var_weights);
  if (vref.is_infinite()) throw EvaluationError("reference section vanishes identically");
  bool any = false;
  LogLinear best;
  for (auto& e : phi.entries) {
    ExtRational vs = monomial_valuation(e.section, var_weights);
    if (vs.is_infinite()) continue;  // log|0| = -inf never attains the max
    Rational x = vs.value() - phi.m * vref.value();
    LogLinear val = LogLinear::log(r, x) + LogLinear(e.c);
    if (!any || val > best) best = val;
    any = true;
  }
  if (!any)
    throw EvaluationError("metric '" + phi.name + "': every entry is -inf (not basepoint-free)");
  return best / Rational(phi.m);
}

LogLinear tfs_eval(const TropicalFSMetric& phi, const QuasiMonomialPoint& v, const Rational& r) {
  return tfs_eval_weights(phi, point_weights(phi, v), r);
}

TropicalFSMetric tfs_lift(const TropicalFSMetric& phi, std::int64_t k) {
  if (k <= 0) throw ConfigError("lift factor must be positive");
  phi.validate();
  TropicalFSMetric out = phi;
  out.m = phi.m * k;
  for (auto& e : out.entries) {
    e.section = e.section.pow(k);
    e.c *= k;
  }
  return out;
}

TropicalFSMetric tfs_max(const TropicalFSMetric& a, const TropicalFSMetric& b) {
  a.validate();
  b.validate();
  if (a.vars() != b.vars()) throw ConfigError("tfs_max: incompatible variable sets");
  if (!(a.reference == b.reference)) throw ConfigError("tfs_max: reference sections differ");
  std::int64_t M = static_cast<std::int64_t>(lcm(Integer(a.m), Integer(b.m)));
  TropicalFSMetric la = tfs_lift(a, M / a.m);
  TropicalFSMetric lb = tfs_lift(b, M / b.m);
  la.name = "max(" + a.name + "," + b.name + ")";
  la.entries.insert(la.entries.end(), lb.entries.begin(), lb.entries.end());
  return la;
}

TropicalFSMetric tfs_sum(const TropicalFSMetric& a, const TropicalFSMetric& b) {
  a.validate();
  b.validate();
  if (a.vars() != b.vars()) throw ConfigError("tfs_sum: incompatible variable sets");
  std::int64_t M = static_cast<std::int64_t>(lcm(Integer(a.m), Integer(b.m)));
  TropicalFSMetric la = tfs_lift(a, M / a.m);
  TropicalFSMetric lb = tfs_lift(b, M / b.m);
  TropicalFSMetric out;
  out.name = "sum(" + a.name + "," + b.name + ")";
  out.m = M;
  out.reference = a.reference * b.reference;
  out.meromorphic = a.meromorphic || b.meromorphic;
  out.degree = (a.degree && b.degree) ? a.degree + b.degree : 0;
  for (auto& ea : la.entries)
    for (auto& eb : lb.entries) out.entries.push_back({ea.section * eb.section, ea.c + eb.c});
  if (!a.model_sections.empty() || !b.model_sections.empty())
    for (auto& sa : a.effective_model_sections())
      for (auto& sb : b.effective_model_sections()) out.model_sections.push_back(sa * sb);
  return out;
}

TropicalFSMetric tfs_shift(const TropicalFSMetric& phi, const Rational& c) {
  phi.validate();
  TropicalFSMetric out = phi;
  for (auto& e : out.entries) e.c += phi.m * c;
  return out;
}

ScaleCheckReport tfs_scale_check(const TropicalFSMetric& phi, std::int64_t k,
                                 const std::vector<QuasiMonomialPoint>& points, const Rational& r) {
  ScaleCheckReport rep;
  TropicalFSMetric lifted = tfs_lift(phi, k);
  for (auto& v : points) {
    ++rep.points;
    LogLinear a = tfs_eval(phi, v, r);
    LogLinear b = tfs_eval(lifted, v, r);
    if (a != b) {
      rep.passed = false;
      rep.failure = "lift by " + std::to_string(k) + " changes the value at " + v.str() + ": " +
                    a.str() + " vs " + b.str();
      return rep;
    }
  }
  return rep;
}

NaLimitResult na_limit_tfs(const TropicalFSMetric& phi, const ModelPtr& model, const Rational& r) {
  phi.validate();
  if (!model) throw ConfigError("na_limit_tfs without a model");
  TropicalFSMetric phi_L;
  phi_L.name = phi.name + ":model";
  phi_L.m = 1;
  phi_L.reference = phi.reference;
  for (auto& s : phi.effective_model_sections()) phi_L.entries.push_back({s, Rational(0)});

  std::vector<NaVertexReport> reports;
  std::vector<LogLinear> vertex_values;
  bool all_agree = true;
  for (std::size_t i = 0; i < model->num_components(); ++i) {
    QuasiMonomialPoint vE = divisorial_point(model, i);
    NaVertexReport rep;
    rep.component = i;
    rep.label = model->components()[i].label;
    rep.b = model->mult(i);
    Rational b(rep.b);

    // s_{L,E}: the model section realizing phi_L at v_E, i.e. of least valuation.
    const auto& ms = phi_L.entries;
    std::size_t best = 0;
    ExtRational best_val = ExtRational::infinity();
    for (std::size_t k = 0; k < ms.size(); ++k) {
      ExtRational val = qm_eval(vE, ms[k].section);
      if (val < best_val) {
        best_val = val;
        best = k;
      }
    }
    if (best_val.is_infinite())
      throw EvaluationError("model sections of '" + phi.name + "' all vanish at " + rep.label);
    rep.model_section = best;

    // Route (i): nu_E = m^{-1} min_alpha (ord_E(s_alpha / s_{L,E}^m) + c_alpha b_E / log r).
    bool any = false;
    LogLinear nu;
    for (auto& e : phi.entries) {
      ExtRational vs = qm_eval(vE, e.section);
      if (vs.is_infinite()) continue;
      Rational ord = b * (vs.value() - phi.m * best_val.value());
      if (ord < 0 && !phi.meromorphic)
        throw EvaluationError("section " + e.section.str() + " of '" + phi.name +
                              "' has negative order along " + rep.label +
                              " (mark the metric meromorphic to allow this)");
      LogLinear term = LogLinear(ord) + LogLinear::inv_log(r, e.c * b);
      if (!any || term < nu) nu = term;
      any = true;
    }
    if (!any) throw EvaluationError("metric '" + phi.name + "' is not basepoint-free at " + rep.label);
    rep.nu = nu / Rational(phi.m);
    rep.formula_value = rep.nu.times_log(r) / b;

    // Route (ii): direct restriction phi(v_E) - phi_L(v_E).
    rep.restriction_value = tfs_eval(phi, vE, r) - tfs_eval(phi_L, vE, r);
    rep.agree = rep.formula_value == rep.restriction_value;
    all_agree = all_agree && rep.agree;
    vertex_values.push_back(rep.restriction_value);
    reports.push_back(std::move(rep));
  }

  std::vector<AffinePiece> pieces;
  const auto& strata = model->strata();
  for (std::size_t s = 0; s < strata.size(); ++s) {
    AffinePiece p;
    p.stratum = s;
    for (auto j : strata[s].indices) p.gradient.push_back(vertex_values[j] * Rational(model->mult(j)));
    pieces.push_back(std::move(p));
  }
  PAFunction psi(model, std::move(pieces));
  bool continuous = psi.is_continuous();
  return NaLimitResult{std::move(psi), std::move(reports), all_agree, continuous};
}

PiecewiseAffine1D tfs_curve_restriction(const TropicalFSMetric& phi, const Rational& r,
                                        const std::string& z, const std::string& t) {
  phi.validate();
  const auto& vars = phi.vars();
  std::size_t iz = phi.reference.var_index(z);
  std::optional<std::size_t> it;
  if (phi.reference.has_var(t)) it = phi.reference.var_index(t);
  if (vars.size() != (it ? 2u : 1u))
    throw ConfigError("curve restriction needs sections in '" + z + "' and '" + t + "' only");
  if (!phi.reference.is_monomial())
    throw ConfigError("curve restriction needs a monomial reference section");
  const Exponent& ref = phi.reference.monomial_exponent();
  Rational m(phi.m);
  std::vector<Line> lines;
  for (auto& e : phi.entries) {
    for (auto& [exp, coef] : e.section.terms()) {
      (void)coef;
      std::int64_t j = exp[iz] - phi.m * ref[iz];
      std::int64_t k = it ? exp[*it] - phi.m * ref[*it] : 0;
      // -(j u + k) - c / log r, all over m.
      Line l{Rational(-j) / m, (LogLinear(Rational(-k)) - LogLinear::inv_log(r, e.c)) / m};
      lines.push_back(std::move(l));
    }
  }
  if (lines.empty()) throw EvaluationError("metric '" + phi.name + "' has only zero sections");
  return PiecewiseAffine1D::upper_envelope(std::move(lines));
}

double lse_max_gap(const std::vector<double>& x, int m) {
  if (x.empty()) throw ConfigError("lse_max_gap needs at least one value");
  if (m <= 0) throw ConfigError("lse_max_gap needs m >= 1");
  double mx = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double xi : x) sum += std::exp(2.0 * m * (xi - mx));
  return std::log(sum) / (2.0 * m);
}

}  // namespace berkhyb
