#include "berkhyb/valuation.hpp"

#include "berkhyb/error.hpp"

#include <set>

namespace berkhyb {

QuasiMonomialPoint::QuasiMonomialPoint(ModelPtr model, std::size_t stratum,
                                       std::vector<Rational> weights)
    : model_(std::move(model)), stratum_(stratum), weights_(std::move(weights)) {
  if (!model_) throw ConfigError("quasi-monomial point without a model");
  if (stratum_ >= model_->strata().size()) throw ConfigError("stratum index out of range");
  const auto& idx = model_->strata()[stratum_].indices;
  if (weights_.size() != idx.size())
    throw ValidationError("weight vector length does not match stratum size");
  Rational total = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (weights_[k] < 0) throw ValidationError("negative weight in quasi-monomial point");
    total += model_->mult(idx[k]) * weights_[k];
  }
  if (total != 1)
    throw ValidationError("weights violate sum a_j w_j = 1 (got " + to_string(total) + ")");
}

std::vector<Rational> QuasiMonomialPoint::component_weights() const {
  std::vector<Rational> out(model_->num_components(), Rational(0));
  const auto& idx = stratum().indices;
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = weights_[k];
  return out;
}

Rational QuasiMonomialPoint::variable_weight(const std::string& label) const {
  auto exps = model_->variable_exponents(label);
  const auto& idx = stratum().indices;
  Rational s = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) s += exps[idx[k]] * weights_[k];
  return s;
}

bool QuasiMonomialPoint::operator==(const QuasiMonomialPoint& o) const {
  return model_->name() == o.model_->name() && stratum_ == o.stratum_ && weights_ == o.weights_;
}

std::string QuasiMonomialPoint::str() const {
  std::string out = model_->name() + "[";
  const auto& idx = stratum().indices;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) out += ", ";
    out += model_->components()[idx[k]].label + "=" + to_string(weights_[k]);
  }
  return out + "]";
}

ExtRational monomial_valuation(const LaurentSeries& f, const std::vector<Rational>& var_weights) {
  if (var_weights.size() != f.num_vars()) throw ConfigError("weight vector has wrong length");
  ExtRational best = ExtRational::infinity();
  for (auto& [e, c] : f.terms()) {
    (void)c;
    Rational s = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) s += e[i] * var_weights[i];
    best = min(best, ExtRational(s));
  }
  return best;
}

ExtRational qm_eval(const QuasiMonomialPoint& v, const LaurentSeries& f) {
  std::vector<Rational> lambda;
  lambda.reserve(f.num_vars());
  for (auto& label : f.vars()) lambda.push_back(v.variable_weight(label));
  return monomial_valuation(f, lambda);
}

QuasiMonomialPoint divisorial_point(const ModelPtr& model, std::size_t i) {
  if (!model) throw ConfigError("divisorial point without a model");
  std::size_t s = model->singleton_stratum(i);
  return QuasiMonomialPoint(model, s, {Rational(1, model->mult(i))});
}

ExtRational gauss_extension(const CoefficientOracle& v, const std::vector<GaussTerm>& S) {
  ExtRational best = ExtRational::infinity();
  for (auto& term : S) best = min(best, v(term.handle) + ExtRational(term.n));
  return best;
}

SuperadditivityReport valuation_superadditivity_check(const QuasiMonomialPoint& v,
                                                      const LaurentSeries& f,
                                                      const LaurentSeries& g) {
  SuperadditivityReport r;
  r.v_f = qm_eval(v, f);
  r.v_g = qm_eval(v, g);
  LaurentSeries prod = f * g;
  r.v_product = qm_eval(v, prod);
  r.v_sum = qm_eval(v, f + g);

  std::set<Exponent> seen;
  r.product_collision_free = true;
  for (auto& [e1, c1] : f.terms()) {
    for (auto& [e2, c2] : g.terms()) {
      Exponent e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      if (!seen.insert(e).second) r.product_collision_free = false;
    }
  }
  ExtRational bound = r.v_f + r.v_g;
  r.product_inequality = r.v_product >= bound;
  r.product_equality = r.v_product == bound;
  r.sum_inequality = r.v_sum >= min(r.v_f, r.v_g);
  r.passed = r.product_inequality && r.sum_inequality &&
             (!r.product_collision_free || r.product_equality);
  return r;
}

}  // namespace berkhyb
