#pragma once

#include "berkhyb/laurent.hpp"
#include "berkhyb/rational.hpp"
#include "berkhyb/snc_model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace berkhyb {

// A stratum of a model together with weights w_j (aligned to the stratum's indices)
// satisfying sum_j a_j w_j = 1 and w >= 0.
class QuasiMonomialPoint {
 public:
  QuasiMonomialPoint(ModelPtr model, std::size_t stratum, std::vector<Rational> weights);

  const ModelPtr& model() const { return model_; }
  std::size_t stratum_index() const { return stratum_; }
  const Stratum& stratum() const { return model_->strata()[stratum_]; }
  const std::vector<Rational>& weights() const { return weights_; }

  // Weight per model component; zero off the stratum.
  std::vector<Rational> component_weights() const;
  // <w, beta> for the local expression of a coordinate label.
  Rational variable_weight(const std::string& label) const;

  bool operator==(const QuasiMonomialPoint& o) const;
  std::string str() const;

 private:
  ModelPtr model_;
  std::size_t stratum_;
  std::vector<Rational> weights_;
};

// min over terms of <lambda, beta>; +inf for the zero element.
ExtRational monomial_valuation(const LaurentSeries& f, const std::vector<Rational>& var_weights);

ExtRational qm_eval(const QuasiMonomialPoint& v, const LaurentSeries& f);

// Vertex of component i: stratum {i}, w_i = 1/a_i.
QuasiMonomialPoint divisorial_point(const ModelPtr& model, std::size_t i);

// Pair (n, coefficient handle) in S = sum_n s_n t^n.
struct GaussTerm {
  std::int64_t n;
  std::string handle;
};
using CoefficientOracle = std::function<ExtRational(const std::string&)>;

// min_n (v(s_n) + n); +inf for the empty list.
ExtRational gauss_extension(const CoefficientOracle& v, const std::vector<GaussTerm>& S);

struct SuperadditivityReport {
  ExtRational v_f, v_g, v_product, v_sum;
  bool product_inequality = false;
  bool product_collision_free = false;
  bool product_equality = false;
  bool sum_inequality = false;
  bool passed = false;
};

// v(fg) >= v(f) + v(g), with equality when the formal product has no exponent
// collisions, and v(f+g) >= min(v(f), v(g)).
SuperadditivityReport valuation_superadditivity_check(const QuasiMonomialPoint& v,
                                                      const LaurentSeries& f,
                                                      const LaurentSeries& g);

}  // namespace berkhyb
