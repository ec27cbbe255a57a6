#pragma once

#include "berkhyb/log_linear.hpp"
#include "berkhyb/snc_model.hpp"
#include "berkhyb/valuation.hpp"

#include <string>
#include <vector>

namespace berkhyb {

// Affine function on one simplex: sum_k gradient[k] * w_k + offset, with w aligned to the
// stratum's indices.
struct AffinePiece {
  std::size_t stratum = 0;
  std::vector<LogLinear> gradient;
  LogLinear offset;
};

// Piecewise-affine function on the skeleton of a model, one affine piece per stratum.
class PAFunction {
 public:
  PAFunction(ModelPtr model, std::vector<AffinePiece> pieces);

  const ModelPtr& model() const { return model_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const AffinePiece& piece(std::size_t stratum) const { return pieces_.at(stratum); }

  LogLinear evaluate(const QuasiMonomialPoint& v) const;
  LogLinear vertex_value(std::size_t component) const;

  // Exact agreement of face and coface pieces at every vertex of the face.
  bool is_continuous(std::string* failure = nullptr) const;

  // Lines "simplex_id,stratum,gradient,offset"; gradient entries separated by ';'.
  std::string to_csv() const;

 private:
  LogLinear evaluate_piece(std::size_t stratum, const std::vector<Rational>& component_w) const;

  ModelPtr model_;
  std::vector<AffinePiece> pieces_;
};

// u -> slope * u + intercept. Slopes are rational, intercepts and abscissae symbolic.
struct Line {
  Rational slope;
  LogLinear intercept;

  LogLinear at(const LogLinear& u) const { return intercept + u * slope; }
  double at(double u) const { return intercept.to_double() + to_double(slope) * u; }
  bool operator==(const Line& o) const { return slope == o.slope && intercept == o.intercept; }
};

// Continuous piecewise-affine function on the real line. pieces.size() == breaks.size()+1;
// piece i lives on [breaks[i-1], breaks[i]].
class PiecewiseAffine1D {
 public:
  PiecewiseAffine1D() : pieces_{Line{0, LogLinear()}} {}
  // Validates strictly increasing breaks and continuity at each break.
  PiecewiseAffine1D(std::vector<LogLinear> breaks, std::vector<Line> pieces);

  static PiecewiseAffine1D constant(const LogLinear& c) { return PiecewiseAffine1D({}, {Line{0, c}}); }
  // max over the lines; equal-slope duplicates keep the larger intercept.
  static PiecewiseAffine1D upper_envelope(std::vector<Line> lines);

  const std::vector<LogLinear>& breaks() const { return breaks_; }
  const std::vector<Line>& pieces() const { return pieces_; }

  LogLinear evaluate(const LogLinear& u) const;
  double evaluate(double u) const;
  // slope(right) - slope(left) at breaks()[i].
  Rational slope_jump(std::size_t i) const;

  PiecewiseAffine1D operator+(const PiecewiseAffine1D& o) const;
  PiecewiseAffine1D operator-(const PiecewiseAffine1D& o) const;
  PiecewiseAffine1D operator*(const Rational& k) const;
  bool operator==(const PiecewiseAffine1D& o) const;

  bool bounded() const { return pieces_.front().slope == 0 && pieces_.back().slope == 0; }
  // sup |f| for bounded functions; throws EvaluationError otherwise.
  LogLinear sup_abs() const;

  std::string str() const;

 private:
  std::size_t locate(const LogLinear& u) const;
  void normalize();

  std::vector<LogLinear> breaks_;
  std::vector<Line> pieces_;
};

}  // namespace berkhyb
