#include "berkhyb/piecewise_affine.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>
#include <sstream>

namespace berkhyb {

PAFunction::PAFunction(ModelPtr model, std::vector<AffinePiece> pieces) : model_(std::move(model)) {
  if (!model_) throw ConfigError("PA function without a model");
  const auto& strata = model_->strata();
  pieces_.resize(strata.size());
  std::vector<bool> seen(strata.size(), false);
  for (auto& p : pieces) {
    if (p.stratum >= strata.size()) throw ConfigError("PA piece refers to an unknown stratum");
    if (seen[p.stratum]) throw ConfigError("two PA pieces on one stratum");
    if (p.gradient.size() != strata[p.stratum].indices.size())
      throw ConfigError("PA gradient length does not match its stratum");
    seen[p.stratum] = true;
    pieces_[p.stratum] = std::move(p);
  }
  for (std::size_t s = 0; s < strata.size(); ++s)
    if (!seen[s]) throw ConfigError("PA function is missing a piece on stratum " + std::to_string(s));
}

LogLinear PAFunction::evaluate_piece(std::size_t stratum,
                                     const std::vector<Rational>& component_w) const {
  const auto& piece = pieces_[stratum];
  const auto& idx = model_->strata()[stratum].indices;
  LogLinear v = piece.offset;
  for (std::size_t k = 0; k < idx.size(); ++k)
    if (component_w[idx[k]] != 0) v += piece.gradient[k] * component_w[idx[k]];
  return v;
}

LogLinear PAFunction::evaluate(const QuasiMonomialPoint& v) const {
  if (v.model()->name() != model_->name()) throw ConfigError("point lives on another model");
  return evaluate_piece(v.stratum_index(), v.component_weights());
}

LogLinear PAFunction::vertex_value(std::size_t component) const {
  return evaluate(divisorial_point(model_, component));
}

bool PAFunction::is_continuous(std::string* failure) const {
  const auto& strata = model_->strata();
  for (std::size_t f = 0; f < strata.size(); ++f) {
    for (std::size_t g = 0; g < strata.size(); ++g) {
      if (f == g || strata[f].indices.size() >= strata[g].indices.size()) continue;
      if (!std::includes(strata[g].indices.begin(), strata[g].indices.end(),
                         strata[f].indices.begin(), strata[f].indices.end()))
        continue;
      for (auto i : strata[f].indices) {
        std::vector<Rational> w(model_->num_components(), Rational(0));
        w[i] = Rational(1, model_->mult(i));
        LogLinear a = evaluate_piece(f, w);
        LogLinear b = evaluate_piece(g, w);
        if (a != b) {
          if (failure)
            *failure = "pieces on strata " + std::to_string(f) + " and " + std::to_string(g) +
                       " disagree at vertex " + model_->components()[i].label + ": " + a.str() +
                       " vs " + b.str();
          return false;
        }
      }
    }
  }
  return true;
}

std::string PAFunction::to_csv() const {
  std::ostringstream out;
  out << "simplex_id,stratum,gradient,offset\n";
  const auto& strata = model_->strata();
  for (std::size_t s = 0; s < pieces_.size(); ++s) {
    std::string label;
    for (auto i : strata[s].indices) {
      if (!label.empty()) label += "+";
      label += model_->components()[i].label;
    }
    std::string grad;
    for (std::size_t k = 0; k < pieces_[s].gradient.size(); ++k) {
      if (k) grad += ";";
      grad += pieces_[s].gradient[k].str();
    }
    out << s << "," << label << ",\"" << grad << "\",\"" << pieces_[s].offset.str() << "\"\n";
  }
  return out.str();
}

PiecewiseAffine1D::PiecewiseAffine1D(std::vector<LogLinear> breaks, std::vector<Line> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breaks_.size() + 1)
    throw ConfigError("piecewise-affine data needs one more piece than breaks");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw ValidationError("breakpoints must be strictly increasing");
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (pieces_[i].at(breaks_[i]) != pieces_[i + 1].at(breaks_[i]))
      throw ValidationError("piecewise-affine data is discontinuous at " + breaks_[i].str());
  normalize();
}

void PiecewiseAffine1D::normalize() {
  std::vector<LogLinear> nb;
  std::vector<Line> np{pieces_.front()};
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (pieces_[i + 1] == np.back()) continue;
    nb.push_back(breaks_[i]);
    np.push_back(pieces_[i + 1]);
  }
  breaks_ = std::move(nb);
  pieces_ = std::move(np);
}

PiecewiseAffine1D PiecewiseAffine1D::upper_envelope(std::vector<Line> lines) {
  if (lines.empty()) throw ConfigError("upper envelope of no lines");
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  });
  std::vector<Line> uniq;
  for (auto& l : lines) {
    if (!uniq.empty() && uniq.back().slope == l.slope)
      uniq.back() = l;  // sorted by intercept, so the later one is larger
    else
      uniq.push_back(l);
  }
  // Abscissa where b overtakes a (a.slope < b.slope).
  auto cross = [](const Line& a, const Line& b) {
    return (a.intercept - b.intercept) / (b.slope - a.slope);
  };
  std::vector<Line> hull;
  for (auto& l : uniq) {
    while (hull.size() >= 2 &&
           !(cross(hull[hull.size() - 2], hull.back()) < cross(hull.back(), l)))
      hull.pop_back();
    hull.push_back(l);
  }
  std::vector<LogLinear> breaks;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) breaks.push_back(cross(hull[i], hull[i + 1]));
  return PiecewiseAffine1D(std::move(breaks), std::move(hull));
}

std::size_t PiecewiseAffine1D::locate(const LogLinear& u) const {
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (u <= breaks_[i]) return i;
  return breaks_.size();
}

LogLinear PiecewiseAffine1D::evaluate(const LogLinear& u) const { return pieces_[locate(u)].at(u); }

double PiecewiseAffine1D::evaluate(double u) const {
  std::size_t i = 0;
  while (i < breaks_.size() && u > breaks_[i].to_double()) ++i;
  return pieces_[i].at(u);
}

Rational PiecewiseAffine1D::slope_jump(std::size_t i) const {
  return pieces_.at(i + 1).slope - pieces_.at(i).slope;
}

namespace {

std::vector<LogLinear> merge_breaks(const std::vector<LogLinear>& a, const std::vector<LogLinear>& b) {
  std::vector<LogLinear> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end(), [](const LogLinear& x, const LogLinear& y) { return x < y; });
  std::vector<LogLinear> out;
  for (auto& x : all)
    if (out.empty() || out.back() != x) out.push_back(x);
  return out;
}

// A point strictly inside interval i of the partition given by breaks.
LogLinear interior_point(const std::vector<LogLinear>& breaks, std::size_t i) {
  if (breaks.empty()) return LogLinear(0);
  if (i == 0) return breaks.front() - LogLinear(1);
  if (i == breaks.size()) return breaks.back() + LogLinear(1);
  return (breaks[i - 1] + breaks[i]) / Rational(2);
}

}  // namespace

PiecewiseAffine1D PiecewiseAffine1D::operator+(const PiecewiseAffine1D& o) const {
  auto breaks = merge_breaks(breaks_, o.breaks_);
  std::vector<Line> pieces;
  for (std::size_t i = 0; i <= breaks.size(); ++i) {
    LogLinear u = interior_point(breaks, i);
    const Line& a = pieces_[locate(u)];
    const Line& b = o.pieces_[o.locate(u)];
    pieces.push_back(Line{a.slope + b.slope, a.intercept + b.intercept});
  }
  return PiecewiseAffine1D(std::move(breaks), std::move(pieces));
}

PiecewiseAffine1D PiecewiseAffine1D::operator*(const Rational& k) const {
  std::vector<Line> pieces;
  for (auto& p : pieces_) pieces.push_back(Line{p.slope * k, p.intercept * k});
  if (k == 0) return PiecewiseAffine1D();
  return PiecewiseAffine1D(breaks_, std::move(pieces));
}

PiecewiseAffine1D PiecewiseAffine1D::operator-(const PiecewiseAffine1D& o) const {
  return *this + o * Rational(-1);
}

bool PiecewiseAffine1D::operator==(const PiecewiseAffine1D& o) const {
  return breaks_ == o.breaks_ && pieces_ == o.pieces_;
}

LogLinear PiecewiseAffine1D::sup_abs() const {
  if (!bounded()) throw EvaluationError("sup of an unbounded piecewise-affine function");
  auto absval = [](const LogLinear& x) { return x.sign() < 0 ? -x : x; };
  LogLinear best = absval(pieces_.front().intercept);
  best = max(best, absval(pieces_.back().intercept));
  for (auto& b : breaks_) best = max(best, absval(evaluate(b)));
  return best;
}

std::string PiecewiseAffine1D::str() const {
  std::string out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) out += " | " + breaks_[i - 1].str() + " | ";
    out += to_string(pieces_[i].slope) + "*u + (" + pieces_[i].intercept.str() + ")";
  }
  return out;
}

}  // namespace berkhyb
