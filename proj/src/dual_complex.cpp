#include "berkhyb/dual_complex.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>

namespace berkhyb {

bool DualComplex::is_face(std::size_t face, std::size_t coface) const {
  return std::find(incidence.begin(), incidence.end(), std::make_pair(face, coface)) != incidence.end();
}

DualComplex build_dual_complex(const ModelPtr& model) {
  if (!model) throw ConfigError("dual complex of a null model");
  DualComplex dc;
  dc.model = model;
  const auto& strata = model->strata();
  for (std::size_t s = 0; s < strata.size(); ++s) {
    Simplex sx;
    sx.stratum = s;
    sx.vertices = strata[s].indices;
    for (auto i : sx.vertices) sx.mults.push_back(model->mult(i));
    dc.simplices.push_back(std::move(sx));
  }
  for (std::size_t f = 0; f < strata.size(); ++f) {
    for (std::size_t g = 0; g < strata.size(); ++g) {
      const auto& a = strata[f].indices;
      const auto& b = strata[g].indices;
      if (a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end()))
        dc.incidence.emplace_back(f, g);
    }
  }
  dc.num_vertices = model->num_components();
  dc.euler_characteristic = model->euler_characteristic();
  return dc;
}

RetractionResult retraction(const ModelPtr& target, const QuasiMonomialPoint& v,
                            const MonomialPullback& pullback) {
  if (!target) throw ConfigError("retraction onto a null model");
  if (pullback.target != target->name())
    throw ConfigError("pullback targets '" + pullback.target + "', not '" + target->name() + "'");
  const SncModel& source = *v.model();
  validate_pullback(source, *target, pullback);

  std::vector<std::string> source_labels;
  for (auto& c : source.components()) source_labels.push_back(c.label);

  std::size_t n = target->num_components();
  std::vector<Rational> w(n);
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < n; ++j) {
    LaurentSeries zj = LaurentSeries::monomial(source_labels, pullback.matrix[j]);
    ExtRational val = qm_eval(v, zj);
    w[j] = val.value();
    if (w[j] > 0) support.push_back(j);
  }

  std::vector<std::size_t> candidates;
  std::size_t best_size = SIZE_MAX;
  const auto& strata = target->strata();
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const auto& idx = strata[s].indices;
    if (!std::includes(idx.begin(), idx.end(), support.begin(), support.end())) continue;
    if (idx.size() < best_size) {
      best_size = idx.size();
      candidates.clear();
    }
    if (idx.size() == best_size) candidates.push_back(s);
  }
  if (candidates.empty() || support.empty())
    throw ModelInconsistencyError("retraction support is not contained in any declared stratum of '" +
                                  target->name() + "'");
  std::size_t chosen = candidates.front();
  std::vector<Rational> weights;
  for (auto j : strata[chosen].indices) weights.push_back(w[j]);
  RetractionResult r{QuasiMonomialPoint(target, chosen, std::move(weights)), candidates.size() > 1,
                     candidates};
  return r;
}

PAFunction model_function_restriction(const std::map<std::string, std::int64_t>& divisor,
                                      const ModelPtr& model, const Rational& r) {
  if (!model) throw ConfigError("model function on a null model");
  std::vector<std::int64_t> d(model->num_components(), 0);
  for (auto& [label, coef] : divisor) d[model->component_index(label)] += coef;
  std::vector<AffinePiece> pieces;
  const auto& strata = model->strata();
  for (std::size_t s = 0; s < strata.size(); ++s) {
    AffinePiece p;
    p.stratum = s;
    for (auto j : strata[s].indices) p.gradient.push_back(LogLinear::log(r, Rational(d[j])));
    pieces.push_back(std::move(p));
  }
  return PAFunction(model, std::move(pieces));
}

}  // namespace berkhyb
