#pragma once

#include "berkhyb/piecewise_affine.hpp"
#include "berkhyb/snc_model.hpp"
#include "berkhyb/valuation.hpp"

#include <map>
#include <string>
#include <vector>

namespace berkhyb {

// tau_Y = { w >= 0 : sum_j a_j w_j = 1 } for the stratum Y.
struct Simplex {
  std::size_t stratum = 0;
  std::vector<std::size_t> vertices;
  std::vector<std::int64_t> mults;
  std::size_t dim() const { return vertices.size() - 1; }
};

struct DualComplex {
  ModelPtr model;
  std::vector<Simplex> simplices;
  // (face, coface) pairs of simplex ids with a proper inclusion of index sets.
  std::vector<std::pair<std::size_t, std::size_t>> incidence;
  std::size_t num_vertices = 0;
  std::int64_t euler_characteristic = 0;

  bool is_face(std::size_t face, std::size_t coface) const;
};

DualComplex build_dual_complex(const ModelPtr& model);

struct RetractionResult {
  QuasiMonomialPoint point;
  // Several minimal declared strata contained the support; the first declared was used.
  bool ambiguous = false;
  std::vector<std::size_t> candidates;
};

// Sends v (on the source model of the pullback) to the target skeleton with
// w_j = v(pullback of z_j), snapped to the minimal declared stratum containing the support.
RetractionResult retraction(const ModelPtr& target, const QuasiMonomialPoint& v,
                            const MonomialPullback& pullback);

// v -> (log r) * v(z_D) for a vertical divisor D = sum_i d_i D_i (keys are component labels).
PAFunction model_function_restriction(const std::map<std::string, std::int64_t>& divisor,
                                      const ModelPtr& model, const Rational& r);

}  // namespace berkhyb
