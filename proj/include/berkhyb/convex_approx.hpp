#pragma once

#include "berkhyb/rational.hpp"

#include <functional>
#include <vector>

namespace berkhyb {

using SampleOracle = std::function<double(const std::vector<double>&)>;

// Points of the standard simplex in R^N with coordinates in (1/den) Z.
std::vector<std::vector<Rational>> simplex_grid(std::size_t N, std::int64_t den);

// x -> max_alpha (<u_alpha, x> + c_alpha).
struct ConvexPAApprox {
  std::size_t dim = 0;
  int level = 0;
  std::vector<std::vector<Rational>> u;
  std::vector<double> c;

  double evaluate(const std::vector<double>& x) const;
};

struct ConvexApproxOptions {
  int horizon = 6;  // deepest grid level whose correction is folded into every chi_j
  double equivariance_tolerance = 1e-9;
};

// PA majorant of a sampled convex function with chi(x + c1) = chi(x) + c, built on the
// dyadic grid G_j of the simplex (denominator 2^j, vertices always included). On the
// samples the result is >= chi and non-increasing in j. Throws ValidationError when the
// oracle breaks translation-equivariance on the samples.
ConvexPAApprox convex_pa_approximation(const SampleOracle& chi, std::size_t N, int j,
                                       const std::vector<std::vector<double>>& samples,
                                       const ConvexApproxOptions& opts = {});

}  // namespace berkhyb
