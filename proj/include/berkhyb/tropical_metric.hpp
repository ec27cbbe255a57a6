#pragma once

#include "berkhyb/laurent.hpp"
#include "berkhyb/log_linear.hpp"
#include "berkhyb/piecewise_affine.hpp"
#include "berkhyb/valuation.hpp"

#include <string>
#include <vector>

namespace berkhyb {

struct TfsEntry {
  LaurentSeries section;  // chart expression of a section of L^m
  Rational c;
};

// phi = m^{-1} max_alpha (log|s_alpha / s_ref^m| + c_alpha).
// Sections are chart expressions over a common variable list; s_ref is the chart expression
// of the trivializing section of L. model_sections (sections of L, constant 0) generate the
// model metric phi_L used as the origin of the relative potential; empty means {s_ref}.
struct TropicalFSMetric {
  std::string name;
  std::int64_t m = 1;
  std::vector<TfsEntry> entries;
  LaurentSeries reference;
  std::vector<LaurentSeries> model_sections;
  bool meromorphic = false;
  // Degree of L on curve fibers; 0 when not a curve family.
  std::int64_t degree = 0;

  const std::vector<std::string>& vars() const { return reference.vars(); }
  // Throws ConfigError on empty entries, m <= 0, or mismatched variable lists.
  void validate() const;
  std::vector<LaurentSeries> effective_model_sections() const;
};

// Values live in Q + Q log r.
LogLinear tfs_eval(const TropicalFSMetric& phi, const QuasiMonomialPoint& v, const Rational& r);
// Same with a weight per variable of phi (the monomial valuation with those weights).
LogLinear tfs_eval_weights(const TropicalFSMetric& phi, const std::vector<Rational>& var_weights,
                           const Rational& r);

// m -> k m, s -> s^k, c -> k c. Pointwise the same metric.
TropicalFSMetric tfs_lift(const TropicalFSMetric& phi, std::int64_t k);
// Pointwise max; references must agree. Lifts both to lcm(m1, m2).
TropicalFSMetric tfs_max(const TropicalFSMetric& a, const TropicalFSMetric& b);
// Metric on L1 + L2 with pointwise sum; products of sections at the common denominator.
TropicalFSMetric tfs_sum(const TropicalFSMetric& a, const TropicalFSMetric& b);
// Pointwise phi + c.
TropicalFSMetric tfs_shift(const TropicalFSMetric& phi, const Rational& c);

struct ScaleCheckReport {
  bool passed = true;
  std::size_t points = 0;
  std::string failure;
};
// tfs_lift(phi, k) agrees with phi at every given point.
ScaleCheckReport tfs_scale_check(const TropicalFSMetric& phi, std::int64_t k,
                                 const std::vector<QuasiMonomialPoint>& points, const Rational& r);

struct NaVertexReport {
  std::size_t component = 0;
  std::string label;
  std::int64_t b = 1;
  std::size_t model_section = 0;  // argmax model section s_{L,E}
  LogLinear nu;                   // in Q + Q / log r
  LogLinear formula_value;        // (log r / b_E) nu_E
  LogLinear restriction_value;    // (phi - phi_L)(v_E) from direct evaluation
  bool agree = false;
};

struct NaLimitResult {
  PAFunction psi;
  std::vector<NaVertexReport> vertices;
  bool all_agree = false;
  bool continuous = false;
};

// Relative potential phi_0 - phi_L on the skeleton: at each divisorial point both the
// Lelong-number formula and direct restriction are evaluated; the result interpolates the
// vertex values barycentrically on each simplex.
NaLimitResult na_limit_tfs(const TropicalFSMetric& phi, const ModelPtr& model, const Rational& r);

// Restriction to the line of monomial valuations v_u(z) = u, v_u(t) = 1 on a curve family,
// normalized as g = phi / (-log r), so g is convex in u. The reference must be a monomial.
PiecewiseAffine1D tfs_curve_restriction(const TropicalFSMetric& phi, const Rational& r,
                                        const std::string& z = "z", const std::string& t = "t");

// (2m)^{-1} log sum_i exp(2m x_i) - max_i x_i, evaluated stably.
double lse_max_gap(const std::vector<double>& x, int m);

}  // namespace berkhyb
