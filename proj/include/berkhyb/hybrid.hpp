#pragma once

#include "berkhyb/laurent.hpp"
#include "berkhyb/rational.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace berkhyb {

struct HybridConfig {
  Rational r{1, 2};
  // Angles used for circle suprema.
  int circle_angles = 1024;

  void validate() const;
  double r_double() const { return to_double(r); }
  double log_r() const;
};

// A point of the hybrid circle: the non-archimedean origin or some 0 < |t| <= r.
class HybridCirclePoint {
 public:
  static HybridCirclePoint origin() { return HybridCirclePoint(); }
  static HybridCirclePoint at(std::complex<double> t, const HybridConfig& cfg);

  bool is_origin() const { return origin_; }
  std::complex<double> t() const { return t_; }

 private:
  HybridCirclePoint() = default;
  bool origin_ = true;
  std::complex<double> t_{0, 0};
};

struct SeminormResult {
  double value = 0;
  bool zero_element = false;      // f = 0, or f(t) = 0 at the sampled point
  std::optional<Rational> order;  // ord_0(f) at the origin
};

// |f|_0 = r^{ord_0 f}; |f|_t = r^{log|f(t)| / log|t|}. f is a Laurent polynomial in "t".
SeminormResult hybrid_seminorm(const LaurentSeries& f, const HybridCirclePoint& p, const HybridConfig& cfg);
// log |f|_t = log r * log|f(t)| / log|t|.
double hybrid_log(const LaurentSeries& f, std::complex<double> t, const HybridConfig& cfg);

struct PathSample {
  double t = 0;        // the |t| actually used
  double ratio = 0;    // log|f(z(t), t)| / log|t|
  int resamples = 0;
  bool zero = false;   // f vanished at every resampled point
};

struct PathLimitResult {
  std::vector<PathSample> samples;
  double limit = 0;
  double error_estimate = 0;
  ExtRational prediction;
  bool degenerate = false;
  std::string diagnostic;
};

// t_k = r 10^{-k}, k = 0..8.
std::vector<double> default_schedule(const HybridConfig& cfg);

// Samples log|f(c t^w, t)| / log|t| along the schedule and extrapolates to t -> 0 with a
// first-order Richardson step in h = 1/log|t| on the last two samples. The prediction is
// the monomial valuation with weights (w for z, 1 for t).
PathLimitResult hybrid_path_limit(const LaurentSeries& f, std::complex<double> c, const Rational& w,
                                  const HybridConfig& cfg, const std::vector<double>& schedule,
                                  double tolerance = 1e-3);

struct RadialSample {
  double rho = 0;
  double sup = 0;
};

using HybridFunction = std::function<double(std::complex<double>)>;

double circle_sup(const HybridFunction& phi, double rho, int angles);
std::vector<RadialSample> sample_radial(const HybridFunction& phi, const std::vector<double>& radii,
                                        int angles);

struct LelongEstimate {
  double estimate = 0;
  double intercept = 0;
  double band = 0;   // |slope(smallest decade) - slope(next decade)|
  double drift = 0;  // largest deviation of any per-decade slope from the estimate
  std::vector<double> decade_slopes;
  std::size_t points_used = 0;
  std::vector<std::string> warnings;
};

// Least-squares slope of circle suprema against log rho over the smallest decade.
// Requires >= 4 radii spanning >= 3 decades.
LelongEstimate lelong_estimate(std::vector<RadialSample> samples);

struct HybridSample {
  std::complex<double> t;
  double value = 0;
};

// phi -> (t -> log_r|t| * phi(t)). Samples at t = 0 are rejected.
std::vector<HybridSample> rho_r_forward(const std::vector<HybridSample>& phi, const Rational& r);
// psi -> psi / log_r|t| on 0 < |t| <= domain_radius; samples outside are dropped.
std::vector<HybridSample> rho_r_inverse(const std::vector<HybridSample>& psi, const Rational& r,
                                        double domain_radius);

struct ConvexityVerdict {
  bool convex = true;
  double worst_violation = 0;  // max over triples of mid value minus chord value
  std::size_t worst_index = 0;
};
ConvexityVerdict khyb_convexity_check(const std::vector<std::pair<double, double>>& samples,
                                      double tolerance = 1e-12);

struct ExactConvexityVerdict {
  bool convex = true;
  Rational worst_violation{0};
  std::size_t worst_index = 0;
};
ExactConvexityVerdict khyb_convexity_check(const std::vector<std::pair<Rational, Rational>>& samples);

}  // namespace berkhyb
