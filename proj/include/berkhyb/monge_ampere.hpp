#pragma once

#include "berkhyb/hybrid.hpp"
#include "berkhyb/log_linear.hpp"
#include "berkhyb/piecewise_affine.hpp"
#include "berkhyb/snc_model.hpp"
#include "berkhyb/tropical_metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace berkhyb {

struct IntersectionEntry {
  std::string label;
  std::int64_t b = 1;
  Rational intersection;      // (L_1 ... L_n . E)
  std::optional<Rational> u;  // position of v_E on the valuation line, when known
};

struct IntersectionTable {
  std::string name;
  std::string model;  // optional model name for completeness checks
  std::vector<IntersectionEntry> entries;
  Rational total;  // declared (L_1 ... L_n)
  bool semipositive = true;

  void validate() const;
  // Entries must cover every component once with b_E equal to its multiplicity.
  void validate_against(const SncModel& model) const;
};

struct Atom {
  std::string label;
  std::optional<LogLinear> position;
  Rational mass;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
  Rational total_mass() const;
};

struct ModelMAResult {
  AtomicMeasure measure;
  Rational total;
  bool total_matches = false;
  std::vector<std::string> flags;
};

// Dirac mass b_E (L_1 ... L_n . E) at each v_E. Zero-mass atoms are omitted.
ModelMAResult ma_model_metric(const IntersectionTable& table);

struct CurveMAResult {
  AtomicMeasure measure;
  bool semipositive_ok = true;
  std::vector<std::string> flags;
};

// Mass = slope increase at each kink of g (g = phi / (-log r) in the valuation coordinate).
CurveMAResult ma_pa_curve(const PiecewiseAffine1D& g, bool semipositive = true);

// Exact comparison of positioned atoms, ignoring labels and zero masses.
bool same_atoms(const AtomicMeasure& a, const AtomicMeasure& b, std::string* why = nullptr);

// sum_i mass_i f(u_i).
LogLinear pair_integral(const PiecewiseAffine1D& f, const AtomicMeasure& mu);

struct SymmetryReport {
  LogLinear lhs;  // int f0 d(f1'')
  LogLinear rhs;  // int f1 d(f0'')
  bool equal = false;
};
// Symmetry of the pairing for bounded PA data on the line.
SymmetryReport pairing_symmetry_check(const PiecewiseAffine1D& f0, const PiecewiseAffine1D& f1);

// ---- complex curve fibers -------------------------------------------------------------

enum class PotentialMode { Max, LogSumExp };

struct GridSpec {
  int n_radial = 1024;  // radial nodes per chart across the window (plus the overlap)
  int n_theta = 1024;
  double window = 2.0;  // charts reach |u| <= window, u = log|coord| / log|t|
  double mass_tolerance = 1e-4;
};

struct ChartGrid {
  std::vector<double> u;        // chart-local u of each radial node
  std::vector<double> weight;   // partition-of-unity weight per radial node
  std::vector<double> masses;   // weighted cell masses, row-major [radial][theta]
  double cap_mass = 0;          // mass inside the innermost node (beyond the window)
};

struct GridMeasure {
  double t = 0;
  GridSpec grid;
  double du = 0;
  std::int64_t degree = 0;
  ChartGrid charts[2];
  double total_mass = 0;     // lattice mass plus both caps
  double lattice_mass = 0;
  double min_cell_mass = 0;
};

// Fiber potential phi_t on P^1 (chart z = x1/x0) with hybrid constants c log_r|t|, its
// five-point Laplacian in log-polar coordinates on both charts, glued by a radial C^1
// partition of unity over 1/2 < |z| < 2. Throws ResolutionError when the total mass misses
// the degree by more than grid.mass_tolerance.
GridMeasure ma_complex_curve(const TropicalFSMetric& phi, double t, const HybridConfig& cfg,
                             const GridSpec& grid, PotentialMode mode = PotentialMode::Max);

struct LineMeasure {
  std::vector<std::pair<double, double>> atoms;  // (u, mass), sorted by u
  double leakage = 0;                            // mass beyond the chart windows
  std::vector<std::string> warnings;
  double total() const;
};

// Image of the grid measure under z -> log|z| / log|t| (chart 1 maps to -u).
LineMeasure pushforward_log_radius(const GridMeasure& mu);

double wasserstein1(const std::vector<std::pair<double, double>>& a,
                    const std::vector<std::pair<double, double>>& b);
std::vector<std::pair<double, double>> to_numeric(const AtomicMeasure& mu);

struct TestFunction {
  std::string id;
  PiecewiseAffine1D f;
};

struct ConvergenceRow {
  double t = 0;
  double w1 = 0;
  std::vector<double> errors;  // |int f dmu_t - int f dmu_0| per test function
  double total_mass = 0;
  double leakage = 0;
};

struct ConvergenceReport {
  std::string family;
  AtomicMeasure mu0;
  std::vector<ConvergenceRow> rows;
  bool monotone = true;
  std::vector<std::string> failures;
};

// Rows follow the schedule order; the monotone diagnostic asks W1 to be non-increasing
// along it (tolerance 1e-9).
ConvergenceReport weak_convergence_experiment(const TropicalFSMetric& phi, const HybridConfig& cfg,
                                              const std::vector<double>& schedule, const GridSpec& grid,
                                              const std::vector<TestFunction>& tests,
                                              PotentialMode mode = PotentialMode::Max, int threads = 1);

struct ClnRow {
  Rational delta;
  LogLinear difference;  // int f MA(phi) - int f MA(phi')
  LogLinear sup_distance;
  double abs_difference = 0;
  double sup = 0;
  bool antisymmetric = false;
};

struct ClnReport {
  std::vector<ClnRow> rows;
  double fitted_C = 0;
  double residual = 0;  // max relative deviation from the fitted line
  bool antisymmetric = true;
  bool passed = false;
  std::string failure;
};

// phi' shifts the constant of one entry by delta. The integrand f is a fixed bounded PA
// test function in the valuation coordinate.
ClnReport cln_stability_check(const TropicalFSMetric& phi, std::size_t perturbed_entry,
                              const PiecewiseAffine1D& f, const std::vector<Rational>& deltas,
                              const Rational& r, double residual_tolerance = 0.05);

}  // namespace berkhyb
