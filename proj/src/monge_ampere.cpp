#include "berkhyb/monge_ampere.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <thread>

namespace berkhyb {

void IntersectionTable::validate() const {
  if (entries.empty()) throw ConfigError("intersection table '" + name + "' is empty");
  std::set<std::string> seen;
  for (auto& e : entries) {
    if (e.b <= 0) throw ValidationError("table '" + name + "': b_E must be positive for " + e.label);
    if (!seen.insert(e.label).second)
      throw ValidationError("table '" + name + "': duplicate component " + e.label);
  }
}

void IntersectionTable::validate_against(const SncModel& model) const {
  validate();
  if (entries.size() != model.num_components())
    throw ValidationError("table '" + name + "' does not cover every component of '" + model.name() + "'");
  for (auto& e : entries) {
    std::size_t i = model.component_index(e.label);
    if (model.mult(i) != e.b)
      throw ValidationError("table '" + name + "': b_E of " + e.label + " disagrees with the model");
  }
}

Rational AtomicMeasure::total_mass() const {
  Rational s = 0;
  for (auto& a : atoms) s += a.mass;
  return s;
}

ModelMAResult ma_model_metric(const IntersectionTable& table) {
  table.validate();
  ModelMAResult res;
  for (auto& e : table.entries) {
    Rational mass = Rational(e.b) * e.intersection;
    if (mass < 0 && table.semipositive)
      res.flags.push_back("negative mass " + to_string(mass) + " at " + e.label +
                          " (input is not nef)");
    if (mass == 0) continue;
    Atom a;
    a.label = e.label;
    if (e.u) a.position = LogLinear(*e.u);
    a.mass = mass;
    res.measure.atoms.push_back(std::move(a));
  }
  res.total = res.measure.total_mass();
  res.total_matches = res.total == table.total;
  return res;
}

CurveMAResult ma_pa_curve(const PiecewiseAffine1D& g, bool semipositive) {
  CurveMAResult res;
  for (std::size_t i = 0; i < g.breaks().size(); ++i) {
    Rational jump = g.slope_jump(i);
    if (jump == 0) continue;
    if (jump < 0) {
      res.semipositive_ok = false;
      if (semipositive) res.flags.push_back("concave kink at u = " + g.breaks()[i].str());
    }
    res.measure.atoms.push_back(Atom{"", g.breaks()[i], jump});
  }
  return res;
}

bool same_atoms(const AtomicMeasure& a, const AtomicMeasure& b, std::string* why) {
  auto collect = [](const AtomicMeasure& mu, std::vector<std::pair<LogLinear, Rational>>& out) {
    for (auto& at : mu.atoms) {
      if (at.mass == 0) continue;
      if (!at.position) return false;
      out.emplace_back(*at.position, at.mass);
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return true;
  };
  std::vector<std::pair<LogLinear, Rational>> xa, xb;
  if (!collect(a, xa) || !collect(b, xb)) {
    if (why) *why = "atom without a position";
    return false;
  }
  if (xa.size() != xb.size()) {
    if (why) *why = "atom counts differ: " + std::to_string(xa.size()) + " vs " + std::to_string(xb.size());
    return false;
  }
  for (std::size_t i = 0; i < xa.size(); ++i) {
    if (xa[i].first != xb[i].first || xa[i].second != xb[i].second) {
      if (why)
        *why = "atom " + std::to_string(i) + ": (" + xa[i].first.str() + ", " + to_string(xa[i].second) +
               ") vs (" + xb[i].first.str() + ", " + to_string(xb[i].second) + ")";
      return false;
    }
  }
  return true;
}

LogLinear pair_integral(const PiecewiseAffine1D& f, const AtomicMeasure& mu) {
  LogLinear s;
  for (auto& a : mu.atoms) {
    if (!a.position) throw EvaluationError("cannot integrate against an atom without position");
    s += f.evaluate(*a.position) * a.mass;
  }
  return s;
}

SymmetryReport pairing_symmetry_check(const PiecewiseAffine1D& f0, const PiecewiseAffine1D& f1) {
  if (!f0.bounded() || !f1.bounded())
    throw ConfigError("pairing symmetry needs bounded data (zero slopes at both ends)");
  SymmetryReport rep;
  rep.lhs = pair_integral(f0, ma_pa_curve(f1, false).measure);
  rep.rhs = pair_integral(f1, ma_pa_curve(f0, false).measure);
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

// ---- complex curve fibers -------------------------------------------------------------

namespace {

struct SectionData {
  bool monomial = false;
  std::int64_t j = 0, k = 0;
  double log_coef = 0;
  const LaurentSeries* series = nullptr;
  double constant = 0;  // c_alpha log_r|t|
};

double log_abs_coef(const Coefficient& c) {
  if (c.is_unit()) return 0.0;
  return std::log(std::abs(c.to_complex()));
}

// C^1 radial cutoff in s = log|z|: 1 for s <= -log 2, 0 for s >= log 2.
double chi0(double s) {
  const double a = std::log(2.0);
  if (s <= -a) return 1.0;
  if (s >= a) return 0.0;
  double x = (s + a) / (2 * a);
  return 1.0 - x * x * (3.0 - 2.0 * x);
}

class FiberPotential {
 public:
  FiberPotential(const TropicalFSMetric& phi, double t, const HybridConfig& cfg, PotentialMode mode)
      : phi_(phi), t_(t), L_(std::log(t)), mode_(mode) {
    iz_ = phi.reference.var_index("z");
    it_ = phi.reference.var_index("t");
    double log_r_t = L_ / cfg.log_r();
    for (auto& e : phi.entries) {
      SectionData d;
      d.constant = to_double(e.c) * log_r_t;
      if (e.section.is_monomial()) {
        d.monomial = true;
        const auto& [exp, coef] = *e.section.terms().begin();
        d.j = exp[iz_];
        d.k = exp[it_];
        d.log_coef = log_abs_coef(coef);
      } else {
        d.series = &e.section;
      }
      data_.push_back(d);
    }
    const auto& [rexp, rcoef] = *phi.reference.terms().begin();
    ref_log_ = log_abs_coef(rcoef) + static_cast<double>(rexp[it_]) * L_;
    inv_m_ = 1.0 / static_cast<double>(phi.m);
  }

  // phi_t in the z-chart at z = exp(s + i theta).
  double chart0(double s, double theta) const {
    double best = -INFINITY;
    double vals[64];
    std::size_t n = data_.size();
    std::vector<double> heap;
    double* v = vals;
    if (n > 64) {
      heap.resize(n);
      v = heap.data();
    }
    for (std::size_t a = 0; a < n; ++a) {
      const auto& d = data_[a];
      double la;
      if (d.monomial) {
        la = d.log_coef + static_cast<double>(d.j) * s + static_cast<double>(d.k) * L_;
      } else {
        std::vector<std::complex<double>> pt(2);
        pt[iz_] = std::polar(std::exp(s), theta);
        pt[it_] = t_;
        la = std::log(std::abs(d.series->evaluate(pt)));
      }
      v[a] = la + d.constant;
      best = std::max(best, v[a]);
    }
    double out;
    if (mode_ == PotentialMode::Max) {
      out = best * inv_m_;
    } else {
      double sum = 0;
      for (std::size_t a = 0; a < n; ++a) sum += std::exp(2.0 * (v[a] - best));
      out = (best + 0.5 * std::log(sum)) * inv_m_;
    }
    return out - ref_log_;
  }

 private:
  const TropicalFSMetric& phi_;
  double t_;
  double L_;
  PotentialMode mode_;
  std::size_t iz_ = 0, it_ = 0;
  std::vector<SectionData> data_;
  double ref_log_ = 0;
  double inv_m_ = 1;
};

void validate_curve_family(const TropicalFSMetric& phi) {
  phi.validate();
  if (phi.degree <= 0) throw ConfigError("curve family '" + phi.name + "' needs a positive degree");
  if (phi.vars().size() != 2 || !phi.reference.has_var("z") || !phi.reference.has_var("t"))
    throw ConfigError("curve family '" + phi.name + "' must use variables z and t");
  if (!phi.reference.is_monomial()) throw ConfigError("curve family needs a monomial reference");
  std::size_t iz = phi.reference.var_index("z");
  if (phi.reference.monomial_exponent()[iz] != 0)
    throw ConfigError("curve family reference must not involve z (x0-trivialization)");
  for (auto& e : phi.entries)
    for (auto& [exp, c] : e.section.terms()) {
      (void)c;
      if (exp[iz] < 0 || exp[iz] > phi.degree * phi.m)
        throw ConfigError("section " + e.section.str() + " is not a section of L^m on P^1");
    }
}

}  // namespace

GridMeasure ma_complex_curve(const TropicalFSMetric& phi, double t, const HybridConfig& cfg,
                             const GridSpec& grid, PotentialMode mode) {
  cfg.validate();
  validate_curve_family(phi);
  if (!(t > 0 && t < 1)) throw ConfigError("fiber parameter must satisfy 0 < |t| < 1");
  if (grid.n_radial < 4 || grid.n_theta < 4 || !(grid.window > 0))
    throw ConfigError("grid too small");
  FiberPotential pot(phi, t, cfg, mode);

  GridMeasure out;
  out.t = t;
  out.grid = grid;
  out.degree = phi.degree;
  const double L = std::log(t);
  const double du = grid.window / grid.n_radial;
  const double ds = du * std::abs(L);
  const int N = grid.n_radial;
  const int NT = grid.n_theta;
  const double dth = 2.0 * std::numbers::pi / NT;
  const int k_lo = -static_cast<int>(std::ceil(std::log(2.0) / ds));
  const int rows = N - k_lo + 1;  // mass-carrying nodes k_lo..N
  out.du = du;

  double lattice = 0;
  double min_cell = INFINITY;
  std::vector<double> phi_vals(static_cast<std::size_t>(rows + 2) * NT);
  for (int chart = 0; chart < 2; ++chart) {
    // Potential on nodes k_lo-1 .. N+1; row index = k - (k_lo - 1).
    for (int k = k_lo - 1; k <= N + 1; ++k) {
      double sc = k * du * L;  // log|coordinate| in this chart
      for (int j = 0; j < NT; ++j) {
        double th = j * dth;
        double v = chart == 0 ? pot.chart0(sc, th) : pot.chart0(-sc, -th) + phi.degree * sc;
        phi_vals[static_cast<std::size_t>(k - k_lo + 1) * NT + j] = v;
      }
    }
    auto P = [&](int k, int j) {
      int jj = (j % NT + NT) % NT;
      return phi_vals[static_cast<std::size_t>(k - k_lo + 1) * NT + jj];
    };
    ChartGrid& cg = out.charts[chart];
    cg.u.resize(rows);
    cg.weight.resize(rows);
    cg.masses.assign(static_cast<std::size_t>(rows) * NT, 0.0);
    const double cell = ds * dth / (2.0 * std::numbers::pi);
    for (int k = k_lo; k <= N; ++k) {
      int row = k - k_lo;
      double sc = k * du * L;
      double w = chart == 0 ? chi0(sc) : 1.0 - chi0(-sc);
      cg.u[row] = k * du;
      cg.weight[row] = w;
      if (w == 0) continue;
      for (int j = 0; j < NT; ++j) {
        double c = P(k, j);
        double lap = (P(k + 1, j) - 2 * c + P(k - 1, j)) / (ds * ds) +
                     (P(k, j + 1) - 2 * c + P(k, j - 1)) / (dth * dth);
        double m = w * lap * cell;
        cg.masses[static_cast<std::size_t>(row) * NT + j] = m;
        lattice += m;
        min_cell = std::min(min_cell, m);
      }
    }
    double flux = 0;
    for (int j = 0; j < NT; ++j) flux += (P(N, j) - P(N + 1, j)) / ds;
    cg.cap_mass = flux / NT;
  }
  out.lattice_mass = lattice;
  out.min_cell_mass = min_cell;
  out.total_mass = lattice + out.charts[0].cap_mass + out.charts[1].cap_mass;
  double deficit = std::abs(out.total_mass - static_cast<double>(phi.degree));
  if (deficit > grid.mass_tolerance)
    throw ResolutionError("grid mass " + std::to_string(out.total_mass) + " misses degree " +
                          std::to_string(phi.degree) + " by " + std::to_string(deficit) +
                          "; refine to n_radial = " + std::to_string(2 * N) +
                          ", n_theta = " + std::to_string(2 * NT));
  return out;
}

double LineMeasure::total() const {
  double s = 0;
  for (auto& [u, m] : atoms) s += m;
  return s;
}

LineMeasure pushforward_log_radius(const GridMeasure& mu) {
  std::map<std::int64_t, double> acc;
  const int NT = mu.grid.n_theta;
  const int N = mu.grid.n_radial;
  for (int chart = 0; chart < 2; ++chart) {
    const ChartGrid& cg = mu.charts[chart];
    for (std::size_t row = 0; row < cg.u.size(); ++row) {
      if (cg.weight[row] == 0) continue;
      double s = 0;
      for (int j = 0; j < NT; ++j) s += cg.masses[row * NT + j];
      auto k = static_cast<std::int64_t>(std::llround(cg.u[row] / mu.du));
      acc[chart == 0 ? k : -k] += s;
    }
  }
  LineMeasure out;
  acc[N + 1] += mu.charts[0].cap_mass;
  acc[-(N + 1)] += mu.charts[1].cap_mass;
  out.leakage = mu.charts[0].cap_mass + mu.charts[1].cap_mass;
  if (std::abs(out.leakage) > 1e-6)
    out.warnings.push_back("mass " + std::to_string(out.leakage) +
                           " lies beyond the chart windows and is placed at the window edges");
  for (auto& [k, m] : acc) out.atoms.emplace_back(k * mu.du, m);
  return out;
}

double wasserstein1(const std::vector<std::pair<double, double>>& a,
                    const std::vector<std::pair<double, double>>& b) {
  std::vector<std::pair<double, double>> ev;  // (position, signed mass)
  for (auto& [u, m] : a) ev.emplace_back(u, m);
  for (auto& [u, m] : b) ev.emplace_back(u, -m);
  std::sort(ev.begin(), ev.end(), [](auto& x, auto& y) { return x.first < y.first; });
  double cdf = 0, w = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    cdf += ev[i].second;
    if (i + 1 < ev.size()) w += std::abs(cdf) * (ev[i + 1].first - ev[i].first);
  }
  return w;
}

std::vector<std::pair<double, double>> to_numeric(const AtomicMeasure& mu) {
  std::vector<std::pair<double, double>> out;
  for (auto& a : mu.atoms) {
    if (!a.position) throw EvaluationError("atom without position");
    out.emplace_back(a.position->to_double(), to_double(a.mass));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConvergenceReport weak_convergence_experiment(const TropicalFSMetric& phi, const HybridConfig& cfg,
                                              const std::vector<double>& schedule, const GridSpec& grid,
                                              const std::vector<TestFunction>& tests,
                                              PotentialMode mode, int threads) {
  ConvergenceReport rep;
  rep.family = phi.name;
  PiecewiseAffine1D g = tfs_curve_restriction(phi, cfg.r);
  CurveMAResult limit = ma_pa_curve(g);
  rep.mu0 = limit.measure;
  auto mu0 = to_numeric(rep.mu0);
  std::vector<double> exact;
  for (auto& tf : tests) exact.push_back(pair_integral(tf.f, rep.mu0).to_double());

  rep.rows.resize(schedule.size());
  std::vector<std::string> errors(schedule.size());
  auto work = [&](std::size_t i) {
    try {
      GridMeasure gm = ma_complex_curve(phi, schedule[i], cfg, grid, mode);
      LineMeasure lm = pushforward_log_radius(gm);
      ConvergenceRow row;
      row.t = schedule[i];
      row.w1 = wasserstein1(lm.atoms, mu0);
      row.total_mass = gm.total_mass;
      row.leakage = lm.leakage;
      for (std::size_t k = 0; k < tests.size(); ++k) {
        double s = 0;
        for (auto& [u, m] : lm.atoms) s += m * tests[k].f.evaluate(u);
        row.errors.push_back(std::abs(s - exact[k]));
      }
      rep.rows[i] = row;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  int nthreads = std::max(1, threads);
  if (nthreads == 1 || schedule.size() <= 1) {
    for (std::size_t i = 0; i < schedule.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < schedule.size(); i += nthreads) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw ResolutionError("t = " + std::to_string(schedule[i]) + ": " + errors[i]);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].w1 > rep.rows[i - 1].w1 + 1e-9) {
      rep.monotone = false;
      rep.failures.push_back("W1 increases from t = " + std::to_string(rep.rows[i - 1].t) +
                             " to t = " + std::to_string(rep.rows[i].t));
    }
  }
  return rep;
}

ClnReport cln_stability_check(const TropicalFSMetric& phi, std::size_t perturbed_entry,
                              const PiecewiseAffine1D& f, const std::vector<Rational>& deltas,
                              const Rational& r, double residual_tolerance) {
  if (perturbed_entry >= phi.entries.size()) throw ConfigError("perturbed entry out of range");
  if (!f.bounded()) throw ConfigError("CLN test function must be bounded");
  ClnReport rep;
  PiecewiseAffine1D g = tfs_curve_restriction(phi, r);
  AtomicMeasure mu = ma_pa_curve(g).measure;
  double sxy = 0, sxx = 0;
  for (auto& d : deltas) {
    TropicalFSMetric pert = phi;
    pert.entries[perturbed_entry].c += d;
    PiecewiseAffine1D gp = tfs_curve_restriction(pert, r);
    AtomicMeasure mup = ma_pa_curve(gp).measure;
    ClnRow row;
    row.delta = d;
    row.difference = pair_integral(f, mu) - pair_integral(f, mup);
    LogLinear swapped = pair_integral(f, mup) - pair_integral(f, mu);
    row.antisymmetric = swapped == -row.difference;
    rep.antisymmetric = rep.antisymmetric && row.antisymmetric;
    row.sup_distance = (g - gp).sup_abs();
    row.abs_difference = std::abs(row.difference.to_double());
    row.sup = row.sup_distance.to_double();
    sxy += row.abs_difference * row.sup;
    sxx += row.sup * row.sup;
    rep.rows.push_back(std::move(row));
  }
  rep.fitted_C = sxx > 0 ? sxy / sxx : 0.0;
  for (auto& row : rep.rows) {
    double pred = rep.fitted_C * row.sup;
    double dev;
    if (pred == 0)
      dev = row.abs_difference == 0 ? 0.0 : INFINITY;
    else
      dev = std::abs(row.abs_difference - pred) / pred;
    rep.residual = std::max(rep.residual, dev);
  }
  rep.passed = rep.antisymmetric && rep.residual <= residual_tolerance;
  if (!rep.antisymmetric) rep.failure = "pairing difference is not antisymmetric";
  else if (rep.residual > residual_tolerance)
    rep.failure = "pairing differences are not linear in delta (residual " + std::to_string(rep.residual) + ")";
  return rep;
}

}  // namespace berkhyb
