#include "berkhyb/hybrid.hpp"

#include "berkhyb/error.hpp"
#include "berkhyb/log_linear.hpp"
#include "berkhyb/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace berkhyb {

void HybridConfig::validate() const {
  if (!(r > 0 && r < 1)) throw ConfigError("hybrid radius r must lie in (0, 1)");
  if (circle_angles < 1) throw ConfigError("circle_angles must be positive");
}

double HybridConfig::log_r() const { return log_hp(r).convert_to<double>(); }

HybridCirclePoint HybridCirclePoint::at(std::complex<double> t, const HybridConfig& cfg) {
  double a = std::abs(t);
  if (a == 0) throw ConfigError("use HybridCirclePoint::origin() for t = 0");
  if (a > cfg.r_double() * (1 + 1e-15)) throw ConfigError("hybrid circle point has |t| > r");
  HybridCirclePoint p;
  p.origin_ = false;
  p.t_ = t;
  return p;
}

SeminormResult hybrid_seminorm(const LaurentSeries& f, const HybridCirclePoint& p, const HybridConfig& cfg) {
  cfg.validate();
  if (f.num_vars() != 1 || f.vars()[0] != "t")
    throw ConfigError("hybrid semi-norm expects a Laurent polynomial in t");
  SeminormResult out;
  if (f.is_zero()) {
    out.zero_element = true;
    return out;
  }
  if (p.is_origin()) {
    Rational ord(f.terms().begin()->first[0]);
    out.order = ord;
    HighPrec v = boost::multiprecision::exp(HighPrec(ord) * log_hp(cfg.r));
    out.value = v.convert_to<double>();
    return out;
  }
  std::complex<double> ft = f.evaluate({p.t()});
  if (ft == std::complex<double>(0, 0)) {
    out.zero_element = true;
    return out;
  }
  double expo = std::log(std::abs(ft)) / std::log(std::abs(p.t()));
  out.value = std::pow(cfg.r_double(), expo);
  return out;
}

double hybrid_log(const LaurentSeries& f, std::complex<double> t, const HybridConfig& cfg) {
  std::complex<double> ft = f.evaluate({t});
  return cfg.log_r() * std::log(std::abs(ft)) / std::log(std::abs(t));
}

std::vector<double> default_schedule(const HybridConfig& cfg) {
  std::vector<double> out;
  for (int k = 0; k <= 8; ++k) out.push_back(cfg.r_double() * std::pow(10.0, -k));
  return out;
}

PathLimitResult hybrid_path_limit(const LaurentSeries& f, std::complex<double> c, const Rational& w,
                                  const HybridConfig& cfg, const std::vector<double>& schedule,
                                  double tolerance) {
  cfg.validate();
  if (c == std::complex<double>(0, 0)) throw ConfigError("path constant c must be nonzero");
  std::size_t iz = f.var_index("z");
  std::size_t it = f.var_index("t");
  if (f.num_vars() != 2) throw ConfigError("path limits expect Laurent data in (z, t)");
  PathLimitResult res;
  std::vector<Rational> weights(2);
  weights[iz] = w;
  weights[it] = 1;
  res.prediction = monomial_valuation(f, weights);
  double wd = to_double(w);

  for (double t0 : schedule) {
    if (!(t0 > 0) || t0 > cfg.r_double() * (1 + 1e-15))
      throw ConfigError("schedule entries must lie in (0, r]");
    PathSample s;
    for (int attempt = 0; attempt <= 4; ++attempt) {
      double t = t0 * (1.0 + attempt / 256.0);
      std::vector<std::complex<double>> pt(2);
      pt[iz] = c * std::pow(t, wd);
      pt[it] = t;
      std::complex<double> v = f.evaluate(pt);
      s.t = t;
      s.resamples = attempt;
      if (v != std::complex<double>(0, 0)) {
        s.ratio = std::log(std::abs(v)) / std::log(t);
        s.zero = false;
        break;
      }
      s.zero = true;
    }
    res.samples.push_back(s);
  }

  std::vector<const PathSample*> good;
  for (auto& s : res.samples)
    if (!s.zero) good.push_back(&s);
  if (good.size() < 2) {
    res.degenerate = true;
    res.diagnostic = "f vanishes identically along the path";
    return res;
  }
  auto richardson = [](const PathSample& a, const PathSample& b) {
    double ha = 1.0 / std::log(a.t), hb = 1.0 / std::log(b.t);
    return b.ratio - hb * (b.ratio - a.ratio) / (hb - ha);
  };
  std::size_t n = good.size();
  res.limit = richardson(*good[n - 2], *good[n - 1]);
  if (n >= 3) res.error_estimate = std::abs(res.limit - richardson(*good[n - 3], *good[n - 2]));
  if (res.prediction.is_infinite()) {
    res.degenerate = true;
    res.diagnostic = "monomial prediction is +inf (f = 0)";
  } else if (std::abs(res.limit - to_double(res.prediction.value())) > tolerance) {
    res.degenerate = true;
    res.diagnostic = "limit differs from the monomial prediction (cancellation along the path)";
  }
  return res;
}

double circle_sup(const HybridFunction& phi, double rho, int angles) {
  if (!(rho > 0)) throw ConfigError("circle radius must be positive");
  double best = -INFINITY;
  for (int k = 0; k < angles; ++k) {
    double th = 2.0 * std::numbers::pi * k / angles;
    best = std::max(best, phi(std::polar(rho, th)));
  }
  return best;
}

std::vector<RadialSample> sample_radial(const HybridFunction& phi, const std::vector<double>& radii,
                                        int angles) {
  std::vector<RadialSample> out;
  for (double rho : radii) out.push_back({rho, circle_sup(phi, rho, angles)});
  return out;
}

namespace {

// Least-squares fit y = a x + b.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double a = sxy / sxx;
  return {a, my - a * mx};
}

}  // namespace

LelongEstimate lelong_estimate(std::vector<RadialSample> samples) {
  if (samples.size() < 4) throw ConfigError("Lelong estimation needs at least 4 radii");
  for (auto& s : samples) {
    if (!(s.rho > 0)) throw ConfigError("radii must be positive");
    if (!std::isfinite(s.sup)) throw ConfigError("circle suprema must be finite");
  }
  std::sort(samples.begin(), samples.end(),
            [](const RadialSample& a, const RadialSample& b) { return a.rho < b.rho; });
  double lo = samples.front().rho, hi = samples.back().rho;
  if (std::log10(hi / lo) < 3.0 - 1e-9) throw ConfigError("radii must span at least 3 decades");

  LelongEstimate out;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i - 1].sup > samples[i].sup + 1e-9 * (1 + std::abs(samples[i].sup))) {
      out.warnings.push_back("circle suprema decrease with the radius near rho = " +
                             std::to_string(samples[i].rho));
      break;
    }
  }
  auto decade_fit = [&](double a, double b, std::size_t* count) -> std::optional<std::pair<double, double>> {
    std::vector<double> x, y;
    for (auto& s : samples) {
      if (s.rho >= a * (1 - 1e-12) && s.rho <= b * (1 + 1e-12)) {
        x.push_back(std::log(s.rho));
        y.push_back(s.sup);
      }
    }
    if (count) *count = x.size();
    if (x.size() < 2) return std::nullopt;
    return fit_line(x, y);
  };
  std::size_t used = 0;
  auto first = decade_fit(lo, lo * 10, &used);
  if (!first) throw ConfigError("the smallest decade needs at least 2 radii");
  out.estimate = first->first;
  out.intercept = first->second;
  out.points_used = used;
  for (double a = lo; a < hi * (1 - 1e-12); a *= 10) {
    auto f = decade_fit(a, a * 10, nullptr);
    if (f) out.decade_slopes.push_back(f->first);
  }
  if (out.decade_slopes.size() >= 2) out.band = std::abs(out.decade_slopes[0] - out.decade_slopes[1]);
  for (double s : out.decade_slopes) out.drift = std::max(out.drift, std::abs(s - out.estimate));
  return out;
}

std::vector<HybridSample> rho_r_forward(const std::vector<HybridSample>& phi, const Rational& r) {
  double lr = log_hp(r).convert_to<double>();
  std::vector<HybridSample> out;
  for (auto& s : phi) {
    double a = std::abs(s.t);
    if (a == 0) throw ConfigError("rho_r is defined away from t = 0");
    out.push_back({s.t, std::log(a) / lr * s.value});
  }
  return out;
}

std::vector<HybridSample> rho_r_inverse(const std::vector<HybridSample>& psi, const Rational& r,
                                        double domain_radius) {
  double lr = log_hp(r).convert_to<double>();
  std::vector<HybridSample> out;
  for (auto& s : psi) {
    double a = std::abs(s.t);
    if (a == 0) throw ConfigError("rho_r is defined away from t = 0");
    if (a > domain_radius || a >= 1) continue;
    out.push_back({s.t, s.value / (std::log(a) / lr)});
  }
  return out;
}

ConvexityVerdict khyb_convexity_check(const std::vector<std::pair<double, double>>& samples,
                                      double tolerance) {
  if (samples.size() < 3) throw ConfigError("convexity check needs at least 3 samples");
  ConvexityVerdict v;
  v.worst_violation = -INFINITY;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    auto [x0, y0] = samples[i - 1];
    auto [x1, y1] = samples[i];
    auto [x2, y2] = samples[i + 1];
    if (!(x0 < x1 && x1 < x2)) throw ConfigError("convexity samples must be strictly sorted");
    double chord = ((x2 - x1) * y0 + (x1 - x0) * y2) / (x2 - x0);
    double viol = y1 - chord;
    if (viol > v.worst_violation) {
      v.worst_violation = viol;
      v.worst_index = i;
    }
  }
  v.convex = v.worst_violation <= tolerance;
  return v;
}

ExactConvexityVerdict khyb_convexity_check(const std::vector<std::pair<Rational, Rational>>& samples) {
  if (samples.size() < 3) throw ConfigError("convexity check needs at least 3 samples");
  ExactConvexityVerdict v;
  bool first = true;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto& [x0, y0] = samples[i - 1];
    const auto& [x1, y1] = samples[i];
    const auto& [x2, y2] = samples[i + 1];
    if (!(x0 < x1 && x1 < x2)) throw ConfigError("convexity samples must be strictly sorted");
    Rational chord = ((x2 - x1) * y0 + (x1 - x0) * y2) / (x2 - x0);
    Rational viol = y1 - chord;
    if (first || viol > v.worst_violation) {
      v.worst_violation = viol;
      v.worst_index = i;
      first = false;
    }
  }
  v.convex = v.worst_violation <= 0;
  return v;
}

}  // namespace berkhyb
