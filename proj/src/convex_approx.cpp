#include "berkhyb/convex_approx.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace berkhyb {

namespace {

void grid_rec(std::size_t N, std::int64_t den, std::int64_t left, std::vector<std::int64_t>& cur,
              std::vector<std::vector<Rational>>& out) {
  if (cur.size() + 1 == N) {
    cur.push_back(left);
    std::vector<Rational> u;
    for (auto k : cur) u.emplace_back(k, den);
    out.push_back(std::move(u));
    cur.pop_back();
    return;
  }
  for (std::int64_t k = 0; k <= left; ++k) {
    cur.push_back(k);
    grid_rec(N, den, left - k, cur, out);
    cur.pop_back();
  }
}

double dot(const std::vector<double>& u, const std::vector<double>& x) {
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * x[i];
  return s;
}

struct Level {
  std::vector<std::vector<Rational>> u;
  std::vector<std::vector<double>> ud;
  std::vector<double> c;

  double eval(const std::vector<double>& x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ud.size(); ++a) best = std::max(best, dot(ud[a], x) + c[a]);
    return best;
  }
};

}  // namespace

std::vector<std::vector<Rational>> simplex_grid(std::size_t N, std::int64_t den) {
  if (N == 0 || den <= 0) throw ConfigError("simplex grid needs N >= 1 and den >= 1");
  std::vector<std::vector<Rational>> out;
  std::vector<std::int64_t> cur;
  grid_rec(N, den, den, cur, out);
  return out;
}

double ConvexPAApprox::evaluate(const std::vector<double>& x) const {
  if (x.size() != dim) throw ConfigError("evaluation point has wrong dimension");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < u.size(); ++a) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += to_double(u[a][i]) * x[i];
    best = std::max(best, s + c[a]);
  }
  return best;
}

ConvexPAApprox convex_pa_approximation(const SampleOracle& chi, std::size_t N, int j,
                                       const std::vector<std::vector<double>>& samples,
                                       const ConvexApproxOptions& opts) {
  if (N == 0) throw ConfigError("convex approximation needs N >= 1");
  if (j < 0) throw ConfigError("grid level must be non-negative");
  if (samples.empty()) throw ConfigError("convex approximation needs samples");
  std::vector<double> values;
  for (auto& x : samples) {
    if (x.size() != N) throw ConfigError("sample has wrong dimension");
    double v = chi(x);
    for (double shift : {1.0, -0.5}) {
      std::vector<double> y = x;
      for (auto& yi : y) yi += shift;
      double dev = std::abs(chi(y) - v - shift);
      if (dev > opts.equivariance_tolerance)
        throw ValidationError("oracle violates chi(x + c) = chi(x) + c (deviation " +
                              std::to_string(dev) + ")");
    }
    values.push_back(v);
  }

  int horizon = std::max(opts.horizon, j);
  std::vector<Level> levels;
  for (int i = 0; i <= horizon; ++i) {
    Level L;
    L.u = simplex_grid(N, std::int64_t{1} << i);
    for (auto& u : L.u) {
      std::vector<double> ud;
      for (auto& q : u) ud.push_back(to_double(q));
      double c = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < samples.size(); ++s) c = std::min(c, values[s] - dot(ud, samples[s]));
      L.ud.push_back(std::move(ud));
      L.c.push_back(c);
    }
    levels.push_back(std::move(L));
  }
  // delta_i: how far the minorant M_i sits below chi on the samples.
  std::vector<double> delta;
  for (auto& L : levels) {
    double d = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) d = std::max(d, values[s] - L.eval(samples[s]));
    delta.push_back(d);
  }
  double tail = 0;
  for (int i = j; i <= horizon; ++i) tail += delta[i];

  ConvexPAApprox out;
  out.dim = N;
  out.level = j;
  out.u = levels[j].u;
  for (double c : levels[j].c) out.c.push_back(c + tail);
  return out;
}

}  // namespace berkhyb
