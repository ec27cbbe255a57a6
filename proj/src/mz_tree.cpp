#include "berkhyb/mz_tree.hpp"

#include "berkhyb/error.hpp"
#include "berkhyb/piecewise_affine.hpp"

#include <algorithm>
#include <set>

namespace berkhyb {

MZPoint MZPoint::prime(std::int64_t p, ExtRational eps) {
  if (p < 2 || prime_factors(p).size() != 1 || prime_factors(p)[0].second != 1)
    throw ConfigError("M(Z) branch label " + std::to_string(p) + " is not a prime");
  if (!eps.is_infinite() && eps.value() < 0) throw ConfigError("branch parameter must be >= 0");
  MZPoint x;
  x.kind = Kind::Prime;
  x.p = p;
  x.eps = std::move(eps);
  return x;
}

MZPoint MZPoint::infinity(Rational xv) {
  if (xv < 0 || xv > 1) throw ConfigError("archimedean parameter must lie in [0, 1]");
  MZPoint x;
  x.kind = Kind::Infinity;
  x.x = std::move(xv);
  return x;
}

std::vector<std::pair<std::int64_t, int>> prime_factors(std::int64_t n) {
  if (n < 0) n = -n;
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

int vp(std::int64_t n, std::int64_t p) {
  int e = 0;
  if (n < 0) n = -n;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

void validate_family(const std::vector<MZEntry>& family, std::int64_t m) {
  if (family.empty()) throw ConfigError("M(Z) family is empty");
  if (m <= 0) throw ConfigError("M(Z) family needs m >= 1");
  for (auto& e : family)
    if (e.n == 0) throw ConfigError("M(Z) family entry with n = 0");
}

Rational max_constant(const std::vector<MZEntry>& family) {
  Rational best = family.front().c;
  for (auto& e : family) best = std::max(best, e.c);
  return best;
}

struct ArchLine {
  LogLinear slope;
  Rational intercept;
};

}  // namespace

MZValue mz_fs_eval(const std::vector<MZEntry>& family, std::int64_t m, const MZPoint& x) {
  validate_family(family, m);
  MZValue out;
  bool any = false;
  LogLinear best;
  for (auto& e : family) {
    LogLinear v;
    switch (x.kind) {
      case MZPoint::Kind::Origin:
        v = LogLinear(e.c);
        break;
      case MZPoint::Kind::Prime: {
        int k = vp(e.n, x.p);
        if (x.eps.is_infinite()) {
          if (k > 0) continue;  // |n|_p^eps -> 0
          v = LogLinear(e.c);
        } else {
          v = LogLinear::log(Rational(x.p), -k * x.eps.value()) + LogLinear(e.c);
        }
        break;
      }
      case MZPoint::Kind::Infinity:
        v = LogLinear::log(Rational(e.n < 0 ? -e.n : e.n), x.x) + LogLinear(e.c);
        break;
    }
    if (!any || v > best) best = v;
    any = true;
  }
  if (!any) {
    out.neg_inf = true;
    return out;
  }
  out.value = best / Rational(m);
  return out;
}

int compare(const Breakpoint& a, const Breakpoint& b) {
  return (b.den * a.num - a.den * b.num).sign();
}

MZFunction mz_constant(const Rational& c) {
  MZFunction f;
  f.origin = c;
  f.default_branch.start = c;
  f.default_branch.slopes = {Rational(0)};
  f.arch.start = c;
  f.arch.slopes = {LogLinear()};
  f.arch.end = LogLinear(c);
  return f;
}

MZFunction mz_from_family(const std::vector<MZEntry>& family, std::int64_t m) {
  validate_family(family, m);
  Rational M(m);
  MZFunction f;
  f.origin = max_constant(family) / M;

  std::set<std::int64_t> primes;
  for (auto& e : family)
    for (auto& [p, k] : prime_factors(e.n)) primes.insert(p);
  for (auto p : primes) {
    std::vector<Line> lines;
    for (auto& e : family) lines.push_back(Line{Rational(-vp(e.n, p)) / M, LogLinear(e.c / M)});
    PiecewiseAffine1D env = PiecewiseAffine1D::upper_envelope(std::move(lines));
    std::size_t first = 0;
    while (first < env.breaks().size() && env.breaks()[first].sign() <= 0) ++first;
    PadicBranch b;
    b.start = env.evaluate(LogLinear(0)).constant();
    for (std::size_t i = first; i < env.pieces().size(); ++i) b.slopes.push_back(env.pieces()[i].slope);
    for (std::size_t i = first; i < env.breaks().size(); ++i) b.breaks.push_back(env.breaks()[i].constant());
    f.branches.emplace(p, std::move(b));
  }
  f.default_branch.start = f.origin;
  f.default_branch.slopes = {Rational(0)};

  // Archimedean branch: upper envelope of x log|n| + c over [0, 1].
  std::vector<ArchLine> lines;
  for (auto& e : family)
    lines.push_back({LogLinear::log(Rational(e.n < 0 ? -e.n : e.n)) / M, e.c / M});
  std::sort(lines.begin(), lines.end(), [](const ArchLine& a, const ArchLine& b) {
    int s = compare(a.slope, b.slope);
    if (s != 0) return s < 0;
    return a.intercept < b.intercept;
  });
  std::vector<ArchLine> uniq;
  for (auto& l : lines) {
    if (!uniq.empty() && uniq.back().slope == l.slope)
      uniq.back() = l;
    else
      uniq.push_back(l);
  }
  auto cross = [](const ArchLine& a, const ArchLine& b) {
    return Breakpoint{a.intercept - b.intercept, b.slope - a.slope};
  };
  std::vector<ArchLine> hull;
  for (auto& l : uniq) {
    while (hull.size() >= 2 && compare(cross(hull[hull.size() - 2], hull.back()), cross(hull.back(), l)) >= 0)
      hull.pop_back();
    hull.push_back(l);
  }
  std::vector<Breakpoint> br;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) br.push_back(cross(hull[i], hull[i + 1]));
  std::size_t lo = 0;
  while (lo < br.size() && br[lo].num <= 0) ++lo;
  std::size_t hi = br.size();  // pieces lo..hi survive
  while (hi > lo && (LogLinear(br[hi - 1].num) - br[hi - 1].den).sign() >= 0) --hi;
  f.arch.start = f.origin;
  for (std::size_t i = lo; i <= hi; ++i) f.arch.slopes.push_back(hull[i].slope);
  for (std::size_t i = lo; i < hi; ++i) f.arch.breaks.push_back(br[i]);
  LogLinear end;
  bool any = false;
  for (auto& l : hull) {
    LogLinear v = l.slope + LogLinear(l.intercept);
    if (!any || v > end) end = v;
    any = true;
  }
  f.arch.end = end;
  return f;
}

namespace {

bool padic_convex(const PadicBranch& b) {
  for (std::size_t i = 0; i + 1 < b.slopes.size(); ++i)
    if (b.slopes[i] > b.slopes[i + 1]) return false;
  return true;
}

// Value at the end of the branch from the PA data: -inf, finite, or +inf (nullopt).
std::optional<std::pair<bool, Rational>> padic_end(const PadicBranch& b) {
  const Rational& last = b.slopes.back();
  if (last < 0) return std::make_pair(true, Rational(0));
  if (last > 0) return std::nullopt;
  Rational v = b.start, x = 0;
  for (std::size_t i = 0; i < b.breaks.size(); ++i) {
    v += b.slopes[i] * (b.breaks[i] - x);
    x = b.breaks[i];
  }
  return std::make_pair(false, v);
}

void check_padic(const std::string& label, const PadicBranch& b, const Rational& origin,
                 bool generic, std::vector<std::string>& reasons) {
  (void)generic;
  if (!padic_convex(b)) reasons.push_back("not_convex:" + label);
  if (b.slopes.front() > 0) reasons.push_back("slope_at_origin_positive:" + label);
  if (b.slopes.back() > 0) reasons.push_back("slope_at_end_positive:" + label);
  if (b.start != origin) reasons.push_back("start_value_inconsistent:" + label);
  auto end = padic_end(b);
  if (end && (b.declared_end || b.declared_end_neg_inf)) {
    bool ok = end->first ? b.declared_end_neg_inf
                         : (!b.declared_end_neg_inf && b.declared_end && *b.declared_end == end->second);
    if (!ok) reasons.push_back("end_value_inconsistent:" + label);
  }
}

}  // namespace

MZSlopeReport mz_slopes(const MZFunction& f) {
  auto require = [](const PadicBranch& b, const std::string& label) {
    if (b.slopes.size() != b.breaks.size() + 1)
      throw UnsupportedRepresentationError("branch " + label + ": need one more slope than breaks");
    for (std::size_t i = 0; i < b.breaks.size(); ++i)
      if (b.breaks[i] <= 0 || (i > 0 && b.breaks[i] <= b.breaks[i - 1]))
        throw UnsupportedRepresentationError("branch " + label + ": breaks must be positive and increasing");
  };
  MZSlopeReport rep;
  for (auto& [p, b] : f.branches) {
    require(b, std::to_string(p));
    BranchSlopes bs;
    bs.branch = std::to_string(p);
    bs.s0 = LogLinear::log(Rational(p), b.slopes.front());
    bs.s_end = LogLinear::log(Rational(p), b.slopes.back());
    bs.end_neg_inf = b.slopes.back() < 0;
    bs.convex = padic_convex(b);
    rep.slope_sum += bs.s0;
    rep.branches.push_back(std::move(bs));
  }
  require(f.default_branch, "default");
  BranchSlopes d;
  d.branch = "default";
  // In units of log p for a generic prime p.
  d.s0 = LogLinear(f.default_branch.slopes.front());
  d.s_end = LogLinear(f.default_branch.slopes.back());
  d.end_neg_inf = f.default_branch.slopes.back() < 0;
  d.convex = padic_convex(f.default_branch);
  rep.default_slope_zero = f.default_branch.slopes.front() == 0;
  rep.branches.push_back(std::move(d));

  const ArchBranch& a = f.arch;
  if (a.slopes.size() != a.breaks.size() + 1)
    throw UnsupportedRepresentationError("archimedean branch: need one more slope than breaks");
  for (std::size_t i = 0; i < a.breaks.size(); ++i) {
    bool inside = a.breaks[i].num > 0 && (LogLinear(a.breaks[i].num) - a.breaks[i].den).sign() < 0 &&
                  a.breaks[i].den.sign() > 0;
    if (!inside || (i > 0 && compare(a.breaks[i - 1], a.breaks[i]) >= 0))
      throw UnsupportedRepresentationError("archimedean breaks must be increasing inside (0, 1)");
  }
  rep.s_inf = a.slopes.front();
  for (std::size_t i = 0; i + 1 < a.slopes.size(); ++i)
    if (a.slopes[i] > a.slopes[i + 1]) rep.inf_convex = false;
  rep.inf_increasing = rep.s_inf.sign() >= 0;
  rep.slope_sum += rep.s_inf;
  return rep;
}

MZVerdict mz_psh_check(const MZFunction& f) {
  MZVerdict v;
  v.report = mz_slopes(f);
  for (auto& [p, b] : f.branches) check_padic(std::to_string(p), b, f.origin, false, v.reasons);
  check_padic("default", f.default_branch, f.origin, true, v.reasons);
  if (!v.report.inf_convex) v.reasons.push_back("arch_not_convex");
  if (!v.report.inf_increasing) v.reasons.push_back("arch_not_increasing");
  if (f.arch.start != f.origin) v.reasons.push_back("start_value_inconsistent:inf");
  if (f.arch.end) {
    HighPrec val(f.arch.start), x(0);
    for (std::size_t i = 0; i < f.arch.breaks.size(); ++i) {
      HighPrec b = f.arch.breaks[i].value();
      val += f.arch.slopes[i].value() * (b - x);
      x = b;
    }
    val += f.arch.slopes.back().value() * (HighPrec(1) - x);
    if (boost::multiprecision::abs(val - f.arch.end->value()) > HighPrec("1e-40"))
      v.reasons.push_back("arch_end_inconsistent");
  }
  if (!v.report.default_slope_zero) v.reasons.push_back("default_slope_nonzero");
  if (v.report.slope_sum.sign() < 0) v.reasons.push_back("slope_sum_negative");
  v.psh = v.reasons.empty();
  return v;
}

MZIdentityReport mz_family_identity(const std::vector<MZEntry>& family, std::int64_t m) {
  validate_family(family, m);
  MZIdentityReport rep;
  Rational cmax = max_constant(family);
  bool first = true;
  for (auto& e : family) {
    if (e.c != cmax) continue;
    Integer a = e.n < 0 ? -e.n : e.n;
    if (first) {
      rep.n1 = a;
      rep.n2 = a;
      first = false;
    } else {
      rep.n1 = gcd(rep.n1, a);
      rep.n2 = lcm(rep.n2, a);
    }
  }
  MZSlopeReport slopes = mz_slopes(mz_from_family(family, m));
  Rational M(m);
  for (auto& b : slopes.branches)
    if (b.branch != "default") rep.sum_sp += b.s0;
  rep.s_inf_direct = slopes.s_inf;
  rep.s_inf_lcm = LogLinear::log(Rational(rep.n2)) / M;
  rep.lhs = rep.sum_sp + rep.s_inf_lcm;
  rep.rhs = LogLinear::log(Rational(rep.n2, rep.n1)) / M;
  rep.identity_holds = rep.lhs == rep.rhs;
  rep.s_inf_discrepancy = rep.s_inf_direct != rep.s_inf_lcm;
  return rep;
}

}  // namespace berkhyb
