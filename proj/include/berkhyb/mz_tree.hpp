#pragma once

#include "berkhyb/log_linear.hpp"
#include "berkhyb/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace berkhyb {

// A point of M(Z): the trivial absolute value, |.|_p^eps with eps in [0, +inf], or
// |.|_inf^x with x in [0, 1].
struct MZPoint {
  enum class Kind { Origin, Prime, Infinity };
  Kind kind = Kind::Origin;
  std::int64_t p = 0;
  ExtRational eps;  // Prime branch
  Rational x;       // archimedean branch

  static MZPoint origin() { return MZPoint{}; }
  static MZPoint prime(std::int64_t p, ExtRational eps);
  static MZPoint infinity(Rational x);
};

struct MZEntry {
  std::int64_t n = 1;
  Rational c;
};

// Value in Q + sum_p Q log p, or -inf.
struct MZValue {
  bool neg_inf = false;
  LogLinear value;
  std::string str() const { return neg_inf ? "-inf" : value.str(); }
  bool operator==(const MZValue& o) const { return neg_inf == o.neg_inf && (neg_inf || value == o.value); }
};

// m^{-1} max_alpha (log|n_alpha|_x + c_alpha). n_alpha = 0 is rejected.
MZValue mz_fs_eval(const std::vector<MZEntry>& family, std::int64_t m, const MZPoint& x);

// Restriction to a p-adic branch in the coordinate eta = eps * log p, where FS data is
// rational: start value, slopes per piece, and increasing positive breaks. The function
// tends to -inf at the end exactly when the last slope is negative.
struct PadicBranch {
  Rational start;
  std::vector<Rational> slopes;
  std::vector<Rational> breaks;
  std::optional<Rational> declared_end;  // as supplied; checked against the PA data
  bool declared_end_neg_inf = false;
};

// x = num / den with den > 0 symbolic.
struct Breakpoint {
  Rational num;
  LogLinear den;
  HighPrec value() const { return HighPrec(num) / den.value(); }
};
int compare(const Breakpoint& a, const Breakpoint& b);

// Archimedean branch on [0, 1]: slopes per piece with symbolic breaks.
struct ArchBranch {
  Rational start;
  std::vector<LogLinear> slopes;
  std::vector<Breakpoint> breaks;
  std::optional<LogLinear> end;
};

// Finitely many explicit p-adic branches, one shared datum for every other prime, and the
// archimedean branch.
struct MZFunction {
  Rational origin;
  std::map<std::int64_t, PadicBranch> branches;
  PadicBranch default_branch;
  ArchBranch arch;
};

MZFunction mz_from_family(const std::vector<MZEntry>& family, std::int64_t m);
MZFunction mz_constant(const Rational& c);

struct BranchSlopes {
  std::string branch;    // prime, or "default"
  LogLinear s0;          // outgoing slope at 0 (in eps)
  LogLinear s_end;       // slope of the last piece (in eps)
  bool end_neg_inf = false;
  bool convex = true;
};

struct MZSlopeReport {
  std::vector<BranchSlopes> branches;  // explicit primes in increasing order, then default
  LogLinear s_inf;
  bool inf_convex = true;
  bool inf_increasing = true;
  LogLinear slope_sum;  // sum over explicit primes of s_p, plus s_inf
  bool default_slope_zero = true;
};

MZSlopeReport mz_slopes(const MZFunction& f);

struct MZVerdict {
  bool psh = true;
  // Machine-readable: not_convex:<b>, slope_at_origin_positive:<b>, slope_at_end_positive:<b>,
  // end_value_inconsistent:<b>, start_value_inconsistent:<b>, arch_not_convex,
  // arch_not_increasing, arch_end_inconsistent, default_slope_nonzero, slope_sum_negative.
  std::vector<std::string> reasons;
  MZSlopeReport report;
};

MZVerdict mz_psh_check(const MZFunction& f);

// The closed form for FS families: with A' the argmax set of the constants, n1 = gcd and
// n2 = lcm of |n_alpha| over A', sum_p s_p + m^{-1} log n2 = m^{-1} log(n2 / n1).
struct MZIdentityReport {
  Integer n1, n2;
  LogLinear sum_sp;
  LogLinear s_inf_direct;  // m^{-1} max_{A'} log|n_alpha|, from the PA data
  LogLinear s_inf_lcm;     // m^{-1} log n2
  LogLinear lhs;           // sum_sp + s_inf_lcm
  LogLinear rhs;           // m^{-1} log(n2 / n1)
  bool identity_holds = false;
  bool s_inf_discrepancy = false;
};

MZIdentityReport mz_family_identity(const std::vector<MZEntry>& family, std::int64_t m);

std::vector<std::pair<std::int64_t, int>> prime_factors(std::int64_t n);

}  // namespace berkhyb
