#pragma once

#include "berkhyb/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <string>

namespace berkhyb {

using HighPrec = boost::multiprecision::cpp_bin_float_100;

// Basis element log(arg) or 1/log(arg). Arguments are stored canonically:
// log keys are split into prime factors where feasible, and all arguments are > 1.
struct BasisKey {
  enum class Kind { Log, InvLog };
  Kind kind;
  Rational arg;

  bool operator<(const BasisKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    return arg < o.arg;
  }
  bool operator==(const BasisKey& o) const { return kind == o.kind && arg == o.arg; }
};

// Exact element of Q + sum_k Q * b_k with b_k in {log a, 1/log a}.
// Signs are decided numerically at ~100 digits; a nonzero combination whose value
// falls below 1e-60 raises UncertifiedComparisonError instead of guessing.
class LogLinear {
 public:
  LogLinear() = default;
  LogLinear(Rational c) : constant_(std::move(c)) {}
  LogLinear(std::int64_t c) : constant_(c) {}

  static LogLinear log(const Rational& arg, const Rational& coef = 1);
  static LogLinear inv_log(const Rational& arg, const Rational& coef = 1);

  const Rational& constant() const { return constant_; }
  const std::map<BasisKey, Rational>& terms() const { return terms_; }
  Rational coefficient(const BasisKey& key) const;
  // Coefficient of log(arg) for a prime or other canonical argument.
  Rational log_coefficient(const Rational& arg) const;
  Rational inv_log_coefficient(const Rational& arg) const;

  bool is_zero() const { return constant_ == 0 && terms_.empty(); }
  bool is_rational() const { return terms_.empty(); }

  LogLinear operator-() const;
  LogLinear& operator+=(const LogLinear& o);
  LogLinear& operator-=(const LogLinear& o);
  LogLinear& operator*=(const Rational& k);
  LogLinear& operator/=(const Rational& k);
  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
  friend LogLinear operator*(LogLinear a, const Rational& k) { return a *= k; }
  friend LogLinear operator*(const Rational& k, LogLinear a) { return a *= k; }
  friend LogLinear operator/(LogLinear a, const Rational& k) { return a /= k; }

  // Multiply by log(arg): 1 -> log(arg), 1/log(arg) -> 1. Anything else would leave the
  // basis and throws UnsupportedRepresentationError.
  LogLinear times_log(const Rational& arg) const;
  // Divide by log(arg): 1 -> 1/log(arg), log(arg) -> 1.
  LogLinear div_log(const Rational& arg) const;

  // Exact structural equality (canonical form makes this value equality on the basis).
  bool operator==(const LogLinear& o) const;
  bool operator!=(const LogLinear& o) const { return !(*this == o); }

  HighPrec value() const;
  double to_double() const;
  // -1, 0, +1. Zero only for the exact zero element.
  int sign() const;

  std::string str() const;

 private:
  void add_term(const BasisKey& key, const Rational& coef);

  Rational constant_{0};
  std::map<BasisKey, Rational> terms_;
};

int compare(const LogLinear& a, const LogLinear& b);
inline bool operator<(const LogLinear& a, const LogLinear& b) { return compare(a, b) < 0; }
inline bool operator>(const LogLinear& a, const LogLinear& b) { return compare(a, b) > 0; }
inline bool operator<=(const LogLinear& a, const LogLinear& b) { return compare(a, b) <= 0; }
inline bool operator>=(const LogLinear& a, const LogLinear& b) { return compare(a, b) >= 0; }
const LogLinear& max(const LogLinear& a, const LogLinear& b);
const LogLinear& min(const LogLinear& a, const LogLinear& b);

HighPrec log_hp(const Rational& q);

}  // namespace berkhyb
