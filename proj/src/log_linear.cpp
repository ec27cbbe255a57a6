#include "berkhyb/log_linear.hpp"

#include "berkhyb/error.hpp"

#include <vector>

namespace berkhyb {

namespace {

const Integer kFactorLimit = Integer(1) << 40;

// Trial division; returns empty when the number is too large to factor cheaply.
std::vector<std::pair<Integer, int>> factor(Integer n) {
  std::vector<std::pair<Integer, int>> out;
  if (n > kFactorLimit) return out;
  for (Integer p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

const HighPrec& certify_threshold() {
  static const HighPrec eps("1e-60");
  return eps;
}

}  // namespace

HighPrec log_hp(const Rational& q) {
  if (q <= 0) throw EvaluationError("log of non-positive rational " + to_string(q));
  HighPrec n(numerator(q));
  HighPrec d(denominator(q));
  return boost::multiprecision::log(n) - boost::multiprecision::log(d);
}

void LogLinear::add_term(const BasisKey& key, const Rational& coef) {
  if (coef == 0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, coef);
    return;
  }
  it->second += coef;
  if (it->second == 0) terms_.erase(it);
}

LogLinear LogLinear::log(const Rational& arg, const Rational& coef) {
  if (arg <= 0) throw EvaluationError("log of non-positive argument " + to_string(arg));
  LogLinear out;
  if (arg == 1 || coef == 0) return out;
  Integer n = numerator(arg), d = denominator(arg);
  auto fn = factor(n);
  auto fd = factor(d);
  bool n_ok = n == 1 || !fn.empty();
  bool d_ok = d == 1 || !fd.empty();
  if (n_ok && d_ok) {
    for (auto& [p, e] : fn) out.add_term({BasisKey::Kind::Log, Rational(p)}, coef * e);
    for (auto& [p, e] : fd) out.add_term({BasisKey::Kind::Log, Rational(p)}, -coef * e);
    return out;
  }
  if (arg < 1)
    out.add_term({BasisKey::Kind::Log, 1 / arg}, -coef);
  else
    out.add_term({BasisKey::Kind::Log, arg}, coef);
  return out;
}

LogLinear LogLinear::inv_log(const Rational& arg, const Rational& coef) {
  if (arg <= 0 || arg == 1) throw EvaluationError("1/log undefined at " + to_string(arg));
  LogLinear out;
  if (arg < 1)
    out.add_term({BasisKey::Kind::InvLog, 1 / arg}, -coef);
  else
    out.add_term({BasisKey::Kind::InvLog, arg}, coef);
  return out;
}

Rational LogLinear::coefficient(const BasisKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational LogLinear::log_coefficient(const Rational& arg) const {
  return coefficient({BasisKey::Kind::Log, arg});
}

Rational LogLinear::inv_log_coefficient(const Rational& arg) const {
  return coefficient({BasisKey::Kind::InvLog, arg});
}

LogLinear LogLinear::operator-() const {
  LogLinear r = *this;
  r *= Rational(-1);
  return r;
}

LogLinear& LogLinear::operator+=(const LogLinear& o) {
  constant_ += o.constant_;
  for (auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

LogLinear& LogLinear::operator-=(const LogLinear& o) {
  constant_ -= o.constant_;
  for (auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

LogLinear& LogLinear::operator*=(const Rational& k) {
  if (k == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= k;
  for (auto& [key, c] : terms_) c *= k;
  return *this;
}

LogLinear& LogLinear::operator/=(const Rational& k) {
  if (k == 0) throw EvaluationError("division of log-linear value by zero");
  constant_ /= k;
  for (auto& [key, c] : terms_) c /= k;
  return *this;
}

LogLinear LogLinear::times_log(const Rational& arg) const {
  LogLinear out;
  if (constant_ != 0) out += LogLinear::log(arg, constant_);
  LogLinear unit_inv = LogLinear::inv_log(arg);
  const auto& [ikey, icoef] = *unit_inv.terms().begin();
  for (auto& [key, c] : terms_) {
    if (key == ikey) {
      // c/log(a') times log(arg) where arg = a'^{+-1}
      out += LogLinear(c * icoef);
      continue;
    }
    throw UnsupportedRepresentationError("product of " + str() + " with log(" + to_string(arg) +
                                         ") leaves the log-linear basis");
  }
  return out;
}

LogLinear LogLinear::div_log(const Rational& arg) const {
  LogLinear out;
  if (constant_ != 0) out += LogLinear::inv_log(arg, constant_);
  if (terms_.empty()) return out;
  // The log part must be a rational multiple of log(arg).
  LogLinear base = LogLinear::log(arg);
  LogLinear log_part;
  for (auto& [key, c] : terms_) {
    if (key.kind != BasisKey::Kind::Log)
      throw UnsupportedRepresentationError("quotient of " + str() + " by log(" + to_string(arg) +
                                           ") leaves the log-linear basis");
    log_part.add_term(key, c);
  }
  const auto& [bkey, bcoef] = *base.terms().begin();
  Rational ratio = log_part.coefficient(bkey) / bcoef;
  LogLinear check = base * ratio;
  if (check != log_part)
    throw UnsupportedRepresentationError("quotient of " + str() + " by log(" + to_string(arg) +
                                         ") leaves the log-linear basis");
  out += LogLinear(ratio);
  return out;
}

bool LogLinear::operator==(const LogLinear& o) const {
  return constant_ == o.constant_ && terms_ == o.terms_;
}

HighPrec LogLinear::value() const {
  HighPrec v(constant_);
  for (auto& [key, c] : terms_) {
    HighPrec l = log_hp(key.arg);
    HighPrec hc(c);
    if (key.kind == BasisKey::Kind::Log)
      v += hc * l;
    else
      v += hc / l;
  }
  return v;
}

double LogLinear::to_double() const { return value().convert_to<double>(); }

int LogLinear::sign() const {
  if (is_zero()) return 0;
  if (terms_.empty()) return constant_ > 0 ? 1 : -1;
  HighPrec v = value();
  if (boost::multiprecision::abs(v) < certify_threshold())
    throw UncertifiedComparisonError("cannot certify the sign of " + str());
  return v > 0 ? 1 : -1;
}

std::string LogLinear::str() const {
  std::string out;
  auto append = [&out](const Rational& c, const std::string& suffix) {
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    if (suffix.empty())
      out += to_string(a);
    else if (suffix[0] == '/')
      out += to_string(a) + suffix;
    else if (a == 1)
      out += suffix;
    else
      out += to_string(a) + "*" + suffix;
  };
  if (constant_ != 0 || terms_.empty()) append(constant_, "");
  for (auto& [key, c] : terms_) {
    if (key.kind == BasisKey::Kind::Log)
      append(c, "log(" + to_string(key.arg) + ")");
    else
      append(c, "/log(" + to_string(key.arg) + ")");
  }
  return out;
}

int compare(const LogLinear& a, const LogLinear& b) { return (a - b).sign(); }

const LogLinear& max(const LogLinear& a, const LogLinear& b) { return compare(a, b) < 0 ? b : a; }
const LogLinear& min(const LogLinear& a, const LogLinear& b) { return compare(b, a) < 0 ? b : a; }

}  // namespace berkhyb
