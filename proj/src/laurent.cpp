#include "berkhyb/laurent.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>

namespace berkhyb {

Coefficient Coefficient::explicit_value(Rational re, Rational im) {
  Coefficient c;
  c.unit_ = false;
  c.re_ = std::move(re);
  c.im_ = std::move(im);
  return c;
}

std::complex<double> Coefficient::to_complex() const {
  return {to_double(re_), to_double(im_)};
}

Coefficient Coefficient::operator*(const Coefficient& o) const {
  if (unit_) return o;
  if (o.unit_) return *this;
  return explicit_value(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  return explicit_value(re_ + o.re_, im_ + o.im_);
}

Coefficient Coefficient::operator-() const { return explicit_value(-re_, -im_); }

bool Coefficient::operator==(const Coefficient& o) const {
  return unit_ == o.unit_ && re_ == o.re_ && im_ == o.im_;
}

std::string Coefficient::str() const {
  if (unit_) return "unit";
  return "(" + to_string(re_) + "," + to_string(im_) + ")";
}

LaurentSeries::LaurentSeries(std::vector<std::string> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw ConfigError("duplicate variable label '" + vars_[i] + "'");
}

LaurentSeries LaurentSeries::monomial(std::vector<std::string> vars, Exponent exp, Coefficient coef) {
  LaurentSeries f(std::move(vars));
  if (exp.size() != f.vars_.size()) throw ConfigError("exponent length does not match variables");
  f.add_term(exp, coef);
  return f;
}

LaurentSeries LaurentSeries::one(std::vector<std::string> vars) {
  Exponent zero(vars.size(), 0);
  return monomial(std::move(vars), std::move(zero));
}

std::size_t LaurentSeries::var_index(const std::string& label) const {
  auto it = std::find(vars_.begin(), vars_.end(), label);
  if (it == vars_.end()) throw ConfigError("unknown variable '" + label + "'");
  return static_cast<std::size_t>(it - vars_.begin());
}

bool LaurentSeries::has_var(const std::string& label) const {
  return std::find(vars_.begin(), vars_.end(), label) != vars_.end();
}

void LaurentSeries::add_term(const Exponent& exp, const Coefficient& coef) {
  if (exp.size() != vars_.size()) throw ConfigError("exponent length does not match variables");
  if (coef.is_zero()) return;
  auto it = terms_.find(exp);
  if (it == terms_.end()) {
    terms_.emplace(exp, coef);
    return;
  }
  Coefficient sum = it->second + coef;
  if (sum.is_zero())
    terms_.erase(it);
  else
    it->second = sum;
}

void LaurentSeries::require_same_vars(const LaurentSeries& o) const {
  if (vars_ != o.vars_) throw ConfigError("Laurent data over different variable lists");
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
  require_same_vars(o);
  LaurentSeries out = *this;
  for (auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
  require_same_vars(o);
  LaurentSeries out = *this;
  for (auto& [e, c] : o.terms_) out.add_term(e, -c);
  return out;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
  require_same_vars(o);
  LaurentSeries out(vars_);
  for (auto& [e1, c1] : terms_) {
    for (auto& [e2, c2] : o.terms_) {
      Exponent e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

LaurentSeries LaurentSeries::pow(std::int64_t k) const {
  if (k < 0) {
    if (!is_monomial()) throw EvaluationError("negative power of a non-monomial");
    const auto& [e, c] = *terms_.begin();
    if (!c.is_unit() && c.im() != 0) throw EvaluationError("negative power of complex coefficient");
    Exponent ne(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) ne[i] = e[i] * k;
    Coefficient nc = Coefficient::unit();
    if (!c.is_unit()) {
      Rational inv = 1 / c.re();
      Rational p = 1;
      for (std::int64_t i = 0; i < -k; ++i) p *= inv;
      nc = Coefficient::explicit_value(p);
    }
    return monomial(vars_, ne, nc);
  }
  LaurentSeries out = one(vars_);
  LaurentSeries base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return out;
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
  return vars_ == o.vars_ && terms_ == o.terms_;
}

std::complex<double> LaurentSeries::evaluate(const std::vector<std::complex<double>>& point) const {
  if (point.size() != vars_.size()) throw ConfigError("evaluation point has wrong dimension");
  std::complex<double> sum = 0;
  for (auto& [e, c] : terms_) {
    std::complex<double> term = c.to_complex();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= std::pow(point[i], static_cast<int>(e[i]));
    sum += term;
  }
  return sum;
}

const Exponent& LaurentSeries::monomial_exponent() const {
  if (!is_monomial()) throw EvaluationError("expected a monomial, got " + str());
  return terms_.begin()->first;
}

std::string LaurentSeries::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    if (c.is_unit())
      out += mono.empty() ? "1" : mono;
    else
      out += c.str() + (mono.empty() ? "" : "*" + mono);
  }
  return out;
}

}  // namespace berkhyb
