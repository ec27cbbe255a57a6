#pragma once

#include "berkhyb/rational.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace berkhyb {

using Exponent = std::vector<std::int64_t>;

// A nonzero coefficient: either the tag "unit" (some nonzero constant, read as 1 when
// arithmetic needs a value) or an explicit complex rational re + i*im.
class Coefficient {
 public:
  static Coefficient unit() { return Coefficient(); }
  static Coefficient explicit_value(Rational re, Rational im = 0);

  bool is_unit() const { return unit_; }
  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return !unit_ && re_ == 0 && im_ == 0; }
  std::complex<double> to_complex() const;

  Coefficient operator*(const Coefficient& o) const;
  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-() const;
  bool operator==(const Coefficient& o) const;

  std::string str() const;

 private:
  Coefficient() = default;
  bool unit_ = true;
  Rational re_{1};
  Rational im_{0};
};

// Finite Laurent polynomial over named variables. Terms are keyed by exponent vector in
// lexicographic order; zero coefficients are never stored, so no terms means zero.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  explicit LaurentSeries(std::vector<std::string> vars);

  static LaurentSeries zero(std::vector<std::string> vars) { return LaurentSeries(std::move(vars)); }
  static LaurentSeries monomial(std::vector<std::string> vars, Exponent exp,
                                Coefficient coef = Coefficient::unit());
  static LaurentSeries one(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<Exponent, Coefficient>& terms() const { return terms_; }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  // Index of a variable label; throws ConfigError when absent.
  std::size_t var_index(const std::string& label) const;
  bool has_var(const std::string& label) const;

  // Adds coef at exp; drops the term if the sum is zero.
  void add_term(const Exponent& exp, const Coefficient& coef);

  LaurentSeries operator+(const LaurentSeries& o) const;
  LaurentSeries operator-(const LaurentSeries& o) const;
  LaurentSeries operator*(const LaurentSeries& o) const;
  // Non-negative powers always; negative powers only for monomials.
  LaurentSeries pow(std::int64_t k) const;
  bool operator==(const LaurentSeries& o) const;

  // Numeric value at a point (one complex value per variable). Unit tags read as 1.
  std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const;

  // The single exponent of a monomial; throws otherwise.
  const Exponent& monomial_exponent() const;

  std::string str() const;

 private:
  void require_same_vars(const LaurentSeries& o) const;

  std::vector<std::string> vars_;
  std::map<Exponent, Coefficient> terms_;
};

}  // namespace berkhyb
