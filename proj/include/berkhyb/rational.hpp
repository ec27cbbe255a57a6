#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace berkhyb {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p", "-p", "p/q". Throws ConfigError on anything else.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

Integer numerator(const Rational& q);
Integer denominator(const Rational& q);
bool is_integer(const Rational& q);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

// Rational or +infinity; +infinity absorbs addition.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational v) : value_(std::move(v)) {}
  ExtRational(std::int64_t v) : value_(Rational(v)) {}

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  // Only valid on finite values.
  const Rational& value() const;

  ExtRational operator+(const ExtRational& o) const;
  bool operator==(const ExtRational& o) const;
  bool operator<(const ExtRational& o) const;
  bool operator<=(const ExtRational& o) const { return !(o < *this); }
  bool operator>(const ExtRational& o) const { return o < *this; }
  bool operator>=(const ExtRational& o) const { return !(*this < o); }

  std::string str() const;

 private:
  Rational value_{0};
  bool infinite_ = false;
};

ExtRational min(const ExtRational& a, const ExtRational& b);

}  // namespace berkhyb
