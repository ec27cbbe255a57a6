#include "berkhyb/rational.hpp"

#include "berkhyb/error.hpp"

#include <cctype>

namespace berkhyb {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ConfigError("empty integer in rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw ConfigError("bad rational '" + std::string(whole) + "'");
  Integer v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ConfigError("bad rational '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  Integer p = parse_integer(text.substr(0, slash), text);
  Integer q = parse_integer(text.substr(slash + 1), text);
  if (q == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

std::string to_string(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }
bool is_integer(const Rational& q) { return denominator(q) == 1; }

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer g = gcd(a, b);
  Integer r = a / g * b;
  return r < 0 ? Integer(-r) : r;
}

const Rational& ExtRational::value() const {
  if (infinite_) throw EvaluationError("value() on +inf");
  return value_;
}

ExtRational ExtRational::operator+(const ExtRational& o) const {
  if (infinite_ || o.infinite_) return infinity();
  return ExtRational(value_ + o.value_);
}

bool ExtRational::operator==(const ExtRational& o) const {
  if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
  return value_ == o.value_;
}

bool ExtRational::operator<(const ExtRational& o) const {
  if (infinite_) return false;
  if (o.infinite_) return true;
  return value_ < o.value_;
}

std::string ExtRational::str() const { return infinite_ ? "inf" : to_string(value_); }

ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }

}  // namespace berkhyb
