// Exact-or-real scalar used throughout the engine.
//
// A Number is an exact rational as long as every operation that produced it
// was exact (+, -, *, /, min, max, abs, integer powers). Transcendental
// operations (exp, gauss, non-integer powers, pi) fall back to double.

#ifndef BELIEFREG_NUMBER_HPP
#define BELIEFREG_NUMBER_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace beliefreg {

using Rational = boost::multiprecision::cpp_rational;

class Number {
 public:
  Number() : value_(Rational(0)) {}
  Number(Rational r) : value_(std::move(r)) {}  // NOLINT: implicit by design of the API
  Number(double d) : value_(d) {}               // NOLINT
  Number(int i) : value_(Rational(i)) {}        // NOLINT
  Number(long long i) : value_(Rational(i)) {}  // NOLINT

  static Number ratio(long long num, long long den) { return Number(Rational(num, den)); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const;

  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;
  bool is_negative() const;

  /// Exact conversion of a finite double to a rational; infinities stay real.
  static Number exact_from_double(double d);

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator/(const Number& a, const Number& b);
  friend Number operator-(const Number& a);

  /// Total order on values; exact when both sides are exact.
  friend std::strong_ordering compare(const Number& a, const Number& b);
  friend bool operator<(const Number& a, const Number& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Number& a, const Number& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Number& a, const Number& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Number& a, const Number& b) { return compare(a, b) >= 0; }

  /// Structural identity: same representation and same value.
  bool identical(const Number& other) const;

  /// Canonical text: integers as "3", rationals as "-1/3", reals in
  /// shortest round-trip decimal form.
  std::string to_string() const;

 private:
  std::variant<Rational, double> value_;
};

Number min(const Number& a, const Number& b);
Number max(const Number& a, const Number& b);
Number abs(const Number& a);
Number exp(const Number& a);
Number pow(const Number& base, const Number& exponent);
/// Normal density N(x; mean, variance).
Number gauss(const Number& x, const Number& mean, const Number& variance);

double gauss_pdf(double x, double mean, double variance);

/// Parses a decimal literal ("12", "0.1", ".5", "2e-3", "1/3") exactly.
std::optional<Rational> parse_rational(std::string_view text);

std::string rational_to_string(const Rational& r);

}  // namespace beliefreg

#endif  // BELIEFREG_NUMBER_HPP
