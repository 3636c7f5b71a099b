#include "beliefreg/number.hpp"

#include "beliefreg/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace beliefreg {

double Number::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->convert_to<double>();
  return std::get<double>(value_);
}

bool Number::is_zero() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->is_zero();
  return std::get<double>(value_) == 0.0;
}

bool Number::is_one() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r == 1;
  return std::get<double>(value_) == 1.0;
}

bool Number::is_integer() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return denominator(*r) == 1;
  const double d = std::get<double>(value_);
  return std::isfinite(d) && std::floor(d) == d;
}

bool Number::is_negative() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->sign() < 0;
  return std::get<double>(value_) < 0.0;
}

Number Number::exact_from_double(double d) {
  if (!std::isfinite(d)) return Number(d);
  return Number(Rational(d));
}

namespace {

template <class ExactOp, class RealOp>
Number combine(const Number& a, const Number& b, ExactOp exact_op, RealOp real_op) {
  if (a.is_exact() && b.is_exact()) return Number(exact_op(a.exact(), b.exact()));
  return Number(real_op(a.to_double(), b.to_double()));
}

}  // namespace

Number operator+(const Number& a, const Number& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); },
                 [](double x, double y) { return x + y; });
}

Number operator-(const Number& a, const Number& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); },
                 [](double x, double y) { return x - y; });
}

Number operator*(const Number& a, const Number& b) {
  // 0 * anything finite is an exact zero; keeps indicator products exact.
  if ((a.is_exact() && a.is_zero() && std::isfinite(b.to_double())) ||
      (b.is_exact() && b.is_zero() && std::isfinite(a.to_double()))) {
    return Number(Rational(0));
  }
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); },
                 [](double x, double y) { return x * y; });
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw EvalError("division by zero");
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x / y); },
                 [](double x, double y) { return x / y; });
}

Number operator-(const Number& a) {
  if (a.is_exact()) return Number(Rational(-a.exact()));
  return Number(-a.to_double());
}

std::strong_ordering compare(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) {
    const int c = a.exact().compare(b.exact());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  const double x = a.to_double();
  const double y = b.to_double();
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Number::identical(const Number& other) const {
  if (is_exact() != other.is_exact()) return false;
  if (is_exact()) return exact() == other.exact();
  const double x = std::get<double>(value_);
  const double y = std::get<double>(other.value_);
  return x == y || (std::isnan(x) && std::isnan(y));
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string Number::to_string() const {
  if (is_exact()) return rational_to_string(exact());
  const double d = std::get<double>(value_);
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  (void)ec;
  return std::string(buf, end);
}

Number min(const Number& a, const Number& b) { return compare(b, a) < 0 ? b : a; }
Number max(const Number& a, const Number& b) { return compare(b, a) > 0 ? b : a; }
Number abs(const Number& a) { return a.is_negative() ? -a : a; }

Number exp(const Number& a) {
  if (a.is_exact() && a.is_zero()) return Number(Rational(1));
  return Number(std::exp(a.to_double()));
}

Number pow(const Number& base, const Number& exponent) {
  if (base.is_exact() && exponent.is_exact() && exponent.is_integer()) {
    const Rational& e = exponent.exact();
    if (abs(e) <= 256) {
      const long long n = static_cast<long long>(numerator(e));
      if (n < 0 && base.is_zero()) throw EvalError("zero raised to a negative power");
      Rational result(1);
      Rational factor = base.exact();
      for (long long k = n < 0 ? -n : n; k > 0; k >>= 1) {
        if (k & 1) result *= factor;
        factor *= factor;
      }
      return Number(n < 0 ? Rational(1 / result) : result);
    }
  }
  return Number(std::pow(base.to_double(), exponent.to_double()));
}

double gauss_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

Number gauss(const Number& x, const Number& mean, const Number& variance) {
  if (!(variance.to_double() > 0.0)) throw EvalError("gauss variance must be positive");
  return Number(gauss_pdf(x.to_double(), mean.to_double(), variance.to_double()));
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_rational(text.substr(i, slash - i));
    auto den = parse_rational(text.substr(slash + 1));
    if (!num || !den || den->is_zero()) return std::nullopt;
    Rational r = *num / *den;
    return negative ? Rational(-r) : r;
  }
  boost::multiprecision::cpp_int digits = 0;
  long long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) --scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return std::nullopt;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return std::nullopt;
    ++i;
    long long e = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i + (i < text.size() && text[i] == '+'),
                                     text.data() + text.size(), e);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    scale += e;
  }
  Rational r(digits);
  boost::multiprecision::cpp_int ten = 1;
  for (long long k = scale < 0 ? -scale : scale; k > 0; --k) ten *= 10;
  r = scale < 0 ? Rational(r / ten) : Rational(r * ten);
  return negative ? Rational(-r) : r;
}

}  // namespace beliefreg
