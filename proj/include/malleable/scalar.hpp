#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace malleable {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// A probability-like quantity that is either an exact rational or a double.
///
/// Arithmetic between two exact values stays exact. As soon as a double
/// takes part the result is a double and `exact()` is false; callers
/// propagate that flag into their outputs instead of hiding it.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational q) : q_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long num, long long den);

  static Scalar from_double(double d);

  /// Parses "p/q", an integer, or a decimal. Fractions and integers are
  /// exact; anything with a '.' or exponent becomes a double.
  static Scalar parse(std::string_view text);

  bool exact() const { return exact_; }
  const Rational& rational() const;
  double to_double() const;
  bool is_zero() const;
  bool is_positive() const;

  /// "p/q" (or "p") when exact, otherwise 12 significant digits.
  std::string str() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(0) - a; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  bool exact_ = true;
  Rational q_{0};
  double d_ = 0.0;
};

Scalar pow(const Scalar& base, unsigned exponent);

/// Formats a double with 12 significant digits.
std::string format_double(double v);

/// Rounds a double to 12 significant digits (for stable JSON output).
double round12(double v);

}  // namespace malleable
