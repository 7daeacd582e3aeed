#include "malleable/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "malleable/errors.hpp"

namespace malleable {

Scalar::Scalar(long long num, long long den) {
  if (den == 0) throw InputError("zero denominator");
  q_ = Rational(num, den);
}

Scalar Scalar::from_double(double d) {
  Scalar s;
  s.exact_ = false;
  s.d_ = d;
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  std::string t(text);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  std::size_t start = 0;
  while (start < t.size() && std::isspace(static_cast<unsigned char>(t[start]))) ++start;
  t = t.substr(start);
  if (t.empty()) throw InputError("empty number");

  auto is_integer = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };

  if (auto slash = t.find('/'); slash != std::string::npos) {
    std::string num = t.substr(0, slash);
    std::string den = t.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den)) throw InputError("malformed fraction '" + t + "'");
    BigInt n(num[0] == '+' ? num.substr(1) : num);
    BigInt d(den[0] == '+' ? den.substr(1) : den);
    if (d == 0) throw InputError("zero denominator in '" + t + "'");
    return Scalar(Rational(n, d));
  }
  if (is_integer(t)) return Scalar(Rational(BigInt(t[0] == '+' ? t.substr(1) : t)));

  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InputError("malformed number '" + t + "'");
  }
  if (used != t.size()) throw InputError("malformed number '" + t + "'");
  return from_double(v);
}

const Rational& Scalar::rational() const {
  if (!exact_) throw InputError("value is not exact");
  return q_;
}

double Scalar::to_double() const {
  return exact_ ? static_cast<double>(q_) : d_;
}

bool Scalar::is_zero() const { return exact_ ? q_ == 0 : d_ == 0.0; }

bool Scalar::is_positive() const { return exact_ ? q_ > 0 : d_ > 0.0; }

std::string Scalar::str() const {
  if (!exact_) return format_double(d_);
  return q_.str();
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (exact_ && o.exact_) {
    q_ += o.q_;
  } else {
    d_ = to_double() + o.to_double();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (exact_ && o.exact_) {
    q_ -= o.q_;
  } else {
    d_ = to_double() - o.to_double();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (exact_ && o.exact_) {
    q_ *= o.q_;
  } else {
    d_ = to_double() * o.to_double();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (exact_ && o.exact_) {
    if (o.q_ == 0) throw InputError("division by zero");
    q_ /= o.q_;
  } else {
    d_ = to_double() / o.to_double();
    exact_ = false;
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return a.q_ == b.q_;
  return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (a.q_ < b.q_) return std::partial_ordering::less;
    if (a.q_ > b.q_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  return a.to_double() <=> b.to_double();
}

Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar r(1);
  for (unsigned i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_double(v));
}

}  // namespace malleable
