#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace mms {

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Always kept in canonical form: the denominator is positive and shares no
/// factor with the numerator.
class Rational {
public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class value);
  explicit Rational(const mpz_class& integer) : value_(integer) {}

  /// Parses "p/q", "-p/q" or a bare integer. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  /// "p/q", or "p" when the denominator is one.
  std::string to_string() const;
  /// Correctly rounded when numerator and denominator are below 2^53.
  double to_double() const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

private:
  mpq_class value_{0};
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Floor of a rational as an arbitrary-precision integer.
mpz_class floor(const Rational& r);
/// Ceiling of a rational as an arbitrary-precision integer.
mpz_class ceil(const Rational& r);

}  // namespace mms

template <>
struct std::hash<mms::Rational> {
  std::size_t operator()(const mms::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.to_string());
  }
};
