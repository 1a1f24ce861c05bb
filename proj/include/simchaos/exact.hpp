#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace simchaos {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number kept in lowest terms with a positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(std::int64_t value) : value_(value) {}  // NOLINT(implicit)
  ExactRational(const BigInt& numerator, const BigInt& denominator);
  explicit ExactRational(boost::multiprecision::cpp_rational value) : value_(std::move(value)) {}

  /// Exact value of a finite double (every finite double is a dyadic rational).
  static ExactRational from_double(double value);
  /// 2^exponent for any signed exponent.
  static ExactRational pow2(int exponent);
  /// base^exponent for a nonnegative integer base and any signed exponent.
  static ExactRational power(std::int64_t base, int exponent);
  /// Parses "p", "-p" or "p/q".
  static ExactRational parse(const std::string& text);

  BigInt numerator() const;
  BigInt denominator() const;
  double to_double() const;
  std::string to_string() const;
  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  ExactRational abs() const;

  ExactRational& operator+=(const ExactRational& rhs);
  ExactRational& operator-=(const ExactRational& rhs);
  ExactRational& operator*=(const ExactRational& rhs);
  ExactRational& operator/=(const ExactRational& rhs);

  friend ExactRational operator+(ExactRational lhs, const ExactRational& rhs) { return lhs += rhs; }
  friend ExactRational operator-(ExactRational lhs, const ExactRational& rhs) { return lhs -= rhs; }
  friend ExactRational operator*(ExactRational lhs, const ExactRational& rhs) { return lhs *= rhs; }
  friend ExactRational operator/(ExactRational lhs, const ExactRational& rhs) { return lhs /= rhs; }
  ExactRational operator-() const { return ExactRational(boost::multiprecision::cpp_rational(-value_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

  const boost::multiprecision::cpp_rational& raw() const { return value_; }

 private:
  boost::multiprecision::cpp_rational value_{0};
};

/// Nonnegative length that is the square root of an exact rational. Every
/// diameter and separation constant of the bundled spaces (1/3, sqrt(2)/3^n,
/// sqrt(3)/8, sqrt(7)/9, ...) has this form, so they compare exactly.
class ExactLength {
 public:
  ExactLength() = default;

  static ExactLength from_rational(const ExactRational& value);
  static ExactLength sqrt_of(const ExactRational& square);
  /// sqrt(dx^2 + dy^2) for exact offsets.
  static ExactLength hypot(const ExactRational& dx, const ExactRational& dy);

  const ExactRational& square() const { return square_; }
  double to_double() const;
  /// Pretty form such as "1/3", "sqrt(2)/9" or "sqrt(7)/9".
  std::string to_string() const;
  bool is_zero() const { return square_.is_zero(); }

  ExactLength scaled(const ExactRational& factor) const;

  friend bool operator==(const ExactLength& a, const ExactLength& b) { return a.square_ == b.square_; }
  friend std::strong_ordering operator<=>(const ExactLength& a, const ExactLength& b) {
    return a.square_ <=> b.square_;
  }
  /// Exact comparison against a double threshold.
  bool less_than(double value) const;

 private:
  ExactRational square_;
};

}  // namespace simchaos
