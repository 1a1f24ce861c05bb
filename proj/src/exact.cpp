#include "simchaos/exact.hpp"

#include <cmath>
#include <vector>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace mp = boost::multiprecision;

ExactRational::ExactRational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) {
    throw Error(ErrorKind::InvalidArgument, "zero denominator");
  }
  value_ = mp::cpp_rational(numerator, denominator);
}

ExactRational ExactRational::from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "non-finite value has no exact rational form");
  }
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // 53 significant bits fit exactly in an int64 after scaling.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  return ExactRational(scaled) * pow2(exponent - 53);
}

ExactRational ExactRational::pow2(int exponent) {
  BigInt p = 1;
  p <<= static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  return exponent < 0 ? ExactRational(BigInt(1), p) : ExactRational(p, BigInt(1));
}

ExactRational ExactRational::power(std::int64_t base, int exponent) {
  if (base == 0 && exponent < 0) {
    throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
  }
  const BigInt p = mp::pow(BigInt(base), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? ExactRational(BigInt(1), p) : ExactRational(p, BigInt(1));
}

ExactRational ExactRational::parse(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      return ExactRational(BigInt(text), BigInt(1));
    }
    return ExactRational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::runtime_error&) {
    throw Error(ErrorKind::Parse, "not a rational: '" + text + "'");
  }
}

BigInt ExactRational::numerator() const { return mp::numerator(value_); }
BigInt ExactRational::denominator() const { return mp::denominator(value_); }

double ExactRational::to_double() const { return value_.convert_to<double>(); }

std::string ExactRational::to_string() const {
  const BigInt den = denominator();
  if (den == 1) {
    return numerator().str();
  }
  return numerator().str() + "/" + den.str();
}

ExactRational ExactRational::abs() const {
  return ExactRational(value_.sign() < 0 ? mp::cpp_rational(-value_) : value_);
}

ExactRational& ExactRational::operator+=(const ExactRational& rhs) {
  value_ += rhs.value_;
  return *this;
}
ExactRational& ExactRational::operator-=(const ExactRational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
ExactRational& ExactRational::operator*=(const ExactRational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
ExactRational& ExactRational::operator/=(const ExactRational& rhs) {
  if (rhs.is_zero()) {
    throw Error(ErrorKind::InvalidArgument, "division by zero");
  }
  value_ /= rhs.value_;
  return *this;
}

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExactLength ExactLength::from_rational(const ExactRational& value) {
  ExactLength out;
  out.square_ = value * value;
  return out;
}

ExactLength ExactLength::sqrt_of(const ExactRational& square) {
  if (square.sign() < 0) {
    throw Error(ErrorKind::InvalidArgument, "negative square");
  }
  ExactLength out;
  out.square_ = square;
  return out;
}

ExactLength ExactLength::hypot(const ExactRational& dx, const ExactRational& dy) {
  return sqrt_of(dx * dx + dy * dy);
}

double ExactLength::to_double() const { return std::sqrt(square_.to_double()); }

ExactLength ExactLength::scaled(const ExactRational& factor) const {
  ExactLength out;
  out.square_ = square_ * factor * factor;
  return out;
}

bool ExactLength::less_than(double value) const {
  if (value <= 0.0) {
    return false;
  }
  const ExactRational v = ExactRational::from_double(value);
  return square_ < v * v;
}

namespace {

// Splits n into (a, c) with n = a^2 * c, pulling out small square factors.
std::pair<BigInt, BigInt> split_square(BigInt n) {
  BigInt outside = 1;
  for (unsigned p = 2; p < 2000; ++p) {
    const BigInt sq = BigInt(p) * p;
    if (sq > n) break;
    while (n % sq == 0) {
      n /= sq;
      outside *= p;
    }
  }
  const BigInt r = mp::sqrt(n);
  if (r * r == n) {
    return {outside * r, BigInt(1)};
  }
  return {outside, n};
}

}  // namespace

std::string ExactLength::to_string() const {
  if (square_.is_zero()) {
    return "0";
  }
  // sqrt(p/q) = sqrt(p*q)/q = a*sqrt(c)/q
  const BigInt q = square_.denominator();
  auto [a, c] = split_square(square_.numerator() * q);
  const ExactRational coefficient(a, q);
  if (c == 1) {
    return coefficient.to_string();
  }
  const BigInt num = coefficient.numerator();
  const BigInt den = coefficient.denominator();
  std::string out = (num == 1 ? std::string() : num.str() + "*") + "sqrt(" + c.str() + ")";
  if (den != 1) {
    out += "/" + den.str();
  }
  return out;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DigitOutOfRange: return "digit-out-of-range";
    case ErrorKind::HorizonExceeded: return "horizon-exceeded";
    case ErrorKind::UnsupportedExactDistance: return "unsupported-exact-distance";
    case ErrorKind::UnsupportedBase: return "unsupported-base";
    case ErrorKind::UnsupportedSpace: return "unsupported-space";
    case ErrorKind::Undecidable: return "undecidable";
    case ErrorKind::ResourceCap: return "resource-cap";
    case ErrorKind::OutsideRoot: return "outside-root";
    case ErrorKind::NotInSet: return "not-in-set";
    case ErrorKind::MissingWitnessTable: return "missing-witness-table";
    case ErrorKind::LabelingError: return "labeling-error";
    case ErrorKind::UnresolvedCoupling: return "unresolved-coupling";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Io: return "io-error";
  }
  return "error";
}

}  // namespace simchaos
