#include "gevrey/combinatorics/rational.hpp"

#include "gevrey/common/errors.hpp"

namespace gevrey::combinatorics {

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw ValidationError("rational with zero denominator");
  // cpp_rational wants a positive denominator on construction.
  if (denominator < 0) {
    value_ = Value(-numerator, -denominator);
  } else {
    value_ = Value(numerator, denominator);
  }
}

BigInt Rational::numerator() const { return boost::multiprecision::numerator(value_); }

BigInt Rational::denominator() const { return boost::multiprecision::denominator(value_); }

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.value_ == 0) throw ValidationError("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(Value(-value_)); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Rational::to_double() const { return value_.convert_to<double>(); }

std::string Rational::to_string() const {
  const BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace gevrey::combinatorics
