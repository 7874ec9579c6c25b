#include "contact_spinor/coefficient.hpp"

#include <cmath>
#include <ostream>

namespace contact_spinor {

double Coefficient::to_double() const { return a_.to_double() + b_.to_double() * std::sqrt(3.0); }

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
  if (b_.is_zero() && o.b_.is_zero()) {
    a_ *= o.a_;
    return *this;
  }
  Rational a = a_ * o.a_ + Rational(3) * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  return *this;
}

Coefficient Coefficient::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero coefficient");
  // norm a^2 - 3 b^2 vanishes only at zero since sqrt(3) is irrational
  Rational norm = a_ * a_ - Rational(3) * b_ * b_;
  return {a_ / norm, -b_ / norm};
}

Coefficient& Coefficient::operator/=(const Coefficient& o) { return *this *= o.inverse(); }

std::strong_ordering operator<=>(const Coefficient& x, const Coefficient& y) {
  if (auto c = x.a_ <=> y.a_; c != 0) return c;
  return x.b_ <=> y.b_;
}

bool Coefficient::is_negative() const {
  // sign of a + b sqrt3 without floating point
  int sa = a_.sign(), sb = b_.sign();
  if (sb == 0) return sa < 0;
  if (sa == 0) return sb < 0;
  if (sa == sb) return sa < 0;
  // opposite signs: compare a^2 with 3 b^2
  Rational lhs = a_ * a_, rhs = Rational(3) * b_ * b_;
  return sa < 0 ? lhs > rhs : rhs > lhs;
}

std::string Coefficient::str() const {
  if (b_.is_zero()) return a_.str();
  std::string s3 = b_ == Rational(1) ? "sqrt3" : (b_ == Rational(-1) ? "-sqrt3" : b_.str() + " sqrt3");
  if (a_.is_zero()) return s3;
  Rational mag = b_.sign() < 0 ? -b_ : b_;
  std::string tail = mag == Rational(1) ? "sqrt3" : mag.str() + " sqrt3";
  return "(" + a_.str() + (b_.sign() < 0 ? " - " : " + ") + tail + ")";
}

std::ostream& operator<<(std::ostream& os, const Coefficient& c) { return os << c.str(); }

}  // namespace contact_spinor
