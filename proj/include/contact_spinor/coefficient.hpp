#pragma once

#include <compare>
#include <iosfwd>
#include <string>

#include "contact_spinor/rational.hpp"

namespace contact_spinor {

/// Element a + b*sqrt(3) of the field Q(sqrt 3).
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(Rational a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  Coefficient(std::int64_t a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Rational a, Rational b) : a_(a), b_(b) {}

  static Coefficient sqrt3() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt3_part() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_one() const { return a_ == Rational(1) && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  double to_double() const;

  Coefficient operator-() const { return {-a_, -b_}; }
  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Coefficient& o);
  Coefficient& operator/=(const Coefficient& o);
  Coefficient inverse() const;

  friend Coefficient operator+(Coefficient x, const Coefficient& y) { return x += y; }
  friend Coefficient operator-(Coefficient x, const Coefficient& y) { return x -= y; }
  friend Coefficient operator*(Coefficient x, const Coefficient& y) { return x *= y; }
  friend Coefficient operator/(Coefficient x, const Coefficient& y) { return x /= y; }

  friend bool operator==(const Coefficient&, const Coefficient&) = default;
  /// Lexicographic on (rational part, sqrt3 part); a total order, not the
  /// order of the real numbers.
  friend std::strong_ordering operator<=>(const Coefficient& x, const Coefficient& y);

  /// True when the real value is negative.
  bool is_negative() const;

  std::string str() const;

 private:
  Rational a_;
  Rational b_;
};

std::ostream& operator<<(std::ostream& os, const Coefficient& c);

}  // namespace contact_spinor
