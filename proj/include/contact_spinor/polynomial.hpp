#pragma once

// Commutative polynomials over Q(sqrt 3) in named indeterminates.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "contact_spinor/coefficient.hpp"

namespace contact_spinor {

/// Sorted multiset of indeterminate names; empty means the constant 1.
using Monomial = std::vector<std::string>;

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Coefficient& c);
  static Polynomial variable(const std::string& name);

  /// Add c times the product of `factors` (sorted internally).
  void add_term(Monomial factors, const Coefficient& c);

  const std::map<Monomial, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int degree() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Coefficient& c);
  Polynomial operator-() const;
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Coefficient& c) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Coefficient of a monomial (zero when absent).
  Coefficient coefficient(const Monomial& m) const;
  /// Every indeterminate appearing anywhere.
  std::vector<std::string> variables() const;

  double evaluate(const std::function<double(const std::string&)>& value) const;

  std::string str() const;

 private:
  std::map<Monomial, Coefficient> terms_;
};

}  // namespace contact_spinor
