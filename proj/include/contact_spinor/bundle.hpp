#pragma once

// Weighted spin bundles for the two families used here:
//   G2 / conformal-3D labels (k, w)  meaning  Sym^k S [w]
//   Legendrean labels   (u|k|v)      meaning  Sym^k S [u+k, v+k]
// with Lambda^2 S = Lambda^0[1] in the (k, w) family and
// Lambda^2 S = Lambda^0[-1,-1] = L in the Legendrean family.

#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "contact_spinor/rational.hpp"

namespace contact_spinor {

enum class Notation { G2, Conformal3D, Leg };

std::string to_string(Notation n);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BundleLabel {
 public:
  BundleLabel() = default;

  static BundleLabel g2(int k, Rational w);
  static BundleLabel conformal3d(int k, Rational w);
  static BundleLabel leg(Rational u, int k, Rational v);
  /// Legendrean label from the weight form Sym^k S [a, b].
  static BundleLabel leg_from_weights(int k, Rational a, Rational b);

  Notation notation() const { return notation_; }
  int valence() const { return k_; }
  int rank() const { return k_ + 1; }

  /// (k, w) family weight.
  const Rational& weight() const { return a_; }
  /// Legendrean raw label entries.
  Rational u() const { return a_ - Rational(k_); }
  Rational v() const { return b_ - Rational(k_); }
  /// Density weights of the normalized form Sym^k S [a, b]; for the (k, w)
  /// family density_a() == w and density_b() == 0.
  const Rational& density_a() const { return a_; }
  const Rational& density_b() const { return b_; }

  /// Dual bundle (Sym^k S)^* [..] rewritten as a label of the same family.
  BundleLabel dual() const;
  /// Tensor with a pure density Lambda^0[a] (or Lambda^0[a, b]).
  BundleLabel shifted(Rational a, Rational b = Rational(0)) const;

  std::string str() const;

  friend bool operator==(const BundleLabel&, const BundleLabel&) = default;
  friend auto operator<=>(const BundleLabel&, const BundleLabel&) = default;

 private:
  Notation notation_ = Notation::G2;
  int k_ = 0;
  Rational a_;  // normalized density weight(s)
  Rational b_;
};

std::ostream& operator<<(std::ostream& os, const BundleLabel& b);

struct Summand {
  BundleLabel label;
  int multiplicity = 1;
  friend bool operator==(const Summand&, const Summand&) = default;
};

struct Decomposition {
  std::vector<Summand> summands;

  int total_rank() const;
  std::string str() const;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Clebsch-Gordan: Sym^j S (x) Sym^k S = sum_{i=0..min(j,k)} Sym^{j+k-2i} S,
/// the i-th summand carrying i copies of Lambda^2 S.
Decomposition tensor_decompose(const BundleLabel& b1, const BundleLabel& b2);

/// Lambda^2 of an irreducible label: the odd-i summands of the square.
Decomposition exterior_square(const BundleLabel& b);

/// Sym^2 of an irreducible label: the even-i summands of the square.
Decomposition symmetric_square(const BundleLabel& b);

/// Fixed vocabulary of named bundles.  Names: "S", "H", "Lambda1_H",
/// "Lambda2_Hperp", "L", "E", "F", "E*", "F*", "Lambda5",
/// "Lambda0[w]" / "Lambda0[u,v]".
BundleLabel dictionary(Notation notation, const std::string& name);

struct DictionaryEntry {
  Notation notation;
  std::string name;
  BundleLabel label;
};

/// Every named entry of the vocabulary (density families excluded).
std::vector<DictionaryEntry> dictionary_table();

}  // namespace contact_spinor
