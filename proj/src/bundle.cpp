#include "contact_spinor/bundle.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace contact_spinor {

std::string to_string(Notation n) {
  switch (n) {
    case Notation::G2: return "g2";
    case Notation::Conformal3D: return "c3";
    case Notation::Leg: return "leg";
  }
  return "?";
}

BundleLabel BundleLabel::g2(int k, Rational w) {
  if (k < 0) throw UsageError("negative valence in bundle label");
  BundleLabel b;
  b.notation_ = Notation::G2;
  b.k_ = k;
  b.a_ = w;
  return b;
}

BundleLabel BundleLabel::conformal3d(int k, Rational w) {
  BundleLabel b = g2(k, w);
  b.notation_ = Notation::Conformal3D;
  return b;
}

BundleLabel BundleLabel::leg(Rational u, int k, Rational v) {
  return leg_from_weights(k, u + Rational(k), v + Rational(k));
}

BundleLabel BundleLabel::leg_from_weights(int k, Rational a, Rational b) {
  if (k < 0) throw UsageError("negative valence in bundle label");
  BundleLabel l;
  l.notation_ = Notation::Leg;
  l.k_ = k;
  l.a_ = a;
  l.b_ = b;
  return l;
}

BundleLabel BundleLabel::dual() const {
  BundleLabel d = *this;
  if (notation_ == Notation::Leg) {
    // S^* = S[1,1]
    d.a_ = Rational(k_) - a_;
    d.b_ = Rational(k_) - b_;
  } else {
    // S^* = S[-1]
    d.a_ = -a_ - Rational(k_);
  }
  return d;
}

BundleLabel BundleLabel::shifted(Rational a, Rational b) const {
  BundleLabel s = *this;
  s.a_ += a;
  if (notation_ == Notation::Leg) {
    s.b_ += b;
  } else if (!b.is_zero()) {
    throw UsageError("two-weight shift applied to a single-weight label");
  }
  return s;
}

std::string BundleLabel::str() const {
  std::ostringstream os;
  if (notation_ == Notation::Leg) {
    os << "(" << u() << "|" << k_ << "|" << v() << ")";
  } else {
    os << "(" << k_ << "," << a_ << ")";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const BundleLabel& b) { return os << b.str(); }

int Decomposition::total_rank() const {
  int r = 0;
  for (const auto& s : summands) r += s.label.rank() * s.multiplicity;
  return r;
}

std::string Decomposition::str() const {
  std::string out;
  for (std::size_t i = 0; i < summands.size(); ++i) {
    if (i) out += " + ";
    if (summands[i].multiplicity != 1) out += std::to_string(summands[i].multiplicity) + "x";
    out += summands[i].label.str();
  }
  return out.empty() ? "0" : out;
}

namespace {

// Weight carried by one copy of Lambda^2 S.
BundleLabel contract_shift(const BundleLabel& b, int copies) {
  if (b.notation() == Notation::Leg) return b.shifted(Rational(-copies), Rational(-copies));
  return b.shifted(Rational(copies));
}

BundleLabel with_valence(const BundleLabel& like, int k, Rational a, Rational b) {
  switch (like.notation()) {
    case Notation::Leg: return BundleLabel::leg_from_weights(k, a, b);
    case Notation::G2: return BundleLabel::g2(k, a);
    case Notation::Conformal3D: return BundleLabel::conformal3d(k, a);
  }
  return {};
}

Decomposition square_part(const BundleLabel& b, bool odd) {
  Decomposition d;
  const int k = b.valence();
  for (int i = odd ? 1 : 0; i <= k; i += 2) {
    BundleLabel base = with_valence(b, 2 * k - 2 * i, b.density_a() * Rational(2), b.density_b() * Rational(2));
    d.summands.push_back({contract_shift(base, i), 1});
  }
  return d;
}

}  // namespace

Decomposition tensor_decompose(const BundleLabel& b1, const BundleLabel& b2) {
  if (b1.notation() != b2.notation()) throw UsageError("tensor product of labels in different notations");
  Decomposition d;
  const int j = b1.valence(), k = b2.valence();
  for (int i = 0; i <= std::min(j, k); ++i) {
    BundleLabel base = with_valence(b1, j + k - 2 * i, b1.density_a() + b2.density_a(),
                                    b1.density_b() + b2.density_b());
    d.summands.push_back({contract_shift(base, i), 1});
  }
  return d;
}

Decomposition exterior_square(const BundleLabel& b) { return square_part(b, true); }

Decomposition symmetric_square(const BundleLabel& b) { return square_part(b, false); }

namespace {

bool parse_density_name(const std::string& name, std::vector<Rational>& out) {
  const std::string prefix = "Lambda0[";
  if (name.rfind(prefix, 0) != 0 || name.back() != ']') return false;
  std::string body = name.substr(prefix.size(), name.size() - prefix.size() - 1);
  std::stringstream ss(body);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part.erase(std::remove(part.begin(), part.end(), ' '), part.end());
    out.push_back(Rational::parse(part));
  }
  return !out.empty();
}

}  // namespace

BundleLabel dictionary(Notation notation, const std::string& name) {
  std::vector<Rational> dens;
  if (parse_density_name(name, dens)) {
    if (notation == Notation::Leg) {
      if (dens.size() != 2) throw UsageError("Legendrean density needs two weights: " + name);
      return BundleLabel::leg(dens[0], 0, dens[1]);
    }
    if (dens.size() != 1) throw UsageError("density needs one weight: " + name);
    return notation == Notation::G2 ? BundleLabel::g2(0, dens[0]) : BundleLabel::conformal3d(0, dens[0]);
  }
  for (const auto& e : dictionary_table()) {
    if (e.notation == notation && e.name == name) return e.label;
  }
  throw UsageError("unknown bundle name '" + name + "' for notation " + to_string(notation));
}

std::vector<DictionaryEntry> dictionary_table() {
  using R = Rational;
  return {
      {Notation::G2, "S", BundleLabel::g2(1, R(0))},
      {Notation::G2, "H", BundleLabel::g2(3, R(-1))},
      {Notation::G2, "Lambda1_H", BundleLabel::g2(3, R(-2))},
      {Notation::G2, "Lambda2_Hperp", BundleLabel::g2(4, R(-3))},
      {Notation::G2, "L", BundleLabel::g2(0, R(-1))},
      {Notation::G2, "Lambda5", BundleLabel::g2(0, R(-3))},
      {Notation::Conformal3D, "S", BundleLabel::conformal3d(1, R(0))},
      {Notation::Conformal3D, "Lambda1", BundleLabel::conformal3d(2, R(-2))},
      {Notation::Conformal3D, "Lambda2", BundleLabel::conformal3d(2, R(-3))},
      {Notation::Conformal3D, "Lambda3", BundleLabel::conformal3d(0, R(-3))},
      {Notation::Leg, "S", BundleLabel::leg(R(-1), 1, R(-1))},
      {Notation::Leg, "E", BundleLabel::leg(R(1), 1, R(-1))},
      {Notation::Leg, "F", BundleLabel::leg(R(-1), 1, R(1))},
      {Notation::Leg, "E*", BundleLabel::leg(R(-2), 1, R(0))},
      {Notation::Leg, "F*", BundleLabel::leg(R(0), 1, R(-2))},
      {Notation::Leg, "L", BundleLabel::leg(R(-1), 0, R(-1))},
      {Notation::Leg, "Lambda5", BundleLabel::leg(R(-3), 0, R(-3))},
  };
}

}  // namespace contact_spinor
