#include "contact_spinor/polynomial.hpp"

#include <algorithm>
#include <set>

namespace contact_spinor {

Polynomial::Polynomial(const Coefficient& c) {
  if (!c.is_zero()) terms_[{}] = c;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.terms_[{name}] = Coefficient(1);
  return p;
}

void Polynomial::add_term(Monomial factors, const Coefficient& c) {
  if (c.is_zero()) return;
  std::sort(factors.begin(), factors.end());
  auto [it, inserted] = terms_.try_emplace(std::move(factors), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial& Polynomial::operator*=(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [m, v] : p.terms_) v = -v;
  return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  }
  return out;
}

Coefficient Polynomial::coefficient(const Monomial& m) const {
  Monomial key = m;
  std::sort(key.begin(), key.end());
  auto it = terms_.find(key);
  return it == terms_.end() ? Coefficient() : it->second;
}

std::vector<std::string> Polynomial::variables() const {
  std::set<std::string> vars;
  for (const auto& [m, c] : terms_) vars.insert(m.begin(), m.end());
  return {vars.begin(), vars.end()};
}

double Polynomial::evaluate(const std::function<double(const std::string&)>& value) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (const auto& v : m) t *= value(v);
    total += t;
  }
  return total;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Coefficient mag = c.is_negative() ? -c : c;
    out += first ? (c.is_negative() ? "-" : "") : (c.is_negative() ? " - " : " + ");
    first = false;
    std::string body;
    for (const auto& v : m) body += (body.empty() ? "" : "*") + v;
    if (body.empty()) {
      out += mag.str();
    } else {
      if (!mag.is_one()) out += mag.str() + "*";
      out += body;
    }
  }
  return out;
}

}  // namespace contact_spinor
