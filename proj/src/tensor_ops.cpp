#include "contact_spinor/tensor_ops.hpp"

#include <algorithm>
#include <bit>

namespace contact_spinor {

std::size_t ComponentTensor::position(const std::string& name) const {
  for (std::size_t i = 0; i < free_.size(); ++i)
    if (free_[i].name == name) return i;
  throw StructuralError("no free index named " + name);
}

ComponentTensor& ComponentTensor::operator+=(const ComponentTensor& o) {
  if (o.free_ != free_) return *this += reorder(o, free_);
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += o.cells_[i];
  return *this;
}

ComponentTensor& ComponentTensor::operator-=(const ComponentTensor& o) {
  if (o.free_ != free_) return *this -= reorder(o, free_);
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] -= o.cells_[i];
  return *this;
}

ComponentTensor& ComponentTensor::operator*=(const Coefficient& c) {
  for (auto& p : cells_) p *= c;
  return *this;
}

namespace {

std::size_t bit(std::size_t mask, std::size_t i) { return (mask >> i) & 1U; }

}  // namespace

ComponentTensor reorder(const ComponentTensor& t, const std::vector<Index>& order) {
  if (order.size() != t.rank()) throw StructuralError("reorder: index sets differ");
  std::vector<std::size_t> src(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    src[i] = t.position(order[i].name);
    if (t.free()[src[i]] != order[i]) throw StructuralError("reorder: variance mismatch for " + order[i].name);
  }
  ComponentTensor out(order);
  for (std::size_t m = 0; m < out.size(); ++m) {
    std::size_t sm = 0;
    for (std::size_t i = 0; i < order.size(); ++i) sm |= bit(m, i) << src[i];
    out.cell(m) = t.cell(sm);
  }
  return out;
}

ComponentTensor sorted(const ComponentTensor& t) {
  auto order = t.free();
  std::sort(order.begin(), order.end());
  return reorder(t, order);
}

bool same_tensor(const ComponentTensor& a, const ComponentTensor& b) {
  auto fa = a.free(), fb = b.free();
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) return false;
  return reorder(b, a.free()) == a;
}

ComponentTensor rename(const ComponentTensor& t, const std::map<std::string, std::string>& map) {
  auto f = t.free();
  for (auto& i : f)
    if (auto it = map.find(i.name); it != map.end()) i.name = it->second;
  ComponentTensor out(f);
  for (std::size_t m = 0; m < t.size(); ++m) out.cell(m) = t.cell(m);
  std::set<std::string> names;
  for (const auto& i : f)
    if (!names.insert(i.name).second) throw StructuralError("rename produced duplicate index " + i.name);
  return out;
}

ComponentTensor outer(const ComponentTensor& a, const ComponentTensor& b) {
  auto f = a.free();
  f.insert(f.end(), b.free().begin(), b.free().end());
  std::set<std::string> names;
  for (const auto& i : f)
    if (!names.insert(i.name).second) throw StructuralError("outer product repeats index " + i.name);
  ComponentTensor out(f);
  const std::size_t na = a.rank();
  for (std::size_t ma = 0; ma < a.size(); ++ma) {
    if (a.cell(ma).is_zero()) continue;
    for (std::size_t mb = 0; mb < b.size(); ++mb) out.cell(ma | (mb << na)) = a.cell(ma) * b.cell(mb);
  }
  return out;
}

namespace {

// Drop positions p < q from the free list; returns mask builder.
std::vector<Index> without(const std::vector<Index>& f, std::size_t p, std::size_t q) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (i != p && i != q) out.push_back(f[i]);
  return out;
}

std::size_t insert_bits(std::size_t m, std::size_t p, std::size_t vp, std::size_t q, std::size_t vq) {
  // insert vp at position p and vq at position q (p < q) into the reduced mask m
  std::size_t low = m & ((std::size_t{1} << p) - 1);
  std::size_t rest = m >> p;
  std::size_t x = low | (vp << p) | (rest << (p + 1));
  std::size_t low2 = x & ((std::size_t{1} << q) - 1);
  std::size_t rest2 = x >> q;
  return low2 | (vq << q) | (rest2 << (q + 1));
}

}  // namespace

ComponentTensor contract(const ComponentTensor& t, const std::string& lower_name, const std::string& upper_name) {
  std::size_t pl = t.position(lower_name), pu = t.position(upper_name);
  if (t.free()[pl].variance != Variance::Lower || t.free()[pu].variance != Variance::Upper)
    throw StructuralError("contract needs a lower and an upper index");
  std::size_t p = std::min(pl, pu), q = std::max(pl, pu);
  ComponentTensor out(without(t.free(), p, q));
  for (std::size_t m = 0; m < out.size(); ++m)
    for (std::size_t v = 0; v < 2; ++v) out.cell(m) += t.cell(insert_bits(m, p, v, q, v));
  return out;
}

ComponentTensor raise(const ComponentTensor& t, const std::string& lower_name, const std::string& upper_name) {
  std::size_t p = t.position(lower_name);
  if (t.free()[p].variance != Variance::Lower) throw StructuralError("raise needs a lower index");
  auto f = t.free();
  f[p] = up(upper_name);
  ComponentTensor out(f);
  for (std::size_t m = 0; m < out.size(); ++m) {
    // phi^0 = phi_1, phi^1 = -phi_0
    std::size_t src = m ^ (std::size_t{1} << p);
    out.cell(m) = bit(m, p) ? -t.cell(src) : t.cell(src);
  }
  return out;
}

ComponentTensor lower(const ComponentTensor& t, const std::string& upper_name, const std::string& lower_name) {
  std::size_t p = t.position(upper_name);
  if (t.free()[p].variance != Variance::Upper) throw StructuralError("lower needs an upper index");
  auto f = t.free();
  f[p] = lo(lower_name);
  ComponentTensor out(f);
  for (std::size_t m = 0; m < out.size(); ++m) {
    // phi_0 = -phi^1, phi_1 = phi^0
    std::size_t src = m ^ (std::size_t{1} << p);
    out.cell(m) = bit(m, p) ? t.cell(src) : -t.cell(src);
  }
  return out;
}

ComponentTensor symmetrize(const ComponentTensor& t, const std::vector<std::string>& names) {
  if (names.size() < 2) return t;
  std::size_t smask = 0;
  Variance v = t.free()[t.position(names[0])].variance;
  for (const auto& n : names) {
    std::size_t p = t.position(n);
    if (t.free()[p].variance != v) throw StructuralError("symmetrize over indices of mixed variance");
    smask |= std::size_t{1} << p;
  }
  // the average over permutations is the average over all arrangements
  // with the same number of ones among the symmetrized slots
  std::map<std::pair<std::size_t, int>, Polynomial> sums;
  std::map<std::pair<std::size_t, int>, std::int64_t> counts;
  for (std::size_t m = 0; m < t.size(); ++m) {
    auto key = std::pair{m & ~smask, std::popcount(m & smask)};
    sums[key] += t.cell(m);
    ++counts[key];
  }
  ComponentTensor out(t.free());
  for (std::size_t m = 0; m < t.size(); ++m) {
    auto key = std::pair{m & ~smask, std::popcount(m & smask)};
    out.cell(m) = sums[key] * Coefficient(Rational(1, counts[key]));
  }
  return out;
}

ComponentTensor delta_tensor(const std::string& lower_name, const std::string& upper_name) {
  ComponentTensor out({lo(lower_name), up(upper_name)});
  out.cell(0) = Polynomial(Coefficient(1));
  out.cell(3) = Polynomial(Coefficient(1));
  return out;
}

ComponentTensor constant_tensor(const Coefficient& c) {
  ComponentTensor out;
  out.cell(0) = Polynomial(c);
  return out;
}

std::optional<Coefficient> proportional(const ComponentTensor& a, const ComponentTensor& b) {
  auto fa = a.free(), fb = b.free();
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) {
    if (a.is_zero() && !b.is_zero()) return Coefficient(0);
    return std::nullopt;
  }
  ComponentTensor bb = reorder(b, a.free());
  for (std::size_t m = 0; m < bb.size(); ++m) {
    if (bb.cell(m).is_zero()) continue;
    const auto& [mono, cb] = *bb.cell(m).terms().begin();
    Coefficient c = a.cell(m).coefficient(mono) / cb;
    if ((a - bb * c).is_zero()) return c;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Coefficient> proportional(const Expr& a, const Expr& b, const SymbolTable& table) {
  return proportional(components(a, table), components(b, table));
}

}  // namespace contact_spinor
