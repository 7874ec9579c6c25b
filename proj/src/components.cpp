#include <algorithm>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

ComponentTensor::ComponentTensor(std::vector<Index> free) : free_(std::move(free)) {
  if (free_.size() > 20) throw StructuralError("too many free indices for a component table");
  cells_.resize(std::size_t{1} << free_.size());
}

bool ComponentTensor::is_zero() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

std::string component_key(const SymbolDecl& decl, const std::vector<int>& values) {
  if (values.empty()) return decl.name;
  std::vector<int> v = values;
  for (const auto& g : decl.symmetry) {
    std::vector<int> part;
    for (int s : g) part.push_back(v[static_cast<std::size_t>(s)]);
    std::sort(part.begin(), part.end());
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(g[i])] = part[i];
  }
  std::string key = decl.name + "[";
  for (std::size_t i = 0; i < v.size(); ++i) key += (i ? " " : "") + std::to_string(v[i]);
  return key + "]";
}

std::string derivative_key(DerivOp op, std::vector<int> deriv_values, const std::string& operand_key) {
  std::sort(deriv_values.begin(), deriv_values.end());
  std::string key = keyword(op) + "[";
  for (std::size_t i = 0; i < deriv_values.size(); ++i) key += (i ? " " : "") + std::to_string(deriv_values[i]);
  return key + "](" + operand_key + ")";
}

namespace {

struct NumericFactor {
  FactorKind kind;
  int a, b;   // variable slots
  int level;  // dummy depth at which both are assigned; -1 when free only
};

struct TensorFactor {
  std::vector<int> slots;
  std::vector<std::string> keys;  // indexed by bit pattern of slot values
};

int numeric_value(FactorKind k, int x, int y) {
  if (k == FactorKind::Delta) return x == y ? 1 : 0;
  if (x == y) return 0;
  return x == 0 ? 1 : -1;
}

TensorFactor make_tensor_factor(const Factor& f, const SymbolTable& table,
                                const std::map<std::string, int>& slot_of) {
  TensorFactor tf;
  const SymbolDecl& decl = table.at(f.symbol);
  auto all = f.all_indices();
  for (const auto& i : all) tf.slots.push_back(slot_of.at(i.name));
  const std::size_t n = all.size(), nd = f.deriv.size();
  tf.keys.resize(std::size_t{1} << n);
  for (std::size_t bits = 0; bits < tf.keys.size(); ++bits) {
    std::vector<int> dv, ov;
    for (std::size_t i = 0; i < n; ++i) (i < nd ? dv : ov).push_back(static_cast<int>((bits >> i) & 1U));
    std::string key = component_key(decl, ov);
    if (f.kind == FactorKind::Derivative) key = derivative_key(f.op, dv, key);
    tf.keys[bits] = std::move(key);
  }
  return tf;
}

class TermEvaluator {
 public:
  TermEvaluator(const Term& t, const SymbolTable& table, const std::vector<Index>& order, ComponentTensor& out)
      : coeff_(t.coeff), out_(out) {
    std::map<std::string, int> slot_of;
    for (const auto& i : order) slot_of[i.name] = static_cast<int>(slot_of.size());
    nfree_ = static_cast<int>(order.size());
    std::map<std::string, int> depth;
    for (const auto& d : dummy_names(t)) {
      depth[d] = static_cast<int>(depth.size());
      slot_of[d] = static_cast<int>(slot_of.size());
    }
    ndummy_ = static_cast<int>(depth.size());
    values_.assign(slot_of.size(), 0);
    for (const auto& f : t.factors) {
      if (f.kind == FactorKind::Symbol || f.kind == FactorKind::Derivative) {
        tensors_.push_back(make_tensor_factor(f, table, slot_of));
        continue;
      }
      int level = -1;
      for (const auto& i : f.indices)
        if (auto it = depth.find(i.name); it != depth.end()) level = std::max(level, it->second);
      numerics_.push_back({f.kind, slot_of.at(f.indices[0].name), slot_of.at(f.indices[1].name), level});
    }
  }

  void run() {
    for (std::size_t mask = 0; mask < out_.size(); ++mask) {
      for (int i = 0; i < nfree_; ++i) values_[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1U);
      int sign = check_level(-1);
      if (sign == 0) continue;
      recurse(0, sign, out_.cell(mask));
    }
  }

 private:
  int check_level(int level) const {
    int s = 1;
    for (const auto& n : numerics_) {
      if (n.level != level) continue;
      s *= numeric_value(n.kind, values_[static_cast<std::size_t>(n.a)], values_[static_cast<std::size_t>(n.b)]);
      if (s == 0) return 0;
    }
    return s;
  }

  void recurse(int depth, int sign, Polynomial& cell) {
    if (depth == ndummy_) {
      Monomial m;
      m.reserve(tensors_.size());
      for (const auto& tf : tensors_) {
        std::size_t bits = 0;
        for (std::size_t i = 0; i < tf.slots.size(); ++i)
          bits |= static_cast<std::size_t>(values_[static_cast<std::size_t>(tf.slots[i])]) << i;
        m.push_back(tf.keys[bits]);
      }
      cell.add_term(std::move(m), sign > 0 ? coeff_ : -coeff_);
      return;
    }
    for (int v = 0; v < 2; ++v) {
      values_[static_cast<std::size_t>(nfree_ + depth)] = v;
      int s = check_level(depth);
      if (s != 0) recurse(depth + 1, sign * s, cell);
    }
  }

  Coefficient coeff_;
  ComponentTensor& out_;
  int nfree_ = 0, ndummy_ = 0;
  std::vector<int> values_;
  std::vector<NumericFactor> numerics_;
  std::vector<TensorFactor> tensors_;
};

bool same_names(std::vector<Index> a, std::vector<Index> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

ComponentTensor components_in_order(const Expr& e, const SymbolTable& table, const std::vector<Index>& order) {
  validate(e, table);
  if (!e.empty() && !same_names(free_indices(e), order))
    throw StructuralError("component order does not match the free indices");
  ComponentTensor ct(order);
  Expr low = lower_all(e);
  for (const auto& t : low.terms()) {
    if (t.coeff.is_zero()) continue;
    TermEvaluator(t, table, order, ct).run();
  }
  return ct;
}

ComponentTensor components(const Expr& e, const SymbolTable& table) {
  return components_in_order(e, table, free_indices(e));
}

bool is_zero(const Expr& e, const SymbolTable& table) { return components(e, table).is_zero(); }

bool equal(const Expr& a, const Expr& b, const SymbolTable& table) {
  validate(a, table);
  validate(b, table);
  auto fa = free_indices(a), fb = free_indices(b);
  if (fa == fb || a.empty() || b.empty()) return is_zero(a - b, table);
  bool za = is_zero(a, table), zb = is_zero(b, table);
  if (!za && !zb) throw StructuralError("compared expressions have different free indices");
  return za && zb;
}

}  // namespace contact_spinor
