#pragma once

// Dense algebra on component tables.  Used where expression-level
// expansion would produce too many terms (7-index symmetrizations).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

/// Same tensor with free indices listed in `order` (same names/variances).
ComponentTensor reorder(const ComponentTensor& t, const std::vector<Index>& order);
/// Free indices sorted by name.
ComponentTensor sorted(const ComponentTensor& t);
/// Equality regardless of free-index listing order.
bool same_tensor(const ComponentTensor& a, const ComponentTensor& b);

ComponentTensor rename(const ComponentTensor& t, const std::map<std::string, std::string>& map);
/// Tensor product; free index names must be disjoint.
ComponentTensor outer(const ComponentTensor& a, const ComponentTensor& b);
/// Trace over one lower and one upper free index.
ComponentTensor contract(const ComponentTensor& t, const std::string& lower, const std::string& upper);
/// phi^N = eps^{NP} phi_P applied to the lower index `lower`, renamed to `upper_name`.
ComponentTensor raise(const ComponentTensor& t, const std::string& lower, const std::string& upper_name);
/// phi_N = phi^P eps_{PN} applied to the upper index `upper`, renamed to `lower_name`.
ComponentTensor lower(const ComponentTensor& t, const std::string& upper, const std::string& lower_name);
/// Average over permutations of the named free indices (same variance).
ComponentTensor symmetrize(const ComponentTensor& t, const std::vector<std::string>& names);

ComponentTensor delta_tensor(const std::string& lower, const std::string& upper);
ComponentTensor constant_tensor(const Coefficient& c);

/// c with a == c * b, when it exists (b nonzero).
std::optional<Coefficient> proportional(const ComponentTensor& a, const ComponentTensor& b);
/// Same for expressions, via the component oracle.
std::optional<Coefficient> proportional(const Expr& a, const Expr& b, const SymbolTable& table);

}  // namespace contact_spinor
