#pragma once

#include <algorithm>
#include <vector>

#include "contcalc/groupoid.hpp"

namespace contcalc {

/// One automorphism group per connected component, representative = least object.
/// Two finite groupoids are equivalent iff their invariants agree as multisets
/// up to group isomorphism.
struct EquivInvariant {
  std::vector<FiniteGroup> groups;

  std::vector<int> orders() const {
    std::vector<int> o;
    for (const auto& g : groups) o.push_back(g.order());
    std::sort(o.begin(), o.end());
    return o;
  }
  std::size_t component_count() const { return groups.size(); }
};

inline EquivInvariant equiv_invariant(const FinGroupoid& g) {
  EquivInvariant inv;
  for (const auto& c : components(g)) inv.groups.push_back(automorphism_group(g, c.front()));
  return inv;
}

inline bool operator==(const EquivInvariant& a, const EquivInvariant& b) {
  if (a.groups.size() != b.groups.size() || a.orders() != b.orders()) return false;
  // isomorphism is an equivalence relation, so greedy matching is exact
  std::vector<char> used(b.groups.size(), 0);
  for (const auto& x : a.groups) {
    bool found = false;
    for (std::size_t j = 0; j < b.groups.size() && !found; ++j)
      if (!used[j] && groups_isomorphic(x, b.groups[j])) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

inline bool groupoids_equivalent(const FinGroupoid& a, const FinGroupoid& b) {
  return equiv_invariant(a) == equiv_invariant(b);
}

} // namespace contcalc
