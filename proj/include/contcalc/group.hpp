#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "contcalc/error.hpp"

namespace contcalc {

/// Permutation of {0..n-1}; p[i] is the image of i.
using Permutation = std::vector<int>;

inline Permutation perm_compose(const Permutation& q, const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

inline Permutation perm_inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

inline Permutation perm_identity(int n) {
  Permutation r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

/// A finite group given by its Cayley table. Element 0 is the identity.
class FiniteGroup {
public:
  FiniteGroup() : table_{{0}} {}

  explicit FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int n = order();
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (table_[a][b] == 0) inv_[a] = b;
  }

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inv_[a]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  /// Closure of a set of permutations on n points, identity first, then BFS order.
  static FiniteGroup generated_by(int n, const std::vector<Permutation>& gens,
                                  std::vector<Permutation>* elements_out = nullptr) {
    std::vector<Permutation> elems{perm_identity(n)};
    std::map<Permutation, int> index{{elems[0], 0}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& g : gens) {
        auto c = perm_compose(g, elems[i]);
        if (!index.count(c)) {
          index.emplace(c, static_cast<int>(elems.size()));
          elems.push_back(std::move(c));
        }
      }
      if (elems.size() > 5040) throw SizeError("permutation group too large");
    }
    const int m = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) t[a][b] = index.at(perm_compose(elems[a], elems[b]));
    if (elements_out) *elements_out = elems;
    return FiniteGroup(std::move(t));
  }

  static FiniteGroup cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t));
  }

  static FiniteGroup symmetric(int n, std::vector<Permutation>* elements_out = nullptr) {
    std::vector<Permutation> gens;
    if (n >= 2) {
      Permutation swap = perm_identity(n);
      std::swap(swap[0], swap[1]);
      gens.push_back(swap);
      Permutation cycle(n);
      for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
      gens.push_back(cycle);
    }
    return generated_by(n, gens, elements_out);
  }

  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b) {
    const int n = a.order(), m = b.order();
    std::vector<std::vector<int>> t(n * m, std::vector<int>(n * m));
    for (int x = 0; x < n * m; ++x)
      for (int y = 0; y < n * m; ++y)
        t[x][y] = a.mul(x / m, y / m) * m + b.mul(x % m, y % m);
    return FiniteGroup(std::move(t));
  }

  /// Small generating set, chosen greedily.
  std::vector<int> generators() const {
    std::vector<int> gens;
    std::vector<char> in(order(), 0);
    in[0] = 1;
    int covered = 1;
    for (int g = 1; g < order() && covered < order(); ++g) {
      if (in[g]) continue;
      gens.push_back(g);
      // recompute closure
      std::vector<int> elems{0};
      std::fill(in.begin(), in.end(), 0);
      in[0] = 1;
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (int h : gens) {
          int c = mul(h, elems[i]);
          if (!in[c]) { in[c] = 1; elems.push_back(c); }
        }
      covered = static_cast<int>(elems.size());
    }
    return gens;
  }

  /// Sorted multiset of element orders; an isomorphism invariant.
  std::vector<int> order_profile() const {
    std::vector<int> p;
    for (int a = 0; a < order(); ++a) p.push_back(element_order(a));
    std::sort(p.begin(), p.end());
    return p;
  }

private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_{0};
};

/// Decides group isomorphism by extending images of a generating set.
inline bool groups_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return false;
  if (a.order_profile() != b.order_profile()) return false;
  const auto gens = a.generators();
  const int n = a.order();
  std::vector<int> images(gens.size(), 0);

  auto try_extend = [&]() -> bool {
    // BFS over words in the generators, building phi.
    std::vector<int> phi(n, -1);
    phi[0] = 0;
    std::vector<int> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int x = queue[i];
      for (std::size_t k = 0; k < gens.size(); ++k) {
        int y = a.mul(gens[k], x);
        int img = b.mul(images[k], phi[x]);
        if (phi[y] == -1) {
          phi[y] = img;
          queue.push_back(y);
        } else if (phi[y] != img) {
          return false;
        }
      }
    }
    std::vector<char> hit(n, 0);
    for (int x = 0; x < n; ++x) {
      if (phi[x] < 0 || hit[phi[x]]) return false;
      hit[phi[x]] = 1;
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) return false;
    return true;
  };

  std::vector<std::vector<int>> candidates(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    int ord = a.element_order(gens[k]);
    for (int y = 0; y < n; ++y)
      if (b.element_order(y) == ord) candidates[k].push_back(y);
  }
  std::vector<std::size_t> pos(gens.size(), 0);
  if (gens.empty()) return true;
  for (const auto& c : candidates)
    if (c.empty()) return false;
  while (true) {
    for (std::size_t k = 0; k < gens.size(); ++k) images[k] = candidates[k][pos[k]];
    if (try_extend()) return true;
    std::size_t k = 0;
    while (k < gens.size() && ++pos[k] == candidates[k].size()) pos[k++] = 0;
    if (k == gens.size()) return false;
  }
}

} // namespace contcalc
