#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "contcalc/chain.hpp"
#include "contcalc/container.hpp"

namespace contcalc {

// ---------------------------------------------------------------------------
// Well-founded trees and paths to their positions

struct WTree {
  int shape = 0;
  std::vector<WTree> children;  // one per recursive position

  int depth() const {
    int d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
  }
  bool operator==(const WTree& o) const { return shape == o.shape && children == o.children; }
  bool operator<(const WTree& o) const {
    return shape != o.shape ? shape < o.shape : children < o.children;
  }
};

/// Below steps through recursive positions, then Top at a position of the last node.
struct WPath {
  std::vector<int> below;
  int top = 0;
  bool operator==(const WPath& o) const { return below == o.below && top == o.top; }
};

inline void check_tree_signature(const Container& sig) {
  if (sig.index_count() < 2) throw PreconditionError("signature needs a free index and a recursive one");
  if (!sig.discrete()) throw PreconditionError("tree enumeration needs a discrete signature");
}

inline int star_arity(const Container& sig, int shape) {
  return sig.fiber(sig.index_count() - 1, shape).object_count();
}

inline std::string tree_literal(const Container& sig, const WTree& w) {
  std::string s = sig.shapes->object_name(w.shape);
  if (w.children.empty()) return s;
  s += "(";
  for (std::size_t k = 0; k < w.children.size(); ++k) s += (k ? "," : "") + tree_literal(sig, w.children[k]);
  return s + ")";
}

inline std::string path_literal(const Container& sig, int index, const WPath& p) {
  std::string s = "[";
  for (int b : p.below) s += std::to_string(b) + ",";
  return s + sig.indices.at(index) + ":" + std::to_string(p.top) + "]";
}

/// All paths to positions at `index`: Top positions first, then each child in order.
inline std::vector<WPath> wpaths(const Container& sig, int index, const WTree& w) {
  sig.check_index(index);
  std::vector<WPath> out;
  for (int x = 0; x < sig.fiber(index, w.shape).object_count(); ++x) out.push_back(WPath{{}, x});
  for (std::size_t p = 0; p < w.children.size(); ++p)
    for (auto q : wpaths(sig, index, w.children[p])) {
      q.below.insert(q.below.begin(), static_cast<int>(p));
      out.push_back(std::move(q));
    }
  return out;
}

inline std::optional<WTree> subtree_at(const WTree& w, const std::vector<int>& below) {
  const WTree* node = &w;
  for (int p : below) {
    if (p < 0 || p >= static_cast<int>(node->children.size())) return std::nullopt;
    node = &node->children[p];
  }
  return *node;
}

// ---------------------------------------------------------------------------
// Depth-bounded μF

/// Trees of depth ≤ d, numbered so that trees of depth ≤ k form a prefix.
struct MuContainer {
  ContainerRef signature;
  int depth = 0;
  std::vector<WTree> trees;
  std::vector<std::vector<int>> children;   // child tree ids
  std::vector<int> level_count;             // trees of depth ≤ k, k = 0..d
  std::vector<ContainerRef> levels;         // container on the first level_count[k] trees
  std::map<std::pair<int, std::vector<int>>, int> ids;

  int star() const { return signature->index_count() - 1; }
  std::vector<std::string> free_indices() const {
    return {signature->indices.begin(), signature->indices.end() - 1};
  }
  std::optional<int> find(int shape, const std::vector<int>& kids) const {
    auto it = ids.find({shape, kids});
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find(const WTree& w) const {
    std::vector<int> kids;
    for (const auto& c : w.children) {
      auto k = find(c);
      if (!k) return std::nullopt;
      kids.push_back(*k);
    }
    return find(w.shape, kids);
  }
  /// Number of positions at `index` of tree t, computed from its children.
  int path_count(int index, int t) const {
    int n = signature->fiber(index, trees[t].shape).object_count();
    for (int c : children[t]) n += path_count(index, c);
    return n;
  }
  const ContainerRef& container() const { return levels.back(); }
};

/// Estimated number of trees of depth ≤ d, saturating at `cap + 1`.
inline long long estimate_tree_count(const Container& sig, int d, long long cap) {
  long long prev = 0;
  for (int k = 1; k <= d; ++k) {
    long long next = 0;
    for (int s = 0; s < sig.shape_count(); ++s) {
      long long ways = 1;
      for (int p = 0; p < star_arity(sig, s) && ways <= cap; ++p) ways *= prev;
      next += std::min(ways, cap + 1);
      if (next > cap) return cap + 1;
    }
    prev = next;
  }
  return prev;
}

inline MuContainer mu_container(const ContainerRef& sig, int d, const Limits& limits = default_limits()) {
  check_tree_signature(*sig);
  if (d < 0) throw PreconditionError("depth must be non-negative");
  const long long cap = static_cast<long long>(limits.max_cells);
  if (estimate_tree_count(*sig, d, cap) > cap) throw SizeError("too many trees at depth " + std::to_string(d));
  MuContainer mu;
  mu.signature = sig;
  mu.depth = d;
  mu.level_count.push_back(0);
  for (int k = 1; k <= d; ++k) {
    const int prev = mu.level_count.back();
    const int older = k >= 2 ? mu.level_count[k - 2] : 0;
    for (int s = 0; s < sig->shape_count(); ++s) {
      const int n = star_arity(*sig, s);
      // tuples over trees of depth ≤ k-1 with at least one child of depth exactly k-1
      std::vector<int> kids(n, 0);
      if (n > 0 && prev == 0) continue;
      while (true) {
        bool fresh = n == 0 ? k == 1 : false;
        for (int c : kids) fresh = fresh || c >= older;
        if (fresh) {
          WTree w{s, {}};
          for (int c : kids) w.children.push_back(mu.trees[c]);
          mu.ids[{s, kids}] = static_cast<int>(mu.trees.size());
          mu.trees.push_back(std::move(w));
          mu.children.push_back(kids);
        }
        int pos = n - 1;
        while (pos >= 0 && ++kids[pos] == prev) kids[pos--] = 0;
        if (pos < 0) break;
      }
    }
    mu.level_count.push_back(static_cast<int>(mu.trees.size()));
  }
  const auto indices = mu.free_indices();
  for (int k = 0; k <= d; ++k) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> counts;
    for (int t = 0; t < mu.level_count[k]; ++t) {
      names.push_back(tree_literal(*sig, mu.trees[t]));
      counts.emplace_back();
      for (int i = 0; i < static_cast<int>(indices.size()); ++i) counts.back().push_back(mu.path_count(i, t));
    }
    mu.levels.push_back(share(discrete_container(indices, names, counts)));
  }
  return mu;
}

inline std::vector<WTree> enumerate_wtrees(const ContainerRef& sig, int d, const Limits& limits = default_limits()) {
  return mu_container(sig, d, limits).trees;
}

namespace detail {

/// Path j of tree t at index i, split as Top(x) or (child p, path index in child).
inline std::pair<int, int> split_path(const MuContainer& mu, int i, int t, int j) {
  const int tops = mu.signature->fiber(i, mu.trees[t].shape).object_count();
  if (j < tops) return {-1, j};
  j -= tops;
  for (std::size_t p = 0; p < mu.children[t].size(); ++p) {
    const int n = mu.path_count(i, mu.children[t][p]);
    if (j < n) return {static_cast<int>(p), j};
    j -= n;
  }
  throw Error("path index out of range");
}

inline int join_path(const MuContainer& mu, int i, int t, int p, int j) {
  int off = mu.signature->fiber(i, mu.trees[t].shape).object_count();
  for (int c = 0; c < p; ++c) off += mu.path_count(i, mu.children[t][c]);
  return off + j;
}

} // namespace detail

/// Morphism source ⊸ μF|_level assembling nodes; source shapes are shapes of
/// `applied` (F over some prefix of μF) through `to_applied`.
inline CartMorphism assemble_nodes(const MuContainer& mu, const SubstContainer& applied, const ContainerRef& source,
                                   const std::vector<int>& to_applied, int level) {
  const auto& target = mu.levels.at(level);
  std::vector<int> objs;
  for (int x : to_applied) {
    const int s = applied.outer_shape(x);
    auto t = mu.find(s, applied.assignment(x).object_map);
    if (!t || *t >= mu.level_count[level]) throw PreconditionError("assembled tree exceeds the depth bound");
    objs.push_back(*t);
  }
  CartMorphism m{source, target, discrete_map(source->shapes, target->shapes, objs), {}};
  for (int i = 0; i < source->index_count(); ++i) {
    m.pos.emplace_back();
    for (int y = 0; y < source->shape_count(); ++y) {
      const int x = to_applied[y], t = objs[y];
      const auto& sum = applied.sums[i][x];
      const auto& sig = applied.inner_sigma[i][x];
      std::vector<int> back;
      for (int j = 0; j < target->fiber(i, t).object_count(); ++j) {
        auto [p, q] = detail::split_path(mu, i, t, j);
        back.push_back(p < 0 ? sum.inl_object(q) : sum.inr_object(sig.object(p, q)));
      }
      m.pos[i].push_back(discrete_map(target->positions[i].fibers[t], source->positions[i].fibers[y], back));
    }
  }
  return m;
}

/// In : F[μF|_{k-1}] ⊸ μF|_k, with the substitution it starts from.
struct InMap {
  SubstContainer applied;
  CartMorphism in;
  CartMorphism out;
};

inline InMap in_out(const MuContainer& mu, int k) {
  if (k < 1 || k > mu.depth) throw PreconditionError("In is defined for levels 1..d");
  InMap r;
  r.applied = subst(mu.signature, mu.levels[k - 1]);
  const auto& src = r.applied.container;
  std::vector<int> ident(src->shape_count());
  for (int x = 0; x < src->shape_count(); ++x) ident[x] = x;
  r.in = assemble_nodes(mu, r.applied, src, ident, k);
  // Out: node ↦ (shape, children), positions split back
  const auto& level = mu.levels[k];
  const auto& pstar = mu.signature->positions[mu.star()];
  const auto& inner = mu.levels[k - 1]->shapes;
  std::vector<int> objs;
  for (int t = 0; t < mu.level_count[k]; ++t) {
    const int s = mu.trees[t].shape;
    auto x = r.applied.find_shape(s, discrete_map(pstar.fibers[s], inner, mu.children[t]));
    if (!x) throw Error("Out: missing assembly");
    objs.push_back(*x);
  }
  r.out = CartMorphism{level, src, discrete_map(level->shapes, src->shapes, objs), {}};
  for (int i = 0; i < level->index_count(); ++i) {
    r.out.pos.emplace_back();
    for (int t = 0; t < mu.level_count[k]; ++t) {
      const auto& sum = r.applied.sums[i][objs[t]];
      const auto& sig = r.applied.inner_sigma[i][objs[t]];
      std::vector<int> back;
      for (int o = 0; o < sum.sum->object_count(); ++o) {
        if (sum.is_left_object(o)) back.push_back(sum.strip_object(o));
        else {
          auto [p, q] = sig.objects[sum.strip_object(o)];
          back.push_back(detail::join_path(mu, i, t, p, q));
        }
      }
      r.out.pos[i].push_back(discrete_map(sum.sum, level->positions[i].fibers[t], back));
    }
  }
  return r;
}

struct RoundtripReport {
  int levels = 0;
  bool out_after_in = true;
  bool in_after_out = true;
  bool ok() const { return out_after_in && in_after_out; }
};

inline RoundtripReport in_out_roundtrip(const MuContainer& mu) {
  RoundtripReport r;
  for (int k = 1; k <= mu.depth; ++k) {
    auto io = in_out(mu, k);
    ++r.levels;
    r.out_after_in = r.out_after_in && morphism_eq(compose_cart(io.out, io.in), id_cart(io.applied.container)).strict;
    r.in_after_out = r.in_after_out && morphism_eq(compose_cart(io.in, io.out), id_cart(mu.levels[k])).strict;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Algebras and recursion

/// α : F[G]|_domain ⊸ G. The domain restricts F[G] to the assemblies α can absorb.
struct Algebra {
  std::string name;
  ContainerRef carrier;
  SubstContainer applied;
  RestrictedContainer domain;
  CartMorphism alpha;
};

inline Algebra make_algebra(std::string name, const ContainerRef& sig, const ContainerRef& carrier,
                            const std::function<bool(const SubstContainer&, int)>& accepts,
                            const std::function<CartMorphism(const SubstContainer&, const RestrictedContainer&)>& build) {
  Algebra a;
  a.name = std::move(name);
  a.carrier = carrier;
  a.applied = subst(sig, carrier);
  std::vector<int> keep;
  for (int x = 0; x < a.applied.container->shape_count(); ++x)
    if (accepts(a.applied, x)) keep.push_back(x);
  a.domain = restrict_shapes(a.applied.container, keep);
  a.alpha = build(a.applied, a.domain);
  auto v = validate_cart(a.alpha);
  if (!v.ok()) throw PreconditionError("algebra map is not cartesian: " + v.violations.front());
  return a;
}

/// In itself, over μF|_d, defined on assemblies of depth ≤ d.
inline Algebra in_algebra(const MuContainer& mu) {
  const int d = mu.depth;
  const int below = d >= 1 ? mu.level_count[d - 1] : 0;
  return make_algebra(
      "in", mu.signature, mu.levels[d],
      [&](const SubstContainer& ap, int x) {
        for (int c : ap.assignment(x).object_map)
          if (c >= below) return false;
        return true;
      },
      [&](const SubstContainer& ap, const RestrictedContainer& dom) {
        return assemble_nodes(mu, ap, dom.container, dom.shapes.object_to_base, d);
      });
}

/// Shapes 0..max_size, shape n holding n positions; α adds up the positions of an assembly.
inline Algebra size_algebra(const ContainerRef& sig, int max_size) {
  check_tree_signature(*sig);
  if (sig->index_count() != 2) throw PreconditionError("size algebra needs exactly one free index");
  std::vector<std::string> names;
  std::vector<std::vector<int>> counts;
  for (int n = 0; n <= max_size; ++n) {
    names.push_back(std::to_string(n));
    counts.push_back({n});
  }
  auto carrier = share(discrete_container({sig->indices[0]}, names, counts));
  auto total = [](const SubstContainer& ap, int x) { return ap.sums[0][x].sum->object_count(); };
  return make_algebra(
      "size", sig, carrier, [&](const SubstContainer& ap, int x) { return total(ap, x) <= max_size; },
      [&](const SubstContainer&, const RestrictedContainer& dom) {
        const auto& src = dom.container;
        std::vector<int> objs;
        for (int y = 0; y < src->shape_count(); ++y) objs.push_back(src->fiber(0, y).object_count());
        CartMorphism m{src, carrier, discrete_map(src->shapes, carrier->shapes, objs), {{}}};
        for (int y = 0; y < src->shape_count(); ++y)
          m.pos[0].push_back(same_numbering(carrier->positions[0].fibers[objs[y]], src->positions[0].fibers[y]));
        return m;
      });
}

/// Morphism between discrete containers sending shape s to objects[s], positions renumbered identically.
inline CartMorphism discrete_relabel(const ContainerRef& from, const ContainerRef& to, const std::vector<int>& objects) {
  CartMorphism m{from, to, discrete_map(from->shapes, to->shapes, objects), {}};
  for (int i = 0; i < from->index_count(); ++i) {
    m.pos.emplace_back();
    for (int s = 0; s < from->shape_count(); ++s)
      m.pos[i].push_back(same_numbering(to->positions[i].fibers[objects[s]], from->positions[i].fibers[s]));
  }
  return m;
}

/// Copy of a discrete container with shape s moved to slot perm[s].
inline ContainerRef permuted_copy(const Container& c, const std::vector<int>& perm) {
  const int n = c.shape_count();
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> counts(n);
  for (int s = 0; s < n; ++s) {
    names[perm[s]] = c.shapes->object_name(s);
    for (int i = 0; i < c.index_count(); ++i) counts[perm[s]].push_back(c.fiber(i, s).object_count());
  }
  return share(discrete_container(c.indices, names, counts));
}

struct Relabeled {
  Algebra algebra;
  CartMorphism relabel;  // μF|_d ⊸ carrier
};

/// In transported along the reversal of tree ids; its Rec is the relabeling itself.
inline Relabeled reversed_in_algebra(const MuContainer& mu) {
  const auto& level = mu.levels[mu.depth];
  const int n = level->shape_count();
  std::vector<int> perm(n);
  for (int t = 0; t < n; ++t) perm[t] = n - 1 - t;
  auto copy = permuted_copy(*level, perm);
  auto there = discrete_relabel(level, copy, perm);
  auto back = discrete_relabel(copy, level, perm);  // reversal is its own inverse
  auto in = in_algebra(mu);
  Relabeled r{Algebra{}, there};
  auto& a = r.algebra;
  a.name = "reversed-in";
  a.carrier = copy;
  a.applied = subst(mu.signature, copy);
  auto forth = subst_map(a.applied, in.applied, back);
  std::vector<int> keep;
  for (int y = 0; y < a.applied.container->shape_count(); ++y)
    if (in.domain.shapes.base_object_to_sub.at(forth.shape(y)) >= 0) keep.push_back(y);
  a.domain = restrict_shapes(a.applied.container, keep);
  CartMorphism incl{a.domain.container, a.applied.container,
                    discrete_map(a.domain.container->shapes, a.applied.container->shapes, keep), {}};
  for (int i = 0; i < copy->index_count(); ++i) {
    incl.pos.emplace_back();
    for (int y = 0; y < a.domain.container->shape_count(); ++y)
      incl.pos[i].push_back(same_numbering(a.applied.container->positions[i].fibers[keep[y]],
                                           a.domain.container->positions[i].fibers[y]));
  }
  a.alpha = compose_cart(there, compose_cart(in.alpha, factor_through(compose_cart(forth, incl), in.domain)));
  return r;
}

inline CartMorphism empty_morphism(const ContainerRef& from, const ContainerRef& to) {
  CartMorphism m{from, to, GFunctor{from->shapes, to->shapes, {}, {}}, {}};
  m.pos.resize(from->index_count());
  return m;
}

/// μF|_k ⊸ μF|_d, the prefix inclusion.
inline CartMorphism level_inclusion(const MuContainer& mu, int k) {
  const auto& from = mu.levels[k];
  const auto& to = mu.levels[mu.depth];
  std::vector<int> objs(from->shape_count());
  for (int t = 0; t < from->shape_count(); ++t) objs[t] = t;
  CartMorphism m{from, to, discrete_map(from->shapes, to->shapes, objs), {}};
  for (int i = 0; i < from->index_count(); ++i) {
    m.pos.emplace_back();
    for (int t = 0; t < from->shape_count(); ++t) m.pos[i].push_back(same_numbering(to->positions[i].fibers[t], from->positions[i].fibers[t]));
  }
  return m;
}

/// α ∘ F[m] over μF|_{k-1}, landing in G.
inline CartMorphism algebra_step(const MuContainer& mu, const Algebra& alg, const SubstContainer& applied_prev,
                                 const CartMorphism& m_prev) {
  (void)mu;
  return compose_cart(alg.alpha, factor_through(subst_map(applied_prev, alg.applied, m_prev), alg.domain));
}

struct RecResult {
  std::vector<CartMorphism> stages;  // Rec_k : μF|_k ⊸ G, k = 0..d
  std::vector<bool> square;          // computation square at k = 1..d
  const CartMorphism& morphism() const { return stages.back(); }
  bool square_holds() const { return std::all_of(square.begin(), square.end(), [](bool b) { return b; }); }
};

inline RecResult rec(const MuContainer& mu, const Algebra& alg) {
  if (alg.carrier->indices != mu.free_indices()) throw PreconditionError("algebra carrier has the wrong indices");
  RecResult r;
  r.stages.push_back(empty_morphism(mu.levels[0], alg.carrier));
  for (int k = 1; k <= mu.depth; ++k) {
    auto io = in_out(mu, k);
    auto step = algebra_step(mu, alg, io.applied, r.stages.back());
    r.stages.push_back(compose_cart(step, io.out));
    r.square.push_back(morphism_eq(compose_cart(r.stages.back(), io.in), step).equal);
  }
  return r;
}

struct AgreementReport {
  bool algebra_morphism = false;
  int failing_level = -1;
  bool agrees = false;
};

/// Checks the algebra square for m level by level, then compares m with Rec.
inline AgreementReport algebra_morphism_agrees(const MuContainer& mu, const Algebra& alg, const CartMorphism& m) {
  AgreementReport r;
  auto prev = empty_morphism(mu.levels[0], alg.carrier);
  for (int k = 1; k <= mu.depth; ++k) {
    auto io = in_out(mu, k);
    auto mk = compose_cart(m, level_inclusion(mu, k));
    bool ok = false;
    try {
      ok = morphism_eq(compose_cart(mk, io.in), algebra_step(mu, alg, io.applied, prev)).equal;
    } catch (const PreconditionError&) {
      ok = false;
    }
    if (!ok) {
      r.failing_level = k;
      return r;
    }
    prev = mk;
  }
  r.algebra_morphism = true;
  r.agrees = morphism_eq(m, rec(mu, alg).morphism()).equal;
  return r;
}

// ---------------------------------------------------------------------------
// W-recursion into a finite set

/// h(shape, values at the recursive positions) in 0..X-1, or nothing when undefined.
using WRecStep = std::function<std::optional<long long>(int, const std::vector<long long>&)>;

struct WRecReport {
  long long set_size = 0;
  int trees = 0;
  int reached = 0;            // distinct arguments of h met while recursing
  bool step_injective = true; // on the reached arguments
  bool total = true;          // h defined and in range on the reached arguments
  bool wrec_injective = true;
  bool precondition() const { return step_injective && total; }
  bool holds() const { return !precondition() || wrec_injective; }
};

inline WRecReport wrec_embedding_check(const MuContainer& mu, long long set_size, const WRecStep& h) {
  WRecReport r;
  r.set_size = set_size;
  r.trees = static_cast<int>(mu.trees.size());
  std::vector<long long> value(mu.trees.size(), -1);
  std::map<std::pair<int, std::vector<long long>>, long long> args;
  std::map<long long, std::pair<int, std::vector<long long>>> seen;
  for (std::size_t t = 0; t < mu.trees.size(); ++t) {
    std::vector<long long> xs;
    for (int c : mu.children[t]) xs.push_back(value[c]);
    auto key = std::make_pair(mu.trees[t].shape, xs);
    auto y = h(key.first, xs);
    if (!y || *y < 0 || *y >= set_size) {
      r.total = false;
      continue;
    }
    value[t] = *y;
    args.emplace(key, *y);
    auto [it, fresh] = seen.emplace(*y, key);
    if (!fresh && it->second != key) r.step_injective = false;
  }
  r.reached = static_cast<int>(args.size());
  std::set<long long> images;
  for (auto v : value)
    if (v >= 0 && !images.insert(v).second) r.wrec_injective = false;
  return r;
}

inline long long cantor_pair(long long a, long long b) { return (a + b) * (a + b + 1) / 2 + b; }

/// Injective step: the shape fixes the arity, so children can be paired without tags.
inline WRecStep cantor_step() {
  return [](int shape, const std::vector<long long>& xs) -> std::optional<long long> {
    long long acc = xs.empty() ? 0 : xs.back();
    for (auto it = xs.rbegin() + (xs.empty() ? 0 : 1); it != xs.rend(); ++it) acc = cantor_pair(*it, acc);
    return cantor_pair(shape, acc);
  };
}

// ---------------------------------------------------------------------------
// The μ-rule: μF' ⊸ ∂_i μF, built level by level

/// Approximations L_0 = 0, L_k ≃ F[L_{k-1}] with In_k : F[L_{k-1}] ⊸ L_k.
struct Tower {
  ContainerRef signature;
  std::vector<ContainerRef> levels;
  std::vector<CartMorphism> in;  // in[k-1] = In_k
  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

/// Tower of enumerated trees (discrete signatures).
inline Tower tree_tower(const MuContainer& mu) {
  Tower t{mu.signature, mu.levels, {}};
  for (int k = 1; k <= mu.depth; ++k) t.in.push_back(in_out(mu, k).in);
  return t;
}

/// Tower of iterated substitutions, In the identity; any signature.
inline Tower substitution_tower(const ContainerRef& sig, int d, const Limits& limits = default_limits()) {
  if (sig->index_count() < 2) throw PreconditionError("signature needs a free index and a recursive one");
  if (d < 0) throw PreconditionError("depth must be non-negative");
  Tower t;
  t.signature = sig;
  t.levels.push_back(share(const_c(empty_ref(), {sig->indices.begin(), sig->indices.end() - 1})));
  for (int k = 1; k <= d; ++k) {
    auto next = subst(sig, t.levels.back(), limits).container;
    t.levels.push_back(next);
    t.in.push_back(id_cart(next));
  }
  return t;
}

struct MuRuleLevel {
  IndexedChain chain;                 // over L_{k-1}
  ContainerRef values;                // N_k = (∂_i F)[L_{k-1}] ⊕ ((∂_* F)[L_{k-1}] × N_{k-1})
  std::shared_ptr<SumContainer> sum;  // how N_k was built
  std::shared_ptr<ProductContainer> layer;
  DerivContainer target;              // ∂_i L_k
  CartMorphism morphism;              // N_k ⊸ ∂_i L_k
  GEquivReport report;
};

struct MuRuleReport {
  int index = 0;
  int depth = 0;
  std::vector<MuRuleLevel> levels;   // k = 1..d
  bool valid = false;
  bool injective = false;            // embedding of shape groupoids
  bool strong_by_equivalence = false;
  long long value_count = 0;         // components of N_d
  long long hole_count = 0;          // components of ∂_i L_d, or the tree-path oracle
  bool strong_by_count = false;
  bool chain_strong = false;         // every level's chain rule is strong
  bool flags_agree() const { return strong_by_count == chain_strong && strong_by_equivalence == chain_strong; }
  const CartMorphism& morphism() const { return levels.back().morphism; }
};

inline MuRuleReport mu_rule(const Tower& tower, int i, const Limits& limits = default_limits()) {
  const auto& sig = tower.signature;
  sig->check_index(i);
  if (i == sig->index_count() - 1) throw PreconditionError("the μ-rule is taken at a free index");
  if (tower.depth() < 1) throw PreconditionError("the μ-rule needs depth at least 1");
  MuRuleReport r;
  r.index = i;
  r.depth = tower.depth();
  auto values = share(const_c(empty_ref(), tower.levels[0]->indices));
  auto prev_target = derivative(tower.levels[0], i, limits);
  auto rule = empty_morphism(values, prev_target.container);
  r.chain_strong = true;
  for (int k = 1; k <= r.depth; ++k) {
    MuRuleLevel lv;
    lv.chain = chain_indexed(sig, tower.levels[k - 1], i, limits);
    auto& ch = lv.chain;
    r.chain_strong = r.chain_strong && ch.result.is_strong;
    lv.layer = std::make_shared<ProductContainer>(prod_c(ch.star.container, values));
    lv.sum = std::make_shared<SumContainer>(sum_c(ch.left.container, lv.layer->container));
    lv.values = lv.sum->container;
    // γ: the earlier levels' rule substituted into the right leg
    auto gamma = sum_map(*lv.sum, ch.domain, id_cart(ch.left.container),
                         prod_map(*lv.layer, ch.right, id_cart(ch.star.container), rule));
    lv.target = derivative(tower.levels[k], i, limits);
    auto lifted = der_map(tower.in[k - 1], ch.codomain, lv.target);
    lv.morphism = compose_cart(lifted, compose_cart(ch.result.morphism, gamma));
    auto v = validate_cart(lv.morphism);
    if (!v.ok()) throw Error("μ-rule level " + std::to_string(k) + ": " + v.violations.front());
    lv.report = is_equivalence_functor(lv.morphism.shape);
    values = lv.values;
    rule = lv.morphism;
    r.levels.push_back(std::move(lv));
  }
  const auto& top = r.levels.back();
  r.valid = true;
  r.injective = top.report.embedding();
  r.strong_by_equivalence = top.report.equivalence();
  r.value_count = static_cast<long long>(components(*top.values->shapes).size());
  r.hole_count = static_cast<long long>(components(*top.target.container->shapes).size());
  r.strong_by_count = r.injective && r.value_count == r.hole_count;
  return r;
}

/// Tree version: holes are counted by walking the trees.
inline MuRuleReport mu_rule(const MuContainer& mu, int i, const Limits& limits = default_limits()) {
  auto r = mu_rule(tree_tower(mu), i, limits);
  r.hole_count = 0;
  for (int t = 0; t < mu.level_count[mu.depth]; ++t)
    r.hole_count += static_cast<long long>(wpaths(*mu.signature, i, mu.trees[t]).size());
  r.strong_by_count = r.injective && r.value_count == r.hole_count;
  return r;
}

/// Signature with a swap symmetry and a self-symmetric recursive position:
/// leaf {x:1}, sym {rec:2 swapped by its automorphism}, knot {rec: BZ2}.
inline ContainerRef symmetric_signature() {
  auto one = share(disc(1));
  auto sym = share(one_object(FiniteGroup::cyclic(2), {"e", "swap"}, "sym"));
  auto leaf = share(disc_named({"leaf"}));
  auto knot = share(disc_named({"knot"}));
  auto strip = [](const std::string& n) {
    std::string s = n;
    while (s.rfind("inl(", 0) == 0 || s.rfind("inr(", 0) == 0) s = s.substr(4, s.size() - 5);
    return s;
  };
  auto shapes = share(rename(*sum_groupoid(sum_groupoid(leaf, sym).sum, knot).sum, strip));
  auto empty = empty_ref();
  auto d2 = share(disc(2));
  auto loop = share(bz2());
  auto fiber_of = [&](int x, int index) -> GroupoidRef {
    if (index == 0) return x == 0 ? one : empty;
    return x == 0 ? empty : x == 1 ? d2 : loop;
  };
  Container c{{"x", "rec"}, shapes, {}};
  for (int index = 0; index < 2; ++index)
    c.positions.push_back(make_family(
        shapes, [&](int x) { return fiber_of(x, index); },
        [&](int m) {
          const int x = shapes->src(m);
          auto fib = fiber_of(x, index);
          if (x == 1 && index == 1 && m != shapes->identity(x)) return GFunctor{fib, fib, {1, 0}, {1, 0}};
          return identity_functor(fib);
        }));
  return share(std::move(c));
}

} // namespace contcalc
