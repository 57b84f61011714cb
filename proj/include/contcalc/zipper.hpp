#pragma once

#include "contcalc/fixpoint.hpp"

namespace contcalc {

/// One step of context: a node with one recursive position left open.
struct Layer {
  int shape = 0;
  int hole = 0;                  // recursive position
  std::vector<WTree> siblings;   // the other children, in position order
  bool operator==(const Layer& o) const { return shape == o.shape && hole == o.hole && siblings == o.siblings; }
};

/// The node holding the selected position.
struct Focus {
  int shape = 0;
  int position = 0;              // position at the free index
  std::vector<WTree> children;
  bool operator==(const Focus& o) const {
    return shape == o.shape && position == o.position && children == o.children;
  }
};

struct ZipperValue {
  std::vector<Layer> context;    // root first
  Focus focus;
  bool operator==(const ZipperValue& o) const { return context == o.context && focus == o.focus; }
};

inline ZipperValue decompose(const Container& sig, int index, const WTree& w, const WPath& p) {
  ZipperValue z;
  const WTree* node = &w;
  for (int step : p.below) {
    if (step < 0 || step >= static_cast<int>(node->children.size()))
      throw PreconditionError("path leaves the tree at step " + std::to_string(z.context.size()));
    Layer l{node->shape, step, {}};
    for (int c = 0; c < static_cast<int>(node->children.size()); ++c)
      if (c != step) l.siblings.push_back(node->children[c]);
    z.context.push_back(std::move(l));
    node = &node->children[step];
  }
  if (p.top < 0 || p.top >= sig.fiber(index, node->shape).object_count())
    throw PreconditionError("path ends outside the node's positions");
  z.focus = Focus{node->shape, p.top, node->children};
  return z;
}

inline void check_layer(const Container& sig, const Layer& l) {
  const int arity = star_arity(sig, l.shape);
  if (l.hole < 0 || l.hole >= arity || static_cast<int>(l.siblings.size()) != arity - 1)
    throw PreconditionError("layer does not fit shape " + sig.shapes->object_name(l.shape));
}

/// Fills the open position of `l` with `filler`.
inline WTree close_layer(const Container& sig, const Layer& l, WTree filler) {
  check_layer(sig, l);
  WTree w{l.shape, {}};
  auto it = l.siblings.begin();
  for (int c = 0; c < star_arity(sig, l.shape); ++c) w.children.push_back(c == l.hole ? std::move(filler) : *it++);
  return w;
}

/// Plugs a subtree into a context.
inline WTree plug(const Container& sig, const std::vector<Layer>& context, WTree filler) {
  for (auto it = context.rbegin(); it != context.rend(); ++it) filler = close_layer(sig, *it, std::move(filler));
  return filler;
}

/// The tree and path a zipper value denotes.
inline std::pair<WTree, WPath> plug(const Container& sig, int index, const ZipperValue& z) {
  const auto& f = z.focus;
  if (f.position < 0 || f.position >= sig.fiber(index, f.shape).object_count() ||
      static_cast<int>(f.children.size()) != star_arity(sig, f.shape))
    throw PreconditionError("focus does not fit shape " + sig.shapes->object_name(f.shape));
  WPath p{{}, f.position};
  for (const auto& l : z.context) p.below.push_back(l.hole);
  return {plug(sig, z.context, WTree{f.shape, f.children}), p};
}

// ---------------------------------------------------------------------------
// Navigation

struct Cursor {
  std::vector<Layer> context;
  WTree focus;
  bool operator==(const Cursor& o) const { return context == o.context && focus == o.focus; }
};

inline Cursor at_root(WTree w) { return Cursor{{}, std::move(w)}; }

inline std::optional<Cursor> up(const Container& sig, const Cursor& c) {
  if (c.context.empty()) return std::nullopt;
  Cursor out{{c.context.begin(), c.context.end() - 1}, close_layer(sig, c.context.back(), c.focus)};
  return out;
}

inline std::optional<Cursor> down(const Cursor& c, int position) {
  const auto& kids = c.focus.children;
  if (position < 0 || position >= static_cast<int>(kids.size())) return std::nullopt;
  Cursor out{c.context, kids[position]};
  Layer l{c.focus.shape, position, {}};
  for (int k = 0; k < static_cast<int>(kids.size()); ++k)
    if (k != position) l.siblings.push_back(kids[k]);
  out.context.push_back(std::move(l));
  return out;
}

// ---------------------------------------------------------------------------
// Reading μ-rule values as zippers

/// Decodes a shape of N_k (see mu_rule) built over the tree tower.
inline ZipperValue decode_value(const MuContainer& mu, const MuRuleReport& rule, int k, int value) {
  ZipperValue z;
  while (true) {
    const auto& lv = rule.levels.at(k - 1);
    const auto& ch = lv.chain;
    const auto& sum = lv.sum->shapes;
    const int y = sum.strip_object(value);
    if (sum.is_left_object(value)) {
      const int dx = ch.left.outer_shape(y);
      const auto& f = ch.left.assignment(y);
      Focus fc{ch.d_index.base_shape(dx), ch.d_index.hole(dx), {}};
      for (int c : f.object_map) fc.children.push_back(mu.trees[c]);
      z.focus = std::move(fc);
      return z;
    }
    const auto& prod = lv.layer->shapes;
    const int a = prod.left_object(y);
    const int ds = ch.star.outer_shape(a);
    const auto& f = ch.star.assignment(a);
    Layer l{ch.d_star.base_shape(ds), ch.d_star.hole(ds), {}};
    for (int c : f.object_map) l.siblings.push_back(mu.trees[c]);
    z.context.push_back(std::move(l));
    value = prod.right_object(y);
    --k;
  }
}

struct ZipperRuleReport {
  int values = 0;
  int matched = 0;
  bool ok() const { return values == matched; }
};

/// Checks that decompose inverts the μ-rule's action on shapes.
inline ZipperRuleReport zipper_matches_rule(const MuContainer& mu, const MuRuleReport& rule) {
  ZipperRuleReport r;
  const auto& top = rule.levels.back();
  const auto& sig = *mu.signature;
  for (int o = 0; o < top.values->shape_count(); ++o) {
    ++r.values;
    const int x = top.morphism.shape(o);
    const int t = top.target.base_shape(x);
    const auto paths = wpaths(sig, rule.index, mu.trees[t]);
    const auto& p = paths.at(top.target.hole(x));
    const auto z = decode_value(mu, rule, rule.depth, o);
    if (decompose(sig, rule.index, mu.trees[t], p) == z && plug(sig, rule.index, z) == std::make_pair(mu.trees[t], p))
      ++r.matched;
  }
  return r;
}

struct ZipperSweep {
  int pairs = 0;
  int plug_roundtrips = 0;       // plug ∘ decompose
  int subtree_roundtrips = 0;    // plugging the subtree back into the context
  int cursor_moves = 0;
  int cursor_roundtrips = 0;     // up ∘ down and down ∘ up
  bool ok() const {
    return plug_roundtrips == pairs && subtree_roundtrips == pairs && cursor_roundtrips == cursor_moves;
  }
};

inline ZipperSweep zipper_sweep(const MuContainer& mu, int index) {
  ZipperSweep s;
  const auto& sig = *mu.signature;
  std::function<void(const Cursor&)> walk = [&](const Cursor& c) {
    for (int p = 0; p < static_cast<int>(c.focus.children.size()); ++p) {
      auto d = down(c, p);
      ++s.cursor_moves;
      auto back = d ? up(sig, *d) : std::nullopt;
      auto again = back ? down(*back, p) : std::nullopt;
      if (back && *back == c && again && *again == *d) ++s.cursor_roundtrips;
      if (d) walk(*d);
    }
  };
  for (const auto& w : mu.trees) {
    for (const auto& p : wpaths(sig, index, w)) {
      ++s.pairs;
      auto z = decompose(sig, index, w, p);
      if (plug(sig, index, z) == std::make_pair(w, p)) ++s.plug_roundtrips;
      if (plug(sig, z.context, *subtree_at(w, p.below)) == w) ++s.subtree_roundtrips;
    }
    walk(at_root(w));
  }
  return s;
}

} // namespace contcalc
