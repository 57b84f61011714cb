#pragma once

#include "contcalc/container.hpp"
#include "contcalc/invariant.hpp"

namespace contcalc {

/// A canonical comparison morphism together with its verification.
struct LawResult {
  CartMorphism morphism;
  ValidationReport validation;
  GEquivReport report;
  bool holds() const { return validation.ok() && report.equivalence(); }
};

inline LawResult make_law(CartMorphism m) {
  auto v = validate_cart(m);
  GEquivReport rep;
  if (v.ok()) rep = is_equivalence_functor(m.shape);
  return LawResult{std::move(m), std::move(v), rep};
}

/// ∂F ⊕ ∂G ⊸ ∂(F ⊕ G), all derivatives at index i.
inline LawResult law_sum(const ContainerRef& f, const ContainerRef& g, int i = 0) {
  auto df = derivative(f, i);
  auto dg = derivative(g, i);
  auto lhs = sum_c(df.container, dg.container);
  auto whole = sum_c(f, g);
  auto d = derivative(whole.container, i);
  const auto& ls = lhs.shapes;
  const auto& ws = whole.shapes;
  auto part = [&](bool left) -> const DerivContainer& { return left ? df : dg; };
  auto lift_shape = [&](bool left, int s) { return left ? ws.inl_object(s) : ws.inr_object(s); };
  auto lift_mor = [&](bool left, int k) { return left ? ws.inl_morphism(k) : ws.inr_morphism(k); };

  std::vector<int> objs, mors;
  for (int x = 0; x < ls.sum->object_count(); ++x) {
    const bool left = ls.is_left_object(x);
    const auto& pd = part(left);
    const int y = ls.strip_object(x);
    objs.push_back(*d.find_shape(lift_shape(left, pd.base_shape(y)), pd.hole(y)));
  }
  for (int k = 0; k < ls.sum->morphism_count(); ++k) {
    const bool left = ls.is_left_morphism(k);
    const auto& pd = part(left);
    const int km = ls.strip_morphism(k);
    const int phi = pd.shapes.morphisms[km].first;
    mors.push_back(d.lift_morphism(lift_mor(left, phi), pd.fiber_morphism(km)));
  }
  CartMorphism m{lhs.container, d.container, GFunctor{ls.sum, d.shapes.total, objs, mors}, {}};
  for (int j = 0; j < f->index_count(); ++j) {
    m.pos.emplace_back();
    for (int x = 0; x < ls.sum->object_count(); ++x) {
      const bool left = ls.is_left_object(x);
      const int y = ls.strip_object(x);
      const auto& from = d.container->positions[j].fibers[objs[x]];
      const auto& to = lhs.container->positions[j].fibers[x];
      if (j != i) {
        m.pos[j].push_back(same_numbering(from, to));
        continue;
      }
      const auto& src = d.removal[objs[x]].sub;
      const auto& dst = part(left).removal[y].sub;
      m.pos[j].push_back(make_functor(
          from, to, [&](int o) { return dst.base_object_to_sub[src.object_to_base[o]]; },
          [&](int k) { return dst.base_morphism_to_sub[src.morphism_to_base[k]]; }));
    }
  }
  return make_law(std::move(m));
}

/// (∂F × G) ⊕ (F × ∂G) ⊸ ∂(F × G), all derivatives at index i.
inline LawResult law_leibniz(const ContainerRef& f, const ContainerRef& g, int i = 0) {
  auto df = derivative(f, i);
  auto dg = derivative(g, i);
  auto left = prod_c(df.container, g);
  auto right = prod_c(f, dg.container);
  auto lhs = sum_c(left.container, right.container);
  auto whole = prod_c(f, g);
  auto d = derivative(whole.container, i);
  const auto& ls = lhs.shapes;
  const auto& ws = whole.shapes;

  std::vector<int> objs, mors;
  for (int x = 0; x < ls.sum->object_count(); ++x) {
    const int y = ls.strip_object(x);
    if (ls.is_left_object(x)) {
      const int dx = left.shapes.left_object(y), t = left.shapes.right_object(y);
      const int s = df.base_shape(dx);
      const int w = ws.object(s, t);
      objs.push_back(*d.find_shape(w, whole.sums[i][w].inl_object(df.hole(dx))));
    } else {
      const int s = right.shapes.left_object(y), dy = right.shapes.right_object(y);
      const int w = ws.object(s, dg.base_shape(dy));
      objs.push_back(*d.find_shape(w, whole.sums[i][w].inr_object(dg.hole(dy))));
    }
  }
  for (int k = 0; k < ls.sum->morphism_count(); ++k) {
    const int km = ls.strip_morphism(k);
    const int w2 = d.base_shape(objs[ls.sum->dst(k)]);
    const auto& sum = whole.sums[i][w2];
    if (ls.is_left_morphism(k)) {
      const int dk = left.shapes.left_morphism(km), tk = left.shapes.right_morphism(km);
      const int phi = df.shapes.morphisms[dk].first;
      mors.push_back(d.lift_morphism(ws.morphism(phi, tk), sum.inl_morphism(df.fiber_morphism(dk))));
    } else {
      const int sk = right.shapes.left_morphism(km), dk = right.shapes.right_morphism(km);
      const int phi = dg.shapes.morphisms[dk].first;
      mors.push_back(d.lift_morphism(ws.morphism(sk, phi), sum.inr_morphism(dg.fiber_morphism(dk))));
    }
  }
  CartMorphism m{lhs.container, d.container, GFunctor{ls.sum, d.shapes.total, objs, mors}, {}};
  for (int j = 0; j < f->index_count(); ++j) {
    m.pos.emplace_back();
    for (int x = 0; x < ls.sum->object_count(); ++x) {
      const bool on_left = ls.is_left_object(x);
      const int y = ls.strip_object(x);
      const auto& from = d.container->positions[j].fibers[objs[x]];
      const auto& to = lhs.container->positions[j].fibers[x];
      if (j != i) {
        m.pos[j].push_back(same_numbering(from, to));
        continue;
      }
      const int w = d.base_shape(objs[x]);
      const auto& big = whole.sums[i][w];
      const auto& rem = d.removal[objs[x]].sub;
      const auto& small = on_left ? left.sums[i][y] : right.sums[i][y];
      const auto& side = on_left ? df.removal[left.shapes.left_object(y)].sub
                                 : dg.removal[right.shapes.right_object(y)].sub;
      // the damaged side passes through the removal, the other side is unchanged
      m.pos[j].push_back(make_functor(
          from, to,
          [&](int o) {
            const int z = rem.object_to_base[o];
            const int v = big.strip_object(z);
            if (big.is_left_object(z)) return small.inl_object(on_left ? side.base_object_to_sub[v] : v);
            return small.inr_object(on_left ? v : side.base_object_to_sub[v]);
          },
          [&](int k) {
            const int z = rem.morphism_to_base[k];
            const int v = big.strip_morphism(z);
            if (big.is_left_morphism(z)) return small.inl_morphism(on_left ? side.base_morphism_to_sub[v] : v);
            return small.inr_morphism(on_left ? v : side.base_morphism_to_sub[v]);
          }));
    }
  }
  return make_law(std::move(m));
}

// ---------------------------------------------------------------------------
// Bags: finite multisets of bounded size

/// Shapes ⊕_{n ≤ N} B(S_n), positions the n-element set permuted by S_n.
inline ContainerRef bag_container(int max_size) {
  if (max_size < 0 || max_size > 4) throw PreconditionError("bag size bound must be in 0..4");
  ContainerRef acc;
  for (int n = 0; n <= max_size; ++n) {
    std::vector<Permutation> perms;
    auto shapes = share(symmetric_delooping(n, &perms, "B" + std::to_string(n)));
    auto fiber = share(disc(n));
    GFamily fam{shapes, {fiber}, {}};
    for (const auto& p : perms) fam.transport.push_back(GFunctor{fiber, fiber, p, p});
    auto piece = share(family_container(fam));
    acc = acc ? sum_c(acc, piece).container : piece;
  }
  return acc;
}

struct BagReport {
  int max_size = 0;
  EquivInvariant derivative_shapes;
  EquivInvariant smaller_bag_shapes;
  std::vector<int> expected_orders;  // (n-1)! for 1 ≤ n ≤ N
  bool matches() const {
    auto got = derivative_shapes.orders();
    auto want = expected_orders;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return derivative_shapes == smaller_bag_shapes && got == want;
  }
};

/// ∂Bag_N against Bag_{N-1}, compared by equivalence invariant.
inline BagReport bag_fixed_point_check(int max_size) {
  if (max_size < 1) throw PreconditionError("bag check needs N ≥ 1");
  BagReport r;
  r.max_size = max_size;
  r.derivative_shapes = equiv_invariant(*derivative(bag_container(max_size), 0).container->shapes);
  r.smaller_bag_shapes = equiv_invariant(*bag_container(max_size - 1)->shapes);
  int fact = 1;
  for (int n = 1; n <= max_size; ++n) {
    r.expected_orders.push_back(fact);
    fact *= n;
  }
  return r;
}

} // namespace contcalc
