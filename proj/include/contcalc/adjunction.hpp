#pragma once

#include <functional>
#include <numeric>

#include "contcalc/container.hpp"

namespace contcalc {

// ---------------------------------------------------------------------------
// Unit and counit of (- × Id) ⊣ ∂, taken at one index

struct UnitData {
  int index = 0;
  ProductContainer fx;  // F × Id
  DerivContainer d;     // ∂(F × Id)
  CartMorphism eta;     // F ⊸ ∂(F × Id)
};

struct CounitData {
  int index = 0;
  DerivContainer d;     // ∂G
  ProductContainer dx;  // ∂G × Id
  CartMorphism epsilon; // ∂G × Id ⊸ G
};

inline ContainerRef id_at(const Container& like, int i) { return share(proj(like.indices, i)); }

/// η on an already formed F × Id (right factor must be the projection at i).
inline UnitData unit_eta_on(ProductContainer fx, int i, const Limits& limits = default_limits()) {
  const auto& f = *fx.left;
  const auto& sh = fx.shapes;
  DerivContainer d = derivative(fx.container, i, limits);
  std::vector<int> objs, mors;
  auto nothing = [&](int x) { return fx.sums[i][x].inr_object(0); };
  for (int s = 0; s < f.shape_count(); ++s) objs.push_back(*d.find_shape(sh.object(s, 0), nothing(sh.object(s, 0))));
  for (int k = 0; k < f.shapes->morphism_count(); ++k) {
    const int x2 = sh.object(f.shapes->dst(k), 0);
    const auto& sub = d.isolated.subs[x2];
    const int id = fx.container->fiber(i, x2).identity(nothing(x2));
    mors.push_back(d.shapes.morphism(sh.morphism(k, fx.right->shapes->identity(0)), sub.base_morphism_to_sub[id]));
  }
  CartMorphism eta{fx.left, d.container, GFunctor{f.shapes, d.shapes.total, objs, mors}, {}};
  for (int j = 0; j < f.index_count(); ++j) {
    eta.pos.emplace_back();
    for (int s = 0; s < f.shape_count(); ++s) {
      const int x = sh.object(s, 0);
      const auto& sum = fx.sums[j][x];
      if (j != i) {
        eta.pos[j].push_back(make_functor(sum.sum, f.positions[j].fibers[s],
                                          [&](int o) { return sum.strip_object(o); },
                                          [&](int m) { return sum.strip_morphism(m); }));
        continue;
      }
      const auto& rem = d.removal[objs[s]].sub;
      eta.pos[j].push_back(make_functor(rem.sub, f.positions[j].fibers[s],
                                        [&](int o) { return sum.strip_object(rem.object_to_base[o]); },
                                        [&](int m) { return sum.strip_morphism(rem.morphism_to_base[m]); }));
    }
  }
  return UnitData{i, std::move(fx), std::move(d), std::move(eta)};
}

inline UnitData unit_eta(const ContainerRef& f, int i = 0, const Limits& limits = default_limits()) {
  f->check_index(i);
  return unit_eta_on(prod_c(f, id_at(*f, i)), i, limits);
}

/// ε on an already formed derivative.
inline CounitData counit_epsilon_on(DerivContainer d) {
  const int i = d.index;
  const auto& g = *d.base;
  auto dx = prod_c(d.container, id_at(g, i));
  const auto& sh = dx.shapes;
  const auto& dsh = d.shapes;
  std::vector<int> objs, mors;
  for (int x = 0; x < sh.product->object_count(); ++x) objs.push_back(d.base_shape(sh.left_object(x)));
  for (int k = 0; k < sh.product->morphism_count(); ++k) mors.push_back(dsh.morphisms[sh.left_morphism(k)].first);
  CartMorphism eps{dx.container, d.base, GFunctor{sh.product, g.shapes, objs, mors}, {}};
  for (int j = 0; j < g.index_count(); ++j) {
    eps.pos.emplace_back();
    for (int x = 0; x < sh.product->object_count(); ++x) {
      const int y = sh.left_object(x);
      const auto& fiber = g.positions[j].fibers[objs[x]];
      const auto& sum = dx.sums[j][x];
      if (j != i) {
        eps.pos[j].push_back(make_functor(fiber, sum.sum, [&](int o) { return sum.inl_object(o); },
                                          [&](int m) { return sum.inl_morphism(m); }));
        continue;
      }
      // Replace inverse: the hole's class goes to the added point
      const auto& rem = d.removal[y].sub;
      const int hole = d.hole(y);
      const int star = sum.inr_object(0);
      const int star_id = sum.sum->identity(star);
      eps.pos[j].push_back(make_functor(
          fiber, sum.sum,
          [&](int o) { return fiber->connected(o, hole) ? star : sum.inl_object(rem.base_object_to_sub[o]); },
          [&](int m) {
            return fiber->connected(fiber->src(m), hole) ? star_id : sum.inl_morphism(rem.base_morphism_to_sub[m]);
          }));
    }
  }
  return CounitData{i, std::move(d), std::move(dx), std::move(eps)};
}

inline CounitData counit_epsilon(const ContainerRef& g, int i = 0, const Limits& limits = default_limits()) {
  return counit_epsilon_on(derivative(g, i, limits));
}

// ---------------------------------------------------------------------------
// Transposition

/// Both units needed to transpose morphisms F ⊸ ∂G and F × Id ⊸ G.
struct Adjunction {
  int index = 0;
  UnitData unit;      // at F
  CounitData counit;  // at G

  /// f♯ = ε_G ∘ (f × Id)
  CartMorphism sharp(const CartMorphism& f) const {
    auto lifted = prod_map(unit.fx, counit.dx, f, id_cart(unit.fx.right));
    return compose_cart(counit.epsilon, lifted);
  }
  /// g♭ = ∂g ∘ η_F
  CartMorphism flat(const CartMorphism& g) const {
    return compose_cart(der_map(g, unit.d, counit.d), unit.eta);
  }
  const ContainerRef& derivative_target() const { return counit.d.container; }
  const ContainerRef& product_source() const { return unit.fx.container; }
};

inline Adjunction adjunction(const ContainerRef& f, const ContainerRef& g, int i = 0,
                             const Limits& limits = default_limits()) {
  if (f->indices != g->indices) throw PreconditionError("adjunction: index sets differ");
  return Adjunction{i, unit_eta(f, i, limits), counit_epsilon(g, i, limits)};
}

// ---------------------------------------------------------------------------
// Enumeration of cartesian morphisms between discrete containers

inline constexpr long long kMaxCartCandidates = 10000;

/// Calls `visit` on every cartesian morphism F ⊸ G; returns the count.
/// Throws SizeError when more than `cap` morphisms exist.
inline long long for_each_cart(const ContainerRef& f, const ContainerRef& g,
                               const std::function<void(const CartMorphism&)>& visit,
                               long long cap = kMaxCartCandidates) {
  if (f->indices != g->indices) throw PreconditionError("enumeration: index sets differ");
  if (!f->discrete() || !g->discrete()) throw PreconditionError("enumeration needs discrete containers");
  const int ns = f->shape_count(), nt = g->shape_count(), ni = f->index_count();
  auto fits = [&](int s, int t) {
    for (int i = 0; i < ni; ++i)
      if (f->fiber(i, s).object_count() != g->fiber(i, t).object_count()) return false;
    return true;
  };
  // closed form first, so oversized searches fail before any work
  long long total = 1;
  for (int s = 0; s < ns && total > 0; ++s) {
    long long per = 0;
    for (int t = 0; t < nt; ++t) {
      if (!fits(s, t)) continue;
      long long ways = 1;
      for (int i = 0; i < ni; ++i)
        for (int k = 2; k <= f->fiber(i, s).object_count(); ++k) ways *= k;
      per += ways;
    }
    total *= per;
    if (total > cap) throw SizeError("more than " + std::to_string(cap) + " cartesian morphisms");
  }
  if (!visit) return total;

  std::vector<int> shape_map(ns, 0);
  std::vector<std::vector<Permutation>> perms(ni, std::vector<Permutation>(ns));
  long long count = 0;
  std::function<void(int, int)> rec = [&](int s, int i) {
    if (s == ns) {
      std::vector<int> mors;
      for (int k = 0; k < f->shapes->morphism_count(); ++k)
        mors.push_back(g->shapes->identity(shape_map[f->shapes->src(k)]));
      CartMorphism m{f, g, GFunctor{f->shapes, g->shapes, shape_map, mors}, {}};
      for (int j = 0; j < ni; ++j) {
        m.pos.emplace_back();
        for (int x = 0; x < ns; ++x)
          m.pos[j].push_back(discrete_map(g->positions[j].fibers[shape_map[x]], f->positions[j].fibers[x], perms[j][x]));
      }
      ++count;
      visit(m);
      return;
    }
    if (i == ni) {
      rec(s + 1, 0);
      return;
    }
    if (i == 0) {
      for (int t = 0; t < nt; ++t) {
        if (!fits(s, t)) continue;
        shape_map[s] = t;
        auto p = perm_identity(f->fiber(0, s).object_count());
        do {
          perms[0][s] = p;
          rec(s, 1);
        } while (std::next_permutation(p.begin(), p.end()));
      }
      return;
    }
    auto p = perm_identity(f->fiber(i, s).object_count());
    do {
      perms[i][s] = p;
      rec(s, i + 1);
    } while (std::next_permutation(p.begin(), p.end()));
  };
  rec(0, 0);
  return count;
}

inline std::vector<CartMorphism> enumerate_cart(const ContainerRef& f, const ContainerRef& g,
                                                long long cap = kMaxCartCandidates) {
  std::vector<CartMorphism> out;
  for_each_cart(f, g, [&](const CartMorphism& m) { out.push_back(m); }, cap);
  return out;
}

/// Number of cartesian morphisms F ⊸ G, counted by enumeration.
inline long long hom_count(const ContainerRef& f, const ContainerRef& g, long long cap = kMaxCartCandidates) {
  return for_each_cart(f, g, [](const CartMorphism&) {}, cap);
}

/// n-fold derivative at index i.
inline ContainerRef iterated_derivative(const ContainerRef& g, int n, int i = 0,
                                        const Limits& limits = default_limits()) {
  ContainerRef c = g;
  for (int k = 0; k < n; ++k) c = derivative(c, i, limits).container;
  return c;
}

struct HomIdentity {
  long long derivative_side = 0;  // |F ⊸ ∂ⁿG|
  long long product_side = 0;     // |F × (1 ◁ n) ⊸ G|
  bool holds() const { return derivative_side == product_side; }
};

/// |F ⊸ ∂ⁿG| against |F × (1 ◁ Fin n) ⊸ G|, positions of the tuple at index i.
inline HomIdentity iterated_hom_identity(const ContainerRef& f, const ContainerRef& g, int n, int i = 0,
                                         long long cap = kMaxCartCandidates) {
  auto tuple = share(single_shape(share(disc(n)), f->indices, i));
  auto fx = prod_c(f, tuple);
  return HomIdentity{hom_count(f, iterated_derivative(g, n, i), cap), hom_count(fx.container, g, cap)};
}

// ---------------------------------------------------------------------------
// Triangle identities and naturality

struct TriangleReport {
  bool unit_triangle = false;    // ε_{F×Id} ∘ (η_F × Id) = id
  bool counit_triangle = false;  // ∂ε_G ∘ η_{∂G} = id
  int unit_squares = 0, unit_squares_ok = 0;
  int counit_squares = 0, counit_squares_ok = 0;
  std::vector<std::string> failures;
  bool ok() const {
    return unit_triangle && counit_triangle && unit_squares == unit_squares_ok && counit_squares == counit_squares_ok;
  }
};

inline bool unit_triangle_holds(const ContainerRef& f, int i = 0) {
  auto u = unit_eta(f, i);
  auto c = counit_epsilon_on(u.d);
  auto lifted = prod_map(u.fx, c.dx, u.eta, id_cart(u.fx.right));
  return morphism_eq(compose_cart(c.epsilon, lifted), id_cart(u.fx.container)).equal;
}

inline bool counit_triangle_holds(const ContainerRef& g, int i = 0) {
  auto c = counit_epsilon(g, i);
  auto u = unit_eta_on(c.dx, i);
  auto back = der_map(c.epsilon, u.d, c.d);
  return morphism_eq(compose_cart(back, u.eta), id_cart(c.d.container)).equal;
}

/// η_{F'} ∘ m = ∂(m × Id) ∘ η_F for m : F ⊸ F'.
inline bool unit_square_holds(const CartMorphism& m, int i = 0) {
  auto from = unit_eta(m.source, i);
  auto to = unit_eta(m.target, i);
  auto lifted = prod_map(from.fx, to.fx, m, id_cart(from.fx.right));
  auto lhs = compose_cart(to.eta, m);
  auto rhs = compose_cart(der_map(lifted, from.d, to.d), from.eta);
  return morphism_eq(lhs, rhs).equal;
}

/// ε_{G'} ∘ (∂m × Id) = m ∘ ε_G for m : G ⊸ G'.
inline bool counit_square_holds(const CartMorphism& m, int i = 0) {
  auto from = counit_epsilon(m.source, i);
  auto to = counit_epsilon(m.target, i);
  auto lifted = prod_map(from.dx, to.dx, der_map(m, from.d, to.d), id_cart(from.dx.right));
  auto lhs = compose_cart(to.epsilon, lifted);
  auto rhs = compose_cart(m, from.epsilon);
  return morphism_eq(lhs, rhs).equal;
}

/// Both triangles at `c`, and both squares on every sample morphism.
inline TriangleReport triangle_check(const ContainerRef& c, const std::vector<CartMorphism>& samples = {}, int i = 0) {
  TriangleReport r;
  r.unit_triangle = unit_triangle_holds(c, i);
  if (!r.unit_triangle) r.failures.push_back("unit triangle");
  r.counit_triangle = counit_triangle_holds(c, i);
  if (!r.counit_triangle) r.failures.push_back("counit triangle");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    ++r.unit_squares;
    if (unit_square_holds(samples[k], i)) ++r.unit_squares_ok;
    else r.failures.push_back("unit square " + std::to_string(k));
    ++r.counit_squares;
    if (counit_square_holds(samples[k], i)) ++r.counit_squares_ok;
    else r.failures.push_back("counit square " + std::to_string(k));
  }
  return r;
}

struct TranspositionReport {
  long long derivative_side = 0;
  long long product_side = 0;
  bool sharp_then_flat = true;
  bool flat_then_sharp = true;
  bool ok() const { return derivative_side == product_side && sharp_then_flat && flat_then_sharp; }
};

/// ♭♯ = id and ♯♭ = id on every morphism of both hom sets.
inline TranspositionReport transposition_check(const ContainerRef& f, const ContainerRef& g, int i = 0,
                                               long long cap = kMaxCartCandidates) {
  auto adj = adjunction(f, g, i);
  TranspositionReport r;
  r.derivative_side = for_each_cart(
      f, adj.derivative_target(),
      [&](const CartMorphism& m) {
        if (r.sharp_then_flat && !morphism_eq(adj.flat(adj.sharp(m)), m).equal) r.sharp_then_flat = false;
      },
      cap);
  r.product_side = for_each_cart(
      adj.product_source(), g,
      [&](const CartMorphism& m) {
        if (r.flat_then_sharp && !morphism_eq(adj.sharp(adj.flat(m)), m).equal) r.flat_then_sharp = false;
      },
      cap);
  return r;
}

} // namespace contcalc
