#pragma once

#include <optional>

#include "contcalc/container.hpp"
#include "contcalc/points.hpp"

namespace contcalc {

/// Least (s, f) at which isolated points of Σ_{p : P_*(s)} Q_i(f p) are not all hit.
struct FailingCell {
  int shape = -1;        // shape (s, f) of F[G]
  int outer_shape = -1;  // s
  std::string functor;   // f, as a label
};

struct ChainReport {
  CartMorphism morphism;
  ValidationReport validation;
  GEquivReport report;
  bool is_embedding = false;
  bool is_strong = false;
  // independent reading of strength: Σ-isolate surjective at every (s, f)
  bool isolate_surjective = false;
  std::optional<FailingCell> failing_cell;
  int domain_shapes = 0;    // objects
  int codomain_shapes = 0;  // objects
  int domain_components = 0;
  int codomain_components = 0;

  bool criteria_agree() const { return is_strong == isolate_surjective; }
};

/// Everything built along the way, kept so callers can compose further.
struct IndexedChain {
  int index = 0;
  DerivContainer d_index;  // ∂_i F
  DerivContainer d_star;   // ∂_* F
  DerivContainer d_inner;  // ∂_i G
  SubstContainer left;     // (∂_i F)[G]
  SubstContainer star;     // (∂_* F)[G]
  ProductContainer right;  // (∂_* F)[G] × ∂_i G
  SumContainer domain;
  SubstContainer whole;    // F[G]
  DerivContainer codomain; // ∂_i(F[G])
  ChainReport result;
};

namespace detail {

inline void finish_chain_report(ChainReport& r, const SubstContainer& whole, int i) {
  r.validation = validate_cart(r.morphism);
  if (r.validation.ok()) r.report = is_equivalence_functor(r.morphism.shape);
  r.is_embedding = r.validation.ok() && r.report.embedding();
  r.is_strong = r.validation.ok() && r.report.equivalence();
  r.domain_shapes = r.morphism.source->shape_count();
  r.codomain_shapes = r.morphism.target->shape_count();
  r.domain_components = static_cast<int>(components(*r.morphism.source->shapes).size());
  r.codomain_components = static_cast<int>(components(*r.morphism.target->shapes).size());
  r.isolate_surjective = true;
  const auto& g = *whole.inner;
  for (int w = 0; w < whole.container->shape_count(); ++w) {
    const auto& f = whole.assignment(w);
    if (sigma_isolate(pullback(g.positions[i], f)).surjective) continue;
    r.isolate_surjective = false;
    r.failing_cell = FailingCell{w, whole.outer_shape(w), functor_label(f)};
    break;
  }
}

} // namespace detail

/// ∂_i F[G] ⊕ ((∂_* F)[G] × ∂_i G) ⊸ ∂_i(F[G]) for F over I ⊎ {*} and G over I.
inline IndexedChain chain_indexed(const ContainerRef& f, const ContainerRef& g, int i,
                                  const Limits& limits = default_limits()) {
  check_subst_indices(*f, *g);
  g->check_index(i);
  const int star_index = f->index_count() - 1;
  IndexedChain c;
  c.index = i;
  c.d_index = derivative(f, i, limits);
  c.d_star = derivative(f, star_index, limits);
  c.d_inner = derivative(g, i, limits);
  c.left = subst(c.d_index.container, g, limits);
  c.star = subst(c.d_star.container, g, limits);
  c.right = prod_c(c.star.container, c.d_inner.container);
  c.domain = sum_c(c.left.container, c.right.container);
  c.whole = subst(f, g, limits);
  c.codomain = derivative(c.whole.container, i, limits);

  const auto& fsh = *f->shapes;
  const auto& ls = c.domain.shapes;
  const auto& rp = c.right.shapes;
  const auto& dl = c.d_index;
  const auto& ds = c.d_star;
  const auto& dg = c.d_inner;
  const auto& wh = c.whole;
  const auto& d = c.codomain;
  auto star_fiber = [&](int s) -> const GroupoidRef& { return f->positions[star_index].fibers[s]; };

  // grafted functor of a right-hand shape, and its place in F[G]
  std::vector<int> whole_of;  // domain shape -> F[G] shape
  std::vector<int> objs;
  for (int x = 0; x < ls.sum->object_count(); ++x) {
    const int y = ls.strip_object(x);
    if (ls.is_left_object(x)) {
      const int xd = c.left.outer_shape(y);
      const int s = dl.base_shape(xd);
      const auto& fn = c.left.assignment(y);
      const int w = *wh.find_shape(s, GFunctor{star_fiber(s), fn.target, fn.object_map, fn.morphism_map});
      whole_of.push_back(w);
      objs.push_back(*d.find_shape(w, wh.sums[i][w].inl_object(dl.hole(xd))));
    } else {
      const int u = rp.left_object(y), z = rp.right_object(y);
      const int ys = c.star.outer_shape(u);
      const int s = ds.base_shape(ys), p1 = ds.hole(ys);
      const int t = dg.base_shape(z), q = dg.hole(z);
      auto grafted = graft(star_fiber(s), p1, c.star.assignment(u), t);
      const int w = *wh.find_shape(s, grafted);
      whole_of.push_back(w);
      objs.push_back(*d.find_shape(w, wh.sums[i][w].inr_object(wh.inner_sigma[i][w].object(p1, q))));
    }
  }

  std::vector<int> mors;
  for (int k = 0; k < ls.sum->morphism_count(); ++k) {
    const int km = ls.strip_morphism(k);
    const int w2 = whole_of[ls.sum->dst(k)];
    const auto& big = wh.sums[i][w2];
    if (ls.is_left_morphism(k)) {
      auto [theta, kf] = c.left.shapes.morphisms[km];
      const int phi = dl.shapes.morphisms[theta].first;
      const int whole_m = wh.shapes.morphism(phi, kf);
      mors.push_back(d.lift_morphism(whole_m, big.inl_morphism(dl.fiber_morphism(theta))));
      continue;
    }
    const int ku = rp.left_morphism(km), kz = rp.right_morphism(km);
    auto [theta, kf] = c.star.shapes.morphisms[ku];
    const int phi = ds.shapes.morphisms[theta].first;
    const int chi = dg.shapes.morphisms[kz].first;
    const int s2 = fsh.dst(phi);
    const int y2 = ds.shapes.total->dst(theta);
    const int p1 = ds.hole(y2);
    const auto& rem = ds.removal[y2].sub;
    const auto& alpha = c.star.fun.fun[y2].components[kf];
    const auto& pstar = *star_fiber(s2);
    // components: χ on the grafted class, α elsewhere
    std::vector<int> comps;
    for (int p = 0; p < pstar.object_count(); ++p)
      comps.push_back(pstar.connected(p, p1) ? chi : alpha[rem.base_object_to_sub[p]]);
    const int w1 = whole_of[ls.sum->src(k)];
    const int from = wh.fun.family.along(phi)(wh.shapes.fiber_of(w1));
    auto kw = wh.fun.fun[s2].find_morphism(from, wh.shapes.fiber_of(w2), comps);
    if (!kw) throw Error("chain: grafted components are not a morphism of functors");
    const int whole_m = wh.shapes.morphism(phi, *kw);
    const int hole_m = wh.inner_sigma[i][w2].morphism(ds.fiber_morphism(theta), dg.fiber_morphism(kz));
    mors.push_back(d.lift_morphism(whole_m, big.inr_morphism(hole_m)));
  }

  CartMorphism m{c.domain.container, d.container, GFunctor{ls.sum, d.shapes.total, objs, mors}, {}};
  for (int j = 0; j < g->index_count(); ++j) {
    m.pos.emplace_back();
    for (int x = 0; x < ls.sum->object_count(); ++x) {
      const int y = ls.strip_object(x);
      const int w = whole_of[x];
      const auto& big = wh.sums[j][w];
      const auto& from = d.container->positions[j].fibers[objs[x]];
      const auto& to = c.domain.container->positions[j].fibers[x];
      // positions of the removal fiber at i, all of F[G]'s positions elsewhere
      const Subgroupoid* rem = j == i ? &d.removal[objs[x]].sub : nullptr;
      auto base_obj = [&](int o) { return rem ? rem->object_to_base[o] : o; };
      auto base_mor = [&](int k) { return rem ? rem->morphism_to_base[k] : k; };
      if (ls.is_left_object(x)) {
        const auto& small = c.left.sums[j][y];
        const int xd = c.left.outer_shape(y);
        const Subgroupoid* side = j == i ? &dl.removal[xd].sub : nullptr;
        m.pos[j].push_back(make_functor(
            from, to,
            [&](int o) {
              const int z = base_obj(o), v = big.strip_object(z);
              if (!big.is_left_object(z)) return small.inr_object(v);
              return small.inl_object(side ? side->base_object_to_sub[v] : v);
            },
            [&](int k) {
              const int z = base_mor(k), v = big.strip_morphism(z);
              if (!big.is_left_morphism(z)) return small.inr_morphism(v);
              return small.inl_morphism(side ? side->base_morphism_to_sub[v] : v);
            }));
        continue;
      }
      const int u = rp.left_object(y), zq = rp.right_object(y);
      const int ys = c.star.outer_shape(u);
      const int p1 = ds.hole(ys);
      const auto& pstar = *star_fiber(ds.base_shape(ys));
      const auto& star_rem = ds.removal[ys].sub;
      const auto& outer = c.right.sums[j][y];   // (∂_*F)[G] ⊕ ∂_i G
      const auto& inner = c.star.sums[j][u];    // P_j ⊕ Σ over the complement
      const auto& rest = c.star.inner_sigma[j][u];
      const auto& all = wh.inner_sigma[j][w];
      const Subgroupoid* hole_side = j == i ? &dg.removal[zq].sub : nullptr;
      m.pos[j].push_back(make_functor(
          from, to,
          [&](int o) {
            const int z = base_obj(o), v = big.strip_object(z);
            if (big.is_left_object(z)) return outer.inl_object(inner.inl_object(v));
            auto [p, q] = all.objects[v];
            if (pstar.connected(p, p1)) return outer.inr_object(hole_side ? hole_side->base_object_to_sub[q] : q);
            return outer.inl_object(inner.inr_object(rest.object(star_rem.base_object_to_sub[p], q)));
          },
          [&](int k) {
            const int z = base_mor(k), v = big.strip_morphism(z);
            if (big.is_left_morphism(z)) return outer.inl_morphism(inner.inl_morphism(v));
            auto [pi, omega] = all.morphisms[v];
            if (pstar.connected(pstar.src(pi), p1))
              return outer.inr_morphism(hole_side ? hole_side->base_morphism_to_sub[omega] : omega);
            return outer.inl_morphism(inner.inr_morphism(rest.morphism(star_rem.base_morphism_to_sub[pi], omega)));
          }));
    }
  }
  c.result.morphism = std::move(m);
  detail::finish_chain_report(c.result, wh, i);
  return c;
}

/// F over {x} as a container over {x, *} with no x-positions.
inline ContainerRef as_outer(const Container& f, const std::string& index) {
  Container c{{index, "*"}, f.shapes, {constant_family(f.shapes, empty_ref()), f.positions.at(0)}};
  return share(std::move(c));
}

/// (∂F)[G] × ∂G ⊸ ∂(F[G]) for unary F and G: the indexed rule with an empty
/// left summand, restricted to the right one.
inline ChainReport chain_unary(const ContainerRef& f, const ContainerRef& g, const Limits& limits = default_limits()) {
  if (f->index_count() != 1 || g->index_count() != 1) throw PreconditionError("chain_unary: containers must be unary");
  auto c = chain_indexed(as_outer(*f, g->indices[0]), g, 0, limits);
  const auto& ls = c.domain.shapes;
  const auto& prod = c.right.container;
  std::vector<int> objs, mors;
  for (int y = 0; y < prod->shape_count(); ++y) objs.push_back(ls.inr_object(y));
  for (int k = 0; k < prod->shapes->morphism_count(); ++k) mors.push_back(ls.inr_morphism(k));
  CartMorphism incl{prod, c.domain.container, GFunctor{prod->shapes, ls.sum, objs, mors}, {}};
  incl.pos.emplace_back();
  for (int y = 0; y < prod->shape_count(); ++y)
    incl.pos[0].push_back(same_numbering(c.domain.container->positions[0].fibers[objs[y]], prod->positions[0].fibers[y]));
  ChainReport r;
  r.morphism = compose_cart(c.result.morphism, incl);
  detail::finish_chain_report(r, c.whole, 0);
  return r;
}

// ---------------------------------------------------------------------------
// The BZ2 exhibit

struct Bz2Exhibit {
  ChainReport chain;
  int domain_shapes = 0;
  int codomain_isolated_shapes = 0;
  int isolated_over_identity = 0;  // over f = id(BZ2), components
  int isolated_over_trivial = 0;   // over the functor sending s to e
};

/// F = (1 ◁ BZ2) and G = (a : BZ2 ◁ hom(a0, a)).
inline Bz2Exhibit counterexample_bz2() {
  auto a = share(bz2());
  auto f = share(single_shape(a));
  auto g = share(family_container(singleton_family(a, 0)));
  Bz2Exhibit e;
  e.chain = chain_unary(f, g);
  e.domain_shapes = e.chain.domain_shapes;
  e.codomain_isolated_shapes = e.chain.codomain_components;
  auto whole = subst(as_outer(*f, "x"), g);
  for (int w = 0; w < whole.container->shape_count(); ++w) {
    const auto& fn = whole.assignment(w);
    // counted up to isomorphism
    const int n = static_cast<int>(components(*isolated_subgroupoid(whole.container->positions[0].fibers[w]).sub.sub).size());
    if (fn == identity_functor(a)) e.isolated_over_identity += n;
    else if (fn.morphism_map == std::vector<int>(a->morphism_count(), a->identity(0))) e.isolated_over_trivial += n;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Sweeps

struct StrengthRow {
  std::string name;
  bool discrete = false;
  bool embedding = false;
  bool strong = false;
  bool criteria_agree = false;
};

struct ChainCase {
  std::string name;
  ContainerRef f, g;
};

inline std::vector<StrengthRow> strength_sweep(const std::vector<ChainCase>& cases) {
  std::vector<StrengthRow> rows;
  for (const auto& c : cases) {
    auto r = chain_unary(c.f, c.g);
    rows.push_back({c.name, c.f->discrete() && c.g->discrete(), r.is_embedding, r.is_strong, r.criteria_agree()});
  }
  return rows;
}

} // namespace contcalc
