#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contcalc/points.hpp"

namespace contcalc {

/// Shapes plus one position family per index.
struct Container {
  std::vector<std::string> indices;
  GroupoidRef shapes;
  std::vector<GFamily> positions;

  int index_count() const { return static_cast<int>(indices.size()); }
  int index_of(const std::string& name) const {
    for (int i = 0; i < index_count(); ++i)
      if (indices[i] == name) return i;
    throw UnknownId("unknown index " + name);
  }
  void check_index(int i) const {
    if (i < 0 || i >= index_count()) throw UnknownId("unknown index " + std::to_string(i));
  }
  const FinGroupoid& fiber(int i, int s) const { return positions.at(i).fiber(s); }
  const GFunctor& transport(int i, int m) const { return positions.at(i).along(m); }
  int shape_count() const { return shapes->object_count(); }

  bool positions_discrete() const {
    for (const auto& p : positions)
      for (const auto& f : p.fibers)
        if (!f->is_discrete()) return false;
    return true;
  }
  bool discrete() const { return shapes->is_discrete() && positions_discrete(); }
};

using ContainerRef = std::shared_ptr<const Container>;

inline ContainerRef share(Container c) { return std::make_shared<const Container>(std::move(c)); }

inline ValidationReport validate_container(const Container& c) {
  ValidationReport r;
  if (c.indices.empty()) r.add("index set is empty");
  for (std::size_t i = 0; i < c.indices.size(); ++i)
    for (std::size_t j = i + 1; j < c.indices.size(); ++j)
      if (c.indices[i] == c.indices[j]) r.add("duplicate index " + c.indices[i]);
  if (c.positions.size() != c.indices.size()) {
    r.add("position families do not match the index set");
    return r;
  }
  r.merge(validate_groupoid(*c.shapes), "shapes: ");
  for (int i = 0; i < c.index_count(); ++i) {
    if (!GFunctor::same_groupoid(c.positions[i].base, c.shapes)) {
      r.add("positions at " + c.indices[i] + " are not over the shapes");
      continue;
    }
    r.merge(validate_family(c.positions[i]), "positions at " + c.indices[i] + ": ");
  }
  return r;
}

/// Cartesian morphism: a shape functor and, per index and shape, a position
/// functor backwards target.P_i(f s) -> source.P_i(s).
struct CartMorphism {
  ContainerRef source;
  ContainerRef target;
  GFunctor shape;
  std::vector<std::vector<GFunctor>> pos;  // [index][source shape]

  const GFunctor& at(int i, int s) const { return pos.at(i).at(s); }
};

inline bool same_container(const Container& a, const Container& b) {
  if (&a == &b) return true;
  if (a.indices != b.indices || !a.shapes->same_structure(*b.shapes)) return false;
  for (int i = 0; i < a.index_count(); ++i)
    for (int s = 0; s < a.shape_count(); ++s)
      if (!a.fiber(i, s).same_structure(b.fiber(i, s))) return false;
  return true;
}

inline ValidationReport validate_cart(const CartMorphism& m) {
  ValidationReport r;
  const auto& src = *m.source;
  const auto& tgt = *m.target;
  if (src.indices != tgt.indices) {
    r.add("index sets differ");
    return r;
  }
  if (!GFunctor::same_groupoid(m.shape.source, src.shapes) || !GFunctor::same_groupoid(m.shape.target, tgt.shapes)) {
    r.add("shape functor has wrong endpoints");
    return r;
  }
  r.merge(validate_functor(m.shape), "shape functor: ");
  if (!r.ok()) return r;
  if (static_cast<int>(m.pos.size()) != src.index_count()) {
    r.add("position table has wrong size");
    return r;
  }
  for (int i = 0; i < src.index_count(); ++i) {
    if (static_cast<int>(m.pos[i].size()) != src.shape_count()) {
      r.add("position table has wrong size at " + src.indices[i]);
      continue;
    }
    for (int s = 0; s < src.shape_count(); ++s) {
      const auto& p = m.pos[i][s];
      std::string where = src.indices[i] + "@" + src.shapes->object_name(s) + ": ";
      if (!GFunctor::same_groupoid(p.source, tgt.positions[i].fibers[m.shape(s)]) ||
          !GFunctor::same_groupoid(p.target, src.positions[i].fibers[s])) {
        r.add(where + "position functor has wrong endpoints");
        continue;
      }
      auto v = validate_functor(p);
      r.merge(v, where);
      if (v.ok() && !is_equivalence_functor(p).equivalence()) r.add(where + "position map is not an equivalence");
    }
  }
  if (!r.ok()) return r;
  for (int i = 0; i < src.index_count(); ++i)
    for (int k = 0; k < src.shapes->morphism_count(); ++k) {
      int s = src.shapes->src(k), s2 = src.shapes->dst(k);
      auto lhs = compose(src.transport(i, k), m.pos[i][s]);
      auto rhs = compose(m.pos[i][s2], tgt.transport(i, m.shape.on_morphism(k)));
      if (lhs.object_map != rhs.object_map || lhs.morphism_map != rhs.morphism_map)
        r.add("naturality fails at " + src.indices[i] + ", " + src.shapes->morphism_name(k));
    }
  return r;
}

/// Functor between two groupoids sharing object and morphism numbering.
inline GFunctor same_numbering(const GroupoidRef& from, const GroupoidRef& to) {
  auto id = identity_functor(from);
  return GFunctor{from, to, id.object_map, id.morphism_map};
}

/// Functor between discrete groupoids given by its object map.
inline GFunctor discrete_map(const GroupoidRef& from, const GroupoidRef& to, const std::vector<int>& objects) {
  std::vector<int> mors;
  for (int m = 0; m < from->morphism_count(); ++m) mors.push_back(to->identity(objects[from->src(m)]));
  return GFunctor{from, to, objects, mors};
}

inline CartMorphism id_cart(const ContainerRef& c) {
  CartMorphism m{c, c, identity_functor(c->shapes), {}};
  for (int i = 0; i < c->index_count(); ++i) {
    m.pos.emplace_back();
    for (int s = 0; s < c->shape_count(); ++s) m.pos[i].push_back(identity_functor(c->positions[i].fibers[s]));
  }
  return m;
}

/// g after f.
inline CartMorphism compose_cart(const CartMorphism& g, const CartMorphism& f) {
  if (!same_container(*f.target, *g.source)) throw PreconditionError("cartesian composition: containers do not match");
  CartMorphism h{f.source, g.target, compose(g.shape, f.shape), {}};
  for (int i = 0; i < f.source->index_count(); ++i) {
    h.pos.emplace_back();
    for (int s = 0; s < f.source->shape_count(); ++s) h.pos[i].push_back(compose(f.pos[i][s], g.pos[i][f.shape(s)]));
  }
  return h;
}

inline bool is_container_equivalence(const CartMorphism& m) { return is_equivalence_functor(m.shape).equivalence(); }

// ---------------------------------------------------------------------------
// Equality of morphisms up to a natural isomorphism of shape functors

/// Natural isomorphism f => g, searched component by component; `accept`
/// filters the component chosen at each object.
inline std::optional<std::vector<int>> find_natiso(const GFunctor& f, const GFunctor& g,
                                                   const std::function<bool(int, int)>& accept = {}) {
  const auto& s = *f.source;
  const auto& t = *f.target;
  std::vector<int> comp(s.object_count(), -1);
  for (const auto& cls : components(s)) {
    const int root = cls.front();
    bool found = false;
    for (int c : t.hom(f(root), g(root))) {
      bool ok = true;
      for (int x : cls) {
        int spoke = s.hom(root, x).front();
        // naturality forces comp[x] = g(spoke) o c o f(spoke)^-1
        comp[x] = t.compose(g.on_morphism(spoke), t.compose(c, t.inverse(f.on_morphism(spoke))));
        if (accept && !accept(x, comp[x])) { ok = false; break; }
      }
      for (int x : cls) {
        if (!ok) break;
        for (int y : cls)
          for (int m : s.hom(x, y))
            if (t.compose(comp[y], f.on_morphism(m)) != t.compose(g.on_morphism(m), comp[x])) { ok = false; break; }
      }
      if (ok) { found = true; break; }
    }
    if (!found) return std::nullopt;
  }
  return comp;
}

inline bool functors_isomorphic(const GFunctor& f, const GFunctor& g) {
  if (f == g) return true;
  return find_natiso(f, g).has_value();
}

struct MorphismEq {
  bool equal = false;
  bool strict = false;        // tables coincide
  std::vector<int> witness;   // shape components when equal
};

inline MorphismEq morphism_eq(const CartMorphism& lhs, const CartMorphism& rhs) {
  MorphismEq out;
  const auto& src = *lhs.source;
  const auto& tgt = *lhs.target;
  if (!same_container(src, *rhs.source) || !same_container(tgt, *rhs.target)) return out;
  bool strict = lhs.shape.object_map == rhs.shape.object_map && lhs.shape.morphism_map == rhs.shape.morphism_map;
  for (int i = 0; i < src.index_count() && strict; ++i)
    for (int s = 0; s < src.shape_count() && strict; ++s)
      strict = lhs.pos[i][s].object_map == rhs.pos[i][s].object_map &&
               lhs.pos[i][s].morphism_map == rhs.pos[i][s].morphism_map;
  if (strict) {
    out.equal = out.strict = true;
    for (int s = 0; s < src.shape_count(); ++s) out.witness.push_back(tgt.shapes->identity(lhs.shape(s)));
    return out;
  }
  auto coherent = [&](int s, int theta) {
    for (int i = 0; i < src.index_count(); ++i) {
      auto rhs_side = compose(rhs.pos[i][s], tgt.transport(i, theta));
      if (!functors_isomorphic(lhs.pos[i][s], rhs_side)) return false;
    }
    return true;
  };
  auto w = find_natiso(lhs.shape, rhs.shape, coherent);
  if (w) {
    out.equal = true;
    out.witness = std::move(*w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basic containers

inline GroupoidRef empty_ref() {
  static const GroupoidRef e = share(empty_groupoid());
  return e;
}

inline std::vector<std::string> unary_index() { return {"x"}; }

inline Container const_c(GroupoidRef a, std::vector<std::string> indices = unary_index()) {
  Container c{std::move(indices), a, {}};
  for (int i = 0; i < c.index_count(); ++i) c.positions.push_back(constant_family(a, empty_ref()));
  return c;
}

/// One shape; one position at index i, none elsewhere.
inline Container proj(std::vector<std::string> indices, int i) {
  auto one = unit_groupoid();
  Container c{std::move(indices), one, {}};
  c.check_index(i);
  for (int j = 0; j < c.index_count(); ++j) c.positions.push_back(constant_family(one, j == i ? one : empty_ref()));
  return c;
}

inline Container idc() { return proj(unary_index(), 0); }

/// Discrete container from shape names and per-shape, per-index position counts.
inline Container discrete_container(std::vector<std::string> indices, const std::vector<std::string>& shapes,
                                    const std::vector<std::vector<int>>& counts) {
  auto s = share(disc_named(shapes));
  Container c{std::move(indices), s, {}};
  for (int i = 0; i < c.index_count(); ++i) {
    std::vector<GroupoidRef> fibers;
    for (std::size_t k = 0; k < shapes.size(); ++k) fibers.push_back(share(disc(counts.at(k).at(i))));
    c.positions.push_back(make_family(s, [&](int a) { return fibers[a]; },
                                      [&](int m) { return identity_functor(fibers[m]); }));
  }
  return c;
}

/// (n ◁ [p_0, ...]) over a single index.
inline Container unary_discrete(const std::vector<int>& counts) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> cs;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    names.push_back("s" + std::to_string(k));
    cs.push_back({counts[k]});
  }
  return discrete_container(unary_index(), names, cs);
}

/// (1 ◁ P) for a groupoid of positions.
inline Container single_shape(GroupoidRef p, std::vector<std::string> indices = unary_index(), int at = 0) {
  auto one = unit_groupoid();
  Container c{std::move(indices), one, {}};
  for (int j = 0; j < c.index_count(); ++j) c.positions.push_back(constant_family(one, j == at ? p : empty_ref()));
  return c;
}

/// Unary container (base ◁ fam).
inline Container family_container(const GFamily& fam, std::vector<std::string> indices = unary_index(), int at = 0) {
  Container c{std::move(indices), fam.base, {}};
  for (int j = 0; j < c.index_count(); ++j) c.positions.push_back(j == at ? fam : constant_family(fam.base, empty_ref()));
  return c;
}

/// Adds a fresh index, last, with no positions.
inline Container weaken(const Container& f, const std::string& index = "*") {
  Container c = f;
  for (const auto& i : c.indices)
    if (i == index) throw PreconditionError("weaken: index already present: " + index);
  c.indices.push_back(index);
  c.positions.push_back(constant_family(f.shapes, empty_ref()));
  return c;
}

/// Same container with the index set replaced by one of the same size.
inline Container reindex(const Container& f, std::vector<std::string> indices) {
  if (indices.size() != f.indices.size()) throw PreconditionError("reindex: size mismatch");
  Container c = f;
  c.indices = std::move(indices);
  return c;
}

// ---------------------------------------------------------------------------
// Sum and product

struct SumContainer {
  ContainerRef container;
  ContainerRef left, right;
  MarkedSum shapes;
};

inline SumContainer sum_c(const ContainerRef& f, const ContainerRef& g) {
  if (f->indices != g->indices) throw PreconditionError("sum: index sets differ");
  auto shapes = sum_groupoid(f->shapes, g->shapes);
  Container c{f->indices, shapes.sum, {}};
  for (int i = 0; i < f->index_count(); ++i) c.positions.push_back(sum_over_sum(shapes, f->positions[i], g->positions[i]));
  return SumContainer{share(std::move(c)), f, g, std::move(shapes)};
}

struct ProductContainer {
  ContainerRef container;
  ContainerRef left, right;
  ProductGroupoid shapes;
  std::vector<std::vector<MarkedSum>> sums;  // [index][shape]: P_i(s) ⊕ Q_i(t)
};

inline ProductContainer prod_c(const ContainerRef& f, const ContainerRef& g) {
  if (f->indices != g->indices) throw PreconditionError("product: index sets differ");
  auto shapes = product_groupoid(f->shapes, g->shapes);
  Container c{f->indices, shapes.product, {}};
  std::vector<std::vector<MarkedSum>> sums;
  for (int i = 0; i < f->index_count(); ++i) {
    auto fam = sum_over_product(shapes, f->positions[i], g->positions[i]);
    c.positions.push_back(std::move(fam.family));
    sums.push_back(std::move(fam.sums));
  }
  return ProductContainer{share(std::move(c)), f, g, std::move(shapes), std::move(sums)};
}

inline CartMorphism sum_map(const SumContainer& from, const SumContainer& to, const CartMorphism& f,
                            const CartMorphism& g) {
  const auto& a = from.shapes;
  const auto& b = to.shapes;
  CartMorphism m{from.container, to.container,
                 make_functor(a.sum, b.sum,
                              [&](int x) {
                                return a.is_left_object(x) ? b.inl_object(f.shape(a.strip_object(x)))
                                                           : b.inr_object(g.shape(a.strip_object(x)));
                              },
                              [&](int k) {
                                return a.is_left_morphism(k) ? b.inl_morphism(f.shape.on_morphism(a.strip_morphism(k)))
                                                             : b.inr_morphism(g.shape.on_morphism(a.strip_morphism(k)));
                              }),
                 {}};
  for (int i = 0; i < from.container->index_count(); ++i) {
    m.pos.emplace_back();
    for (int x = 0; x < a.sum->object_count(); ++x)
      m.pos[i].push_back(a.is_left_object(x) ? f.pos[i][a.strip_object(x)] : g.pos[i][a.strip_object(x)]);
  }
  return m;
}

inline CartMorphism prod_map(const ProductContainer& from, const ProductContainer& to, const CartMorphism& f,
                             const CartMorphism& g) {
  const auto& a = from.shapes;
  const auto& b = to.shapes;
  CartMorphism m{from.container, to.container,
                 make_functor(a.product, b.product,
                              [&](int x) { return b.object(f.shape(a.left_object(x)), g.shape(a.right_object(x))); },
                              [&](int k) {
                                return b.morphism(f.shape.on_morphism(a.left_morphism(k)),
                                                  g.shape.on_morphism(a.right_morphism(k)));
                              }),
                 {}};
  for (int i = 0; i < from.container->index_count(); ++i) {
    m.pos.emplace_back();
    for (int x = 0; x < a.product->object_count(); ++x) {
      int s = a.left_object(x), t = a.right_object(x);
      const auto& src = to.sums[i][m.shape(x)];
      const auto& dst = from.sums[i][x];
      const auto& fp = f.pos[i][s];
      const auto& gp = g.pos[i][t];
      m.pos[i].push_back(make_functor(
          src.sum, dst.sum,
          [&](int o) {
            return src.is_left_object(o) ? dst.inl_object(fp(src.strip_object(o))) : dst.inr_object(gp(src.strip_object(o)));
          },
          [&](int k) {
            return src.is_left_morphism(k) ? dst.inl_morphism(fp.on_morphism(src.strip_morphism(k)))
                                           : dst.inr_morphism(gp.on_morphism(src.strip_morphism(k)));
          }));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Substitution F[G]: the last index of F is substituted by G

struct SubstContainer {
  ContainerRef container;
  ContainerRef outer, inner;
  FunFamily fun;        // over outer shapes: Fun(P_*(s), inner shapes)
  SigmaGroupoid shapes; // objects (s, f)
  // [index][shape (s,f)]: P_i(s) ⊕ Σ_{p} Q_i(f p)
  std::vector<std::vector<MarkedSum>> sums;
  std::vector<std::vector<SigmaGroupoid>> inner_sigma;

  int star() const { return outer->index_count() - 1; }
  const GFunctor& assignment(int shape) const {
    auto [s, k] = shapes.objects.at(shape);
    return fun.fun.at(s).functors.at(k);
  }
  int outer_shape(int shape) const { return shapes.objects.at(shape).first; }
  /// Shape object (s, f) for a functor f out of P_*(s).
  std::optional<int> find_shape(int s, const GFunctor& f) const {
    auto k = fun.fun.at(s).find(f);
    if (!k) return std::nullopt;
    return shapes.object(s, *k);
  }
};

inline void check_subst_indices(const Container& f, const Container& g) {
  if (f.index_count() != g.index_count() + 1 ||
      !std::equal(g.indices.begin(), g.indices.end(), f.indices.begin()))
    throw PreconditionError("substitution: outer indices must be the inner ones plus a final recursive index");
}

inline SubstContainer subst(const ContainerRef& f, const ContainerRef& g, const Limits& limits = default_limits()) {
  check_subst_indices(*f, *g);
  SubstContainer out;
  out.outer = f;
  out.inner = g;
  const int star = f->index_count() - 1;
  out.fun = fun_family(f->positions[star], g->shapes, limits);
  out.shapes = sigma_groupoid(out.fun.family, limits, false);
  const auto& sh = out.shapes;
  const auto& base = *f->shapes;
  Container c{g->indices, sh.total, {}};
  for (int i = 0; i < g->index_count(); ++i) {
    std::vector<MarkedSum> sums;
    std::vector<SigmaGroupoid> sigmas;
    std::vector<GroupoidRef> fibers;
    for (int x = 0; x < sh.total->object_count(); ++x) {
      auto [s, k] = sh.objects[x];
      const auto& fn = out.fun.fun[s].functors[k];
      sigmas.push_back(sigma_groupoid(pullback(g->positions[i], fn), limits, false));
      sums.push_back(sum_groupoid(f->positions[i].fibers[s], sigmas.back().total));
      fibers.push_back(sums.back().sum);
    }
    std::vector<GFunctor> transport;
    for (int m = 0; m < sh.total->morphism_count(); ++m) {
      auto [phi, k] = sh.morphisms[m];
      const int x = sh.total->src(m), x2 = sh.total->dst(m);
      const int s2 = base.dst(phi);
      const auto& comps = out.fun.fun[s2].components[k];
      const auto& outer_t = f->transport(i, phi);
      const auto& star_t = f->transport(star, phi);
      const auto& from = sums[x];
      const auto& to = sums[x2];
      const auto& sf = sigmas[x];
      const auto& sg = sigmas[x2];
      transport.push_back(make_functor(
          from.sum, to.sum,
          [&](int o) {
            if (from.is_left_object(o)) return to.inl_object(outer_t(from.strip_object(o)));
            auto [p, q] = sf.objects[from.strip_object(o)];
            int y = star_t(p);
            return to.inr_object(sg.object(y, g->transport(i, comps[y])(q)));
          },
          [&](int km) {
            if (from.is_left_morphism(km)) return to.inl_morphism(outer_t.on_morphism(from.strip_morphism(km)));
            auto [pi, chi] = sf.morphisms[from.strip_morphism(km)];
            int y2 = star_t(f->fiber(star, base.src(phi)).dst(pi));
            return to.inr_morphism(sg.morphism(star_t.on_morphism(pi), g->transport(i, comps[y2]).on_morphism(chi)));
          }));
    }
    c.positions.push_back(GFamily{sh.total, std::move(fibers), std::move(transport)});
    out.sums.push_back(std::move(sums));
    out.inner_sigma.push_back(std::move(sigmas));
  }
  out.container = share(std::move(c));
  return out;
}

/// F[m] : F[G] ⊸ F[G'] for m : G ⊸ G'.
inline CartMorphism subst_map(const SubstContainer& from, const SubstContainer& to, const CartMorphism& m) {
  if (!same_container(*from.outer, *to.outer)) throw PreconditionError("subst_map: outer containers differ");
  const auto& f = *from.outer;
  const auto& base = *f.shapes;
  const int star = from.star();
  const auto& sh = from.shapes;
  std::vector<int> objs;
  for (int x = 0; x < sh.total->object_count(); ++x) {
    auto y = to.find_shape(sh.objects[x].first, compose(m.shape, from.assignment(x)));
    if (!y) throw Error("subst_map: composite assignment missing");
    objs.push_back(*y);
  }
  std::vector<int> mors;
  for (int k = 0; k < sh.total->morphism_count(); ++k) {
    auto [phi, nat] = sh.morphisms[k];
    const int s2 = base.dst(phi);
    std::vector<int> comps;
    for (int c : from.fun.fun[s2].components[nat]) comps.push_back(m.shape.on_morphism(c));
    const auto& ts = to.shapes;
    int src_fun = to.fun.family.along(phi)(ts.objects[objs[sh.total->src(k)]].second);
    auto nk = to.fun.fun[s2].find_morphism(src_fun, ts.objects[objs[sh.total->dst(k)]].second, comps);
    if (!nk) throw Error("subst_map: transformation missing");
    mors.push_back(ts.morphism(phi, *nk));
  }
  CartMorphism out{from.container, to.container, GFunctor{sh.total, to.shapes.total, objs, mors}, {}};
  for (int i = 0; i < from.container->index_count(); ++i) {
    out.pos.emplace_back();
    for (int x = 0; x < sh.total->object_count(); ++x) {
      const auto& fn = from.assignment(x);
      const auto& src = to.sums[i][objs[x]];
      const auto& dst = from.sums[i][x];
      const auto& ssig = to.inner_sigma[i][objs[x]];
      const auto& dsig = from.inner_sigma[i][x];
      const auto& pstar = f.fiber(star, sh.objects[x].first);
      out.pos[i].push_back(make_functor(
          src.sum, dst.sum,
          [&](int o) {
            if (src.is_left_object(o)) return dst.inl_object(src.strip_object(o));
            auto [p, q] = ssig.objects[src.strip_object(o)];
            return dst.inr_object(dsig.object(p, m.pos[i][fn(p)](q)));
          },
          [&](int km) {
            if (src.is_left_morphism(km)) return dst.inl_morphism(src.strip_morphism(km));
            auto [pi, chi] = ssig.morphisms[src.strip_morphism(km)];
            return dst.inr_morphism(dsig.morphism(pi, m.pos[i][fn(pstar.dst(pi))].on_morphism(chi)));
          }));
    }
  }
  return out;
}

/// ⟦F⟧ X: Σ over shapes of the product over indices of Fun(P_i(s), X_i).
inline SigmaGroupoid extension(const Container& f, const std::vector<GroupoidRef>& xs,
                               const Limits& limits = default_limits()) {
  if (static_cast<int>(xs.size()) != f.index_count()) throw PreconditionError("extension: one groupoid per index");
  GFamily acc = constant_family(f.shapes, unit_groupoid());
  for (int i = 0; i < f.index_count(); ++i) {
    auto fam = fun_family(f.positions[i], xs[i], limits);
    acc = pointwise_product(acc, fam.family).family;
  }
  return sigma_groupoid(acc, limits, false);
}

// ---------------------------------------------------------------------------
// Derivative

struct DerivContainer {
  ContainerRef container;
  ContainerRef base;
  int index = 0;
  SubFamily isolated;              // isolated positions at `index`
  SigmaGroupoid shapes;            // objects (s, isolated position as sub index)
  std::vector<RemovalResult> removal;  // per derivative shape

  int base_shape(int x) const { return shapes.objects.at(x).first; }
  /// The removed position, as an object of the base fiber.
  int hole(int x) const {
    auto [s, k] = shapes.objects.at(x);
    return isolated.subs[s].object_to_base[k];
  }
  std::optional<int> find_shape(int s, int position) const {
    int k = isolated.subs.at(s).base_object_to_sub.at(position);
    if (k < 0) return std::nullopt;
    return shapes.object(s, k);
  }
  /// Morphism (φ, ψ) of ∂-shapes, ψ given as a morphism of the base fiber.
  int lift_morphism(int shape_morphism, int fiber_morphism) const {
    const int t = base->shapes->dst(shape_morphism);
    return shapes.morphism(shape_morphism, isolated.subs.at(t).base_morphism_to_sub.at(fiber_morphism));
  }
  /// The hole part ψ of a ∂-shape morphism, as a morphism of the base fiber.
  int fiber_morphism(int k) const {
    auto [phi, psi] = shapes.morphisms.at(k);
    return isolated.subs.at(base->shapes->dst(phi)).morphism_to_base.at(psi);
  }
};

inline DerivContainer derivative(const ContainerRef& f, int i, const Limits& limits = default_limits()) {
  f->check_index(i);
  DerivContainer d;
  d.base = f;
  d.index = i;
  const auto& p = f->positions[i];
  d.isolated = subfamily(p, [&](int s) { return isolated_subgroupoid(p.fibers[s]).members; });
  d.shapes = sigma_groupoid(d.isolated.family, limits, false);
  const auto& sh = d.shapes;
  std::vector<Subgroupoid> subs;
  for (int x = 0; x < sh.total->object_count(); ++x) {
    d.removal.push_back(remove_point(p.fibers[sh.objects[x].first], d.hole(x)));
    subs.push_back(d.removal.back().sub);
  }
  Container c{f->indices, sh.total, {}};
  auto proj_fn = sigma_projection(sh);
  for (int j = 0; j < f->index_count(); ++j) {
    if (j != i) {
      c.positions.push_back(pullback(f->positions[j], proj_fn));
      continue;
    }
    auto fam = restrict_family(sh.total, subs, [&](int m) -> const GFunctor& { return p.along(sh.morphisms[m].first); });
    c.positions.push_back(std::move(fam.family));
  }
  d.container = share(std::move(c));
  return d;
}

inline DerivContainer derivative(const ContainerRef& f, const std::string& index, const Limits& limits = default_limits()) {
  return derivative(f, f->index_of(index), limits);
}

/// ∂m : ∂F ⊸ ∂G for m : F ⊸ G, both derivatives taken at the same index.
inline CartMorphism der_map(const CartMorphism& m, const DerivContainer& from, const DerivContainer& to) {
  if (from.index != to.index) throw PreconditionError("der_map: derivatives at different indices");
  const int i = from.index;
  const auto& f = *m.source;
  const auto& g = *m.target;
  const auto& fsh = from.shapes;
  std::vector<int> objs;
  for (int x = 0; x < fsh.total->object_count(); ++x) {
    const int s = from.base_shape(x), p = from.hole(x);
    const int t = m.shape(s);
    const auto& back = m.pos[i][s];
    int exact = -1, any = -1;
    for (int q : to.isolated.subs[t].object_to_base) {
      if (back(q) == p) { exact = q; break; }
      if (any < 0 && f.fiber(i, s).connected(back(q), p)) any = q;
    }
    int q = exact >= 0 ? exact : any;
    if (q < 0) throw Error("der_map: no isolated preimage of the hole");
    objs.push_back(*to.find_shape(t, q));
  }
  std::vector<int> mors;
  for (int k = 0; k < fsh.total->morphism_count(); ++k) {
    const int phi = fsh.morphisms[k].first;
    const int y = objs[fsh.total->src(k)], y2 = objs[fsh.total->dst(k)];
    const int gphi = m.shape.on_morphism(phi);
    const int t2 = to.base_shape(y2);
    const int moved = g.transport(i, gphi)(to.hole(y));
    auto h = g.fiber(i, t2).hom(moved, to.hole(y2));
    if (h.size() != 1) throw Error("der_map: holes are not uniquely connected");
    const auto& sub = to.isolated.subs[t2];
    mors.push_back(to.shapes.morphism(gphi, sub.base_morphism_to_sub[h[0]]));
  }
  CartMorphism out{from.container, to.container, GFunctor{fsh.total, to.shapes.total, objs, mors}, {}};
  for (int j = 0; j < f.index_count(); ++j) {
    out.pos.emplace_back();
    for (int x = 0; x < fsh.total->object_count(); ++x) {
      const int s = from.base_shape(x);
      const auto& back = m.pos[j][s];
      if (j != i) {
        out.pos[j].push_back(back);
        continue;
      }
      const auto& src = to.removal[objs[x]].sub;
      const auto& dst = from.removal[x].sub;
      out.pos[j].push_back(make_functor(
          src.sub, dst.sub, [&](int o) { return dst.base_object_to_sub[back(src.object_to_base[o])]; },
          [&](int km) { return dst.base_morphism_to_sub[back.on_morphism(src.morphism_to_base[km])]; }));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full sub-containers on a subset of shapes

struct RestrictedContainer {
  ContainerRef container;
  ContainerRef base;
  Subgroupoid shapes;
};

/// Full sub-container on the given shapes; position fibers are shared with the base.
inline RestrictedContainer restrict_shapes(const ContainerRef& c, std::vector<int> objects) {
  auto sub = full_subgroupoid(c->shapes, std::move(objects));
  auto incl = make_functor(sub.sub, c->shapes, [&](int x) { return sub.object_to_base[x]; },
                           [&](int m) { return sub.morphism_to_base[m]; });
  Container r{c->indices, sub.sub, {}};
  for (const auto& fam : c->positions) r.positions.push_back(pullback(fam, incl));
  return RestrictedContainer{share(std::move(r)), c, std::move(sub)};
}

/// m : X ⊸ C seen as X ⊸ R for a restriction R of C containing its image.
inline CartMorphism factor_through(const CartMorphism& m, const RestrictedContainer& r) {
  const auto& sub = r.shapes;
  std::vector<int> objs, mors;
  for (int x : m.shape.object_map) {
    const int y = sub.base_object_to_sub.at(x);
    if (y < 0) throw PreconditionError("factor_through: image leaves the restriction");
    objs.push_back(y);
  }
  for (int k : m.shape.morphism_map) mors.push_back(sub.base_morphism_to_sub.at(k));
  CartMorphism out{m.source, r.container, GFunctor{m.shape.source, sub.sub, objs, mors}, m.pos};
  return out;
}

/// Truncation flags reported for derivatives.
struct TruncationFlags {
  bool discrete_positions = false;
  bool setlike_shapes = false;
};

inline TruncationFlags truncation_flags(const Container& c) {
  return TruncationFlags{c.positions_discrete(), c.shapes->is_setlike()};
}

} // namespace contcalc
