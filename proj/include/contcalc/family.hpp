#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "contcalc/functor.hpp"

namespace contcalc {

inline GFunctor make_functor(GroupoidRef source, GroupoidRef target,
                             const std::function<int(int)>& on_object,
                             const std::function<int(int)>& on_morphism) {
  GFunctor f{std::move(source), std::move(target), {}, {}};
  f.object_map.reserve(f.source->object_count());
  f.morphism_map.reserve(f.source->morphism_count());
  for (int a = 0; a < f.source->object_count(); ++a) f.object_map.push_back(on_object(a));
  for (int m = 0; m < f.source->morphism_count(); ++m) f.morphism_map.push_back(on_morphism(m));
  return f;
}

/// A strict functor from `base` into groupoids: one fiber per object, one
/// transport functor per morphism.
struct GFamily {
  GroupoidRef base;
  std::vector<GroupoidRef> fibers;
  std::vector<GFunctor> transport;

  const FinGroupoid& fiber(int a) const { return *fibers.at(a); }
  const GroupoidRef& fiber_ref(int a) const { return fibers.at(a); }
  const GFunctor& along(int m) const { return transport.at(m); }
};

inline GFamily make_family(GroupoidRef base, const std::function<GroupoidRef(int)>& fiber,
                           const std::function<GFunctor(int)>& transport) {
  GFamily b{std::move(base), {}, {}};
  for (int a = 0; a < b.base->object_count(); ++a) b.fibers.push_back(fiber(a));
  for (int m = 0; m < b.base->morphism_count(); ++m) b.transport.push_back(transport(m));
  return b;
}

inline GFamily constant_family(GroupoidRef base, GroupoidRef fiber) {
  auto id = identity_functor(fiber);
  return make_family(std::move(base), [&](int) { return fiber; }, [&](int) { return id; });
}

inline ValidationReport validate_family(const GFamily& b) {
  ValidationReport r;
  const auto& base = *b.base;
  if (static_cast<int>(b.fibers.size()) != base.object_count() ||
      static_cast<int>(b.transport.size()) != base.morphism_count()) {
    r.add("family tables have wrong size");
    return r;
  }
  for (int m = 0; m < base.morphism_count(); ++m) {
    const auto& t = b.transport[m];
    if (!GFunctor::same_groupoid(t.source, b.fibers[base.src(m)]) ||
        !GFunctor::same_groupoid(t.target, b.fibers[base.dst(m)])) {
      r.add("transport along " + base.morphism_name(m) + " has wrong endpoints");
      continue;
    }
    r.merge(validate_functor(t), "transport along " + base.morphism_name(m) + ": ");
  }
  if (!r.ok()) return r;
  for (int a = 0; a < base.object_count(); ++a) {
    const auto& t = b.transport[base.identity(a)];
    if (t.object_map != identity_functor(b.fibers[a]).object_map ||
        t.morphism_map != identity_functor(b.fibers[a]).morphism_map)
      r.add("transport along identity of " + base.object_name(a) + " is not the identity");
  }
  for (const auto& [k, h] : base.compose_table()) {
    int g = static_cast<int>(k >> 32), f = static_cast<int>(k & 0xffffffffu);
    auto gf = compose(b.transport[g], b.transport[f]);
    if (gf.object_map != b.transport[h].object_map || gf.morphism_map != b.transport[h].morphism_map)
      r.add("transport not strictly functorial at " + base.morphism_name(g) + " o " +
            base.morphism_name(f));
  }
  return r;
}

/// Family over `c` obtained by precomposing with a functor into the base.
inline GFamily pullback(const GFamily& b, const GFunctor& f) {
  return make_family(f.source, [&](int c) { return b.fibers.at(f(c)); },
                     [&](int m) { return b.transport.at(f.on_morphism(m)); });
}

/// Family whose fiber at `a` is the full subgroupoid `subs[a]` of the fiber of
/// `ambient`; transports are restrictions and must preserve the subsets.
struct SubFamily {
  GFamily family;
  std::vector<Subgroupoid> subs;
};

inline SubFamily restrict_family(GroupoidRef base, std::vector<Subgroupoid> subs,
                                 const std::function<const GFunctor&(int)>& ambient) {
  SubFamily out{GFamily{base, {}, {}}, std::move(subs)};
  for (const auto& s : out.subs) out.family.fibers.push_back(s.sub);
  for (int m = 0; m < base->morphism_count(); ++m) {
    const auto& from = out.subs[base->src(m)];
    const auto& to = out.subs[base->dst(m)];
    const GFunctor& t = ambient(m);
    auto f = make_functor(
        from.sub, to.sub,
        [&](int x) {
          int y = to.base_object_to_sub[t(from.object_to_base[x])];
          if (y < 0) throw PreconditionError("transport leaves the chosen subfamily");
          return y;
        },
        [&](int k) { return to.base_morphism_to_sub[t.on_morphism(from.morphism_to_base[k])]; });
    out.family.transport.push_back(std::move(f));
  }
  return out;
}

inline SubFamily subfamily(const GFamily& b, const std::function<std::vector<int>(int)>& objects) {
  std::vector<Subgroupoid> subs;
  for (int a = 0; a < b.base->object_count(); ++a) subs.push_back(full_subgroupoid(b.fibers[a], objects(a)));
  return restrict_family(b.base, std::move(subs), [&](int m) -> const GFunctor& { return b.transport[m]; });
}

// ---------------------------------------------------------------------------
// Grothendieck construction

/// Σ of a family. Objects (a, x) are ordered a-major; morphisms (f, φ) with
/// φ : transport(f)(x) -> x' are ordered f-major.
struct SigmaGroupoid {
  GFamily family;
  GroupoidRef total;
  std::vector<int> object_offset;    // per base object
  std::vector<int> morphism_offset;  // per base morphism
  std::vector<std::pair<int, int>> objects;
  std::vector<std::pair<int, int>> morphisms;

  int object(int a, int x) const { return object_offset.at(a) + x; }
  int morphism(int f, int phi) const { return morphism_offset.at(f) + phi; }
  int base_of(int obj) const { return objects.at(obj).first; }
  int fiber_of(int obj) const { return objects.at(obj).second; }
};

inline SigmaGroupoid sigma_groupoid(const GFamily& b, const Limits& limits = default_limits(),
                                    bool validate = true) {
  if (validate) {
    auto rep = validate_family(b);
    if (!rep.ok()) throw PreconditionError("invalid family: " + rep.violations.front());
  }
  SigmaGroupoid s;
  s.family = b;
  const auto& base = *b.base;
  std::uint64_t cells = 0;
  GroupoidBuilder bl;
  for (int a = 0; a < base.object_count(); ++a) {
    s.object_offset.push_back(bl.object_count());
    for (int x = 0; x < b.fiber(a).object_count(); ++x) {
      bl.add_object("(" + base.object_name(a) + "," + b.fiber(a).object_name(x) + ")");
      s.objects.emplace_back(a, x);
    }
  }
  for (int f = 0; f < base.morphism_count(); ++f) {
    s.morphism_offset.push_back(bl.morphism_count());
    const int a = base.src(f), a2 = base.dst(f);
    const auto& back = b.transport[base.inverse(f)];
    const auto& fib = b.fiber(a2);
    cells += fib.morphism_count();
    if (cells > limits.max_cells) throw SizeError("sigma groupoid exceeds cell cap");
    for (int phi = 0; phi < fib.morphism_count(); ++phi) {
      int x = back(fib.src(phi));
      bl.add_morphism("(" + base.morphism_name(f) + "," + fib.morphism_name(phi) + ")",
                      s.object_offset[a] + x, s.object_offset[a2] + fib.dst(phi));
      s.morphisms.emplace_back(f, phi);
    }
  }
  bl.fill(
      [&](int obj) {
        auto [a, x] = s.objects[obj];
        return s.morphism(base.identity(a), b.fiber(a).identity(x));
      },
      [&](int m) {
        auto [f, phi] = s.morphisms[m];
        int fi = base.inverse(f);
        return s.morphism(fi, b.transport[fi].on_morphism(b.fiber(base.dst(f)).inverse(phi)));
      },
      [&](int g, int f) {
        auto [fg, psi] = s.morphisms[g];
        auto [ff, phi] = s.morphisms[f];
        int h = base.compose(fg, ff);
        return s.morphism(h, b.fiber(base.dst(fg)).compose(psi, b.transport[fg].on_morphism(phi)));
      });
  s.total = bl.build_ref();
  return s;
}

/// Projection Σ B -> base.
inline GFunctor sigma_projection(const SigmaGroupoid& s) {
  return make_functor(s.total, s.family.base, [&](int o) { return s.objects[o].first; },
                      [&](int m) { return s.morphisms[m].first; });
}

// ---------------------------------------------------------------------------
// Families built from other families

/// Fiberwise sum over a common base.
struct SumFamily {
  GFamily family;
  std::vector<MarkedSum> sums;
};

inline SumFamily pointwise_sum(const GFamily& a, const GFamily& b) {
  SumFamily out{GFamily{a.base, {}, {}}, {}};
  for (int x = 0; x < a.base->object_count(); ++x) {
    out.sums.push_back(sum_groupoid(a.fibers[x], b.fibers[x]));
    out.family.fibers.push_back(out.sums.back().sum);
  }
  for (int m = 0; m < a.base->morphism_count(); ++m) {
    const auto& from = out.sums[a.base->src(m)];
    const auto& to = out.sums[a.base->dst(m)];
    const auto& ta = a.transport[m];
    const auto& tb = b.transport[m];
    out.family.transport.push_back(make_functor(
        from.sum, to.sum,
        [&](int o) {
          return from.is_left_object(o) ? to.inl_object(ta(from.strip_object(o)))
                                        : to.inr_object(tb(from.strip_object(o)));
        },
        [&](int k) {
          return from.is_left_morphism(k) ? to.inl_morphism(ta.on_morphism(from.strip_morphism(k)))
                                          : to.inr_morphism(tb.on_morphism(from.strip_morphism(k)));
        }));
  }
  return out;
}

/// Fiberwise product over a common base.
struct ProductFamily {
  GFamily family;
  std::vector<ProductGroupoid> products;
};

inline ProductFamily pointwise_product(const GFamily& a, const GFamily& b) {
  ProductFamily out{GFamily{a.base, {}, {}}, {}};
  for (int x = 0; x < a.base->object_count(); ++x) {
    out.products.push_back(product_groupoid(a.fibers[x], b.fibers[x]));
    out.family.fibers.push_back(out.products.back().product);
  }
  for (int m = 0; m < a.base->morphism_count(); ++m) {
    const auto& from = out.products[a.base->src(m)];
    const auto& to = out.products[a.base->dst(m)];
    const auto& ta = a.transport[m];
    const auto& tb = b.transport[m];
    out.family.transport.push_back(make_functor(
        from.product, to.product,
        [&](int o) { return to.object(ta(from.left_object(o)), tb(from.right_object(o))); },
        [&](int k) {
          return to.morphism(ta.on_morphism(from.left_morphism(k)), tb.on_morphism(from.right_morphism(k)));
        }));
  }
  return out;
}

/// Family over A ⊕ B restricting to `a` on the left and `b` on the right.
inline GFamily sum_over_sum(const MarkedSum& base, const GFamily& a, const GFamily& b) {
  return make_family(
      base.sum,
      [&](int o) { return base.is_left_object(o) ? a.fibers[base.strip_object(o)] : b.fibers[base.strip_object(o)]; },
      [&](int m) {
        return base.is_left_morphism(m) ? a.transport[base.strip_morphism(m)]
                                        : b.transport[base.strip_morphism(m)];
      });
}

/// Family over A × B with fiber P(a) ⊕ Q(b).
inline SumFamily sum_over_product(const ProductGroupoid& base, const GFamily& p, const GFamily& q) {
  auto left = make_family(base.product, [&](int o) { return p.fibers[base.left_object(o)]; },
                          [&](int m) { return p.transport[base.left_morphism(m)]; });
  auto right = make_family(base.product, [&](int o) { return q.fibers[base.right_object(o)]; },
                           [&](int m) { return q.transport[base.right_morphism(m)]; });
  return pointwise_sum(left, right);
}

/// Family with fiber Fun(P(a), X); transport along m sends F to F ∘ P(m)^-1.
struct FunFamily {
  GFamily family;
  std::vector<FunctorGroupoid> fun;
};

inline FunFamily fun_family(const GFamily& p, const GroupoidRef& x, const Limits& limits = default_limits()) {
  FunFamily out{GFamily{p.base, {}, {}}, {}};
  for (int a = 0; a < p.base->object_count(); ++a) {
    const auto& fa = p.fiber(a);
    if (!fa.is_discrete() && fa.object_count() > limits.max_functor_source)
      throw SizeError("functor groupoid source exceeds " + std::to_string(limits.max_functor_source) +
                      " objects");
    out.fun.push_back(functor_groupoid(p.fibers[a], x, limits));
    out.family.fibers.push_back(out.fun.back().groupoid);
  }
  const auto& base = *p.base;
  for (int m = 0; m < base.morphism_count(); ++m) {
    const auto& from = out.fun[base.src(m)];
    const auto& to = out.fun[base.dst(m)];
    const GFunctor& back = p.transport[base.inverse(m)];
    std::vector<int> objs;
    for (const auto& f : from.functors) {
      auto g = compose(f, back);
      auto idx = to.find(g);
      if (!idx) throw Error("functor family: transported functor not found");
      objs.push_back(*idx);
    }
    std::vector<int> mors;
    for (int k = 0; k < from.groupoid->morphism_count(); ++k) {
      std::vector<int> comps;
      for (int y = 0; y < back.source->object_count(); ++y) comps.push_back(from.components[k][back(y)]);
      auto idx = to.find_morphism(objs[from.groupoid->src(k)], objs[from.groupoid->dst(k)], comps);
      if (!idx) throw Error("functor family: transported transformation not found");
      mors.push_back(*idx);
    }
    out.family.transport.push_back(GFunctor{from.groupoid, to.groupoid, std::move(objs), std::move(mors)});
  }
  return out;
}

} // namespace contcalc
