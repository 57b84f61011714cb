#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contcalc/family.hpp"
#include "contcalc/invariant.hpp"

namespace contcalc {

// ---------------------------------------------------------------------------
// Isolated points

inline bool is_isolated(const FinGroupoid& g, int a) {
  g.check_object(a);
  for (int b = 0; b < g.object_count(); ++b)
    if (g.hom(a, b).size() > 1) return false;
  return true;
}

struct IsolatedSet {
  GroupoidRef base;
  std::vector<int> members;
  Subgroupoid sub;

  bool contains(int a) const { return sub.base_object_to_sub.at(a) >= 0; }
};

inline IsolatedSet isolated_subgroupoid(const GroupoidRef& g) {
  std::vector<int> members;
  for (int a = 0; a < g->object_count(); ++a)
    if (is_isolated(*g, a)) members.push_back(a);
  auto sub = full_subgroupoid(g, members);
  return IsolatedSet{g, std::move(members), std::move(sub)};
}

/// Isolated(A ⊕ B) ≅ Isolated(A) ⊎ Isolated(B), both directions.
struct IsolatedSumSplit {
  struct Side {
    bool left;
    int point;
    bool operator==(const Side&) const = default;
  };
  std::vector<int> sum_points;     // isolated objects of the sum
  std::vector<Side> forward;       // parallel to sum_points
  std::vector<int> backward_left;  // isolated point of A -> object of sum
  std::vector<int> backward_right;
  bool verified = false;
};

inline void check_marking(const MarkedSum& s) {
  if (s.sum->object_count() != s.left->object_count() + s.right->object_count() ||
      s.sum->morphism_count() != s.left->morphism_count() + s.right->morphism_count())
    throw PreconditionError("sum marking inconsistent with the groupoid");
  for (int m = 0; m < s.sum->morphism_count(); ++m)
    if (s.is_left_object(s.sum->src(m)) != s.is_left_morphism(m))
      throw PreconditionError("sum marking inconsistent with the groupoid");
}

inline IsolatedSumSplit isolated_sum_split(const MarkedSum& s) {
  check_marking(s);
  IsolatedSumSplit out;
  for (int x = 0; x < s.sum->object_count(); ++x) {
    if (!is_isolated(*s.sum, x)) continue;
    out.sum_points.push_back(x);
    out.forward.push_back({s.is_left_object(x), s.strip_object(x)});
  }
  for (int a = 0; a < s.left->object_count(); ++a)
    if (is_isolated(*s.left, a)) out.backward_left.push_back(s.inl_object(a));
  for (int b = 0; b < s.right->object_count(); ++b)
    if (is_isolated(*s.right, b)) out.backward_right.push_back(s.inr_object(b));
  // pointwise: forward lands in isolated points and backward undoes it
  bool ok = out.sum_points.size() == out.backward_left.size() + out.backward_right.size();
  for (std::size_t k = 0; k < out.forward.size() && ok; ++k) {
    const auto& side = out.forward[k];
    const auto& g = side.left ? *s.left : *s.right;
    ok = is_isolated(g, side.point) &&
         (side.left ? s.inl_object(side.point) : s.inr_object(side.point)) == out.sum_points[k];
  }
  out.verified = ok;
  return out;
}

// ---------------------------------------------------------------------------
// Removal and Replace

struct RemovalResult {
  GroupoidRef base;
  int removed = -1;
  Subgroupoid sub;
  const GroupoidRef& result() const { return sub.sub; }
};

/// Full subgroupoid on objects not isomorphic to a0.
inline RemovalResult remove_point(const GroupoidRef& g, int a0) {
  g->check_object(a0);
  std::vector<int> keep;
  for (int b = 0; b < g->object_count(); ++b)
    if (!g->connected(a0, b)) keep.push_back(b);
  return RemovalResult{g, a0, full_subgroupoid(g, keep)};
}

inline GroupoidRef unit_groupoid() {
  static const GroupoidRef one = share(disc_named({"•"}));
  return one;
}

struct ReplaceResult {
  RemovalResult removal;
  MarkedSum domain;  // (G \ a0) ⊕ 1
  GFunctor functor;
  GEquivReport report;
};

/// (G \ a0) ⊕ 1 -> G: inclusion on the left, the extra point to a0.
inline ReplaceResult replace_functor(const GroupoidRef& g, int a0) {
  auto removal = remove_point(g, a0);
  auto domain = sum_groupoid(removal.result(), unit_groupoid());
  auto f = make_functor(
      domain.sum, g,
      [&](int x) { return domain.is_left_object(x) ? removal.sub.object_to_base[x] : a0; },
      [&](int m) {
        return domain.is_left_morphism(m) ? removal.sub.morphism_to_base[m] : g->identity(a0);
      });
  auto report = is_equivalence_functor(f);
  return ReplaceResult{std::move(removal), std::move(domain), std::move(f), report};
}

/// Quasi-inverse of Replace: a0's component goes to the extra point with all
/// its morphisms sent to the identity.
inline GFunctor replace_inverse(const ReplaceResult& r) {
  const auto& g = r.removal.base;
  const int a0 = r.removal.removed;
  if (!is_isolated(*g, a0)) throw PreconditionError("replace inverse needs an isolated point");
  const auto& sub = r.removal.sub;
  const auto& d = r.domain;
  return make_functor(
      g, d.sum,
      [&](int x) { return g->connected(a0, x) ? d.inr_object(0) : d.inl_object(sub.base_object_to_sub[x]); },
      [&](int m) {
        return g->connected(a0, g->src(m)) ? d.inr_morphism(0)
                                           : d.inl_morphism(sub.base_morphism_to_sub[m]);
      });
}

struct SumRemoveResult {
  RemovalResult removal;  // of the sum
  RemovalResult side_removal;
  MarkedSum target;       // (A \ a0) ⊕ B, or A ⊕ (B \ b0)
  GFunctor functor;
  GEquivReport report;
};

/// Canonical functor (A ⊕ B) \ inl(a0) -> (A \ a0) ⊕ B, or the right-hand analogue.
inline SumRemoveResult sum_remove(const MarkedSum& s, bool left_side, int point) {
  check_marking(s);
  const auto& side = left_side ? s.left : s.right;
  side->check_object(point);
  const int in_sum = left_side ? s.inl_object(point) : s.inr_object(point);
  auto removal = remove_point(s.sum, in_sum);
  auto side_removal = remove_point(side, point);
  auto target = left_side ? sum_groupoid(side_removal.result(), s.right)
                          : sum_groupoid(s.left, side_removal.result());
  const auto& sub = removal.sub;
  const auto& sr = side_removal.sub;
  auto f = make_functor(
      sub.sub, target.sum,
      [&](int x) {
        int y = sub.object_to_base[x];
        bool l = s.is_left_object(y);
        int z = s.strip_object(y);
        if (l == left_side) z = sr.base_object_to_sub[z];
        return l ? target.inl_object(z) : target.inr_object(z);
      },
      [&](int m) {
        int k = sub.morphism_to_base[m];
        bool l = s.is_left_morphism(k);
        int z = s.strip_morphism(k);
        if (l == left_side) z = sr.base_morphism_to_sub[z];
        return l ? target.inl_morphism(z) : target.inr_morphism(z);
      });
  auto report = is_equivalence_functor(f);
  return SumRemoveResult{std::move(removal), std::move(side_removal), std::move(target), std::move(f), report};
}

// ---------------------------------------------------------------------------
// Σ and isolated points

/// Fiber at a is hom(a0, a) as a discrete groupoid; transport is postcomposition.
inline GFamily singleton_family(const GroupoidRef& g, int a0) {
  g->check_object(a0);
  std::vector<GroupoidRef> fibers;
  for (int a = 0; a < g->object_count(); ++a) {
    std::vector<std::string> names;
    for (int m : g->hom(a0, a)) names.push_back(g->morphism_name(m));
    fibers.push_back(share(disc_named(names)));
  }
  auto position = [&](int a, int m) {
    auto h = g->hom(a0, a);
    return static_cast<int>(std::find(h.begin(), h.end(), m) - h.begin());
  };
  return make_family(
      g, [&](int a) { return fibers[a]; },
      [&](int m) {
        const int a = g->src(m), b = g->dst(m);
        auto from = g->hom(a0, a);
        std::vector<int> objs;
        for (int k : from) objs.push_back(position(b, g->compose(m, k)));
        return GFunctor{fibers[a], fibers[b], objs, objs};
      });
}

struct SigmaIsolateResult {
  SigmaGroupoid sigma;
  IsolatedSet base_isolated;
  SigmaGroupoid domain;        // Σ over Isolated(base) of Isolated(fiber)
  GFunctor map;                // domain -> Σ B
  IsolatedSet codomain;        // Isolated(Σ B)
  bool lands_in_isolated = false;
  bool embedding = false;
  bool surjective = false;
  std::vector<int> missed;     // isolated objects of Σ B outside the image, up to iso

  int domain_count() const { return domain.total->object_count(); }
  int codomain_count() const { return static_cast<int>(codomain.members.size()); }
};

inline SigmaIsolateResult sigma_isolate(const GFamily& b, const Limits& limits = default_limits()) {
  SigmaIsolateResult r;
  r.sigma = sigma_groupoid(b, limits);
  r.base_isolated = isolated_subgroupoid(b.base);
  const auto& bi = r.base_isolated.sub;
  GFunctor incl = make_functor(bi.sub, b.base, [&](int x) { return bi.object_to_base[x]; },
                               [&](int m) { return bi.morphism_to_base[m]; });
  auto over = pullback(b, incl);
  auto iso = subfamily(over, [&](int a) { return isolated_subgroupoid(over.fibers[a]).members; });
  r.domain = sigma_groupoid(iso.family, limits, false);
  r.map = make_functor(
      r.domain.total, r.sigma.total,
      [&](int o) {
        auto [a, x] = r.domain.objects[o];
        return r.sigma.object(bi.object_to_base[a], iso.subs[a].object_to_base[x]);
      },
      [&](int m) {
        auto [f, phi] = r.domain.morphisms[m];
        int a2 = bi.sub->dst(f);
        return r.sigma.morphism(bi.morphism_to_base[f], iso.subs[a2].morphism_to_base[phi]);
      });
  r.codomain = isolated_subgroupoid(r.sigma.total);
  r.lands_in_isolated = true;
  for (int x : r.map.object_map) r.lands_in_isolated = r.lands_in_isolated && r.codomain.contains(x);
  r.embedding = is_equivalence_functor(r.map).embedding();
  for (int y : r.codomain.members) {
    bool hit = false;
    for (int x : r.map.object_map) hit = hit || r.sigma.total->connected(x, y);
    if (!hit) r.missed.push_back(y);
  }
  r.surjective = r.missed.empty();
  return r;
}

struct SigmaRemoveResult {
  MarkedSum domain;  // (Σ_{a ∈ base \ a0} B a) ⊕ (B a0 \ b0)
  RemovalResult removal;  // of Σ B at (a0, b0)
  GFunctor functor;
  GEquivReport report;
};

inline SigmaRemoveResult sigma_remove(const GFamily& b, int a0, int b0, const Limits& limits = default_limits()) {
  b.base->check_object(a0);
  b.fiber(a0).check_object(b0);
  if (aut_order(*b.base, a0) != 1)
    throw PreconditionError("sigma_remove needs a base point with trivial automorphisms");
  auto sigma = sigma_groupoid(b, limits);
  auto base_rest = remove_point(b.base, a0);
  const auto& br = base_rest.sub;
  auto incl = make_functor(br.sub, b.base, [&](int x) { return br.object_to_base[x]; },
                           [&](int m) { return br.morphism_to_base[m]; });
  auto rest = sigma_groupoid(pullback(b, incl), limits, false);
  auto fiber_rest = remove_point(b.fibers[a0], b0);
  auto domain = sum_groupoid(rest.total, fiber_rest.result());
  auto removal = remove_point(sigma.total, sigma.object(a0, b0));
  const auto& rs = removal.sub;
  const auto& fr = fiber_rest.sub;
  auto f = make_functor(
      domain.sum, rs.sub,
      [&](int x) {
        int z = domain.strip_object(x);
        int y = domain.is_left_object(x)
                    ? sigma.object(br.object_to_base[rest.objects[z].first], rest.objects[z].second)
                    : sigma.object(a0, fr.object_to_base[z]);
        return rs.base_object_to_sub[y];
      },
      [&](int m) {
        int z = domain.strip_morphism(m);
        int y = domain.is_left_morphism(m)
                    ? sigma.morphism(br.morphism_to_base[rest.morphisms[z].first], rest.morphisms[z].second)
                    : sigma.morphism(b.base->identity(a0), fr.morphism_to_base[z]);
        return rs.base_morphism_to_sub[y];
      });
  auto report = is_equivalence_functor(f);
  return SigmaRemoveResult{std::move(domain), std::move(removal), std::move(f), report};
}

// ---------------------------------------------------------------------------
// Grafting

/// Extends f : A \ a0 -> B to A, sending a0's component to b0.
inline GFunctor graft(const GroupoidRef& a, int a0, const GFunctor& f, int b0) {
  if (!is_isolated(*a, a0)) throw PreconditionError("graft needs an isolated point");
  auto removal = remove_point(a, a0);
  const auto& sub = removal.sub;
  if (!GFunctor::same_groupoid(f.source, sub.sub))
    throw PreconditionError("graft: functor source is not the complement of the point");
  f.target->check_object(b0);
  return make_functor(
      a, f.target,
      [&](int x) { return a->connected(a0, x) ? b0 : f(sub.base_object_to_sub[x]); },
      [&](int m) {
        return a->connected(a0, a->src(m)) ? f.target->identity(b0)
                                           : f.on_morphism(sub.base_morphism_to_sub[m]);
      });
}

/// Restriction of g : A -> B to A \ a0.
inline GFunctor restrict_to_complement(const GFunctor& g, int a0) {
  auto removal = remove_point(g.source, a0);
  const auto& sub = removal.sub;
  return make_functor(sub.sub, g.target, [&](int x) { return g(sub.object_to_base[x]); },
                      [&](int m) { return g.on_morphism(sub.morphism_to_base[m]); });
}

struct GraftEquivReport {
  FunctorGroupoid complement_functors;  // Fun(A \ a0, B)
  FunctorGroupoid all_functors;         // Fun(A, B)
  ProductGroupoid domain;               // Fun(A \ a0, B) × B
  GFunctor comparison;
  GEquivReport report;
  bool computation_rules = false;
  std::size_t domain_objects() const { return domain.product->object_count(); }
  std::size_t codomain_objects() const { return all_functors.functors.size(); }
};

inline GraftEquivReport graft_equiv_check(const GroupoidRef& a, int a0, const GroupoidRef& b,
                                          const Limits& limits = default_limits()) {
  if (!is_isolated(*a, a0)) throw PreconditionError("graft_equiv_check needs an isolated point");
  if (a->object_count() > limits.max_functor_source && !a->is_discrete())
    throw SizeError("functor groupoid source exceeds the cap");
  GraftEquivReport r;
  auto removal = remove_point(a, a0);
  const auto& sub = removal.sub;
  r.complement_functors = functor_groupoid(sub.sub, b, limits);
  r.all_functors = functor_groupoid(a, b, limits);
  r.domain = product_groupoid(r.complement_functors.groupoid, b);
  const auto& cf = r.complement_functors;
  const auto& af = r.all_functors;
  bool rules = true;
  std::vector<int> objs;
  for (int x = 0; x < r.domain.product->object_count(); ++x) {
    const auto& f = cf.functors[r.domain.left_object(x)];
    int b0 = r.domain.right_object(x);
    auto g = graft(a, a0, f, b0);
    rules = rules && g(a0) == b0;
    auto back = restrict_to_complement(g, a0);
    rules = rules && back.object_map == f.object_map && back.morphism_map == f.morphism_map;
    auto idx = af.find(g);
    if (!idx) throw Error("graft result missing from the functor groupoid");
    objs.push_back(*idx);
  }
  std::vector<int> mors;
  for (int m = 0; m < r.domain.product->morphism_count(); ++m) {
    const auto& alpha = cf.components[r.domain.left_morphism(m)];
    int beta = r.domain.right_morphism(m);
    std::vector<int> comps;
    for (int x = 0; x < a->object_count(); ++x)
      comps.push_back(a->connected(a0, x) ? beta : alpha[sub.base_object_to_sub[x]]);
    auto idx = af.find_morphism(objs[r.domain.product->src(m)], objs[r.domain.product->dst(m)], comps);
    if (!idx) throw Error("grafted transformation missing from the functor groupoid");
    mors.push_back(*idx);
  }
  r.comparison = GFunctor{r.domain.product, af.groupoid, std::move(objs), std::move(mors)};
  r.computation_rules = rules && validate_functor(r.comparison).ok();
  r.report = is_equivalence_functor(r.comparison);
  return r;
}

} // namespace contcalc
