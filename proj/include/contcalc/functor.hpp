#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contcalc/groupoid.hpp"

namespace contcalc {

/// A functor between finite groupoids, given by object and morphism tables.
struct GFunctor {
  GroupoidRef source;
  GroupoidRef target;
  std::vector<int> object_map;
  std::vector<int> morphism_map;

  int operator()(int object) const { return object_map.at(object); }
  int on_morphism(int m) const { return morphism_map.at(m); }

  /// Table equality; endpoints compared structurally.
  bool operator==(const GFunctor& o) const {
    return object_map == o.object_map && morphism_map == o.morphism_map &&
           same_groupoid(source, o.source) && same_groupoid(target, o.target);
  }

  static bool same_groupoid(const GroupoidRef& a, const GroupoidRef& b) {
    return a == b || (a && b && a->same_structure(*b));
  }
};

inline GFunctor identity_functor(const GroupoidRef& g) {
  GFunctor f{g, g, {}, {}};
  for (int a = 0; a < g->object_count(); ++a) f.object_map.push_back(a);
  for (int m = 0; m < g->morphism_count(); ++m) f.morphism_map.push_back(m);
  return f;
}

/// g after f.
inline GFunctor compose(const GFunctor& g, const GFunctor& f) {
  if (!GFunctor::same_groupoid(f.target, g.source))
    throw PreconditionError("functor composition: endpoints do not match");
  GFunctor r{f.source, g.target, {}, {}};
  for (int x : f.object_map) r.object_map.push_back(g.object_map.at(x));
  for (int m : f.morphism_map) r.morphism_map.push_back(g.morphism_map.at(m));
  return r;
}

inline ValidationReport validate_functor(const GFunctor& f) {
  ValidationReport r;
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (static_cast<int>(f.object_map.size()) != s.object_count() ||
      static_cast<int>(f.morphism_map.size()) != s.morphism_count()) {
    r.add("functor tables have wrong size");
    return r;
  }
  for (int a = 0; a < s.object_count(); ++a)
    if (f.object_map[a] < 0 || f.object_map[a] >= t.object_count())
      r.add("object " + s.object_name(a) + " maps outside target");
  for (int m = 0; m < s.morphism_count(); ++m)
    if (f.morphism_map[m] < 0 || f.morphism_map[m] >= t.morphism_count())
      r.add("morphism " + s.morphism_name(m) + " maps outside target");
  if (!r.ok()) return r;
  for (int m = 0; m < s.morphism_count(); ++m) {
    int fm = f.morphism_map[m];
    if (t.src(fm) != f.object_map[s.src(m)] || t.dst(fm) != f.object_map[s.dst(m)])
      r.add("endpoints not preserved at " + s.morphism_name(m));
  }
  for (int a = 0; a < s.object_count(); ++a)
    if (f.morphism_map[s.identity(a)] != t.identity(f.object_map[a]))
      r.add("identity not preserved at " + s.object_name(a));
  if (!r.ok()) return r;
  for (const auto& [k, h] : s.compose_table()) {
    int g = static_cast<int>(k >> 32), ff = static_cast<int>(k & 0xffffffffu);
    if (f.morphism_map[h] != t.compose(f.morphism_map[g], f.morphism_map[ff]))
      r.add("composition not preserved at " + s.morphism_name(g) + " o " + s.morphism_name(ff));
  }
  return r;
}

struct GEquivReport {
  bool faithful = false;
  bool full = false;
  bool essentially_surjective = false;
  bool equivalence() const { return faithful && full && essentially_surjective; }
  bool embedding() const { return faithful && full; }
};

inline GEquivReport is_equivalence_functor(const GFunctor& f) {
  GEquivReport r{true, true, true};
  const auto& s = *f.source;
  const auto& t = *f.target;
  const int n = s.object_count();
  std::vector<char> hit(t.morphism_count(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto src_hom = s.hom(a, b);
      auto dst_hom = t.hom(f.object_map[a], f.object_map[b]);
      std::size_t distinct = 0;
      for (int m : src_hom) {
        int fm = f.morphism_map[m];
        if (!hit[fm]) { hit[fm] = 1; ++distinct; }
      }
      if (distinct != src_hom.size()) r.faithful = false;
      if (distinct != dst_hom.size()) r.full = false;
      for (int m : src_hom) hit[f.morphism_map[m]] = 0;
    }
  for (int y = 0; y < t.object_count(); ++y) {
    bool reached = false;
    for (int a = 0; a < n && !reached; ++a) reached = t.connected(f.object_map[a], y);
    if (!reached) { r.essentially_surjective = false; break; }
  }
  return r;
}

/// Bijective on objects and morphisms.
inline bool is_isomorphism_functor(const GFunctor& f) {
  auto bij = [](const std::vector<int>& v, int n) {
    if (static_cast<int>(v.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int x : v) {
      if (x < 0 || x >= n || seen[x]) return false;
      seen[x] = 1;
    }
    return true;
  };
  return bij(f.object_map, f.target->object_count()) && bij(f.morphism_map, f.target->morphism_count());
}

inline GFunctor inverse_isomorphism(const GFunctor& f) {
  GFunctor r{f.target, f.source, std::vector<int>(f.target->object_count(), -1),
             std::vector<int>(f.target->morphism_count(), -1)};
  for (std::size_t a = 0; a < f.object_map.size(); ++a) r.object_map[f.object_map[a]] = static_cast<int>(a);
  for (std::size_t m = 0; m < f.morphism_map.size(); ++m)
    r.morphism_map[f.morphism_map[m]] = static_cast<int>(m);
  return r;
}

/// Natural transformation between parallel functors; components index target morphisms.
/// In a groupoid every natural transformation is a natural isomorphism.
struct NatIso {
  GFunctor from;
  GFunctor to;
  std::vector<int> components;
};

inline ValidationReport validate_natiso(const NatIso& n) {
  ValidationReport r;
  const auto& s = *n.from.source;
  const auto& t = *n.from.target;
  if (static_cast<int>(n.components.size()) != s.object_count()) {
    r.add("wrong number of components");
    return r;
  }
  for (int a = 0; a < s.object_count(); ++a) {
    int c = n.components[a];
    if (c < 0 || c >= t.morphism_count() || t.src(c) != n.from(a) || t.dst(c) != n.to(a))
      r.add("component at " + s.object_name(a) + " has wrong type");
  }
  if (!r.ok()) return r;
  for (int m = 0; m < s.morphism_count(); ++m) {
    int a = s.src(m), b = s.dst(m);
    if (t.compose(n.components[b], n.from.on_morphism(m)) !=
        t.compose(n.to.on_morphism(m), n.components[a]))
      r.add("naturality fails at " + s.morphism_name(m));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Enumeration of functors and natural transformations

namespace detail {

/// Morphisms of `s` sorted so that each is considered after its endpoints'
/// identities; used to backtrack functor assignments.
struct FunctorSearch {
  const FinGroupoid& s;
  const FinGroupoid& t;
  std::uint64_t cap;
  std::vector<int> obj;
  std::vector<int> mor;
  std::vector<GFunctor>* out;
  GroupoidRef sref, tref;

  bool consistent(int m) const {
    // check composites among assigned morphisms that involve m
    for (int g = 0; g < s.morphism_count(); ++g) {
      if (mor[g] < 0) continue;
      if (s.src(g) == s.dst(m)) {
        int h = s.compose(g, m);
        if (mor[h] >= 0 && mor[h] != t.compose(mor[g], mor[m])) return false;
      }
      if (s.dst(g) == s.src(m)) {
        int h = s.compose(m, g);
        if (mor[h] >= 0 && mor[h] != t.compose(mor[m], mor[g])) return false;
      }
    }
    return true;
  }

  void morphisms(int m) {
    if (m == s.morphism_count()) {
      if (out->size() >= cap) throw SizeError("functor enumeration exceeds cell cap");
      out->push_back(GFunctor{sref, tref, obj, mor});
      return;
    }
    if (mor[m] >= 0) {  // identities preassigned
      if (consistent(m)) morphisms(m + 1);
      return;
    }
    for (int c : t.hom(obj[s.src(m)], obj[s.dst(m)])) {
      mor[m] = c;
      if (consistent(m)) morphisms(m + 1);
      mor[m] = -1;
    }
  }

  void objects(int a) {
    if (a == s.object_count()) {
      std::fill(mor.begin(), mor.end(), -1);
      for (int x = 0; x < s.object_count(); ++x) mor[s.identity(x)] = t.identity(obj[x]);
      morphisms(0);
      return;
    }
    for (int y = 0; y < t.object_count(); ++y) {
      obj[a] = y;
      objects(a + 1);
    }
  }
};

} // namespace detail

/// All functors source -> target in lexicographic order of (object map, morphism map).
inline std::vector<GFunctor> enumerate_functors(const GroupoidRef& source, const GroupoidRef& target,
                                                const Limits& limits = default_limits()) {
  std::vector<GFunctor> out;
  detail::FunctorSearch search{*source, *target, limits.max_cells,
                               std::vector<int>(source->object_count(), -1),
                               std::vector<int>(source->morphism_count(), -1),
                               &out, source, target};
  search.objects(0);
  return out;
}

/// All natural transformations f => g, as component vectors.
inline std::vector<std::vector<int>> enumerate_nat_transformations(const GFunctor& f, const GFunctor& g) {
  const auto& s = *f.source;
  const auto& t = *f.target;
  std::vector<std::vector<int>> out;
  std::vector<int> comp(s.object_count(), -1);
  // natural transformations are determined per component by one object; still
  // brute-force here since sources are tiny.
  std::function<void(int)> rec = [&](int a) {
    if (a == s.object_count()) {
      for (int m = 0; m < s.morphism_count(); ++m)
        if (t.compose(comp[s.dst(m)], f.on_morphism(m)) != t.compose(g.on_morphism(m), comp[s.src(m)]))
          return;
      out.push_back(comp);
      return;
    }
    for (int c : t.hom(f(a), g(a))) {
      comp[a] = c;
      // prune with morphisms between already assigned objects
      bool ok = true;
      for (int b = 0; b <= a && ok; ++b)
        for (int m : s.hom(b, a))
          if (t.compose(comp[a], f.on_morphism(m)) != t.compose(g.on_morphism(m), comp[b])) { ok = false; break; }
      if (ok) rec(a + 1);
    }
    comp[a] = -1;
  };
  rec(0);
  return out;
}

/// Functor groupoid Fun(A, B): objects are functors, morphisms natural transformations.
struct FunctorGroupoid {
  GroupoidRef groupoid;
  std::vector<GFunctor> functors;              // object i
  std::vector<std::vector<int>> components;    // morphism m
  GroupoidRef source, target;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> object_index;
  std::map<std::pair<int, std::vector<int>>, int> morphism_index;  // keyed by (source object, components)

  std::optional<int> find(const GFunctor& f) const {
    auto it = object_index.find({f.object_map, f.morphism_map});
    if (it == object_index.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_morphism(int from, int to, const std::vector<int>& comps) const {
    auto it = morphism_index.find({from, comps});
    if (it == morphism_index.end() || groupoid->dst(it->second) != to) return std::nullopt;
    return it->second;
  }
};

inline std::string functor_label(const GFunctor& f) {
  std::string s = "<";
  for (std::size_t i = 0; i < f.object_map.size(); ++i)
    s += (i ? "," : "") + f.target->object_name(f.object_map[i]);
  if (!f.source->is_discrete()) {
    s += "|";
    bool first = true;
    for (std::size_t m = 0; m < f.morphism_map.size(); ++m) {
      if (f.source->identity(f.source->src(static_cast<int>(m))) == static_cast<int>(m)) continue;
      s += (first ? "" : ",") + f.target->morphism_name(f.morphism_map[m]);
      first = false;
    }
  }
  return s + ">";
}

inline FunctorGroupoid functor_groupoid(const GroupoidRef& a, const GroupoidRef& b,
                                        const Limits& limits = default_limits()) {
  FunctorGroupoid fg;
  fg.source = a;
  fg.target = b;
  fg.functors = enumerate_functors(a, b, limits);
  GroupoidBuilder bl;
  for (const auto& f : fg.functors) bl.add_object(functor_label(f));
  const int n = static_cast<int>(fg.functors.size());
  std::uint64_t cells = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (auto& c : enumerate_nat_transformations(fg.functors[i], fg.functors[j])) {
        std::string name = "[";
        for (std::size_t k = 0; k < c.size(); ++k) name += (k ? "," : "") + b->morphism_name(c[k]);
        bl.add_morphism(name + "]", i, j);
        fg.components.push_back(std::move(c));
        if (++cells > limits.max_cells) throw SizeError("functor groupoid exceeds cell cap");
      }
  // the composition table costs Σ in·out over objects
  std::vector<std::uint64_t> in(n, 0), out(n, 0);
  for (int m = 0; m < bl.morphism_count(); ++m) {
    ++out[bl.morphism(m).src];
    ++in[bl.morphism(m).dst];
  }
  std::uint64_t table = 0;
  for (int i = 0; i < n; ++i) table += in[i] * out[i];
  if (table > limits.max_cells) throw SizeError("functor groupoid composition exceeds cell cap");
  // index morphisms by (i, j, components)
  for (int i = 0; i < n; ++i)
    fg.object_index.emplace(std::make_pair(fg.functors[i].object_map, fg.functors[i].morphism_map), i);
  for (int m = 0; m < static_cast<int>(fg.components.size()); ++m)
    fg.morphism_index.emplace(std::make_pair(bl.morphism(m).src, fg.components[m]), m);
  auto lookup = [&](int i, int, const std::vector<int>& comps) {
    auto it = fg.morphism_index.find({i, comps});
    return it == fg.morphism_index.end() ? -1 : it->second;
  };
  bl.fill(
      [&](int i) {
        std::vector<int> c;
        for (int x = 0; x < a->object_count(); ++x) c.push_back(b->identity(fg.functors[i](x)));
        return lookup(i, i, c);
      },
      [&](int m) {
        std::vector<int> c;
        for (int k : fg.components[m]) c.push_back(b->inverse(k));
        return lookup(bl.morphism(m).dst, bl.morphism(m).src, c);
      },
      [&](int g, int f) {
        std::vector<int> c;
        for (std::size_t k = 0; k < fg.components[f].size(); ++k)
          c.push_back(b->compose(fg.components[g][k], fg.components[f][k]));
        return lookup(bl.morphism(f).src, bl.morphism(g).dst, c);
      });
  fg.groupoid = bl.build_ref();
  return fg;
}

} // namespace contcalc
