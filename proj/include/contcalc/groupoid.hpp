#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contcalc/error.hpp"
#include "contcalc/group.hpp"

namespace contcalc {

struct Morphism {
  int src = -1;
  int dst = -1;
  bool operator==(const Morphism&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& v : other.violations) violations.push_back(prefix + v);
  }
};

/// A finite 1-groupoid with explicit identity, composition and inverse tables.
/// Objects and morphisms are dense indices; names are opaque labels.
class FinGroupoid {
public:
  int object_count() const { return static_cast<int>(object_names_.size()); }
  int morphism_count() const { return static_cast<int>(morphisms_.size()); }

  const std::string& object_name(int a) const { return object_names_.at(a); }
  const std::string& morphism_name(int m) const { return morphism_names_.at(m); }
  const std::vector<std::string>& object_names() const { return object_names_; }
  const std::vector<std::string>& morphism_names() const { return morphism_names_; }

  const Morphism& morphism(int m) const { return morphisms_.at(m); }
  int src(int m) const { return morphisms_.at(m).src; }
  int dst(int m) const { return morphisms_.at(m).dst; }
  int identity(int a) const { return identity_.at(a); }
  int inverse(int m) const { return inverse_.at(m); }

  /// g after f; -1 when the table has no entry.
  int compose(int g, int f) const {
    auto it = compose_.find(key(g, f));
    return it == compose_.end() ? -1 : it->second;
  }

  std::span<const int> hom(int a, int b) const {
    check_object(a);
    check_object(b);
    return hom_[static_cast<std::size_t>(a) * object_count() + b];
  }

  bool connected(int a, int b) const { return !hom(a, b).empty(); }

  std::optional<int> find_object(std::string_view name) const {
    for (int i = 0; i < object_count(); ++i)
      if (object_names_[i] == name) return i;
    return std::nullopt;
  }
  std::optional<int> find_morphism(std::string_view name) const {
    for (int i = 0; i < morphism_count(); ++i)
      if (morphism_names_[i] == name) return i;
    return std::nullopt;
  }

  void check_object(int a) const {
    if (a < 0 || a >= object_count())
      throw UnknownId("unknown object index " + std::to_string(a));
  }

  bool is_discrete() const { return morphism_count() == object_count(); }

  /// Every hom-set has at most one element.
  bool is_setlike() const {
    for (const auto& h : hom_)
      if (h.size() > 1) return false;
    return true;
  }

  bool operator==(const FinGroupoid& o) const {
    return object_names_ == o.object_names_ && morphism_names_ == o.morphism_names_ &&
           morphisms_ == o.morphisms_ && identity_ == o.identity_ && inverse_ == o.inverse_ &&
           compose_ == o.compose_;
  }

  /// Same tables, ignoring names.
  bool same_structure(const FinGroupoid& o) const {
    return morphisms_ == o.morphisms_ && identity_ == o.identity_ && inverse_ == o.inverse_ &&
           compose_ == o.compose_;
  }

  static std::uint64_t key(int g, int f) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g)) << 32) |
           static_cast<std::uint32_t>(f);
  }

  const std::unordered_map<std::uint64_t, int>& compose_table() const { return compose_; }

private:
  friend class GroupoidBuilder;
  std::vector<std::string> object_names_;
  std::vector<std::string> morphism_names_;
  std::vector<Morphism> morphisms_;
  std::vector<int> identity_;
  std::vector<int> inverse_;
  std::unordered_map<std::uint64_t, int> compose_;
  std::vector<std::vector<int>> hom_;
};

using GroupoidRef = std::shared_ptr<const FinGroupoid>;

class GroupoidBuilder {
public:
  int add_object(std::string name) {
    g_.object_names_.push_back(std::move(name));
    g_.identity_.push_back(-1);
    return g_.object_count() - 1;
  }

  int add_morphism(std::string name, int src, int dst) {
    g_.morphism_names_.push_back(std::move(name));
    g_.morphisms_.push_back({src, dst});
    g_.inverse_.push_back(-1);
    return g_.morphism_count() - 1;
  }

  void set_identity(int a, int m) { g_.identity_.at(a) = m; }
  void set_inverse(int m, int inv) { g_.inverse_.at(m) = inv; }
  void set_compose(int g, int f, int h) { g_.compose_[FinGroupoid::key(g, f)] = h; }

  int object_count() const { return g_.object_count(); }
  int morphism_count() const { return g_.morphism_count(); }
  const Morphism& morphism(int m) const { return g_.morphisms_.at(m); }

  /// Fill identity/inverse/compose from callbacks over every composable pair.
  void fill(const std::function<int(int)>& identity, const std::function<int(int)>& inverse,
            const std::function<int(int, int)>& compose) {
    for (int a = 0; a < g_.object_count(); ++a) set_identity(a, identity(a));
    for (int m = 0; m < g_.morphism_count(); ++m) set_inverse(m, inverse(m));
    auto outgoing = by_source();
    for (int f = 0; f < g_.morphism_count(); ++f)
      for (int g : outgoing[g_.morphisms_[f].dst]) set_compose(g, f, compose(g, f));
  }

  FinGroupoid build() {
    const int n = g_.object_count();
    g_.hom_.assign(static_cast<std::size_t>(n) * n, {});
    for (int m = 0; m < g_.morphism_count(); ++m) {
      const auto& mm = g_.morphisms_[m];
      if (mm.src < 0 || mm.src >= n || mm.dst < 0 || mm.dst >= n)
        throw UnknownId("morphism " + g_.morphism_names_[m] + " has unknown endpoint");
      g_.hom_[static_cast<std::size_t>(mm.src) * n + mm.dst].push_back(m);
    }
    return std::move(g_);
  }

  GroupoidRef build_ref() { return std::make_shared<const FinGroupoid>(build()); }

private:
  std::vector<std::vector<int>> by_source() const {
    std::vector<std::vector<int>> out(g_.object_count());
    for (int m = 0; m < g_.morphism_count(); ++m) out[g_.morphisms_[m].src].push_back(m);
    return out;
  }
  FinGroupoid g_;
};

inline GroupoidRef share(FinGroupoid g) { return std::make_shared<const FinGroupoid>(std::move(g)); }

// ---------------------------------------------------------------------------
// Validation and basic queries

inline ValidationReport validate_groupoid(const FinGroupoid& g) {
  ValidationReport r;
  const int n = g.object_count();
  const int m = g.morphism_count();
  auto mname = [&](int x) { return x >= 0 && x < m ? g.morphism_name(x) : std::string("?"); };
  for (int a = 0; a < n; ++a) {
    int id = g.identity(a);
    if (id < 0 || id >= m) {
      r.add("no identity for object " + g.object_name(a));
      continue;
    }
    if (g.src(id) != a || g.dst(id) != a)
      r.add("identity " + mname(id) + " of " + g.object_name(a) + " has wrong endpoints");
  }
  if (!r.ok()) return r;
  for (int f = 0; f < m; ++f) {
    const int a = g.src(f), b = g.dst(f);
    if (g.compose(f, g.identity(a)) != f || g.compose(g.identity(b), f) != f)
      r.add("unit law fails at " + mname(f));
    int inv = g.inverse(f);
    if (inv < 0 || inv >= m || g.src(inv) != b || g.dst(inv) != a) {
      r.add("no inverse for " + mname(f));
      continue;
    }
    if (g.compose(inv, f) != g.identity(a) || g.compose(f, inv) != g.identity(b))
      r.add("no inverse for " + mname(f) + " (declared " + mname(inv) + " fails)");
  }
  // composition closure and endpoints
  for (int f = 0; f < m; ++f)
    for (int c = 0; c < n; ++c)
      for (int h : g.hom(g.dst(f), c)) {
        int gf = g.compose(h, f);
        if (gf < 0 || gf >= m) {
          r.add("missing composite " + mname(h) + " o " + mname(f));
        } else if (g.src(gf) != g.src(f) || g.dst(gf) != c) {
          r.add("composite " + mname(h) + " o " + mname(f) + " has wrong endpoints");
        }
      }
  for (const auto& [k, v] : g.compose_table()) {
    int gg = static_cast<int>(k >> 32), ff = static_cast<int>(k & 0xffffffffu);
    if (gg >= m || ff >= m || g.dst(ff) != g.src(gg))
      r.add("composite declared for non-composable pair");
    (void)v;
  }
  if (!r.ok()) return r;
  // associativity
  for (int f = 0; f < m; ++f)
    for (int c = 0; c < n; ++c)
      for (int h : g.hom(g.dst(f), c))
        for (int d = 0; d < n; ++d)
          for (int k : g.hom(c, d))
            if (g.compose(k, g.compose(h, f)) != g.compose(g.compose(k, h), f))
              r.add("associativity fails at " + mname(k) + "," + mname(h) + "," + mname(f));
  return r;
}

inline void check_size(const FinGroupoid& g, const Limits& limits) {
  if (g.object_count() > limits.max_objects || g.morphism_count() > limits.max_morphisms)
    throw SizeError("groupoid exceeds size limits (" + std::to_string(g.object_count()) +
                    " objects, " + std::to_string(g.morphism_count()) + " morphisms)");
}

inline int aut_order(const FinGroupoid& g, int a) { return static_cast<int>(g.hom(a, a).size()); }

/// Connected components; each class sorted, classes ordered by least member.
inline std::vector<std::vector<int>> components(const FinGroupoid& g) {
  const int n = g.object_count();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int a = 0; a < n; ++a) {
    if (comp[a] >= 0) continue;
    out.emplace_back();
    for (int b = 0; b < n; ++b)
      if (g.connected(a, b)) {
        comp[b] = static_cast<int>(out.size()) - 1;
        out.back().push_back(b);
      }
  }
  return out;
}

inline std::vector<int> component_index(const FinGroupoid& g) {
  std::vector<int> idx(g.object_count(), -1);
  auto cs = components(g);
  for (std::size_t c = 0; c < cs.size(); ++c)
    for (int a : cs[c]) idx[a] = static_cast<int>(c);
  return idx;
}

/// Automorphism group of an object as a Cayley table, indexed by hom(a,a) order.
inline FiniteGroup automorphism_group(const FinGroupoid& g, int a) {
  auto h = g.hom(a, a);
  std::vector<int> elems(h.begin(), h.end());
  // identity first
  auto it = std::find(elems.begin(), elems.end(), g.identity(a));
  std::iter_swap(elems.begin(), it);
  const int k = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      int c = g.compose(elems[x], elems[y]);
      t[x][y] = static_cast<int>(std::find(elems.begin(), elems.end(), c) - elems.begin());
    }
  return FiniteGroup(std::move(t));
}

// ---------------------------------------------------------------------------
// Standard groupoids

inline FinGroupoid empty_groupoid() { return GroupoidBuilder{}.build(); }

inline FinGroupoid disc(int n, const std::string& prefix = "") {
  GroupoidBuilder b;
  for (int i = 0; i < n; ++i) b.add_object(prefix + std::to_string(i));
  for (int i = 0; i < n; ++i) b.add_morphism("id" + prefix + std::to_string(i), i, i);
  b.fill([](int a) { return a; }, [](int m) { return m; }, [](int g, int) { return g; });
  return b.build();
}

/// Discrete groupoid with the given object names.
inline FinGroupoid disc_named(const std::vector<std::string>& names) {
  GroupoidBuilder b;
  for (const auto& n : names) b.add_object(n);
  for (std::size_t i = 0; i < names.size(); ++i)
    b.add_morphism("id_" + names[i], static_cast<int>(i), static_cast<int>(i));
  b.fill([](int a) { return a; }, [](int m) { return m; }, [](int g, int) { return g; });
  return b.build();
}

inline FinGroupoid codisc(int n) {
  GroupoidBuilder b;
  for (int i = 0; i < n; ++i) b.add_object(std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b.add_morphism(std::to_string(i) + ">" + std::to_string(j), i, j);
  b.fill([n](int a) { return a * n + a; },
         [n](int m) { return (m % n) * n + m / n; },
         [n](int g, int f) { return (f / n) * n + g % n; });
  return b.build();
}

/// One-object groupoid of a finite group. Morphism names default to g0, g1, ...
inline FinGroupoid one_object(const FiniteGroup& grp, std::vector<std::string> names = {},
                              const std::string& object = "*") {
  GroupoidBuilder b;
  b.add_object(object);
  for (int x = 0; x < grp.order(); ++x)
    b.add_morphism(x < static_cast<int>(names.size()) ? names[x] : "g" + std::to_string(x), 0, 0);
  b.fill([](int) { return 0; }, [&](int m) { return grp.inverse(m); },
         [&](int g, int f) { return grp.mul(g, f); });
  return b.build();
}

/// BZ2: one object *, morphisms e and s with s o s = e.
inline FinGroupoid bz2() { return one_object(FiniteGroup::cyclic(2), {"e", "s"}); }

/// Action groupoid of a permutation group on n points; morphisms (g, x): x -> g.x.
inline FinGroupoid action_groupoid(int n, const std::vector<Permutation>& gens) {
  std::vector<Permutation> elems;
  FiniteGroup grp = FiniteGroup::generated_by(n, gens, &elems);
  const int k = grp.order();
  GroupoidBuilder b;
  for (int x = 0; x < n; ++x) b.add_object(std::to_string(x));
  for (int g = 0; g < k; ++g)
    for (int x = 0; x < n; ++x)
      b.add_morphism("g" + std::to_string(g) + "@" + std::to_string(x), x, elems[g][x]);
  b.fill([n](int a) { return a; },
         [&, n](int m) {
           int g = m / n, x = m % n;
           return grp.inverse(g) * n + elems[g][x];
         },
         [&, n](int g, int f) { return grp.mul(g / n, f / n) * n + f % n; });
  return b.build();
}

/// Delooping of the symmetric group S_n; morphisms carry their permutations.
inline FinGroupoid symmetric_delooping(int n, std::vector<Permutation>* perms = nullptr,
                                       const std::string& object = "*") {
  std::vector<Permutation> elems;
  FiniteGroup grp = FiniteGroup::symmetric(n, &elems);
  std::vector<std::string> names;
  for (const auto& p : elems) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    names.push_back(s + "]");
  }
  if (perms) *perms = elems;
  return one_object(grp, names, object);
}

// ---------------------------------------------------------------------------
// Sums, products, subgroupoids

/// A ⊕ B with explicit side metadata. Objects: all of A then all of B.
struct MarkedSum {
  GroupoidRef sum;
  GroupoidRef left;
  GroupoidRef right;

  int inl_object(int a) const { return a; }
  int inr_object(int b) const { return left->object_count() + b; }
  int inl_morphism(int m) const { return m; }
  int inr_morphism(int m) const { return left->morphism_count() + m; }
  bool is_left_object(int x) const { return x < left->object_count(); }
  bool is_left_morphism(int m) const { return m < left->morphism_count(); }
  int strip_object(int x) const { return is_left_object(x) ? x : x - left->object_count(); }
  int strip_morphism(int m) const {
    return is_left_morphism(m) ? m : m - left->morphism_count();
  }
};

inline MarkedSum sum_groupoid(GroupoidRef a, GroupoidRef b) {
  GroupoidBuilder bl;
  const int na = a->object_count(), ma = a->morphism_count();
  for (int x = 0; x < na; ++x) bl.add_object("inl(" + a->object_name(x) + ")");
  for (int x = 0; x < b->object_count(); ++x) bl.add_object("inr(" + b->object_name(x) + ")");
  for (int m = 0; m < ma; ++m) bl.add_morphism("inl(" + a->morphism_name(m) + ")", a->src(m), a->dst(m));
  for (int m = 0; m < b->morphism_count(); ++m)
    bl.add_morphism("inr(" + b->morphism_name(m) + ")", na + b->src(m), na + b->dst(m));
  bl.fill([&](int x) { return x < na ? a->identity(x) : ma + b->identity(x - na); },
          [&](int m) { return m < ma ? a->inverse(m) : ma + b->inverse(m - ma); },
          [&](int g, int f) { return f < ma ? a->compose(g, f) : ma + b->compose(g - ma, f - ma); });
  return MarkedSum{bl.build_ref(), std::move(a), std::move(b)};
}

struct ProductGroupoid {
  GroupoidRef product;
  GroupoidRef left;
  GroupoidRef right;
  int object(int a, int b) const { return a * right->object_count() + b; }
  int morphism(int f, int g) const { return f * right->morphism_count() + g; }
  int left_object(int x) const { return x / right->object_count(); }
  int right_object(int x) const { return x % right->object_count(); }
  int left_morphism(int m) const { return m / right->morphism_count(); }
  int right_morphism(int m) const { return m % right->morphism_count(); }
};

inline ProductGroupoid product_groupoid(GroupoidRef a, GroupoidRef b) {
  GroupoidBuilder bl;
  const int nb = b->object_count(), mb = b->morphism_count();
  for (int x = 0; x < a->object_count(); ++x)
    for (int y = 0; y < nb; ++y)
      bl.add_object("(" + a->object_name(x) + "," + b->object_name(y) + ")");
  for (int f = 0; f < a->morphism_count(); ++f)
    for (int g = 0; g < mb; ++g)
      bl.add_morphism("(" + a->morphism_name(f) + "," + b->morphism_name(g) + ")",
                      a->src(f) * nb + b->src(g), a->dst(f) * nb + b->dst(g));
  if (mb > 0)
    bl.fill([&](int x) { return a->identity(x / nb) * mb + b->identity(x % nb); },
            [&](int m) { return a->inverse(m / mb) * mb + b->inverse(m % mb); },
            [&](int g, int f) {
              return a->compose(g / mb, f / mb) * mb + b->compose(g % mb, f % mb);
            });
  return ProductGroupoid{bl.build_ref(), std::move(a), std::move(b)};
}

/// Full subgroupoid on a set of objects, with index maps in both directions.
struct Subgroupoid {
  GroupoidRef base;
  GroupoidRef sub;
  std::vector<int> object_to_base;
  std::vector<int> morphism_to_base;
  std::vector<int> base_object_to_sub;    // -1 when absent
  std::vector<int> base_morphism_to_sub;  // -1 when absent
};

inline Subgroupoid full_subgroupoid(GroupoidRef base, const std::vector<int>& objects) {
  Subgroupoid s;
  s.base_object_to_sub.assign(base->object_count(), -1);
  s.base_morphism_to_sub.assign(base->morphism_count(), -1);
  GroupoidBuilder b;
  std::vector<int> objs = objects;
  std::sort(objs.begin(), objs.end());
  objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
  for (int a : objs) {
    base->check_object(a);
    s.base_object_to_sub[a] = b.add_object(base->object_name(a));
    s.object_to_base.push_back(a);
  }
  for (int m = 0; m < base->morphism_count(); ++m) {
    int x = s.base_object_to_sub[base->src(m)], y = s.base_object_to_sub[base->dst(m)];
    if (x < 0 || y < 0) continue;
    s.base_morphism_to_sub[m] = b.add_morphism(base->morphism_name(m), x, y);
    s.morphism_to_base.push_back(m);
  }
  b.fill([&](int x) { return s.base_morphism_to_sub[base->identity(s.object_to_base[x])]; },
         [&](int m) { return s.base_morphism_to_sub[base->inverse(s.morphism_to_base[m])]; },
         [&](int g, int f) {
           return s.base_morphism_to_sub[base->compose(s.morphism_to_base[g], s.morphism_to_base[f])];
         });
  s.sub = b.build_ref();
  s.base = std::move(base);
  return s;
}

/// Same groupoid with objects and morphisms renamed (used for relabeling tests).
inline FinGroupoid rename(const FinGroupoid& g, const std::function<std::string(const std::string&)>& f) {
  GroupoidBuilder b;
  for (int a = 0; a < g.object_count(); ++a) b.add_object(f(g.object_name(a)));
  for (int m = 0; m < g.morphism_count(); ++m) b.add_morphism(f(g.morphism_name(m)), g.src(m), g.dst(m));
  b.fill([&](int a) { return g.identity(a); }, [&](int m) { return g.inverse(m); },
         [&](int x, int y) { return g.compose(x, y); });
  return b.build();
}

/// Same groupoid with objects permuted: new object i is old object order[i].
inline FinGroupoid permute_objects(const FinGroupoid& g, const std::vector<int>& order) {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  GroupoidBuilder b;
  for (int a : order) b.add_object(g.object_name(a));
  for (int m = 0; m < g.morphism_count(); ++m)
    b.add_morphism(g.morphism_name(m), pos[g.src(m)], pos[g.dst(m)]);
  b.fill([&](int a) { return g.identity(order[a]); }, [&](int m) { return g.inverse(m); },
         [&](int x, int y) { return g.compose(x, y); });
  return b.build();
}

} // namespace contcalc
