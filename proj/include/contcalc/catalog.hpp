#pragma once

#include <random>
#include <vector>

#include "contcalc/container.hpp"

namespace contcalc::catalog {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

inline Permutation random_permutation(Rng& rng, int n) {
  Permutation p = perm_identity(n);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[pick(rng, i + 1)]);
  return p;
}

/// Disjoint union of a list of groupoids, objects and morphisms in order.
inline FinGroupoid disjoint_union(const std::vector<GroupoidRef>& parts) {
  GroupoidBuilder b;
  std::vector<int> obj_off, mor_off;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    obj_off.push_back(b.object_count());
    for (int a = 0; a < parts[k]->object_count(); ++a)
      b.add_object("c" + std::to_string(k) + "." + parts[k]->object_name(a));
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    mor_off.push_back(b.morphism_count());
    for (int m = 0; m < parts[k]->morphism_count(); ++m)
      b.add_morphism("c" + std::to_string(k) + "." + parts[k]->morphism_name(m),
                     obj_off[k] + parts[k]->src(m), obj_off[k] + parts[k]->dst(m));
  }
  auto part_of_obj = [&](int x) {
    return static_cast<int>(std::upper_bound(obj_off.begin(), obj_off.end(), x) - obj_off.begin()) - 1;
  };
  auto part_of_mor = [&](int m) {
    return static_cast<int>(std::upper_bound(mor_off.begin(), mor_off.end(), m) - mor_off.begin()) - 1;
  };
  b.fill([&](int x) { int k = part_of_obj(x); return mor_off[k] + parts[k]->identity(x - obj_off[k]); },
         [&](int m) { int k = part_of_mor(m); return mor_off[k] + parts[k]->inverse(m - mor_off[k]); },
         [&](int g, int f) {
           int k = part_of_mor(f);
           return mor_off[k] + parts[k]->compose(g - mor_off[k], f - mor_off[k]);
         });
  return b.build();
}

/// Small permutation groups used as automorphism groups: 1, Z2, Z3, Z2×Z2, Z4, S3.
inline FiniteGroup small_group(int which) {
  switch (which) {
    case 0: return FiniteGroup::cyclic(1);
    case 1: return FiniteGroup::cyclic(2);
    case 2: return FiniteGroup::cyclic(3);
    case 3: return FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
    case 4: return FiniteGroup::cyclic(4);
    default: return FiniteGroup::symmetric(3);
  }
}

struct GroupoidShape {
  int max_objects = 6;
  int max_morphisms = 16;
  bool discrete = false;
};

/// Random groupoid whose components are Codisc(k) × BG; every finite groupoid
/// is equivalent to one of these.
inline GroupoidRef random_groupoid(Rng& rng, GroupoidShape shape = {}) {
  std::vector<GroupoidRef> parts;
  int objects = 0, morphisms = 0;
  const int want = 1 + pick(rng, shape.max_objects);
  for (int tries = 0; tries < 20 && objects < want; ++tries) {
    int k = 1 + pick(rng, 3);
    FiniteGroup g = shape.discrete ? small_group(0) : small_group(pick(rng, 6));
    if (!shape.discrete && pick(rng, 3) == 0) g = small_group(0);
    if (shape.discrete) k = 1;
    const int mor = k * k * g.order();
    if (objects + k > shape.max_objects || morphisms + mor > shape.max_morphisms) continue;
    auto comp = product_groupoid(share(codisc(k)), share(one_object(g)));
    parts.push_back(comp.product);
    objects += k;
    morphisms += mor;
  }
  return share(disjoint_union(parts));
}

/// Random homomorphism from a group to S_m, found by sampling generator images.
inline std::vector<Permutation> random_action(Rng& rng, const FiniteGroup& g, int m) {
  const auto gens = g.generators();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Permutation> images;
    for (std::size_t k = 0; k < gens.size(); ++k)
      images.push_back(attempt == 63 ? perm_identity(m) : random_permutation(rng, m));
    std::vector<Permutation> rho(g.order());
    std::vector<char> set(g.order(), 0);
    rho[0] = perm_identity(m);
    set[0] = 1;
    std::vector<int> queue{0};
    bool ok = true;
    for (std::size_t i = 0; i < queue.size() && ok; ++i)
      for (std::size_t k = 0; k < gens.size() && ok; ++k) {
        int y = g.mul(gens[k], queue[i]);
        auto img = perm_compose(images[k], rho[queue[i]]);
        if (!set[y]) {
          set[y] = 1;
          rho[y] = img;
          queue.push_back(y);
        } else if (rho[y] != img) {
          ok = false;
        }
      }
    for (int x = 0; x < g.order() && ok; ++x)
      for (int y = 0; y < g.order() && ok; ++y)
        ok = rho[g.mul(x, y)] == perm_compose(rho[x], rho[y]);
    if (ok) return rho;
  }
  return {};
}

/// Random strict family with discrete fibers over `base`.
inline GFamily random_family_over(Rng& rng, const GroupoidRef& base, int max_fiber = 3) {
  const auto& g = *base;
  std::vector<GroupoidRef> fibers(g.object_count());
  std::vector<int> root(g.object_count(), -1), spoke(g.object_count(), -1);
  std::vector<std::vector<Permutation>> rho_of(g.object_count());
  std::vector<std::vector<int>> aut_elems(g.object_count());
  for (const auto& comp : components(g)) {
    const int r = comp.front();
    const int m = pick(rng, max_fiber + 1);
    auto fiber = share(disc(m));
    auto h = g.hom(r, r);
    std::vector<int> elems(h.begin(), h.end());
    std::iter_swap(elems.begin(), std::find(elems.begin(), elems.end(), g.identity(r)));
    auto rho = random_action(rng, automorphism_group(g, r), m);
    for (int x : comp) {
      fibers[x] = fiber;
      root[x] = r;
      spoke[x] = g.hom(r, x).front();
      if (x == r) spoke[x] = g.identity(r);
    }
    rho_of[r] = rho;
    aut_elems[r] = elems;
  }
  return make_family(
      base, [&](int a) { return fibers[a]; },
      [&](int m) {
        const int x = g.src(m), y = g.dst(m), r = root[x];
        int loop = g.compose(g.inverse(spoke[y]), g.compose(m, spoke[x]));
        int idx = static_cast<int>(std::find(aut_elems[r].begin(), aut_elems[r].end(), loop) -
                                   aut_elems[r].begin());
        const auto& p = rho_of[r][idx];
        return GFunctor{fibers[x], fibers[y], p, p};
      });
}

inline GFamily random_family(Rng& rng, GroupoidShape shape = {}) {
  return random_family_over(rng, random_groupoid(rng, shape));
}

/// Discrete container with 1..max_shapes shapes and 0..max_positions
/// positions per shape and index.
inline Container random_discrete_container(Rng& rng, std::vector<std::string> indices, int max_shapes,
                                           int max_positions) {
  const int n = 1 + pick(rng, max_shapes);
  std::vector<std::string> names;
  std::vector<std::vector<int>> counts;
  for (int s = 0; s < n; ++s) {
    names.push_back("s" + std::to_string(s));
    counts.emplace_back();
    for (std::size_t i = 0; i < indices.size(); ++i) counts.back().push_back(pick(rng, max_positions + 1));
  }
  return discrete_container(std::move(indices), names, counts);
}

} // namespace contcalc::catalog
