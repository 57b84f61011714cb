#include <gtest/gtest.h>

#include <random>

#include "contcalc/family.hpp"
#include "contcalc/invariant.hpp"
#include "contcalc/catalog.hpp"

using namespace contcalc;

namespace {

GroupoidRef ref(FinGroupoid g) { return share(std::move(g)); }

// Z2 with a broken table: s o s = s.
FinGroupoid broken_bz2() {
  GroupoidBuilder b;
  b.add_object("*");
  b.add_morphism("e", 0, 0);
  b.add_morphism("s", 0, 0);
  b.set_identity(0, 0);
  b.set_inverse(0, 0);
  b.set_inverse(1, 1);
  b.set_compose(0, 0, 0);
  b.set_compose(0, 1, 1);
  b.set_compose(1, 0, 1);
  b.set_compose(1, 1, 1);
  return b.build();
}

} // namespace

TEST(Groupoid, StandardGroupoidsValidate) {
  EXPECT_TRUE(validate_groupoid(bz2()).ok());
  EXPECT_TRUE(validate_groupoid(disc(3)).ok());
  EXPECT_TRUE(validate_groupoid(codisc(4)).ok());
  EXPECT_TRUE(validate_groupoid(symmetric_delooping(3)).ok());
  EXPECT_TRUE(validate_groupoid(action_groupoid(2, {{1, 0}})).ok());
  EXPECT_EQ(disc(0).object_count(), 0);
  EXPECT_TRUE(validate_groupoid(disc(0)).ok());
}

TEST(Groupoid, BrokenInverseIsReported) {
  auto r = validate_groupoid(broken_bz2());
  ASSERT_FALSE(r.ok());
  bool mentions = false;
  for (const auto& v : r.violations) mentions = mentions || v.find("no inverse for s") != std::string::npos;
  EXPECT_TRUE(mentions);
}

TEST(Groupoid, HomSets) {
  auto b = bz2();
  auto h = b.hom(0, 0);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(b.morphism_name(h[0]), "e");
  EXPECT_EQ(b.morphism_name(h[1]), "s");
  EXPECT_TRUE(disc(2).hom(0, 1).empty());
  EXPECT_EQ(codisc(2).hom(0, 1).size(), 1u);
  EXPECT_THROW(b.hom(0, 3), UnknownId);
}

TEST(Groupoid, AutOrder) {
  EXPECT_EQ(aut_order(bz2(), 0), 2);
  EXPECT_EQ(aut_order(disc(5), 3), 1);
  // oracle: stabilizer of a point under {id, swap}
  int stab = 0;
  for (auto p : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) stab += p[0] == 0;
  auto act = action_groupoid(2, {{1, 0}});
  EXPECT_EQ(aut_order(act, 0), stab);
  EXPECT_EQ(aut_order(act, 1), stab);
}

TEST(Groupoid, Components) {
  EXPECT_EQ(components(disc(3)).size(), 3u);
  EXPECT_EQ(components(codisc(4)).size(), 1u);
  auto s = sum_groupoid(ref(bz2()), ref(disc(1)));
  EXPECT_EQ(components(*s.sum).size(), 2u);
}

TEST(Groupoid, ComponentsInvariantUnderRelabeling) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    auto g = catalog::random_groupoid(rng);
    auto renamed = rename(*g, [](const std::string& s) { return "x" + s; });
    std::vector<int> order(g->object_count());
    for (int i = 0; i < g->object_count(); ++i) order[i] = g->object_count() - 1 - i;
    auto permuted = permute_objects(*g, order);
    EXPECT_EQ(components(renamed), components(*g));
    EXPECT_EQ(components(permuted).size(), components(*g).size());
    for (int a = 0; a < g->object_count(); ++a) {
      EXPECT_EQ(aut_order(renamed, a), aut_order(*g, a));
      EXPECT_EQ(aut_order(permuted, a), aut_order(*g, order[a]));
    }
  }
}

TEST(Functor, Validation) {
  auto b = ref(bz2());
  EXPECT_TRUE(validate_functor(identity_functor(b)).ok());
  auto d = ref(disc(2));
  GFunctor swap{d, d, {1, 0}, {1, 0}};
  EXPECT_TRUE(validate_functor(swap).ok());
  GFunctor bad{b, b, {0}, {1, 0}};
  auto r = validate_functor(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("identity not preserved"), std::string::npos);
}

TEST(Functor, EquivalenceReports) {
  auto one = ref(disc(1));
  auto c2 = ref(codisc(2));
  auto r1 = is_equivalence_functor(GFunctor{one, c2, {0}, {c2->identity(0)}});
  EXPECT_TRUE(r1.faithful && r1.full && r1.essentially_surjective);
  auto d2 = ref(disc(2));
  auto r2 = is_equivalence_functor(GFunctor{one, d2, {0}, {0}});
  EXPECT_FALSE(r2.essentially_surjective);
  EXPECT_TRUE(r2.embedding());
  auto b = ref(bz2());
  auto r3 = is_equivalence_functor(GFunctor{b, one, {0}, {0, 0}});
  EXPECT_FALSE(r3.faithful);
  EXPECT_TRUE(r3.full);
  EXPECT_FALSE(r3.equivalence());
}

TEST(Functor, EnumerationCounts) {
  // oracle: functors Disc(n) -> Disc(m) are m^n maps
  EXPECT_EQ(enumerate_functors(ref(disc(2)), ref(disc(3))).size(), 9u);
  // BZ2 -> BZ2: homomorphisms Z2 -> Z2
  EXPECT_EQ(enumerate_functors(ref(bz2()), ref(bz2())).size(), 2u);
  // Codisc(2) -> BZ2: one object choice, the morphism 0>1 free
  EXPECT_EQ(enumerate_functors(ref(codisc(2)), ref(bz2())).size(), 2u);
  auto fg = functor_groupoid(ref(bz2()), ref(bz2()));
  EXPECT_EQ(fg.groupoid->object_count(), 2);
  EXPECT_EQ(fg.groupoid->morphism_count(), 4);
  EXPECT_TRUE(validate_groupoid(*fg.groupoid).ok());
}

TEST(Functor, NatIsoValidation) {
  auto c = ref(codisc(2));
  auto one = ref(disc(1));
  GFunctor p0{one, c, {0}, {c->identity(0)}};
  GFunctor p1{one, c, {1}, {c->identity(1)}};
  EXPECT_TRUE(validate_natiso({p0, p1, {*c->find_morphism("0>1")}}).ok());
  EXPECT_FALSE(validate_natiso({p0, p1, {c->identity(0)}}).ok());
}

TEST(Invariant, Examples) {
  auto i1 = equiv_invariant(bz2());
  ASSERT_EQ(i1.groups.size(), 1u);
  EXPECT_EQ(i1.groups[0].order(), 2);
  auto i2 = equiv_invariant(codisc(3));
  ASSERT_EQ(i2.groups.size(), 1u);
  EXPECT_EQ(i2.groups[0].order(), 1);
  EXPECT_TRUE(groupoids_equivalent(action_groupoid(2, {{1, 0}}), codisc(2)));
  EXPECT_FALSE(groupoids_equivalent(bz2(), disc(1)));
  // Z4 and Z2 x Z2 share order but not structure
  EXPECT_FALSE(groupoids_equivalent(one_object(FiniteGroup::cyclic(4)),
                                    one_object(FiniteGroup::product(FiniteGroup::cyclic(2),
                                                                    FiniteGroup::cyclic(2)))));
  // S3 as a permutation group vs. its Cayley table built another way
  EXPECT_TRUE(groups_isomorphic(FiniteGroup::symmetric(3),
                                FiniteGroup::generated_by(3, {{1, 2, 0}, {0, 2, 1}})));
}

TEST(Invariant, AgreesWithEquivalenceFunctors) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto g = catalog::random_groupoid(rng);
    auto renamed = ref(permute_objects(*g, catalog::random_permutation(rng, g->object_count())));
    EXPECT_TRUE(groupoids_equivalent(*g, *renamed));
    // the skeleton inclusion is an equivalence
    std::vector<int> reps;
    for (const auto& c : components(*g)) reps.push_back(c.front());
    auto skel = full_subgroupoid(g, reps);
    GFunctor incl = make_functor(skel.sub, g, [&](int x) { return skel.object_to_base[x]; },
                                 [&](int m) { return skel.morphism_to_base[m]; });
    auto rep = is_equivalence_functor(incl);
    EXPECT_EQ(rep.equivalence(), groupoids_equivalent(*skel.sub, *g));
    EXPECT_TRUE(rep.equivalence());
  }
}

TEST(Family, Validation) {
  auto b = ref(bz2());
  auto d2 = ref(disc(2));
  EXPECT_TRUE(validate_family(constant_family(b, d2)).ok());
  GFamily swap{b, {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}};
  EXPECT_TRUE(validate_family(swap).ok());
  // s o s = e in the base but swap o swap would have to be the identity: break it
  auto c3 = ref(disc(3));
  GFamily bad{b, {c3}, {identity_functor(c3), GFunctor{c3, c3, {1, 2, 0}, {1, 2, 0}}}};
  EXPECT_FALSE(validate_family(bad).ok());
}

TEST(Family, RandomMutationIsRejected) {
  std::mt19937_64 rng(5);
  int mutated = 0;
  for (int t = 0; t < 60; ++t) {
    auto fam = catalog::random_family(rng);
    ASSERT_TRUE(validate_family(fam).ok());
    // mutate one non-identity transport entry
    std::vector<int> candidates;
    for (int m = 0; m < fam.base->morphism_count(); ++m)
      if (fam.transport[m].object_map.size() > 1) candidates.push_back(m);
    if (candidates.empty()) continue;
    int m = candidates[rng() % candidates.size()];
    // collapse two objects: the transport can no longer be invertible
    auto& om = fam.transport[m].object_map;
    om[0] = om[1];
    ++mutated;
    EXPECT_FALSE(validate_family(fam).ok());
  }
  EXPECT_GT(mutated, 10);
}

TEST(Sigma, Examples) {
  auto s1 = sigma_groupoid(constant_family(ref(disc(3)), ref(disc(2))));
  EXPECT_EQ(s1.total->object_count(), 6);
  EXPECT_TRUE(s1.total->is_discrete());
  auto b = ref(bz2());
  auto d2 = ref(disc(2));
  GFamily swap{b, {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}};
  auto s2 = sigma_groupoid(swap);
  EXPECT_TRUE(validate_groupoid(*s2.total).ok());
  EXPECT_TRUE(groupoids_equivalent(*s2.total, codisc(2)));
  auto s3 = sigma_groupoid(constant_family(b, d2));
  auto inv = equiv_invariant(*s3.total);
  EXPECT_EQ(inv.orders(), (std::vector<int>{2, 2}));
}
