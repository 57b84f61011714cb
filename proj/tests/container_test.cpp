#include <gtest/gtest.h>

#include "contcalc/catalog.hpp"
#include "contcalc/container.hpp"

using namespace contcalc;

namespace {

GroupoidRef ref(FinGroupoid g) { return share(std::move(g)); }

int total_positions(const Container& c, int i) {
  int n = 0;
  for (int s = 0; s < c.shape_count(); ++s) n += c.fiber(i, s).object_count();
  return n;
}

// List signature over {x, rec}: nil has no positions, cons one of each.
ContainerRef list_signature() {
  return share(discrete_container({"x", "rec"}, {"nil", "cons"}, {{0, 0}, {1, 1}}));
}

// Morphism on (2 ◁ [2,2]) swapping the shapes, positions unchanged.
CartMorphism shape_swap(const ContainerRef& c) {
  CartMorphism m{c, c, GFunctor{c->shapes, c->shapes, {1, 0}, {1, 0}}, {{}}};
  for (int s = 0; s < 2; ++s) m.pos[0].push_back(identity_functor(c->positions[0].fibers[1 - s]));
  // target fiber at swapped shape has the same tables as the source fiber
  for (int s = 0; s < 2; ++s) m.pos[0][s].target = c->positions[0].fibers[s];
  return m;
}

} // namespace

TEST(Container, Validation) {
  EXPECT_TRUE(validate_container(idc()).ok());
  auto c = share(idc());
  EXPECT_TRUE(validate_cart(id_cart(c)).ok());
  auto b = ref(bz2());
  auto d3 = ref(disc(3));
  Container broken{{"x"}, b, {GFamily{b, {d3}, {identity_functor(d3), GFunctor{d3, d3, {1, 2, 0}, {1, 2, 0}}}}}};
  EXPECT_FALSE(validate_container(broken).ok());
  Container no_index{{}, b, {}};
  EXPECT_FALSE(validate_container(no_index).ok());
}

TEST(Container, BasicConstructions) {
  auto k = const_c(ref(disc(2)));
  EXPECT_EQ(k.shape_count(), 2);
  EXPECT_EQ(total_positions(k, 0), 0);
  auto i = idc();
  EXPECT_EQ(i.shape_count(), 1);
  EXPECT_EQ(total_positions(i, 0), 1);
  auto w = weaken(unary_discrete({2, 1}));
  EXPECT_EQ(w.index_count(), 2);
  EXPECT_EQ(total_positions(w, 1), 0);
  EXPECT_TRUE(validate_container(w).ok());
  auto p = proj({"x", "y", "z"}, 1);
  EXPECT_EQ(total_positions(p, 0), 0);
  EXPECT_EQ(total_positions(p, 1), 1);
  EXPECT_THROW(proj({"x"}, 2), UnknownId);
}

TEST(Container, SumAndProduct) {
  auto a = share(unary_discrete({2}));
  auto b = share(unary_discrete({3}));
  auto s = sum_c(a, b);
  EXPECT_EQ(s.container->shape_count(), 2);
  EXPECT_EQ(s.container->fiber(0, 0).object_count(), 2);
  EXPECT_EQ(s.container->fiber(0, 1).object_count(), 3);
  auto p = prod_c(a, b);
  EXPECT_EQ(p.container->shape_count(), 1);
  EXPECT_EQ(p.container->fiber(0, 0).object_count(), 5);
  EXPECT_TRUE(validate_container(*p.container).ok());
  // unit law: F × const(1) has the same shapes and positions
  auto f = share(unary_discrete({1, 3, 0}));
  auto u = prod_c(f, share(const_c(unit_groupoid())));
  EXPECT_TRUE(groupoids_equivalent(*u.container->shapes, *f->shapes));
  for (int s = 0; s < 3; ++s) EXPECT_EQ(u.container->fiber(0, s).object_count(), f->fiber(0, s).object_count());
}

TEST(Container, CategoryLaws) {
  auto c = share(unary_discrete({2, 2}));
  auto sw = shape_swap(c);
  ASSERT_TRUE(validate_cart(sw).ok());
  auto id = id_cart(c);
  EXPECT_TRUE(morphism_eq(compose_cart(id, sw), sw).equal);
  EXPECT_TRUE(morphism_eq(compose_cart(sw, id), sw).equal);
  auto twice = compose_cart(sw, sw);
  EXPECT_TRUE(morphism_eq(twice, id).strict);
  EXPECT_TRUE(morphism_eq(compose_cart(sw, compose_cart(sw, sw)), compose_cart(compose_cart(sw, sw), sw)).equal);
  EXPECT_FALSE(morphism_eq(sw, id).equal);
  EXPECT_TRUE(is_container_equivalence(sw));
}

TEST(Container, MorphismEqUpToNaturalIso) {
  // two morphisms idc -> (Codisc(2) ◁ 1) picking different but isomorphic shapes
  auto c2 = ref(codisc(2));
  auto tgt = share(family_container(constant_family(c2, unit_groupoid())));
  auto src = share(idc());
  auto one = unit_groupoid();
  CartMorphism m0{src, tgt, GFunctor{src->shapes, c2, {0}, {c2->identity(0)}}, {{identity_functor(one)}}};
  CartMorphism m1{src, tgt, GFunctor{src->shapes, c2, {1}, {c2->identity(1)}}, {{identity_functor(one)}}};
  ASSERT_TRUE(validate_cart(m0).ok());
  auto eq = morphism_eq(m0, m1);
  EXPECT_TRUE(eq.equal);
  EXPECT_FALSE(eq.strict);
}

TEST(Subst, Examples) {
  // F = (1 ◁ 1 at the recursive index): F[G] ≃ G
  auto g = share(unary_discrete({0, 2, 1}));
  auto f = share(discrete_container({"x", "rec"}, {"k"}, {{0, 1}}));
  auto fg = subst(f, g);
  EXPECT_TRUE(validate_container(*fg.container).ok());
  EXPECT_EQ(fg.container->shape_count(), 3);
  for (int s = 0; s < 3; ++s)
    EXPECT_EQ(fg.container->fiber(0, s).object_count(), g->fiber(0, fg.assignment(s)(0)).object_count());

  // (1 ◁ 2 at rec)[(1 ◁ 2)]: 1 shape with 2 * 2 = 4 positions
  auto two = share(discrete_container({"x", "rec"}, {"k"}, {{0, 2}}));
  auto t = subst(two, share(unary_discrete({2})));
  EXPECT_EQ(t.container->shape_count(), 1);
  EXPECT_EQ(t.container->fiber(0, 0).object_count(), 4);

  // List[const 0] has only nil
  auto l0 = subst(list_signature(), share(const_c(empty_ref())));
  EXPECT_EQ(l0.container->shape_count(), 1);
  EXPECT_EQ(l0.container->shapes->object_name(0).rfind("(nil", 0), 0u);

  EXPECT_THROW(subst(g, g), PreconditionError);
}

TEST(Subst, GroupoidPositionsValidate) {
  // F with BZ2 at the recursive index, G with a codiscrete shape groupoid
  auto f = share(Container{{"x", "rec"}, unit_groupoid(),
                           {constant_family(unit_groupoid(), ref(disc(1))), constant_family(unit_groupoid(), ref(bz2()))}});
  auto d2 = ref(disc(2));
  GFamily sw{ref(bz2()), {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}};
  auto g = share(family_container(sw));
  auto fg = subst(f, g);
  EXPECT_TRUE(validate_container(*fg.container).ok());
  // Fun(BZ2, BZ2) has 2 objects
  EXPECT_EQ(fg.container->shape_count(), 2);
}

TEST(Subst, FunctorialityOfSubstMap) {
  auto f = list_signature();
  auto g = share(unary_discrete({2, 2}));
  auto sw = shape_swap(g);
  auto fg = subst(f, g);
  auto m = subst_map(fg, fg, sw);
  EXPECT_TRUE(validate_cart(m).ok());
  EXPECT_TRUE(morphism_eq(subst_map(fg, fg, id_cart(g)), id_cart(fg.container)).strict);
  EXPECT_TRUE(morphism_eq(compose_cart(m, m), subst_map(fg, fg, compose_cart(sw, sw))).equal);
}

TEST(Extension, Examples) {
  auto x = ref(codisc(2));
  EXPECT_TRUE(groupoids_equivalent(*extension(idc(), {x}).total, *x));
  auto e = extension(unary_discrete({2}), {ref(disc(3))});
  EXPECT_EQ(e.total->object_count(), 9);
  EXPECT_TRUE(e.total->is_discrete());
}

TEST(Extension, RespectsSubstitution) {
  catalog::Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    auto f = share(catalog::random_discrete_container(rng, {"x", "rec"}, 2, 2));
    auto g = share(catalog::random_discrete_container(rng, {"x"}, 2, 2));
    auto x = ref(disc(1 + catalog::pick(rng, 2)));
    auto lhs = extension(*subst(f, g).container, {x});
    auto inner = extension(*g, {x});
    auto rhs = extension(*f, {x, inner.total});
    EXPECT_TRUE(groupoids_equivalent(*lhs.total, *rhs.total));
  }
}

TEST(Derivative, Examples) {
  auto di = derivative(share(idc()), 0);
  EXPECT_EQ(di.container->shape_count(), 1);
  EXPECT_EQ(total_positions(*di.container, 0), 0);
  auto dk = derivative(share(const_c(ref(disc(3)))), 0);
  EXPECT_EQ(dk.container->shape_count(), 0);
  auto db = derivative(share(single_shape(ref(bz2()))), 0);
  EXPECT_EQ(db.container->shape_count(), 0);
  auto dl = derivative(list_signature(), "x");
  EXPECT_EQ(dl.container->shape_count(), 1);
  EXPECT_EQ(dl.container->fiber(0, 0).object_count(), 0);
  EXPECT_EQ(dl.container->fiber(1, 0).object_count(), 1);
  EXPECT_TRUE(validate_container(*dl.container).ok());
}

TEST(Derivative, UnitSanity) {
  auto f = share(unary_discrete({2, 0, 3}));
  auto u = prod_c(f, share(const_c(unit_groupoid())));
  auto d1 = derivative(f, 0);
  auto d2 = derivative(u.container, 0);
  EXPECT_TRUE(groupoids_equivalent(*d1.container->shapes, *d2.container->shapes));
  EXPECT_EQ(derivative(share(const_c(unit_groupoid())), 0).container->shape_count(), 0);
}

TEST(Derivative, GroupoidInstancesValidate) {
  // Bag-like: BS3 acting on 3 positions
  std::vector<Permutation> perms;
  auto s3 = ref(symmetric_delooping(3, &perms));
  auto d3 = ref(disc(3));
  auto fam = make_family(s3, [&](int) { return d3; }, [&](int m) { return GFunctor{d3, d3, perms[m], perms[m]}; });
  auto c = share(family_container(fam));
  ASSERT_TRUE(validate_container(*c).ok());
  auto d = derivative(c, 0);
  EXPECT_TRUE(validate_container(*d.container).ok());
  auto inv = equiv_invariant(*d.container->shapes);
  EXPECT_EQ(inv.orders(), (std::vector<int>{2}));
}

TEST(DerMap, FunctorLaws) {
  auto c = share(unary_discrete({2, 2}));
  auto d = derivative(c, 0);
  auto id = der_map(id_cart(c), d, d);
  EXPECT_TRUE(validate_cart(id).ok());
  EXPECT_TRUE(morphism_eq(id, id_cart(d.container)).strict);
  auto sw = shape_swap(c);
  auto dsw = der_map(sw, d, d);
  EXPECT_TRUE(validate_cart(dsw).ok());
  EXPECT_EQ(dsw.shape.object_map, (std::vector<int>{2, 3, 0, 1}));
  EXPECT_TRUE(morphism_eq(der_map(compose_cart(sw, sw), d, d), compose_cart(dsw, dsw)).equal);
}

TEST(DerMap, PreservesTruncation) {
  catalog::Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    auto c = share(catalog::random_discrete_container(rng, {"x"}, 3, 3));
    auto d = derivative(c, 0);
    auto fl = truncation_flags(*d.container);
    EXPECT_TRUE(fl.discrete_positions);
    EXPECT_TRUE(fl.setlike_shapes);
  }
}
