#include <gtest/gtest.h>

#include "contcalc/catalog.hpp"
#include "contcalc/laws.hpp"

using namespace contcalc;

namespace {

GroupoidRef ref(FinGroupoid g) { return share(std::move(g)); }

// oracle: Σ_{s,t} (|P_s| + |Q_t|) for unary discrete containers
int leibniz_oracle(const Container& f, const Container& g) {
  int n = 0;
  for (int s = 0; s < f.shape_count(); ++s)
    for (int t = 0; t < g.shape_count(); ++t) n += f.fiber(0, s).object_count() + g.fiber(0, t).object_count();
  return n;
}

ContainerRef swap_fiber_container() {
  auto d2 = ref(disc(2));
  GFamily swap{ref(bz2()), {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}};
  return share(family_container(swap));
}

} // namespace

TEST(Laws, LeibnizExample) {
  auto f = share(unary_discrete({2}));
  auto g = share(unary_discrete({3}));
  auto r = law_leibniz(f, g);
  EXPECT_TRUE(r.holds()) << (r.validation.ok() ? "" : r.validation.violations.front());
  EXPECT_EQ(r.morphism.source->shape_count(), 5);
  EXPECT_EQ(r.morphism.target->shape_count(), 5);
}

TEST(Laws, SumWithConstant) {
  auto k = share(const_c(ref(disc(2))));
  auto g = share(unary_discrete({1, 2}));
  auto r = law_sum(k, g);
  EXPECT_TRUE(r.holds());
  // ∂const is empty: only the ∂G summand remains
  EXPECT_EQ(r.morphism.source->shape_count(), 3);
}

TEST(Laws, LeibnizOnGroupoidInstance) {
  auto f = share(unary_discrete({2}));
  auto g = swap_fiber_container();
  auto r = law_leibniz(f, g);
  EXPECT_TRUE(r.holds()) << (r.validation.ok() ? "" : r.validation.violations.front());
  auto b = share(single_shape(ref(bz2())));
  EXPECT_TRUE(law_leibniz(f, b).holds());
  EXPECT_TRUE(law_sum(b, g).holds());
}

TEST(Laws, IdentityAndConstant) {
  auto di = derivative(share(idc()), 0);
  EXPECT_TRUE(groupoids_equivalent(*di.container->shapes, disc(1)));
  EXPECT_EQ(di.container->fiber(0, 0).object_count(), 0);
  auto dk = derivative(share(const_c(ref(codisc(3)))), 0);
  EXPECT_EQ(dk.container->shape_count(), 0);
}

TEST(Laws, CatalogSweep) {
  catalog::Rng rng(29);
  for (int t = 0; t < 60; ++t) {
    auto f = share(catalog::random_discrete_container(rng, {"x"}, 3, 3));
    auto g = share(catalog::random_discrete_container(rng, {"x"}, 3, 3));
    auto s = law_sum(f, g);
    EXPECT_TRUE(s.holds()) << "sum " << t;
    auto l = law_leibniz(f, g);
    EXPECT_TRUE(l.holds()) << "leibniz " << t;
    EXPECT_EQ(l.morphism.target->shape_count(), leibniz_oracle(*f, *g));
    EXPECT_EQ(l.morphism.source->shape_count(), leibniz_oracle(*f, *g));
  }
}

TEST(Laws, TwoIndexSweep) {
  catalog::Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    auto f = share(catalog::random_discrete_container(rng, {"x", "y"}, 3, 3));
    auto g = share(catalog::random_discrete_container(rng, {"x", "y"}, 3, 3));
    const int i = t % 2;
    EXPECT_TRUE(law_sum(f, g, i).holds());
    EXPECT_TRUE(law_leibniz(f, g, i).holds());
  }
}

TEST(Bag, Structure) {
  auto b = bag_container(3);
  EXPECT_TRUE(validate_container(*b).ok());
  EXPECT_EQ(b->shape_count(), 4);
  auto d = derivative(b, 0);
  // one derivative shape per n ≥ 1, holding n-1 positions
  std::vector<int> sizes;
  for (const auto& cls : components(*d.container->shapes))
    sizes.push_back(d.container->fiber(0, cls.front()).object_count());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(bag_container(5), PreconditionError);
}

TEST(Bag, FixedPoint) {
  for (int n = 1; n <= 4; ++n) {
    auto r = bag_fixed_point_check(n);
    EXPECT_TRUE(r.derivative_shapes == r.smaller_bag_shapes) << "N=" << n;
    // oracle: automorphism orders (k-1)! for 1 ≤ k ≤ N
    std::vector<int> want;
    for (int k = 1, f = 1; k <= n; f *= k, ++k) want.push_back(f);
    auto got = r.derivative_shapes.orders();
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << "N=" << n;
    EXPECT_TRUE(r.matches());
  }
  auto one = bag_fixed_point_check(1);
  EXPECT_EQ(one.derivative_shapes.component_count(), 1);
}
