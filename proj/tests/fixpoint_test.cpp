#include <gtest/gtest.h>

#include "contcalc/fixpoint.hpp"

using namespace contcalc;

namespace {

ContainerRef list_sig(int letters) {
  std::vector<std::string> names{"nil"};
  std::vector<std::vector<int>> counts{{0, 0}};
  for (int k = 0; k < letters; ++k) {
    names.push_back(letters == 1 ? "cons" : std::string("cons_") + char('a' + k));
    counts.push_back({1, 1});
  }
  return share(discrete_container({"x", "rec"}, names, counts));
}

ContainerRef btree_sig() { return share(discrete_container({"x", "rec"}, {"leaf", "node"}, {{0, 0}, {1, 2}})); }

// oracle: lists over |E| letters of length < d
long long list_count(int letters, int d) {
  long long n = 0, p = 1;
  for (int len = 0; len < d; ++len, p *= letters) n += p;
  return n;
}

// oracle: binary trees of depth ≤ d, t(k) = 1 + t(k-1)^2
long long btree_count(int d) {
  long long t = 0;
  for (int k = 0; k < d; ++k) t = 1 + t * t;
  return t;
}

} // namespace

TEST(Trees, Counts) {
  for (int d = 0; d <= 5; ++d) {
    EXPECT_EQ(mu_container(list_sig(1), d).trees.size(), static_cast<std::size_t>(list_count(1, d)));
    EXPECT_EQ(mu_container(list_sig(2), d).trees.size(), static_cast<std::size_t>(list_count(2, d)));
  }
  for (int d = 0; d <= 4; ++d) EXPECT_EQ(mu_container(btree_sig(), d).trees.size(), static_cast<std::size_t>(btree_count(d)));
  EXPECT_EQ(btree_count(3), 5);
  EXPECT_TRUE(mu_container(list_sig(1), 0).trees.empty());
}

TEST(Trees, PrefixOrder) {
  auto mu = mu_container(btree_sig(), 4);
  ASSERT_EQ(mu.level_count, (std::vector<int>{0, 1, 2, 5, 26}));
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < mu.level_count[k]; ++t) EXPECT_LE(mu.trees[t].depth(), k);
  for (int t = 0; t < static_cast<int>(mu.trees.size()); ++t) EXPECT_EQ(mu.find(mu.trees[t]), t);
}

TEST(Trees, Paths) {
  auto sig = list_sig(2);
  WTree nil{0, {}};
  WTree w{1, {WTree{2, {WTree{1, {nil}}}}}};
  EXPECT_EQ(tree_literal(*sig, w), "cons_a(cons_b(cons_a(nil)))");
  auto ps = wpaths(*sig, 0, w);
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_EQ(path_literal(*sig, 0, ps[0]), "[x:0]");
  EXPECT_EQ(path_literal(*sig, 0, ps[2]), "[0,0,x:0]");
  auto mu = mu_container(sig, 4);
  EXPECT_EQ(mu.path_count(0, *mu.find(w)), 3);
  EXPECT_EQ(subtree_at(w, {0, 0}), (WTree{1, {nil}}));
  EXPECT_FALSE(subtree_at(w, {1}).has_value());
}

TEST(Trees, SizeLimit) {
  Limits small;
  small.max_cells = 20;
  EXPECT_THROW(mu_container(btree_sig(), 4, small), SizeError);
  EXPECT_NO_THROW(mu_container(btree_sig(), 3, small));
}

TEST(InOut, Roundtrip) {
  for (const auto& sig : {list_sig(1), list_sig(2), btree_sig()}) {
    auto mu = mu_container(sig, 4);
    auto r = in_out_roundtrip(mu);
    EXPECT_EQ(r.levels, 4);
    EXPECT_TRUE(r.out_after_in);
    EXPECT_TRUE(r.in_after_out);
    auto io = in_out(mu, 4);
    EXPECT_TRUE(validate_cart(io.in).ok());
    EXPECT_TRUE(validate_cart(io.out).ok());
  }
}

namespace {

// hand-written length: each tree to its number of x-positions, positions in path order
CartMorphism length_morphism(const MuContainer& mu, const Algebra& size) {
  std::vector<int> objs;
  for (int t = 0; t < mu.levels.back()->shape_count(); ++t) objs.push_back(static_cast<int>(wpaths(*mu.signature, 0, mu.trees[t]).size()));
  return discrete_relabel(mu.levels.back(), size.carrier, objs);
}

int max_paths(const MuContainer& mu) {
  int n = 0;
  for (int t = 0; t < static_cast<int>(mu.trees.size()); ++t) n = std::max(n, mu.path_count(0, t));
  return n;
}

} // namespace

TEST(Rec, InAlgebraGivesIdentity) {
  for (const auto& sig : {list_sig(1), list_sig(2), btree_sig()}) {
    auto mu = mu_container(sig, 4);
    auto r = rec(mu, in_algebra(mu));
    EXPECT_TRUE(r.square_holds());
    EXPECT_TRUE(validate_cart(r.morphism()).ok());
    EXPECT_TRUE(morphism_eq(r.morphism(), id_cart(mu.levels[4])).strict);
  }
}

TEST(Rec, LengthExample) {
  auto sig = list_sig(1);
  auto mu = mu_container(sig, 4);
  auto size = size_algebra(sig, 4);
  auto r = rec(mu, size);
  EXPECT_TRUE(r.square_holds());
  const int ee = *mu.find(WTree{1, {WTree{1, {WTree{0, {}}}}}});
  const auto& m = r.morphism();
  EXPECT_EQ(m.shape(ee), 2);
  EXPECT_EQ(m.pos[0][ee].object_map, (std::vector<int>{0, 1}));
  for (int t = 0; t < mu.level_count[4]; ++t) EXPECT_EQ(m.shape(t), mu.trees[t].depth() - 1);
}

TEST(Rec, SizeOnTrees) {
  auto sig = btree_sig();
  auto mu = mu_container(sig, 4);
  auto r = rec(mu, size_algebra(sig, max_paths(mu)));
  EXPECT_TRUE(r.square_holds());
  for (int t = 0; t < mu.level_count[4]; ++t) EXPECT_EQ(r.morphism().shape(t), mu.path_count(0, t));
  // the bound is too small for the largest trees
  EXPECT_THROW(rec(mu, size_algebra(sig, 3)), PreconditionError);
}

TEST(Rec, PermutedCopy) {
  auto mu = mu_container(list_sig(2), 4);
  auto rl = reversed_in_algebra(mu);
  auto r = rec(mu, rl.algebra);
  EXPECT_TRUE(r.square_holds());
  EXPECT_TRUE(morphism_eq(r.morphism(), rl.relabel).strict);
}

TEST(Rec, Agreement) {
  auto sig = list_sig(2);
  auto mu = mu_container(sig, 4);
  auto size = size_algebra(sig, 3);
  auto by_rec = rec(mu, size).morphism();
  auto self = algebra_morphism_agrees(mu, size, by_rec);
  EXPECT_TRUE(self.algebra_morphism);
  EXPECT_TRUE(self.agrees);
  auto by_hand = algebra_morphism_agrees(mu, size, length_morphism(mu, size));
  EXPECT_TRUE(by_hand.algebra_morphism);
  EXPECT_TRUE(by_hand.agrees);

  // swapping cons_a(nil) and cons_b(nil) breaks the square of In
  auto in = in_algebra(mu);
  std::vector<int> objs(mu.level_count[4]);
  for (int t = 0; t < mu.level_count[4]; ++t) objs[t] = t;
  const int a = *mu.find(WTree{1, {WTree{0, {}}}}), b = *mu.find(WTree{2, {WTree{0, {}}}});
  std::swap(objs[a], objs[b]);
  auto bad = algebra_morphism_agrees(mu, in, discrete_relabel(mu.levels[4], mu.levels[4], objs));
  EXPECT_FALSE(bad.algebra_morphism);
  EXPECT_EQ(bad.failing_level, 2);
}

TEST(WRec, Embedding) {
  const long long big = 1'000'000;
  auto lists = wrec_embedding_check(mu_container(list_sig(1), 4), big, cantor_step());
  EXPECT_EQ(lists.trees, 4);
  EXPECT_TRUE(lists.precondition());
  EXPECT_TRUE(lists.wrec_injective);
  auto trees = wrec_embedding_check(mu_container(btree_sig(), 3), big, cantor_step());
  EXPECT_EQ(trees.trees, 5);
  EXPECT_TRUE(trees.precondition());
  EXPECT_TRUE(trees.wrec_injective);
  EXPECT_TRUE(wrec_embedding_check(mu_container(btree_sig(), 4), big, cantor_step()).wrec_injective);

  auto constant = wrec_embedding_check(mu_container(list_sig(1), 4), big,
                                       [](int, const std::vector<long long>&) { return std::optional<long long>(0); });
  EXPECT_FALSE(constant.step_injective);
  EXPECT_FALSE(constant.precondition());
  EXPECT_TRUE(constant.holds());
  // too small a target set leaves h partial
  EXPECT_FALSE(wrec_embedding_check(mu_container(btree_sig(), 4), 10, cantor_step()).total);
}

namespace {

// oracle: Σ_{n < d} n·|E|^n, holes in lists of length < d
long long list_holes(int letters, int d) {
  long long n = 0, p = 1;
  for (int len = 0; len < d; ++len, p *= letters) n += len * p;
  return n;
}

// oracle: nodes summed over binary trees of depth ≤ d, S(k) = t(k-1)² + 2·t(k-1)·S(k-1)
long long btree_holes(int d) {
  long long t = 0, s = 0;
  for (int k = 0; k < d; ++k) {
    s = t * t + 2 * t * s;
    t = 1 + t * t;
  }
  return s;
}

} // namespace

TEST(MuRule, ListsAreStrong) {
  EXPECT_EQ(list_holes(2, 5), 98);
  EXPECT_EQ(list_holes(1, 4), 6);
  for (int letters : {1, 2})
    for (int d = 1; d <= 5; ++d) {
      auto r = mu_rule(mu_container(list_sig(letters), d), 0);
      EXPECT_TRUE(r.valid);
      EXPECT_TRUE(r.injective);
      EXPECT_EQ(r.value_count, list_holes(letters, d)) << letters << " " << d;
      EXPECT_EQ(r.hole_count, list_holes(letters, d));
      EXPECT_TRUE(r.strong_by_count);
      EXPECT_TRUE(r.chain_strong);
      EXPECT_TRUE(r.flags_agree());
    }
}

TEST(MuRule, BinaryTrees) {
  EXPECT_EQ(btree_holes(3), 8);
  for (int d = 1; d <= 4; ++d) {
    auto r = mu_rule(mu_container(btree_sig(), d), 0);
    EXPECT_TRUE(r.injective);
    EXPECT_EQ(r.value_count, btree_holes(d));
    EXPECT_EQ(r.hole_count, btree_holes(d));
    EXPECT_TRUE(r.flags_agree());
  }
}

TEST(MuRule, TowersAgreeOnDiscreteSignatures) {
  auto sig = list_sig(2);
  auto by_trees = mu_rule(mu_container(sig, 4), 0);
  auto by_subst = mu_rule(substitution_tower(sig, 4), 0);
  EXPECT_EQ(by_trees.value_count, by_subst.value_count);
  EXPECT_EQ(by_subst.value_count, by_subst.hole_count);
  EXPECT_TRUE(by_subst.strong_by_equivalence);
}

TEST(MuRule, SymmetricSignatureIsNotStrong) {
  auto sig = symmetric_signature();
  ASSERT_TRUE(validate_container(*sig).ok());
  for (int d = 1; d <= 2; ++d) {
    auto r = mu_rule(substitution_tower(sig, d), 0);
    EXPECT_TRUE(r.injective);
    EXPECT_TRUE(r.chain_strong);
    EXPECT_TRUE(r.flags_agree());
  }
  auto r = mu_rule(substitution_tower(sig, 3), 0);
  EXPECT_TRUE(r.injective);
  EXPECT_FALSE(r.strong_by_count);
  EXPECT_FALSE(r.chain_strong);
  EXPECT_TRUE(r.flags_agree());
  EXPECT_LT(r.value_count, r.hole_count);
  EXPECT_THROW(mu_container(sig, 2), PreconditionError);
}
