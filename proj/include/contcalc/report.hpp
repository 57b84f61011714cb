#pragma once

#include "contcalc/adjunction.hpp"
#include "contcalc/catalog.hpp"
#include "contcalc/chain.hpp"
#include "contcalc/io.hpp"
#include "contcalc/laws.hpp"
#include "contcalc/signature.hpp"
#include "contcalc/zipper.hpp"

namespace contcalc {

struct Report {
  std::string command;
  Json instances = Json::array();
  Json metrics = Json::object();
  std::optional<Json> counterexample;
  bool pass = true;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["instances"] = instances;
    j["status"] = pass ? "pass" : "fail";
    j["metrics"] = metrics;
    if (counterexample) j["counterexample"] = *counterexample;
    return j;
  }
};

struct SweepOptions {
  std::uint64_t seed = 1;
  int count = 50;
};

inline Json container_summary(const Container& c) {
  Json j;
  j["indices"] = c.indices;
  j["shapes"] = c.shape_count();
  j["components"] = components(*c.shapes).size();
  j["discrete"] = c.discrete();
  return j;
}

inline Json signature_instance(const std::string& name, const Container& c) {
  Json j{{"signature", name}};
  j.update(container_summary(c));
  return j;
}

inline std::vector<std::pair<ContainerRef, ContainerRef>> discrete_pairs(const SweepOptions& o, std::vector<std::string> indices = {"x"}) {
  catalog::Rng rng(o.seed);
  std::vector<std::pair<ContainerRef, ContainerRef>> out;
  for (int k = 0; k < o.count; ++k) {
    auto f = share(catalog::random_discrete_container(rng, indices, 3, 3));
    auto g = share(catalog::random_discrete_container(rng, indices, 3, 3));
    out.emplace_back(f, g);
  }
  return out;
}

inline Json sweep_instance(const char* kind, const SweepOptions& o) {
  return Json{{"catalog", kind}, {"seed", o.seed}, {"pairs", o.count}};
}

// ---------------------------------------------------------------------------
// Laws

inline int leibniz_count(const Container& f, const Container& g) {
  int n = 0;
  for (int s = 0; s < f.shape_count(); ++s)
    for (int t = 0; t < g.shape_count(); ++t) n += f.fiber(0, s).object_count() + g.fiber(0, t).object_count();
  return n;
}

inline Report report_sum(const SweepOptions& o) {
  Report r{"check sum"};
  r.instances.push_back(sweep_instance("discrete", o));
  int holds = 0;
  for (const auto& [f, g] : discrete_pairs(o)) holds += law_sum(f, g).holds();
  r.metrics["pairs"] = o.count;
  r.metrics["equivalences"] = holds;
  r.pass = holds == o.count;
  return r;
}

inline Report report_leibniz(const SweepOptions& o) {
  Report r{"check leibniz"};
  r.instances.push_back(sweep_instance("discrete", o));
  int holds = 0, counts = 0, shapes = 0;
  std::optional<int> failing;
  int k = 0;
  for (const auto& [f, g] : discrete_pairs(o)) {
    auto l = law_leibniz(f, g);
    const int expected = leibniz_count(*f, *g);
    shapes += l.morphism.target->shape_count();
    holds += l.holds();
    const bool counted = l.morphism.source->shape_count() == expected && l.morphism.target->shape_count() == expected;
    counts += counted;
    if ((!l.holds() || !counted) && !failing) failing = k;
    ++k;
  }
  auto di = derivative(share(idc()), 0);
  auto dk = derivative(share(const_c(share(disc(2)))), 0);
  const bool identity_rule = groupoids_equivalent(*di.container->shapes, disc(1)) && di.container->fiber(0, 0).object_count() == 0;
  const bool constant_rule = dk.container->shape_count() == 0;
  r.metrics["pairs"] = o.count;
  r.metrics["equivalences"] = holds;
  r.metrics["count_identity"] = counts;
  r.metrics["total_shapes"] = shapes;
  r.metrics["identity_rule"] = identity_rule;
  r.metrics["constant_rule"] = constant_rule;
  r.pass = holds == o.count && counts == o.count && identity_rule && constant_rule;
  if (failing) r.counterexample = Json{{"pair", *failing}};
  return r;
}

inline Report report_law_instance(const std::string& law, const ContainerRef& f, const ContainerRef& g, int i) {
  Report r{"check " + law};
  r.instances.push_back(container_summary(*f));
  r.instances.push_back(container_summary(*g));
  auto l = law == "sum" ? law_sum(f, g, i) : law_leibniz(f, g, i);
  r.metrics["source_shapes"] = l.morphism.source->shape_count();
  r.metrics["target_shapes"] = l.morphism.target->shape_count();
  r.metrics["valid"] = l.validation.ok();
  r.metrics["equivalence"] = l.report.equivalence();
  r.pass = l.holds();
  if (!l.validation.ok()) r.counterexample = Json{{"violation", l.validation.violations.front()}};
  return r;
}

// ---------------------------------------------------------------------------
// Adjunction

inline Report report_adjunction(const SweepOptions& o) {
  Report r{"check adjunction"};
  r.instances.push_back(sweep_instance("discrete", o));
  int triangles = 0, squares = 0, squares_ok = 0, hom_checked = 0, hom_ok = 0, hom_skipped = 0;
  int iterated_checked = 0, iterated_ok = 0;
  int k = 0;
  for (const auto& [f, g] : discrete_pairs(o)) {
    std::vector<CartMorphism> samples;
    try {
      auto all = enumerate_cart(f, g);
      for (std::size_t s = 0; s < all.size() && s < 3; ++s) samples.push_back(all[s]);
    } catch (const SizeError&) {
    }
    auto t = triangle_check(f, samples);
    triangles += t.unit_triangle && t.counit_triangle;
    squares += t.unit_squares + t.counit_squares;
    squares_ok += t.unit_squares_ok + t.counit_squares_ok;
    try {
      auto tr = transposition_check(f, g);
      ++hom_checked;
      hom_ok += tr.ok();
    } catch (const SizeError&) {
      ++hom_skipped;
    }
    if (k < 10) {
      for (int n = 1; n <= 3; ++n) {
        try {
          auto h = iterated_hom_identity(f, g, n);
          ++iterated_checked;
          iterated_ok += h.holds();
        } catch (const SizeError&) {
        }
      }
    }
    ++k;
  }
  r.metrics["pairs"] = o.count;
  r.metrics["triangles"] = triangles;
  r.metrics["squares"] = squares;
  r.metrics["squares_ok"] = squares_ok;
  r.metrics["hom_identity_checked"] = hom_checked;
  r.metrics["hom_identity_ok"] = hom_ok;
  r.metrics["hom_identity_over_cap"] = hom_skipped;
  r.metrics["iterated_checked"] = iterated_checked;
  r.metrics["iterated_ok"] = iterated_ok;
  r.pass = triangles == o.count && squares == squares_ok && hom_checked == hom_ok && iterated_checked == iterated_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Chain rule

inline Json failing_cell_json(const FailingCell& c) {
  return Json{{"shape", c.shape}, {"outer_shape", c.outer_shape}, {"functor", c.functor}};
}

inline Report report_chain(const SweepOptions& o) {
  Report r{"check chain"};
  r.instances.push_back(sweep_instance("discrete", o));
  r.instances.push_back(sweep_instance("groupoid", o));
  int strong = 0, embeddings = 0, agree = 0;
  for (const auto& [f, g] : discrete_pairs(o)) {
    auto c = chain_unary(f, g);
    strong += c.is_strong;
    embeddings += c.is_embedding;
    agree += c.criteria_agree();
  }
  catalog::Rng rng(o.seed);
  catalog::GroupoidShape small{3, 8, false};
  int g_embeddings = 0, g_strong = 0, g_agree = 0;
  for (int k = 0; k < o.count; ++k) {
    auto f = share(family_container(catalog::random_family_over(rng, catalog::random_groupoid(rng, small), 2)));
    auto g = share(family_container(catalog::random_family(rng, small)));
    auto c = chain_unary(f, g);
    g_embeddings += c.is_embedding;
    g_strong += c.is_strong;
    g_agree += c.criteria_agree();
  }
  r.metrics["discrete_pairs"] = o.count;
  r.metrics["discrete_strong"] = strong;
  r.metrics["discrete_embeddings"] = embeddings;
  r.metrics["groupoid_pairs"] = o.count;
  r.metrics["groupoid_embeddings"] = g_embeddings;
  r.metrics["groupoid_strong"] = g_strong;
  r.metrics["criteria_agree"] = agree + g_agree;
  r.pass = strong == o.count && embeddings == o.count && g_embeddings == o.count && agree + g_agree == 2 * o.count;
  return r;
}

inline Report report_chain_bz2(const std::string& command = "check chain --counterexample bz2") {
  Report r{command};
  r.instances.push_back(Json{{"outer", "1 ◁ BZ2"}, {"inner", "a : BZ2 ◁ hom(a0, a)"}});
  auto e = counterexample_bz2();
  r.metrics["domain_shapes"] = e.domain_shapes;
  r.metrics["codomain_isolated_shapes"] = e.codomain_isolated_shapes;
  r.metrics["codomain_objects"] = e.chain.codomain_shapes;
  r.metrics["isolated_over_identity"] = e.isolated_over_identity;
  r.metrics["isolated_over_trivial"] = e.isolated_over_trivial;
  r.metrics["embedding"] = e.chain.is_embedding;
  r.metrics["strong"] = e.chain.is_strong;
  r.metrics["isolate_surjective"] = e.chain.isolate_surjective;
  if (e.chain.failing_cell) r.counterexample = failing_cell_json(*e.chain.failing_cell);
  r.pass = e.domain_shapes == 0 && e.codomain_isolated_shapes == 1 && !e.chain.is_strong && e.chain.is_embedding &&
           e.chain.criteria_agree();
  return r;
}

// ---------------------------------------------------------------------------
// Bags

inline Report report_bag(int max_size) {
  Report r{"check bag"};
  r.instances.push_back(Json{{"max_size", max_size}});
  auto b = bag_fixed_point_check(max_size);
  r.metrics["derivative_orders"] = b.derivative_shapes.orders();
  r.metrics["smaller_bag_orders"] = b.smaller_bag_shapes.orders();
  auto want = b.expected_orders;
  std::sort(want.begin(), want.end());
  r.metrics["expected_orders"] = want;
  r.metrics["invariants_equal"] = b.derivative_shapes == b.smaller_bag_shapes;
  r.pass = b.matches();
  return r;
}

// ---------------------------------------------------------------------------
// Fixed points

inline Json mu_rule_json(const MuRuleReport& m) {
  Json j;
  j["values"] = m.value_count;
  j["holes"] = m.hole_count;
  j["injective"] = m.injective;
  j["strong_by_count"] = m.strong_by_count;
  j["strong_by_equivalence"] = m.strong_by_equivalence;
  j["chain_strong"] = m.chain_strong;
  j["flags_agree"] = m.flags_agree();
  Json levels = Json::array();
  for (const auto& lv : m.levels)
    levels.push_back(Json{{"values", lv.values->shape_count()}, {"holes", lv.target.container->shape_count()},
                          {"chain_strong", lv.chain.result.is_strong}});
  j["levels"] = std::move(levels);
  return j;
}

inline Report report_mu(const std::string& name, const ContainerRef& sig, int depth, int index = 0) {
  Report r{"mu"};
  r.instances.push_back(signature_instance(name, *sig));
  r.instances.back()["depth"] = depth;
  if (!sig->discrete()) {
    auto m = mu_rule(substitution_tower(sig, depth), index);
    r.metrics["mu_rule"] = mu_rule_json(m);
    r.pass = m.injective && m.flags_agree();
    return r;
  }
  auto mu = mu_container(sig, depth);
  r.metrics["trees"] = mu.trees.size();
  r.metrics["level_counts"] = mu.level_count;
  auto rt = in_out_roundtrip(mu);
  r.metrics["in_out_roundtrip"] = rt.ok();
  bool ok = rt.ok();
  if (depth >= 1) {
    auto in_rec = rec(mu, in_algebra(mu));
    const bool identity = morphism_eq(in_rec.morphism(), id_cart(mu.container())).strict;
    r.metrics["rec_in_square"] = in_rec.square_holds();
    r.metrics["rec_in_identity"] = identity;
    ok = ok && in_rec.square_holds() && identity;
    if (sig->index_count() == 2) {
      int bound = 0;
      for (int t = 0; t < static_cast<int>(mu.trees.size()); ++t) bound = std::max(bound, mu.path_count(0, t));
      auto size = size_algebra(sig, bound);
      auto sr = rec(mu, size);
      r.metrics["rec_size_square"] = sr.square_holds();
      ok = ok && sr.square_holds();
    }
    auto w = wrec_embedding_check(mu, 1'000'000'000, cantor_step());
    r.metrics["wrec"] = Json{{"reached", w.reached}, {"precondition", w.precondition()}, {"injective", w.wrec_injective}};
    ok = ok && w.holds();
    auto m = mu_rule(mu, index);
    r.metrics["mu_rule"] = mu_rule_json(m);
    auto zr = zipper_matches_rule(mu, m);
    auto zs = zipper_sweep(mu, index);
    r.metrics["zipper"] = Json{{"pairs", zs.pairs}, {"roundtrips", zs.plug_roundtrips}, {"cursor_moves", zs.cursor_moves},
                               {"rule_values_matched", zr.matched}};
    ok = ok && m.injective && m.flags_agree() && zr.ok() && zs.ok();
  }
  r.pass = ok;
  return r;
}

inline Json layer_json(const Container& sig, const Layer& l) {
  Json sib = Json::array();
  for (const auto& w : l.siblings) sib.push_back(tree_literal(sig, w));
  return Json{{"shape", sig.shapes->object_name(l.shape)}, {"hole", l.hole}, {"siblings", sib}};
}

inline Report report_zipper(const std::string& name, const ContainerRef& sig, const std::string& tree_text,
                            const std::string& path_text) {
  Report r{"zipper"};
  r.instances.push_back(Json{{"signature", name}, {"tree", tree_text}, {"path", path_text}});
  auto w = parse_tree(*sig, tree_text);
  auto [index, p] = parse_path(*sig, path_text);
  auto z = decompose(*sig, index, w, p);
  Json layers = Json::array();
  for (const auto& l : z.context) layers.push_back(layer_json(*sig, l));
  Json kids = Json::array();
  for (const auto& c : z.focus.children) kids.push_back(tree_literal(*sig, c));
  r.metrics["context"] = std::move(layers);
  r.metrics["focus"] = Json{{"shape", sig->shapes->object_name(z.focus.shape)},
                            {"position", sig->indices[index] + ":" + std::to_string(z.focus.position)},
                            {"children", kids}};
  auto back = plug(*sig, index, z);
  const bool roundtrip = back.first == w && back.second == p;
  const bool refill = plug(*sig, z.context, *subtree_at(w, p.below)) == w;
  r.metrics["plug_roundtrip"] = roundtrip;
  r.metrics["subtree_roundtrip"] = refill;
  r.pass = roundtrip && refill;
  return r;
}

// ---------------------------------------------------------------------------
// Derivatives

inline std::string identifier(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "s" + out;
  return out;
}

struct DeriveResult {
  Report report;
  std::string file_text;  // signature text when discrete, semantic JSON otherwise
  bool discrete = false;
};

inline DeriveResult derive_report(const std::string& name, const ContainerRef& sig, const std::string& index) {
  DeriveResult out;
  auto& r = out.report;
  r.command = "derive";
  r.instances.push_back(signature_instance(name, *sig));
  r.instances.back()["index"] = index;
  auto d = derivative(sig, index);
  const auto& c = *d.container;
  Json shapes = Json::array();
  for (int x = 0; x < c.shape_count(); ++x) {
    Json pos = Json::object();
    for (int i = 0; i < c.index_count(); ++i) pos[c.indices[i]] = c.fiber(i, x).object_count();
    shapes.push_back(Json{{"shape", sig->shapes->object_name(d.base_shape(x))},
                          {"hole", sig->fiber(d.index, d.base_shape(x)).object_name(d.hole(x))},
                          {"positions", pos}});
  }
  r.metrics["shapes"] = c.shape_count();
  r.metrics["components"] = components(*c.shapes).size();
  r.metrics["discrete_positions"] = c.positions_discrete();
  r.metrics["setlike_shapes"] = c.shapes->is_setlike();
  r.metrics["derivative"] = std::move(shapes);
  out.discrete = c.discrete();
  if (out.discrete) {
    SignatureAst ast{identifier("d_" + index + "_" + name), {}, c.indices, {}};
    for (int x = 0; x < c.shape_count(); ++x) {
      ShapeDecl s{identifier(sig->shapes->object_name(d.base_shape(x)) + "_" +
                             sig->fiber(d.index, d.base_shape(x)).object_name(d.hole(x))),
                  {}};
      for (int i = 0; i < c.index_count(); ++i) s.positions.push_back(PositionDecl{c.indices[i], c.fiber(i, x).object_count()});
      ast.shapes.push_back(std::move(s));
    }
    out.file_text = print_signature(ast);
  } else {
    out.file_text = dump(container_to_json(c));
  }
  return out;
}

} // namespace contcalc
