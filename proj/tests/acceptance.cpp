// Acceptance gate: one PASS/FAIL line per criterion.
// usage: acceptance <contcalc executable> <data dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "contcalc/contcalc.hpp"

using namespace contcalc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ", ") + p;
  return s;
}

std::string ratio(long long ok, long long all) { return std::to_string(ok) + "/" + std::to_string(all); }

// independent oracle for isolation: hom-sets out of a are subsingletons
bool oracle_isolated(const FinGroupoid& g, int a) {
  std::vector<int> count(g.object_count(), 0);
  for (int m = 0; m < g.morphism_count(); ++m)
    if (g.src(m) == a && ++count[g.dst(m)] > 1) return false;
  return true;
}

Outcome points_suite() {
  catalog::Rng rng(101);
  int groupoids = 0, points = 0, agree = 0, isolated_seen = 0;
  for (; groupoids < 200; ++groupoids) {
    auto g = catalog::random_groupoid(rng, {6, 16, false});
    for (int a = 0; a < g->object_count(); ++a) {
      ++points;
      const bool iso = oracle_isolated(*g, a);
      isolated_seen += iso;
      agree += replace_functor(g, a).report.equivalence() == iso && is_isolated(*g, a) == iso;
    }
  }
  int families = 0, injective = 0, discrete = 0, surjective = 0;
  for (; families < 200; ++families) {
    const bool disc_case = families % 2 == 0;
    auto r = sigma_isolate(catalog::random_family(rng, {6, 16, disc_case}));
    injective += r.embedding && r.lands_in_isolated;
    if (disc_case) {
      ++discrete;
      surjective += r.surjective;
    }
  }
  auto b = share(bz2());
  auto d2 = share(disc(2));
  auto swap = sigma_isolate(GFamily{b, {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}});
  const bool exhibit = swap.domain_count() == 0 && swap.codomain_count() == 2 && !swap.surjective && swap.embedding;
  return {agree == points && injective == families && surjective == discrete && exhibit,
          join({"replace iff isolated " + ratio(agree, points) + " over " + std::to_string(groupoids) + " groupoids",
                "sigma_isolate injective " + ratio(injective, families),
                "surjective on discrete " + ratio(surjective, discrete),
                "swap fiber " + std::to_string(swap.domain_count()) + "->" + std::to_string(swap.codomain_count())})};
}

Outcome graft_suite() {
  catalog::Rng rng(103);
  int instances = 0, over_cap = 0, rules = 0, equivalences = 0, class_counts = 0, skeletal = 0, skeletal_counts = 0;
  for (int t = 0; t < 120; ++t) {
    auto a = catalog::random_groupoid(rng, {3, 16, false});
    auto b = catalog::random_groupoid(rng, {4, 16, false});
    for (int a0 = 0; a0 < a->object_count(); ++a0) {
      if (!is_isolated(*a, a0)) continue;
      GraftEquivReport r;
      try {
        r = graft_equiv_check(a, a0, b);
      } catch (const SizeError&) {
        ++over_cap;
        continue;
      }
      ++instances;
      rules += r.computation_rules;
      equivalences += r.report.equivalence();
      const auto lhs_classes = components(*r.complement_functors.groupoid).size() * components(*b).size();
      class_counts += lhs_classes == components(*r.all_functors.groupoid).size();
      // a singleton component makes the raw object counts agree too
      bool singleton = true;
      for (int x = 0; x < a->object_count(); ++x) singleton = singleton && (x == a0 || !a->connected(a0, x));
      if (singleton) {
        ++skeletal;
        const auto lhs = r.complement_functors.functors.size() * static_cast<std::size_t>(b->object_count());
        skeletal_counts += lhs == r.all_functors.functors.size();
      }
    }
  }
  return {instances > 0 && rules == instances && equivalences == instances && class_counts == instances &&
              skeletal_counts == skeletal && skeletal > 0,
          join({"instances " + std::to_string(instances) + " (" + std::to_string(over_cap) + " over cap)", "rules " + ratio(rules, instances),
                "equivalences " + ratio(equivalences, instances), "class counts " + ratio(class_counts, instances),
                "object counts " + ratio(skeletal_counts, skeletal) + " (singleton components)"})};
}

Outcome laws_suite() {
  SweepOptions o{1, 50};
  auto s = report_sum(o);
  auto l = report_leibniz(o);
  return {s.pass && l.pass,
          join({"sum " + ratio(s.metrics["equivalences"].get<int>(), o.count),
                "leibniz " + ratio(l.metrics["equivalences"].get<int>(), o.count),
                "count identity " + ratio(l.metrics["count_identity"].get<int>(), o.count),
                std::string("identity rule ") + (l.metrics["identity_rule"].get<bool>() ? "ok" : "no"),
                std::string("constant rule ") + (l.metrics["constant_rule"].get<bool>() ? "ok" : "no")})};
}

Outcome adjunction_suite() {
  auto r = report_adjunction(SweepOptions{1, 50});
  const auto& m = r.metrics;
  const int iterated_pairs = 10;
  return {r.pass && m["iterated_checked"].get<int>() >= 3 * iterated_pairs && m["hom_identity_checked"].get<int>() > 0,
          join({"triangles " + ratio(m["triangles"].get<int>(), 50),
                "squares " + ratio(m["squares_ok"].get<int>(), m["squares"].get<int>()),
                "hom identity " + ratio(m["hom_identity_ok"].get<int>(), m["hom_identity_checked"].get<int>()) +
                    " (" + std::to_string(m["hom_identity_over_cap"].get<int>()) + " over cap)",
                "iterated n<=3 " + ratio(m["iterated_ok"].get<int>(), m["iterated_checked"].get<int>())})};
}

Outcome chain_suite() {
  auto r = report_chain(SweepOptions{1, 50});
  auto e = report_chain_bz2();
  const auto& m = r.metrics;
  const auto& x = e.metrics;
  return {r.pass && e.pass,
          join({"discrete strong " + ratio(m["discrete_strong"].get<int>(), 50),
                "embeddings " + ratio(m["discrete_embeddings"].get<int>() + m["groupoid_embeddings"].get<int>(), 100),
                "bz2 domain " + std::to_string(x["domain_shapes"].get<int>()) + " codomain isolated " +
                    std::to_string(x["codomain_isolated_shapes"].get<int>()) + " strong " +
                    (x["strong"].get<bool>() ? "true" : "false")})};
}

Outcome bag_suite() {
  bool ok = true;
  std::vector<std::string> parts;
  for (int n = 1; n <= 3; ++n) {
    auto b = bag_fixed_point_check(n);
    const bool good = b.matches();
    ok = ok && good;
    std::string orders;
    for (int o : b.derivative_shapes.orders()) orders += (orders.empty() ? "" : ",") + std::to_string(o);
    parts.push_back("N=" + std::to_string(n) + " {" + orders + "}");
  }
  return {ok, join(parts)};
}

ContainerRef builtin(const std::string& name) { return share(build_signature(parse_signature(builtin_signature_text(name)))); }

// Σ_{n < d} n·|E|^n
long long list_holes(int letters, int d) {
  long long n = 0, p = 1;
  for (int len = 0; len < d; ++len, p *= letters) n += len * p;
  return n;
}

Outcome mu_suite() {
  int instances = 0, roundtrips = 0, squares = 0, rule_injective = 0, flags = 0;
  for (const auto& name : {"list", "list2", "btree"}) {
    auto sig = builtin(name);
    for (int d = 1; d <= 4; ++d) {
      auto mu = mu_container(sig, d);
      ++instances;
      roundtrips += in_out_roundtrip(mu).ok();
      auto in_rec = rec(mu, in_algebra(mu));
      squares += in_rec.square_holds() && morphism_eq(in_rec.morphism(), id_cart(mu.levels[d])).strict;
      auto m = mu_rule(mu, 0);
      rule_injective += m.injective;
      flags += m.flags_agree();
    }
  }
  // length Rec: [e,e] goes to shape 2 with an identity bijection
  auto list = builtin("list");
  auto mu = mu_container(list, 4);
  auto length = rec(mu, size_algebra(list, 4));
  const int ee = *mu.find(WTree{1, {WTree{1, {WTree{0, {}}}}}});
  const bool length_ok = length.square_holds() && length.morphism().shape(ee) == 2 &&
                         length.morphism().pos[0][ee].object_map == std::vector<int>{0, 1};
  // W-rec on two injective steps
  auto w1 = wrec_embedding_check(mu_container(list, 4), 1'000'000, cantor_step());
  auto w2 = wrec_embedding_check(mu_container(builtin("btree"), 3), 1'000'000, cantor_step());
  const bool wrec_ok = w1.precondition() && w1.wrec_injective && w1.trees == 4 && w2.precondition() &&
                       w2.wrec_injective && w2.trees == 5;
  // lengths ≤ 4 over two letters
  auto big = mu_rule(mu_container(builtin("list2"), 5), 0);
  const long long oracle = list_holes(2, 5);
  const bool count_ok = big.value_count == oracle && big.hole_count == oracle && big.injective;
  // groupoid-position signature
  auto sym = mu_rule(substitution_tower(symmetric_signature(), 3), 0);
  const bool sym_ok = sym.injective && !sym.chain_strong && sym.flags_agree();
  const bool ok = roundtrips == instances && squares == instances && rule_injective == instances &&
                  flags == instances && length_ok && wrec_ok && count_ok && sym_ok && big.flags_agree();
  return {ok, join({"roundtrips " + ratio(roundtrips, instances), "rec squares " + ratio(squares, instances),
                    std::string("length rec ") + (length_ok ? "exact" : "wrong"),
                    std::string("wrec ") + (wrec_ok ? "2/2" : "failed"),
                    "mu-rule injective " + ratio(rule_injective, instances),
                    "count " + std::to_string(big.value_count) + "/" + std::to_string(big.hole_count) + " (oracle " +
                        std::to_string(oracle) + ")",
                    "flags agree " + ratio(flags + big.flags_agree() + sym.flags_agree(), instances + 2) +
                        ", groupoid instance strong=" + (sym.chain_strong ? "true" : "false")})};
}

Outcome zipper_suite() {
  int pairs = 0, moves = 0;
  bool ok = true;
  int values = 0, matched = 0;
  for (const auto& name : {"list", "list2", "btree"}) {
    auto mu = mu_container(builtin(name), 4);
    auto s = zipper_sweep(mu, 0);
    ok = ok && s.ok();
    pairs += s.pairs;
    moves += s.cursor_moves;
    auto z = zipper_matches_rule(mu, mu_rule(mu, 0));
    values += z.values;
    matched += z.matched;
  }
  return {ok && pairs >= 100 && matched == values,
          join({"plug∘decompose on " + std::to_string(pairs) + " pairs", "cursor moves " + std::to_string(moves),
                "mu-rule values decoded " + ratio(matched, values)})};
}

std::string run_capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw Error("cannot run " + command);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

Outcome cli_goldens(const std::string& exe, const fs::path& data) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"check leibniz --json", "check_leibniz.json"},
      {"check chain --counterexample bz2 --json", "check_chain_bz2.json"},
      {"mu --signature list --depth 4 --json", "mu_list_depth4.json"},
  };
  int ok = 0;
  std::vector<std::string> bad;
  for (const auto& [args, file] : cases) {
    const auto first = run_capture("'" + exe + "' " + args);
    const auto second = run_capture("'" + exe + "' " + args);
    const auto golden = read_text(data / "golden" / file);
    if (first == second && first == golden) ++ok;
    else bad.push_back(file);
  }
  return {ok == static_cast<int>(cases.size()),
          "goldens " + ratio(ok, static_cast<int>(cases.size())) + (bad.empty() ? "" : " differing: " + join(bad))};
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <contcalc executable> <data dir>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const fs::path data = argv[2];
  const std::vector<Criterion> criteria = {
      {1, "points", 30, points_suite},
      {2, "graft", 30, graft_suite},
      {3, "laws", 30, laws_suite},
      {4, "adjunction", 60, adjunction_suite},
      {5, "chain", 30, chain_suite},
      {6, "bag", 10, bag_suite},
      {7, "mu", 120, mu_suite},
      {8, "zipper", 30, zipper_suite},
      {9, "cli", 60, [&] { return cli_goldens(exe, data); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << c.number << " (" << c.name << "): " << (pass ? "PASS" : "FAIL") << "  " << o.detail << "  ["
         << secs << "s" << (in_time ? "" : ", over the " + std::to_string(static_cast<int>(c.limit_seconds)) + "s limit")
         << "]";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
