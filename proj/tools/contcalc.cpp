#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "contcalc/contcalc.hpp"

namespace fs = std::filesystem;
using namespace contcalc;

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

struct Loaded {
  std::string name;
  ContainerRef container;
};

Loaded load_signature(const std::string& name) {
  const fs::path path(name);
  if (fs::is_regular_file(path)) {
    if (path.extension() == ".json") return {path.stem().string(), share(load_container(path))};
    const auto dir = path.parent_path();
    auto ast = parse_signature(read_text(path));
    return {path.stem().string(),
            share(build_signature(ast, [&](const std::string& f) { return share(load_groupoid(dir / f)); }))};
  }
  if (path.has_extension() || name.find('/') != std::string::npos) throw Error("cannot read " + name);
  return {name, share(build_signature(parse_signature(builtin_signature_text(name))))};
}

void print_text(const Json& j, const std::string& indent = "  ") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      std::cout << indent << k << ":\n";
      print_text(v, indent + "  ");
    } else {
      std::cout << indent << k << ": " << v.dump() << "\n";
    }
  }
}

int emit(const Report& r, bool json) {
  if (json) {
    std::cout << dump(r.to_json());
  } else {
    std::cout << r.command << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
    print_text(r.metrics);
    if (r.counterexample) {
      std::cout << "  counterexample:\n";
      print_text(*r.counterexample, "    ");
    }
  }
  return r.pass ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Container calculus over finite groupoids"};
  app.require_subcommand(1);
  bool json = false;
  SweepOptions sweep;
  int depth = 4;
  int max_size = 3;
  app.add_flag("--json", json, "Print the report as JSON");
  app.add_option("--seed", sweep.seed, "Catalog seed")->capture_default_str();
  app.add_option("--depth", depth, "Depth bound for trees")->capture_default_str();
  app.add_option("--max-size", max_size, "Bag size bound")->capture_default_str();

  std::string signature, index = "x", out;
  auto* derive = app.add_subcommand("derive", "Differentiate a signature at an index");
  derive->add_option("--signature", signature, "Built-in name, .cont file or container .json")->required();
  derive->add_option("--index", index, "Index to differentiate at")->capture_default_str();
  derive->add_option("--out", out, "Write the derivative here");

  std::string law, lhs, rhs, counterexample;
  auto* check = app.add_subcommand("check", "Verify a law over the catalog or given instances");
  check->add_option("law", law, "sum | leibniz | adjunction | chain | mu | bag")
      ->required()
      ->check(CLI::IsMember({"sum", "leibniz", "adjunction", "chain", "mu", "bag"}));
  check->add_option("--count", sweep.count, "Catalog pairs")->capture_default_str();
  check->add_option("--lhs", lhs, "Left container (sum, leibniz)");
  check->add_option("--rhs", rhs, "Right container (sum, leibniz)");
  check->add_option("--counterexample", counterexample, "Named exhibit (chain: bz2)")->check(CLI::IsMember({"bz2"}));
  check->add_option("--signature", signature, "Signature (mu)");
  check->add_option("--index", index, "Free index")->capture_default_str();
  check->add_option("--seed", sweep.seed, "Catalog seed");
  check->add_option("--depth", depth, "Depth bound (mu)");
  check->add_option("--max-size", max_size, "Bag size bound");
  check->add_flag("--json", json, "Print the report as JSON");

  std::string what = "all";
  auto* mu = app.add_subcommand("mu", "Fixed point checks on a signature");
  mu->add_option("--signature", signature, "Built-in name, .cont file or container .json")->required();
  mu->add_option("--depth", depth, "Depth bound")->capture_default_str();
  mu->add_option("--index", index, "Free index for the μ-rule")->capture_default_str();
  mu->add_option("--check", what, "Checks to run")->check(CLI::IsMember({"all"}));
  mu->add_flag("--json", json, "Print the report as JSON");

  std::string tree, path;
  auto* zipper = app.add_subcommand("zipper", "Decompose a tree at a path");
  zipper->add_option("--signature", signature, "Built-in name or .cont file")->required();
  zipper->add_option("--tree", tree, "Tree literal, e.g. cons(cons(nil))")->required();
  zipper->add_option("--path", path, "Path literal, e.g. [0,x:0]")->required();
  zipper->add_flag("--json", json, "Print the report as JSON");

  std::string exhibit;
  auto* cex = app.add_subcommand("counterexample", "Print a named counterexample");
  cex->add_option("name", exhibit, "bz2")->required()->check(CLI::IsMember({"bz2"}));
  cex->add_flag("--json", json, "Print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*derive) {
      auto sig = load_signature(signature);
      auto d = derive_report(sig.name, sig.container, index);
      if (!out.empty()) {
        const fs::path target(out);
        const bool as_json = target.extension() == ".json" || !d.discrete;
        write_text(target, as_json && d.discrete ? dump(container_to_json(*derivative(sig.container, index).container)) : d.file_text);
        d.report.metrics["written"] = out;
      }
      return emit(d.report, json);
    }
    if (*check) {
      if (law == "sum" || law == "leibniz") {
        if (!lhs.empty() || !rhs.empty()) {
          if (lhs.empty() || rhs.empty()) throw PreconditionError("--lhs and --rhs go together");
          auto f = load_signature(lhs).container;
          auto g = load_signature(rhs).container;
          return emit(report_law_instance(law, f, g, f->index_of(index)), json);
        }
        return emit(law == "sum" ? report_sum(sweep) : report_leibniz(sweep), json);
      }
      if (law == "adjunction") return emit(report_adjunction(sweep), json);
      if (law == "chain") return emit(counterexample == "bz2" ? report_chain_bz2() : report_chain(sweep), json);
      if (law == "bag") return emit(report_bag(max_size), json);
      if (signature.empty()) throw PreconditionError("check mu needs --signature");
      auto sig = load_signature(signature);
      auto r = report_mu(sig.name, sig.container, depth, sig.container->index_of(index));
      r.command = "check mu";
      return emit(r, json);
    }
    if (*mu) {
      auto sig = load_signature(signature);
      return emit(report_mu(sig.name, sig.container, depth, sig.container->index_of(index)), json);
    }
    if (*zipper) {
      auto sig = load_signature(signature);
      return emit(report_zipper(sig.name, sig.container, tree, path), json);
    }
    if (*cex) return emit(report_chain_bz2("counterexample bz2"), json);
  } catch (const nlohmann::ordered_json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
