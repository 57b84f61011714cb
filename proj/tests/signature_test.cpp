#include <gtest/gtest.h>

#include "contcalc/io.hpp"
#include "contcalc/signature.hpp"

using namespace contcalc;

namespace {

const char* kList = R"(# lists
container List (x) over {x, rec}

shape nil  { x: 0; rec: 0 }
shape cons { rec: 1; x: 1; }
)";

int error_line(const std::string& text) {
  try {
    parse_signature(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

} // namespace

TEST(Signature, ParsesList) {
  auto ast = parse_signature(kList);
  EXPECT_EQ(ast.name, "List");
  EXPECT_EQ(ast.parameters, (std::vector<std::string>{"x"}));
  EXPECT_EQ(ast.indices, (std::vector<std::string>{"x", "rec"}));
  ASSERT_EQ(ast.shapes.size(), 2u);
  auto c = build_signature(ast);
  EXPECT_TRUE(validate_container(c).ok());
  EXPECT_EQ(c.fiber(0, 0).object_count(), 0);
  EXPECT_EQ(c.fiber(0, 1).object_count(), 1);
  EXPECT_EQ(c.fiber(1, 1).object_count(), 1);
  EXPECT_TRUE(same_container(c, build_signature(parse_signature(builtin_signature_text("list")))));
}

TEST(Signature, Normalizes) {
  auto ast = parse_signature(kList);
  const auto printed = print_signature(ast);
  EXPECT_EQ(printed, builtin_signature_text("list"));
  EXPECT_EQ(parse_signature(printed), normalize(ast));
  EXPECT_EQ(print_signature(parse_signature(printed)), printed);
  for (const auto& name : builtin_signature_names()) {
    const auto text = builtin_signature_text(name);
    EXPECT_EQ(print_signature(parse_signature(text)), text) << name;
  }
}

TEST(Signature, EmptyContainer) {
  auto ast = parse_signature("container Zero () over {x}");
  EXPECT_TRUE(ast.shapes.empty());
  EXPECT_EQ(build_signature(ast).shape_count(), 0);
}

TEST(Signature, Errors) {
  EXPECT_EQ(error_line("container C (x) over {x}\nshape s { y: 1 }"), 2);
  EXPECT_EQ(error_line("container C (x) over {x}\nshape s { x: 1 }\nshape s { x: 2 }"), 3);
  EXPECT_EQ(error_line("container C (x) over {x, rec}\n\nshape s { x: 1 }"), 3);
  EXPECT_EQ(error_line("container C (y) over {x}"), 1);
  EXPECT_EQ(error_line("container C (x) over {x}\nshape s { x: -1 }"), 2);
  EXPECT_EQ(error_line("container C (x) over {x}\nshape s { x 1 }"), 2);
  try {
    parse_signature("container C (x) over {x}\n  shape s { y: 1 }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 13);
  }
}

TEST(Signature, FileReference) {
  auto ast = parse_signature("container K (x) over {x}\nshape knot { x: file(\"loop.json\"); }");
  EXPECT_EQ(std::get<FileRef>(ast.shapes[0].positions[0].value).path, "loop.json");
  EXPECT_THROW(build_signature(ast), PreconditionError);
  auto c = build_signature(ast, [](const std::string&) { return share(bz2()); });
  EXPECT_EQ(c.fiber(0, 0).morphism_count(), 2);
  EXPECT_EQ(print_signature(ast), "container K (x) over {x}\n\nshape knot { x: file(\"loop.json\"); }\n");
}

TEST(Literals, TreesAndPaths) {
  auto sig = build_signature(parse_signature(builtin_signature_text("list2")));
  auto w = parse_tree(sig, "cons_a(cons_b(nil))");
  EXPECT_EQ(tree_literal(sig, w), "cons_a(cons_b(nil))");
  EXPECT_EQ(w.depth(), 3);
  auto [index, p] = parse_path(sig, "[0, x:0]");
  EXPECT_EQ(index, 0);
  EXPECT_EQ(p, (WPath{{0}, 0}));
  EXPECT_EQ(path_literal(sig, index, p), "[0,x:0]");
  EXPECT_THROW(parse_tree(sig, "cons_a"), ParseError);
  EXPECT_THROW(parse_tree(sig, "cons_c(nil)"), ParseError);
  EXPECT_THROW(parse_tree(sig, "nil(nil)"), ParseError);
  EXPECT_THROW(parse_path(sig, "[rec:0]"), ParseError);
  EXPECT_THROW(parse_path(sig, "[0 x:0]"), ParseError);
}

TEST(Json, GroupoidRoundtrip) {
  for (const auto& g : {bz2(), codisc(3), disc(2), symmetric_delooping(3)}) {
    const auto text = dump(groupoid_to_json(g));
    auto back = groupoid_from_json(parse_json(text));
    EXPECT_TRUE(back == g);
    EXPECT_EQ(dump(groupoid_to_json(back)), text);
  }
}

TEST(Json, GroupoidErrors) {
  auto j = groupoid_to_json(bz2());
  auto bad = j;
  bad["morphisms"][1]["dst"] = "nowhere";
  EXPECT_THROW(groupoid_from_json(bad), UnknownId);
  bad = j;
  bad["compose"]["s"]["s"] = "s";
  EXPECT_THROW(groupoid_from_json(bad), PreconditionError);
  bad = j;
  bad.erase("inverse");
  EXPECT_THROW(groupoid_from_json(bad), Error);
  EXPECT_THROW(parse_json("{\"objects\": ["), ParseError);
  Limits small;
  small.max_objects = 2;
  EXPECT_THROW(groupoid_from_json(groupoid_to_json(codisc(3)), small), SizeError);
}

TEST(Json, ContainerRoundtrip) {
  auto d2 = share(disc(2));
  GFamily swap{share(bz2()), {d2}, {identity_functor(d2), GFunctor{d2, d2, {1, 0}, {1, 0}}}};
  for (const auto& c : {family_container(swap), build_signature(parse_signature(kList))}) {
    const auto text = dump(container_to_json(c));
    auto back = container_from_json(parse_json(text));
    EXPECT_TRUE(same_container(back, c));
    EXPECT_EQ(dump(container_to_json(back)), text);
  }
  auto j = container_to_json(family_container(swap));
  j["positions"]["x"]["transport"]["s"]["objects"] = {0, 0};
  EXPECT_THROW(container_from_json(j), PreconditionError);
}
