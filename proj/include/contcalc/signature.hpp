#pragma once

#include <cctype>
#include <set>
#include <string_view>
#include <variant>

#include "contcalc/fixpoint.hpp"

namespace contcalc {

// ---------------------------------------------------------------------------
// Signature syntax
//
//   container List (x) over {x, rec}
//   shape nil  { x: 0; rec: 0; }
//   shape cons { x: 1; rec: 1; }
//
// A position entry is a cardinality or file("groupoid.json"). The last index
// in the `over` list is the recursive one when the signature is used for μ.

struct FileRef {
  std::string path;
  bool operator==(const FileRef&) const = default;
};

struct PositionDecl {
  std::string index;
  std::variant<int, FileRef> value;
  int line = 0, column = 0;
  bool operator==(const PositionDecl& o) const { return index == o.index && value == o.value; }
};

struct ShapeDecl {
  std::string name;
  std::vector<PositionDecl> positions;  // in declaration order
  int line = 0, column = 0;
  bool operator==(const ShapeDecl& o) const { return name == o.name && positions == o.positions; }
};

struct SignatureAst {
  std::string name;
  std::vector<std::string> parameters;
  std::vector<std::string> indices;
  std::vector<ShapeDecl> shapes;
  bool operator==(const SignatureAst& o) const {
    return name == o.name && parameters == o.parameters && indices == o.indices && shapes == o.shapes;
  }
};

namespace detail {

struct Token {
  enum Kind { Ident, Number, String, Punct, End } kind = End;
  std::string text;
  int line = 1, column = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\''))
        t.text += advance();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
    } else if (c == '"') {
      t.kind = Token::String;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\n') throw ParseError("unterminated string", t.line, t.column);
        t.text += advance();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.column);
      advance();
    } else if (std::string_view("(){}[],;:").find(c) != std::string_view::npos) {
      t.kind = Token::Punct;
      t.text = advance();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    return t;
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) advance();
      else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/'))
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      else break;
    }
  }
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + (tok_.kind == Token::End ? " (end of input)" : " near '" + tok_.text + "'"), tok_.line,
                     tok_.column);
  }
  bool at(const char* punct) const { return tok_.kind == Token::Punct && tok_.text == punct; }
  bool at_word(const char* w) const { return tok_.kind == Token::Ident && tok_.text == w; }
  void expect(const char* punct) {
    if (!at(punct)) fail(std::string("expected '") + punct + "'");
    take();
  }
  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("expected '") + w + "'");
    take();
  }
  Token ident(const char* what) {
    if (tok_.kind != Token::Ident) fail(std::string("expected ") + what);
    return take();
  }
  int number(const char* what) {
    if (tok_.kind != Token::Number) fail(std::string("expected ") + what);
    const auto t = take();
    if (t.text.size() > 6) throw ParseError(std::string(what) + " too large", t.line, t.column);
    return std::stoi(t.text);
  }
  /// NAME, NAME, ... up to (not including) `close`.
  std::vector<Token> ident_list(const char* close, const char* what) {
    std::vector<Token> out;
    if (at(close)) return out;
    out.push_back(ident(what));
    while (at(",")) {
      take();
      out.push_back(ident(what));
    }
    return out;
  }

private:
  Lexer lex_;
  Token tok_;
};

} // namespace detail

inline SignatureAst parse_signature(std::string_view text) {
  detail::Parser p(text);
  SignatureAst ast;
  p.expect_word("container");
  ast.name = p.ident("container name").text;
  p.expect("(");
  auto params = p.ident_list(")", "parameter name");
  p.expect(")");
  p.expect_word("over");
  p.expect("{");
  auto idx = p.ident_list("}", "index name");
  p.expect("}");
  std::set<std::string> seen;
  for (const auto& t : idx) {
    if (!seen.insert(t.text).second) throw ParseError("duplicate index '" + t.text + "'", t.line, t.column);
    ast.indices.push_back(t.text);
  }
  for (const auto& t : params) {
    if (!seen.count(t.text)) throw ParseError("parameter '" + t.text + "' is not an index", t.line, t.column);
    ast.parameters.push_back(t.text);
  }
  std::set<std::string> shape_names;
  while (p.peek().kind != detail::Token::End) {
    const auto kw = p.peek();
    p.expect_word("shape");
    auto name = p.ident("shape name");
    if (!shape_names.insert(name.text).second)
      throw ParseError("duplicate shape '" + name.text + "'", name.line, name.column);
    ShapeDecl s{name.text, {}, kw.line, kw.column};
    p.expect("{");
    std::set<std::string> declared;
    while (!p.at("}")) {
      auto index = p.ident("index name");
      if (!seen.count(index.text))
        throw ParseError("position on undeclared index '" + index.text + "'", index.line, index.column);
      if (!declared.insert(index.text).second)
        throw ParseError("index '" + index.text + "' declared twice", index.line, index.column);
      p.expect(":");
      PositionDecl d{index.text, 0, index.line, index.column};
      if (p.at_word("file")) {
        p.take();
        p.expect("(");
        if (p.peek().kind != detail::Token::String) p.fail("expected a file name");
        d.value = FileRef{p.take().text};
        p.expect(")");
      } else {
        d.value = p.number("cardinality");
      }
      s.positions.push_back(std::move(d));
      if (p.at(";")) p.take();
      else if (!p.at("}")) p.fail("expected ';'");
    }
    p.expect("}");
    if (declared.size() != ast.indices.size()) {
      for (const auto& i : ast.indices)
        if (!declared.count(i)) throw ParseError("shape '" + s.name + "' does not declare index '" + i + "'", s.line, s.column);
    }
    ast.shapes.push_back(std::move(s));
  }
  return ast;
}

/// Normal form: entries in index order, one shape per line.
inline std::string print_signature(const SignatureAst& ast) {
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + xs[k];
    return s;
  };
  std::string out = "container " + ast.name + " (" + join(ast.parameters) + ") over {" + join(ast.indices) + "}\n";
  if (!ast.shapes.empty()) out += "\n";
  for (const auto& s : ast.shapes) {
    out += "shape " + s.name + " {";
    for (const auto& i : ast.indices)
      for (const auto& d : s.positions) {
        if (d.index != i) continue;
        out += " " + i + ": ";
        if (const int* n = std::get_if<int>(&d.value)) out += std::to_string(*n);
        else out += "file(\"" + std::get<FileRef>(d.value).path + "\")";
        out += ";";
      }
    out += " }\n";
  }
  return out;
}

inline SignatureAst normalize(SignatureAst ast) {
  for (auto& s : ast.shapes) {
    std::vector<PositionDecl> sorted;
    for (const auto& i : ast.indices)
      for (const auto& d : s.positions)
        if (d.index == i) sorted.push_back(d);
    s.positions = std::move(sorted);
  }
  return ast;
}

/// Loads the groupoid behind a file(...) entry.
using FiberLoader = std::function<GroupoidRef(const std::string&)>;

inline Container build_signature(const SignatureAst& ast, const FiberLoader& load = {}) {
  std::vector<std::string> names;
  for (const auto& s : ast.shapes) names.push_back(s.name);
  auto shapes = share(disc_named(names));
  Container c{ast.indices, shapes, {}};
  for (const auto& i : ast.indices) {
    std::vector<GroupoidRef> fibers;
    for (const auto& s : ast.shapes)
      for (const auto& d : s.positions) {
        if (d.index != i) continue;
        if (const int* n = std::get_if<int>(&d.value)) {
          fibers.push_back(share(disc(*n)));
        } else {
          if (!load) throw PreconditionError("no loader for file(\"" + std::get<FileRef>(d.value).path + "\")");
          fibers.push_back(load(std::get<FileRef>(d.value).path));
        }
      }
    c.positions.push_back(make_family(shapes, [&](int a) { return fibers[a]; },
                                      [&](int m) { return identity_functor(fibers[shapes->src(m)]); }));
  }
  return c;
}

/// The declaration of a discrete container.
inline SignatureAst describe_container(const std::string& name, const Container& c,
                                       std::vector<std::string> parameters = {}) {
  if (!c.discrete()) throw PreconditionError("only discrete containers have a cardinality signature");
  SignatureAst ast{name, std::move(parameters), c.indices, {}};
  for (int s = 0; s < c.shape_count(); ++s) {
    ShapeDecl d{c.shapes->object_name(s), {}};
    for (int i = 0; i < c.index_count(); ++i) d.positions.push_back(PositionDecl{c.indices[i], c.fiber(i, s).object_count()});
    ast.shapes.push_back(std::move(d));
  }
  return ast;
}

// ---------------------------------------------------------------------------
// Tree and path literals:  cons(cons(nil))   [0, 0, x:0]

inline WTree parse_tree(const Container& sig, std::string_view text) {
  detail::Parser p(text);
  std::function<WTree()> node = [&]() {
    const auto name = p.ident("shape name");
    int shape = -1;
    for (int s = 0; s < sig.shape_count(); ++s)
      if (sig.shapes->object_name(s) == name.text) shape = s;
    if (shape < 0) throw ParseError("unknown shape '" + name.text + "'", name.line, name.column);
    WTree w{shape, {}};
    if (p.at("(")) {
      p.take();
      w.children.push_back(node());
      while (p.at(",")) {
        p.take();
        w.children.push_back(node());
      }
      p.expect(")");
    }
    const int arity = star_arity(sig, shape);
    if (static_cast<int>(w.children.size()) != arity)
      throw ParseError("shape '" + name.text + "' takes " + std::to_string(arity) + " subtrees", name.line, name.column);
    return w;
  };
  auto w = node();
  if (p.peek().kind != detail::Token::End) p.fail("trailing input after tree");
  return w;
}

/// Returns the index named in the path and the path.
inline std::pair<int, WPath> parse_path(const Container& sig, std::string_view text) {
  detail::Parser p(text);
  p.expect("[");
  WPath path;
  while (p.peek().kind == detail::Token::Number) {
    path.below.push_back(p.number("recursive position"));
    p.expect(",");
  }
  const auto idx = p.ident("index name");
  int index = -1;
  for (int i = 0; i + 1 < sig.index_count(); ++i)
    if (sig.indices[i] == idx.text) index = i;
  if (index < 0) throw ParseError("'" + idx.text + "' is not a free index", idx.line, idx.column);
  p.expect(":");
  path.top = p.number("position");
  p.expect("]");
  if (p.peek().kind != detail::Token::End) p.fail("trailing input after path");
  return {index, path};
}

// ---------------------------------------------------------------------------
// Built-in signatures

inline std::string builtin_signature_text(const std::string& name) {
  if (name == "list")
    return "container List (x) over {x, rec}\n\nshape nil { x: 0; rec: 0; }\nshape cons { x: 1; rec: 1; }\n";
  if (name == "list2")
    return "container List2 (x) over {x, rec}\n\nshape nil { x: 0; rec: 0; }\nshape cons_a { x: 1; rec: 1; }\n"
           "shape cons_b { x: 1; rec: 1; }\n";
  if (name == "btree")
    return "container BTree (x) over {x, rec}\n\nshape leaf { x: 0; rec: 0; }\nshape node { x: 1; rec: 2; }\n";
  throw UnknownId("no built-in signature '" + name + "'");
}

inline std::vector<std::string> builtin_signature_names() { return {"list", "list2", "btree"}; }

} // namespace contcalc
