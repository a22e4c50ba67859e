#pragma once

#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "navcon/lang/ast.hpp"
#include "navcon/lang/lexer.hpp"

namespace navcon::lang {

enum class ProgramOrigin { Fixture, LiveCodegen, Inline };

struct SourceProgram {
  std::string text;
  ProgramOrigin origin = ProgramOrigin::Inline;
};

namespace detail {

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k{
      "False", "None",   "True",    "and",      "as",     "assert", "async", "await",
      "break", "class",  "continue", "def",     "del",    "elif",   "else",  "except",
      "finally", "for",  "from",    "global",   "if",     "import", "in",    "is",
      "lambda", "nonlocal", "not",  "or",       "pass",   "raise",  "return", "try",
      "while", "with",   "yield"};
  return k;
}

// Statement keywords outside the language, mapped to the construct name reported.
inline std::string_view rejected_statement(std::string_view kw) {
  if (kw == "import" || kw == "from") return "import";
  if (kw == "while") return "while loop";
  if (kw == "try" || kw == "except" || kw == "finally") return "exception handling";
  if (kw == "raise") return "raise";
  if (kw == "class") return "class definition";
  if (kw == "def") return "nested function definition";
  if (kw == "with") return "with statement";
  if (kw == "pass") return "pass";
  if (kw == "break") return "break";
  if (kw == "continue") return "continue";
  if (kw == "global" || kw == "nonlocal") return "global declaration";
  if (kw == "del") return "del";
  if (kw == "yield") return "yield";
  if (kw == "assert") return "assert";
  if (kw == "async" || kw == "await") return "async";
  return {};
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  NavAst program() {
    skip_newlines();
    while (peek().kind == Tok::String) {  // module docstring
      next();
      expect_newline();
      skip_newlines();
    }
    const Token& first = peek();
    if (first.kind == Tok::Name) {
      auto construct = rejected_statement(first.text);
      if (!construct.empty() && first.text != "def") throw unsupported(std::string(construct), first.pos);
    }
    if (!first.is(Tok::Name, "def"))
      throw SyntaxError("expected 'def execute_command(...)' at top level", first.pos);
    NavAst ast = function_def();
    skip_newlines();
    if (peek().kind != Tok::End) {
      const Token& extra = peek();
      if (extra.is(Tok::Name, "def")) throw unsupported("additional function definition", extra.pos);
      if (extra.kind == Tok::Name && !rejected_statement(extra.text).empty())
        throw unsupported(std::string(rejected_statement(extra.text)), extra.pos);
      throw SyntaxError("statement outside execute_command", extra.pos);
    }
    ast.warnings = std::move(warnings_);
    return ast;
  }

 private:
  std::vector<Token> t_;
  std::size_t k_ = 0;
  std::vector<ParseWarning> warnings_;

  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(k_ + ahead, t_.size() - 1)]; }
  const Token& next() {
    const Token& tok = t_[k_];
    if (k_ + 1 < t_.size()) ++k_;
    return tok;
  }
  bool accept_op(std::string_view op) {
    if (peek().op(op)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view kw) {
    if (peek().is(Tok::Name, kw)) {
      next();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    std::string got;
    switch (at.kind) {
      case Tok::Newline: got = "end of line"; break;
      case Tok::Indent: got = "indent"; break;
      case Tok::Dedent: got = "dedent"; break;
      case Tok::End: got = "end of input"; break;
      case Tok::String: got = "string literal"; break;
      default: got = "'" + at.text + "'";
    }
    throw SyntaxError("expected " + what + ", found " + got, at.pos);
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("'" + std::string(op) + "'", peek());
  }
  std::string expect_name() {
    const Token& tok = peek();
    if (tok.kind != Tok::Name) fail("a name", tok);
    if (keywords().contains(tok.text)) fail("a name", tok);
    next();
    return tok.text;
  }
  void expect_newline() {
    if (peek().op(";")) throw unsupported("semicolon", peek().pos);
    if (peek().kind == Tok::Newline) {
      next();
      return;
    }
    if (peek().kind == Tok::End || peek().kind == Tok::Dedent) return;
    fail("end of line", peek());
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }

  // Header colon; a missing colon directly before an indented block is tolerated with a warning.
  void expect_header_colon(const std::string& header) {
    if (accept_op(":")) return;
    if (peek().kind == Tok::Newline && peek(1).kind == Tok::Indent) {
      warnings_.push_back({"missing ':' after " + header + " header", peek().pos});
      return;
    }
    fail("':'", peek());
  }

  NavAst function_def() {
    NavAst ast;
    ast.pos = next().pos;  // def
    const Token& name_tok = peek();
    ast.function_name = expect_name();
    if (ast.function_name != "execute_command")
      throw SyntaxError("expected function named execute_command, found '" + ast.function_name + "'",
                        name_tok.pos);
    expect_op("(");
    if (peek().op(")")) throw SyntaxError("execute_command takes exactly one parameter", peek().pos);
    ast.param = expect_name();
    if (accept_op(":")) annotation();
    if (accept_op("=")) throw unsupported("default parameter", peek().pos);
    if (peek().op(",")) {
      next();
      if (!peek().op(")")) throw SyntaxError("execute_command takes exactly one parameter", peek().pos);
    }
    expect_op(")");
    if (accept_op("->")) ast.returns = annotation();
    expect_header_colon("def");
    ast.body = suite();
    return ast;
  }

  // Annotations are recorded as text and otherwise ignored.
  std::string annotation() {
    std::string out;
    int depth = 0;
    for (;;) {
      const Token& tok = peek();
      if (tok.kind == Tok::End || tok.kind == Tok::Newline) break;
      if (depth == 0 && (tok.op(")") || tok.op(":") || tok.op(",") || tok.op("="))) break;
      if (tok.op("[") || tok.op("(")) ++depth;
      if (tok.op("]") || tok.op(")")) --depth;
      if (tok.kind == Tok::String) out += "'" + tok.text + "'";
      else out += tok.text;
      if (tok.op(",")) out += " ";
      next();
    }
    if (out.empty()) fail("an annotation", peek());
    return out;
  }

  Block suite() {
    Block body;
    if (peek().kind != Tok::Newline) {
      body.push_back(simple_statement());
      return body;
    }
    next();
    skip_newlines();
    if (peek().kind != Tok::Indent) fail("an indented block", peek());
    next();
    while (peek().kind != Tok::Dedent && peek().kind != Tok::End) {
      body.push_back(statement());
      skip_newlines();
    }
    if (peek().kind == Tok::Dedent) next();
    return body;
  }

  StmtPtr statement() {
    const Token& tok = peek();
    if (tok.kind == Tok::Indent) throw SyntaxError("unexpected indent", tok.pos);
    if (tok.kind == Tok::Name) {
      if (tok.text == "if") return if_statement();
      if (tok.text == "for") return for_statement();
      if (tok.text == "elif" || tok.text == "else") throw SyntaxError("'" + tok.text + "' without 'if'", tok.pos);
    }
    return simple_statement();
  }

  StmtPtr if_statement() {
    const Pos p = next().pos;  // if / elif
    If node;
    node.test = test();
    expect_header_colon("if");
    node.body = suite();
    skip_newlines();
    if (peek().is(Tok::Name, "elif")) {
      node.orelse.push_back(if_statement());
      node.orelse_is_elif = true;
    } else if (peek().is(Tok::Name, "else")) {
      next();
      expect_header_colon("else");
      node.orelse = suite();
    }
    return make_stmt(p, std::move(node));
  }

  StmtPtr for_statement() {
    const Pos p = next().pos;
    For node;
    node.target = target_list();
    if (!accept_kw("in")) fail("'in'", peek());
    node.iter = expr_list();
    expect_header_colon("for");
    node.body = suite();
    skip_newlines();
    if (peek().is(Tok::Name, "else")) throw unsupported("for-else", peek().pos);
    return make_stmt(p, std::move(node));
  }

  Target target_list() {
    Target t;
    t.pos = peek().pos;
    const bool paren = accept_op("(");
    t.names.push_back(expect_name());
    while (accept_op(",")) {
      t.tuple = true;
      if (peek().is(Tok::Name, "in") || peek().op(")")) break;
      t.names.push_back(expect_name());
    }
    if (paren) expect_op(")");
    return t;
  }

  StmtPtr simple_statement() {
    const Token& tok = peek();
    const Pos p = tok.pos;
    if (tok.kind == Tok::Name) {
      auto construct = rejected_statement(tok.text);
      if (!construct.empty()) throw unsupported(std::string(construct), p);
      if (tok.text == "return") {
        next();
        Return r;
        if (peek().kind != Tok::Newline && peek().kind != Tok::End && peek().kind != Tok::Dedent &&
            !peek().op(";"))
          r.value = expr_list();
        expect_newline();
        return make_stmt(p, std::move(r));
      }
    }
    ExprPtr lhs = expr_list();
    if (peek().op("=")) {
      next();
      Target target = to_target(*lhs);
      ExprPtr value = expr_list();
      if (peek().op("=")) throw unsupported("chained assignment", peek().pos);
      expect_newline();
      return make_stmt(p, Assign{std::move(target), std::move(value)});
    }
    static constexpr std::pair<std::string_view, BinOpKind> aug[] = {
        {"+=", BinOpKind::Add},      {"-=", BinOpKind::Sub}, {"*=", BinOpKind::Mul},
        {"/=", BinOpKind::Div},      {"//=", BinOpKind::FloorDiv}, {"%=", BinOpKind::Mod},
        {"**=", BinOpKind::Pow}};
    for (auto [op, kind] : aug) {
      if (peek().op(op)) {
        const Pos op_pos = next().pos;
        const auto* name = lhs->as<Name>();
        if (!name) {
          if (lhs->as<Attribute>()) throw unsupported("attribute assignment", lhs->pos);
          throw SyntaxError("augmented assignment target must be a name", op_pos);
        }
        ExprPtr value = test();
        expect_newline();
        return make_stmt(p, AugAssign{name->id, kind, std::move(value)});
      }
    }
    if (peek().op(":")) throw unsupported("annotated assignment", peek().pos);
    if (peek().op("&=") || peek().op("|=") || peek().op("^=") || peek().op(">>=") || peek().op("<<="))
      throw unsupported("bitwise operator", peek().pos);
    expect_newline();
    return make_stmt(p, ExprStmt{std::move(lhs)});
  }

  static Target to_target(const Expr& e) {
    Target t;
    t.pos = e.pos;
    auto one = [](const Expr& x) -> std::string {
      if (const auto* n = x.as<Name>()) return n->id;
      if (x.as<Attribute>()) throw unsupported("attribute assignment", x.pos);
      if (x.as<Subscript>()) throw unsupported("subscript assignment", x.pos);
      throw SyntaxError("cannot assign to expression", x.pos);
    };
    if (const auto* tup = e.as<TupleExpr>()) {
      t.tuple = true;
      for (const auto& item : tup->items) t.names.push_back(one(*item));
    } else if (const auto* lst = e.as<ListExpr>()) {
      t.tuple = true;
      for (const auto& item : lst->items) t.names.push_back(one(*item));
    } else {
      t.names.push_back(one(e));
    }
    return t;
  }

  // test (',' test)* [','] -> tuple when a comma appears
  ExprPtr expr_list() {
    const Pos p = peek().pos;
    ExprPtr first = test();
    if (!peek().op(",")) return first;
    TupleExpr tup;
    tup.items.push_back(std::move(first));
    while (accept_op(",")) {
      if (ends_expression(peek())) break;
      tup.items.push_back(test());
    }
    return make_expr(p, std::move(tup));
  }

  static bool ends_expression(const Token& tok) {
    return tok.kind == Tok::Newline || tok.kind == Tok::End || tok.kind == Tok::Dedent || tok.op("=") ||
           tok.op(")") || tok.op("]") || tok.op("}") || tok.op(":") || tok.op(";");
  }

  ExprPtr test() {
    if (peek().is(Tok::Name, "lambda")) return lambda();
    ExprPtr e = or_test();
    if (peek().is(Tok::Name, "if")) throw unsupported("conditional expression", peek().pos);
    if (peek().op(":=")) throw unsupported("assignment expression", peek().pos);
    return e;
  }

  ExprPtr lambda() {
    const Pos p = next().pos;
    if (peek().op(":")) throw unsupported("lambda without parameter", p);
    Lambda node;
    node.param = expect_name();
    if (peek().op(",")) throw unsupported("multi-parameter lambda", p);
    if (peek().op("=")) throw unsupported("default parameter", p);
    expect_op(":");
    node.body = test();
    return make_expr(p, std::move(node));
  }

  ExprPtr or_test() {
    const Pos p = peek().pos;
    ExprPtr first = and_test();
    if (!peek().is(Tok::Name, "or")) return first;
    BoolOp node{BoolOpKind::Or, {std::move(first)}};
    while (accept_kw("or")) node.values.push_back(and_test());
    return make_expr(p, std::move(node));
  }

  ExprPtr and_test() {
    const Pos p = peek().pos;
    ExprPtr first = not_test();
    if (!peek().is(Tok::Name, "and")) return first;
    BoolOp node{BoolOpKind::And, {std::move(first)}};
    while (accept_kw("and")) node.values.push_back(not_test());
    return make_expr(p, std::move(node));
  }

  ExprPtr not_test() {
    if (peek().is(Tok::Name, "not")) {
      const Pos p = next().pos;
      return make_expr(p, UnaryOp{UnaryKind::Not, not_test()});
    }
    return comparison();
  }

  std::optional<CmpOp> comparison_op() {
    const Token& tok = peek();
    if (tok.kind == Tok::Op) {
      if (tok.text == "<") return CmpOp::Lt;
      if (tok.text == ">") return CmpOp::Gt;
      if (tok.text == "<=") return CmpOp::Le;
      if (tok.text == ">=") return CmpOp::Ge;
      if (tok.text == "==") return CmpOp::Eq;
      if (tok.text == "!=") return CmpOp::Ne;
      return std::nullopt;
    }
    if (tok.is(Tok::Name, "in")) return CmpOp::In;
    if (tok.is(Tok::Name, "is")) return peek(1).is(Tok::Name, "not") ? CmpOp::IsNot : CmpOp::Is;
    if (tok.is(Tok::Name, "not") && peek(1).is(Tok::Name, "in")) return CmpOp::NotIn;
    return std::nullopt;
  }

  ExprPtr comparison() {
    const Pos p = peek().pos;
    ExprPtr left = bitwise();
    auto op = comparison_op();
    if (!op) return left;
    Compare node;
    node.left = std::move(left);
    while (op) {
      next();
      if (*op == CmpOp::IsNot || *op == CmpOp::NotIn) next();
      node.ops.push_back(*op);
      node.comparators.push_back(bitwise());
      op = comparison_op();
    }
    return make_expr(p, std::move(node));
  }

  ExprPtr bitwise() {
    ExprPtr e = arith();
    const Token& tok = peek();
    if (tok.op("|") || tok.op("&") || tok.op("^") || tok.op("<<") || tok.op(">>"))
      throw unsupported("bitwise operator", tok.pos);
    return e;
  }

  ExprPtr arith() {
    ExprPtr left = term();
    for (;;) {
      const Token& tok = peek();
      BinOpKind kind;
      if (tok.op("+")) kind = BinOpKind::Add;
      else if (tok.op("-")) kind = BinOpKind::Sub;
      else return left;
      const Pos p = next().pos;
      left = make_expr(p, BinOp{kind, left, term()});
    }
  }

  ExprPtr term() {
    ExprPtr left = factor();
    for (;;) {
      const Token& tok = peek();
      BinOpKind kind;
      if (tok.op("*")) kind = BinOpKind::Mul;
      else if (tok.op("/")) kind = BinOpKind::Div;
      else if (tok.op("//")) kind = BinOpKind::FloorDiv;
      else if (tok.op("%")) kind = BinOpKind::Mod;
      else if (tok.op("@")) throw unsupported("matrix multiplication", tok.pos);
      else return left;
      const Pos p = next().pos;
      left = make_expr(p, BinOp{kind, left, factor()});
    }
  }

  ExprPtr factor() {
    const Token& tok = peek();
    if (tok.op("-") || tok.op("+")) {
      const Pos p = next().pos;
      const UnaryKind kind = tok.text == "-" ? UnaryKind::Neg : UnaryKind::Pos;
      return make_expr(p, UnaryOp{kind, factor()});
    }
    if (tok.op("~")) throw unsupported("bitwise operator", tok.pos);
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom_expr();
    if (peek().op("**")) {
      const Pos p = next().pos;
      return make_expr(p, BinOp{BinOpKind::Pow, base, factor()});
    }
    return base;
  }

  ExprPtr atom_expr() {
    if (peek().is(Tok::Name, "await")) throw unsupported("async", peek().pos);
    ExprPtr e = atom();
    for (;;) {
      const Token& tok = peek();
      if (tok.op(".")) {
        next();
        const Token& name_tok = peek();
        if (name_tok.kind != Tok::Name) fail("an attribute name", name_tok);
        next();
        e = make_expr(name_tok.pos, Attribute{e, name_tok.text});
      } else if (tok.op("(")) {
        next();
        e = call(e, e->pos);
      } else if (tok.op("[")) {
        next();
        const Pos p = e->pos;
        if (peek().op(":")) throw unsupported("slice", peek().pos);
        ExprPtr index = test();
        if (peek().op(":")) throw unsupported("slice", peek().pos);
        if (peek().op(",")) throw unsupported("multi-dimensional index", peek().pos);
        expect_op("]");
        e = make_expr(p, Subscript{e, index});
      } else {
        return e;
      }
    }
  }

  ExprPtr call(ExprPtr func, Pos p) {
    Call node;
    node.func = std::move(func);
    while (!peek().op(")")) {
      const Token& tok = peek();
      if (tok.op("*") || tok.op("**")) throw unsupported("argument unpacking", tok.pos);
      if (tok.kind == Tok::Name && peek(1).op("=") && !keywords().contains(tok.text)) {
        next();
        next();
        for (const auto& kw : node.keywords)
          if (kw.name == tok.text) throw SyntaxError("repeated keyword argument: " + tok.text, tok.pos);
        node.keywords.push_back({tok.text, test(), tok.pos});
      } else {
        if (!node.keywords.empty()) throw SyntaxError("positional argument follows keyword argument", tok.pos);
        node.args.push_back(test());
        if (peek().is(Tok::Name, "for")) throw unsupported("comprehension", peek().pos);
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return make_expr(p, std::move(node));
  }

  ExprPtr atom() {
    const Token& tok = peek();
    const Pos p = tok.pos;
    switch (tok.kind) {
      case Tok::Int: {
        next();
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (ec != std::errc() || ptr != tok.text.data() + tok.text.size())
          throw SyntaxError("integer literal out of range", p);
        return make_expr(p, IntLit{v});
      }
      case Tok::Float: {
        next();
        return make_expr(p, FloatLit{std::stod(tok.text), tok.text});
      }
      case Tok::String: {
        std::string s;
        while (peek().kind == Tok::String) s += next().text;
        return make_expr(p, StrLit{std::move(s)});
      }
      case Tok::Name: {
        if (tok.text == "True" || tok.text == "False") {
          next();
          return make_expr(p, BoolLit{tok.text == "True"});
        }
        if (tok.text == "None") {
          next();
          return make_expr(p, NoneLit{});
        }
        if (tok.text == "lambda") return lambda();
        if (tok.text == "yield") throw unsupported("yield", p);
        if (keywords().contains(tok.text)) fail("an expression", tok);
        next();
        return make_expr(p, Name{tok.text});
      }
      case Tok::Op:
        if (tok.op("(")) return paren();
        if (tok.op("[")) return list();
        if (tok.op("{")) return dict();
        if (tok.op("...")) throw unsupported("ellipsis", p);
        [[fallthrough]];
      default:
        fail("an expression", tok);
    }
  }

  ExprPtr paren() {
    const Pos p = next().pos;
    if (accept_op(")")) return make_expr(p, TupleExpr{});
    ExprPtr first = test();
    if (peek().is(Tok::Name, "for")) throw unsupported("comprehension", peek().pos);
    if (accept_op(")")) return first;
    TupleExpr tup;
    tup.items.push_back(std::move(first));
    while (accept_op(",")) {
      if (peek().op(")")) break;
      tup.items.push_back(test());
    }
    expect_op(")");
    return make_expr(p, std::move(tup));
  }

  ExprPtr list() {
    const Pos p = next().pos;
    ListExpr node;
    while (!peek().op("]")) {
      if (peek().op("*")) throw unsupported("argument unpacking", peek().pos);
      node.items.push_back(test());
      if (peek().is(Tok::Name, "for")) throw unsupported("comprehension", peek().pos);
      if (!accept_op(",")) break;
    }
    expect_op("]");
    return make_expr(p, std::move(node));
  }

  ExprPtr dict() {
    const Pos p = next().pos;
    DictExpr node;
    while (!peek().op("}")) {
      if (peek().op("**")) throw unsupported("argument unpacking", peek().pos);
      ExprPtr key = test();
      if (peek().op(",") || peek().op("}")) throw unsupported("set literal", p);
      if (peek().is(Tok::Name, "for")) throw unsupported("comprehension", peek().pos);
      expect_op(":");
      node.keys.push_back(std::move(key));
      node.values.push_back(test());
      if (peek().is(Tok::Name, "for")) throw unsupported("comprehension", peek().pos);
      if (!accept_op(",")) break;
    }
    expect_op("}");
    return make_expr(p, std::move(node));
  }
};

}  // namespace detail

/// Parses a program consisting of a single `def execute_command(<param>)`.
inline NavAst parse_program(std::string_view text) {
  return detail::Parser(tokenize(text)).program();
}

inline NavAst parse_program(const SourceProgram& src) {
  if (src.text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw SyntaxError("empty program", Pos{1, 1});
  return parse_program(std::string_view(src.text));
}

/// Wraps a statement fragment (e.g. an excerpt from a larger program) in
/// `def execute_command(image):` so it can be parsed on its own.
inline std::string wrap_fragment(std::string_view fragment, std::string_view param = "image") {
  std::string out = "def execute_command(" + std::string(param) + "):\n";
  std::size_t start = 0;
  while (start <= fragment.size()) {
    auto end = fragment.find('\n', start);
    if (end == std::string_view::npos) end = fragment.size();
    auto line = fragment.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) out += "    ";
    out += line;
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace navcon::lang
