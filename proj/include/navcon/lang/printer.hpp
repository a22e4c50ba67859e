#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "navcon/lang/ast.hpp"

namespace navcon::lang {

namespace detail {

// Binding strength, loosest first.
enum Prec : int {
  kLambda = 0,
  kOr,
  kAnd,
  kNot,
  kCompare,
  kArith,
  kTerm,
  kUnary,
  kPower,
  kPostfix,
  kAtom
};

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      default: out += c;
    }
  }
  return out + "'";
}

inline std::string float_text(const FloatLit& f) {
  if (!f.text.empty()) return f.text;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", f.value);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

inline int prec_of(const Expr& e) {
  if (e.as<Lambda>()) return kLambda;
  if (const auto* b = e.as<BoolOp>()) return b->op == BoolOpKind::Or ? kOr : kAnd;
  if (const auto* u = e.as<UnaryOp>()) return u->op == UnaryKind::Not ? kNot : kUnary;
  if (e.as<Compare>()) return kCompare;
  if (const auto* b = e.as<BinOp>()) {
    switch (b->op) {
      case BinOpKind::Add:
      case BinOpKind::Sub: return kArith;
      case BinOpKind::Pow: return kPower;
      default: return kTerm;
    }
  }
  if (e.as<Attribute>() || e.as<Call>() || e.as<Subscript>()) return kPostfix;
  if (e.as<TupleExpr>()) return kLambda;
  return kAtom;
}

std::string expr(const Expr& e, int min_prec = kLambda);

inline std::string wrap(const Expr& e, int min_prec) {
  std::string s = expr(e);
  return prec_of(e) < min_prec || (e.as<TupleExpr>() && min_prec > kLambda) ? "(" + s + ")" : s;
}

inline std::string join(const std::vector<ExprPtr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += wrap(*items[i], kOr);
  }
  return out;
}

inline std::string expr(const Expr& e, int min_prec) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoneLit>) return "None";
        else if constexpr (std::is_same_v<T, BoolLit>) return x.value ? "True" : "False";
        else if constexpr (std::is_same_v<T, IntLit>) return std::to_string(x.value);
        else if constexpr (std::is_same_v<T, FloatLit>) return float_text(x);
        else if constexpr (std::is_same_v<T, StrLit>) return quote(x.value);
        else if constexpr (std::is_same_v<T, Name>) return x.id;
        else if constexpr (std::is_same_v<T, Attribute>) {
          std::string base = wrap(*x.value, kPostfix);
          // `1 .real` style receivers never occur; integers are wrapped to stay unambiguous.
          if (x.value->template as<IntLit>()) base = "(" + base + ")";
          return base + "." + x.attr;
        } else if constexpr (std::is_same_v<T, Call>) {
          std::string out = wrap(*x.func, kPostfix) + "(" + join(x.args);
          for (std::size_t i = 0; i < x.keywords.size(); ++i) {
            if (i || !x.args.empty()) out += ", ";
            out += x.keywords[i].name + "=" + wrap(*x.keywords[i].value, kLambda);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Subscript>)
          return wrap(*x.value, kPostfix) + "[" + wrap(*x.index, kLambda) + "]";
        else if constexpr (std::is_same_v<T, Compare>) {
          std::string out = wrap(*x.left, kCompare + 1);
          for (std::size_t i = 0; i < x.ops.size(); ++i)
            out += std::string(" ") + to_string(x.ops[i]) + " " + wrap(*x.comparators[i], kCompare + 1);
          return out;
        } else if constexpr (std::is_same_v<T, BoolOp>) {
          const int p = x.op == BoolOpKind::Or ? kOr : kAnd;
          std::string out;
          for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i) out += x.op == BoolOpKind::Or ? " or " : " and ";
            out += wrap(*x.values[i], p + 1);
          }
          return out;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          const int p = prec_of(e);
          if (x.op == BinOpKind::Pow)  // right-associative; operand binds tighter than unary minus
            return wrap(*x.left, kPostfix) + " ** " + wrap(*x.right, kUnary);
          return wrap(*x.left, p) + " " + to_string(x.op) + " " + wrap(*x.right, p + 1);
        } else if constexpr (std::is_same_v<T, UnaryOp>) {
          if (x.op == UnaryKind::Not) return "not " + wrap(*x.operand, kNot);
          return std::string(x.op == UnaryKind::Neg ? "-" : "+") + wrap(*x.operand, kUnary);
        } else if constexpr (std::is_same_v<T, ListExpr>) return "[" + join(x.items) + "]";
        else if constexpr (std::is_same_v<T, TupleExpr>) {
          if (x.items.size() == 1) return "(" + wrap(*x.items[0], kOr) + ",)";
          return "(" + join(x.items) + ")";
        } else if constexpr (std::is_same_v<T, DictExpr>) {
          std::string out = "{";
          for (std::size_t i = 0; i < x.keys.size(); ++i) {
            if (i) out += ", ";
            out += wrap(*x.keys[i], kOr) + ": " + wrap(*x.values[i], kOr);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, Lambda>) {
          (void)min_prec;
          return "lambda " + x.param + ": " + wrap(*x.body, kLambda);
        }
      },
      e.node);
}

inline std::string target(const Target& t) {
  if (!t.tuple) return t.names.front();
  std::string out;
  for (std::size_t i = 0; i < t.names.size(); ++i) {
    if (i) out += ", ";
    out += t.names[i];
  }
  return t.names.size() == 1 ? out + "," : out;
}

inline void block(std::string& out, const Block& body, int depth);

inline void stmt(std::string& out, const Stmt& s, int depth, bool as_elif = false) {
  const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Assign>) {
          out += pad + target(x.target) + " = " + expr(*x.value) + "\n";
        } else if constexpr (std::is_same_v<T, AugAssign>) {
          out += pad + x.name + " " + to_string(x.op) + "= " + expr(*x.value) + "\n";
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          out += pad + expr(*x.value) + "\n";
        } else if constexpr (std::is_same_v<T, Return>) {
          out += pad + (x.value ? "return " + expr(*x.value) : std::string("return")) + "\n";
        } else if constexpr (std::is_same_v<T, For>) {
          out += pad + "for " + target(x.target) + " in " + expr(*x.iter) + ":\n";
          block(out, x.body, depth + 1);
        } else if constexpr (std::is_same_v<T, If>) {
          out += pad + (as_elif ? "elif " : "if ") + expr(*x.test) + ":\n";
          block(out, x.body, depth + 1);
          if (x.orelse.empty()) return;
          if (x.orelse_is_elif && x.orelse.size() == 1 && x.orelse[0]->template as<If>()) {
            stmt(out, *x.orelse[0], depth, true);
          } else {
            out += pad + "else:\n";
            block(out, x.orelse, depth + 1);
          }
        }
      },
      s.node);
}

inline void block(std::string& out, const Block& body, int depth) {
  for (const auto& s : body) stmt(out, *s, depth);
}

}  // namespace detail

inline std::string print_expr(const Expr& e) { return detail::expr(e); }

/// Canonical source for an AST: 4-space indentation, minimal parentheses, single-quoted strings.
inline std::string print_program(const NavAst& ast) {
  std::string out = "def " + ast.function_name + "(" + ast.param + ")";
  if (ast.returns) out += " -> " + *ast.returns;
  out += ":\n";
  detail::block(out, ast.body, 1);
  return out;
}

}  // namespace navcon::lang
