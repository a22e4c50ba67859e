#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace navcon::lang {

struct Pos {
  int line = 0;
  int column = 0;
};

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct NoneLit {};
struct BoolLit {
  bool value;
};
struct IntLit {
  std::int64_t value;
};
struct FloatLit {
  double value;
  std::string text;  // as written, for printing
};
struct StrLit {
  std::string value;
};
struct Name {
  std::string id;
};
struct Attribute {
  ExprPtr value;
  std::string attr;
};
struct Keyword {
  std::string name;
  ExprPtr value;
  Pos pos;
};
struct Call {
  ExprPtr func;
  std::vector<ExprPtr> args;
  std::vector<Keyword> keywords;
};
struct Subscript {
  ExprPtr value;
  ExprPtr index;
};

enum class CmpOp { Lt, Gt, Le, Ge, Eq, Ne, In, NotIn, Is, IsNot };
struct Compare {
  ExprPtr left;
  std::vector<CmpOp> ops;
  std::vector<ExprPtr> comparators;
};

enum class BoolOpKind { And, Or };
struct BoolOp {
  BoolOpKind op;
  std::vector<ExprPtr> values;
};

enum class BinOpKind { Add, Sub, Mul, Div, FloorDiv, Mod, Pow };
struct BinOp {
  BinOpKind op;
  ExprPtr left;
  ExprPtr right;
};

enum class UnaryKind { Neg, Pos, Not };
struct UnaryOp {
  UnaryKind op;
  ExprPtr operand;
};

struct ListExpr {
  std::vector<ExprPtr> items;
};
struct TupleExpr {
  std::vector<ExprPtr> items;
};
struct DictExpr {
  std::vector<ExprPtr> keys;
  std::vector<ExprPtr> values;
};
struct Lambda {
  std::string param;
  ExprPtr body;
};

struct Expr {
  using Node = std::variant<NoneLit, BoolLit, IntLit, FloatLit, StrLit, Name, Attribute, Call,
                            Subscript, Compare, BoolOp, BinOp, UnaryOp, ListExpr, TupleExpr,
                            DictExpr, Lambda>;
  Pos pos;
  Node node;

  template <typename T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&node);
  }
};

/// Assignment target: a name, or a flat tuple of names.
struct Target {
  std::vector<std::string> names;
  bool tuple = false;
  Pos pos;
};

struct Assign {
  Target target;
  ExprPtr value;
};
struct AugAssign {
  std::string name;
  BinOpKind op;
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr value;
};
struct If {
  ExprPtr test;
  Block body;
  Block orelse;  // an elif chain is a single nested If here
  bool orelse_is_elif = false;
};
struct For {
  Target target;
  ExprPtr iter;
  Block body;
};
struct Return {
  ExprPtr value;  // null for a bare return
};

struct Stmt {
  using Node = std::variant<Assign, AugAssign, ExprStmt, If, For, Return>;
  Pos pos;
  Node node;

  template <typename T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&node);
  }
};

struct ParseWarning {
  std::string message;
  Pos pos;
};

/// A parsed `def execute_command(<param>)` program.
struct NavAst {
  std::string function_name;
  std::string param;
  std::optional<std::string> returns;  // annotation text, if written
  Block body;
  Pos pos;
  std::vector<ParseWarning> warnings;
};

inline ExprPtr make_expr(Pos pos, Expr::Node node) {
  return std::make_shared<const Expr>(Expr{pos, std::move(node)});
}

inline StmtPtr make_stmt(Pos pos, Stmt::Node node) {
  return std::make_shared<const Stmt>(Stmt{pos, std::move(node)});
}

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::In: return "in";
    case CmpOp::NotIn: return "not in";
    case CmpOp::Is: return "is";
    case CmpOp::IsNot: return "is not";
  }
  return "?";
}

inline const char* to_string(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Div: return "/";
    case BinOpKind::FloorDiv: return "//";
    case BinOpKind::Mod: return "%";
    case BinOpKind::Pow: return "**";
  }
  return "?";
}

// Structural equality, ignoring source positions.
bool equivalent(const Expr& a, const Expr& b);
bool equivalent(const Stmt& a, const Stmt& b);

namespace detail {

inline bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equivalent(*a, *b);
}

inline bool same(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

inline bool same(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equivalent(*a[i], *b[i])) return false;
  return true;
}

inline bool same(const Target& a, const Target& b) { return a.names == b.names && a.tuple == b.tuple; }

}  // namespace detail

inline bool equivalent(const Expr& a, const Expr& b) {
  using detail::same;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NoneLit>) return true;
        else if constexpr (std::is_same_v<T, BoolLit> || std::is_same_v<T, IntLit> ||
                           std::is_same_v<T, StrLit>)
          return x.value == y.value;
        else if constexpr (std::is_same_v<T, FloatLit>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, Name>) return x.id == y.id;
        else if constexpr (std::is_same_v<T, Attribute>) return x.attr == y.attr && same(x.value, y.value);
        else if constexpr (std::is_same_v<T, Call>) {
          if (!same(x.func, y.func) || !same(x.args, y.args) || x.keywords.size() != y.keywords.size())
            return false;
          for (std::size_t i = 0; i < x.keywords.size(); ++i)
            if (x.keywords[i].name != y.keywords[i].name || !same(x.keywords[i].value, y.keywords[i].value))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, Subscript>)
          return same(x.value, y.value) && same(x.index, y.index);
        else if constexpr (std::is_same_v<T, Compare>)
          return x.ops == y.ops && same(x.left, y.left) && same(x.comparators, y.comparators);
        else if constexpr (std::is_same_v<T, BoolOp>) return x.op == y.op && same(x.values, y.values);
        else if constexpr (std::is_same_v<T, BinOp>)
          return x.op == y.op && same(x.left, y.left) && same(x.right, y.right);
        else if constexpr (std::is_same_v<T, UnaryOp>) return x.op == y.op && same(x.operand, y.operand);
        else if constexpr (std::is_same_v<T, ListExpr> || std::is_same_v<T, TupleExpr>)
          return same(x.items, y.items);
        else if constexpr (std::is_same_v<T, DictExpr>) return same(x.keys, y.keys) && same(x.values, y.values);
        else if constexpr (std::is_same_v<T, Lambda>) return x.param == y.param && same(x.body, y.body);
      },
      a.node);
}

inline bool equivalent(const Stmt& a, const Stmt& b) {
  using detail::same;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Assign>) return same(x.target, y.target) && same(x.value, y.value);
        else if constexpr (std::is_same_v<T, AugAssign>)
          return x.name == y.name && x.op == y.op && same(x.value, y.value);
        else if constexpr (std::is_same_v<T, ExprStmt>) return same(x.value, y.value);
        else if constexpr (std::is_same_v<T, If>)
          return same(x.test, y.test) && same(x.body, y.body) && same(x.orelse, y.orelse);
        else if constexpr (std::is_same_v<T, For>)
          return same(x.target, y.target) && same(x.iter, y.iter) && same(x.body, y.body);
        else if constexpr (std::is_same_v<T, Return>) return same(x.value, y.value);
      },
      a.node);
}

inline bool equivalent(const NavAst& a, const NavAst& b) {
  return a.function_name == b.function_name && a.param == b.param && a.returns == b.returns &&
         detail::same(a.body, b.body);
}

}  // namespace navcon::lang
