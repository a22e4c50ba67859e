#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "navcon/lang/ast.hpp"

namespace navcon::lang {

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  int line = 0;
  int column = 0;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Diagnostic> diagnostics;
  std::set<std::string> api_usage;

  bool operator==(const ValidationReport&) const = default;

  [[nodiscard]] std::vector<std::string> errors() const {
    std::vector<std::string> out;
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) out.push_back(d.message);
    return out;
  }
};

/// Names and keyword parameters the language exposes.
struct Allowlist {
  std::set<std::string, std::less<>> globals{"ImagePatch", "best_image_match", "distance", "bool_to_yesno",
                                             "coerce_to_numeric", "llm_query", "navigate_to_object",
                                             "len", "sorted", "min", "max", "abs", "enumerate", "range"};
  std::set<std::string, std::less<>> builtins{"len", "sorted", "min", "max", "abs", "enumerate", "range"};
  std::set<std::string, std::less<>> patch_methods{"find",         "exists",        "verify_property",
                                                   "best_text_match", "simple_query", "compute_depth",
                                                   "crop",         "overlaps_with"};
  std::set<std::string, std::less<>> sequence_methods{"sort", "append"};
  std::set<std::string, std::less<>> attributes{"left",   "lower",  "right",           "upper",          "width",
                                                "height", "frame", "horizontal_center", "vertical_center"};
  std::map<std::string, std::set<std::string>, std::less<>> keywords{
      {"ImagePatch", {"image", "left", "lower", "right", "upper", "frame"}},
      {"best_image_match", {"list_patches", "content", "return_index"}},
      {"distance", {"patch_a", "patch_b"}},
      {"bool_to_yesno", {"bool_answer"}},
      {"coerce_to_numeric", {"string"}},
      {"llm_query", {"question", "long_answer"}},
      {"navigate_to_object", {"x", "y"}},
      {"sorted", {"key", "reverse"}},
      {"min", {"key"}},
      {"max", {"key"}},
      {"enumerate", {"start"}},
      {"find", {"object_name"}},
      {"exists", {"object_name"}},
      {"verify_property", {"object_name", "visual_property"}},
      {"best_text_match", {"option_list", "prefix"}},
      {"simple_query", {"question"}},
      {"crop", {"left", "lower", "right", "upper"}},
      {"overlaps_with", {"left", "lower", "right", "upper"}},
      {"sort", {"key", "reverse"}},
  };

  [[nodiscard]] bool is_method(std::string_view m) const {
    return patch_methods.contains(m) || sequence_methods.contains(m);
  }
  [[nodiscard]] bool accepts_keyword(std::string_view callee, std::string_view kw) const {
    auto it = keywords.find(callee);
    return it != keywords.end() && it->second.contains(std::string(kw));
  }
};

inline const Allowlist& default_allowlist() {
  static const Allowlist a;
  return a;
}

namespace detail {

class Validator {
 public:
  Validator(const NavAst& ast, const Allowlist& allow) : ast_(ast), allow_(allow) {}

  ValidationReport run() {
    for (const auto& w : ast_.warnings) warn(w.message, w.pos);
    locals_.insert(ast_.param);
    if (allow_.globals.contains(ast_.param)) error("cannot rebind API name: " + ast_.param, ast_.pos);
    collect_bindings(ast_.body);
    block(ast_.body);
    report_.ok = true;
    for (const auto& d : report_.diagnostics)
      if (d.severity == Severity::Error) report_.ok = false;
    return std::move(report_);
  }

 private:
  const NavAst& ast_;
  const Allowlist& allow_;
  std::set<std::string> locals_;
  std::vector<std::string> lambda_params_;
  ValidationReport report_;

  void error(const std::string& msg, Pos p) { report_.diagnostics.push_back({Severity::Error, msg, p.line, p.column}); }
  void warn(const std::string& msg, Pos p) { report_.diagnostics.push_back({Severity::Warning, msg, p.line, p.column}); }

  void bind(const Target& t) {
    for (const auto& n : t.names) {
      if (allow_.globals.contains(n)) error("cannot rebind API name: " + n, t.pos);
      locals_.insert(n);
    }
  }

  void collect_bindings(const Block& body) {
    for (const auto& s : body) {
      if (const auto* a = s->as<Assign>()) bind(a->target);
      else if (const auto* a = s->as<AugAssign>()) bind(Target{{a->name}, false, s->pos});
      else if (const auto* f = s->as<For>()) {
        bind(f->target);
        collect_bindings(f->body);
      } else if (const auto* i = s->as<If>()) {
        collect_bindings(i->body);
        collect_bindings(i->orelse);
      }
    }
  }

  [[nodiscard]] bool is_local(const std::string& n) const {
    if (locals_.contains(n)) return true;
    for (const auto& p : lambda_params_)
      if (p == n) return true;
    return false;
  }

  void block(const Block& body) {
    for (const auto& s : body) stmt(*s);
  }

  void stmt(const Stmt& s) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Assign>) expr(*x.value);
          else if constexpr (std::is_same_v<T, AugAssign>) expr(*x.value);
          else if constexpr (std::is_same_v<T, ExprStmt>) expr(*x.value);
          else if constexpr (std::is_same_v<T, If>) {
            expr(*x.test);
            block(x.body);
            block(x.orelse);
          } else if constexpr (std::is_same_v<T, For>) {
            expr(*x.iter);
            block(x.body);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (x.value) expr(*x.value);
            if (!x.value || !x.value->template as<DictExpr>())
              warn("return value is not a result mapping", s.pos);
          }
        },
        s.node);
  }

  void call(const Expr& e, const Call& c) {
    std::string callee;
    if (const auto* n = c.func->as<Name>()) {
      callee = n->id;
      if (is_local(n->id)) error("call target is not an API function: " + n->id, c.func->pos);
      else if (!allow_.globals.contains(n->id)) error("disallowed global: " + n->id, c.func->pos);
      else report_.api_usage.insert(n->id);
    } else if (const auto* a = c.func->as<Attribute>()) {
      callee = a->attr;
      expr(*a->value);
      if (allow_.is_method(a->attr)) report_.api_usage.insert(a->attr);
      else error("disallowed method: " + a->attr, c.func->pos);
    } else {
      expr(*c.func);
      error("disallowed call target", e.pos);
    }
    for (const auto& arg : c.args) {
      if (arg->as<Lambda>()) error("key functions are only allowed as key= arguments", arg->pos);
      expr(*arg, true);
    }
    for (const auto& kw : c.keywords) {
      if (!callee.empty() && !allow_.accepts_keyword(callee, kw.name))
        error("disallowed keyword argument: " + kw.name + " for " + callee, kw.pos);
      if (kw.value->as<Lambda>() && kw.name != "key")
        error("key functions are only allowed as key= arguments", kw.value->pos);
      expr(*kw.value, true);
    }
  }

  // `in_arg` lets a lambda through; its placement was already checked by the caller.
  void expr(const Expr& e, bool in_arg = false) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Name>) {
            if (!is_local(x.id)) {
              if (allow_.globals.contains(x.id)) report_.api_usage.insert(x.id);
              else error("disallowed global: " + x.id, e.pos);
            }
          } else if constexpr (std::is_same_v<T, Attribute>) {
            expr(*x.value);
            if (allow_.attributes.contains(x.attr)) report_.api_usage.insert(x.attr);
            else if (allow_.is_method(x.attr)) error("method used without call: " + x.attr, e.pos);
            else error("disallowed attribute: " + x.attr, e.pos);
          } else if constexpr (std::is_same_v<T, Call>) {
            call(e, x);
          } else if constexpr (std::is_same_v<T, Subscript>) {
            expr(*x.value);
            if (x.index->template as<StrLit>() || x.index->template as<FloatLit>())
              error("subscription index must be an integer", x.index->pos);
            expr(*x.index);
          } else if constexpr (std::is_same_v<T, Compare>) {
            expr(*x.left);
            for (const auto& c : x.comparators) expr(*c);
          } else if constexpr (std::is_same_v<T, BoolOp>) {
            for (const auto& v : x.values) expr(*v);
          } else if constexpr (std::is_same_v<T, BinOp>) {
            expr(*x.left);
            expr(*x.right);
          } else if constexpr (std::is_same_v<T, UnaryOp>) {
            expr(*x.operand);
          } else if constexpr (std::is_same_v<T, ListExpr> || std::is_same_v<T, TupleExpr>) {
            for (const auto& v : x.items) expr(*v);
          } else if constexpr (std::is_same_v<T, DictExpr>) {
            for (std::size_t i = 0; i < x.keys.size(); ++i) {
              if (!x.keys[i]->template as<StrLit>()) error("mapping keys must be string literals", x.keys[i]->pos);
              expr(*x.values[i]);
            }
          } else if constexpr (std::is_same_v<T, Lambda>) {
            if (!in_arg) error("key functions are only allowed as key= arguments", e.pos);
            if (allow_.globals.contains(x.param)) error("cannot rebind API name: " + x.param, e.pos);
            lambda_params_.push_back(x.param);
            expr(*x.body);
            lambda_params_.pop_back();
          }
        },
        e.node);
  }
};

inline void api_calls(const Expr& e, const Allowlist& allow, std::vector<std::string>& out);

inline void api_calls(const Block& body, const Allowlist& allow, std::vector<std::string>& out) {
  for (const auto& s : body) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, AugAssign> || std::is_same_v<T, ExprStmt>) {
            api_calls(*x.value, allow, out);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (x.value) api_calls(*x.value, allow, out);
          } else if constexpr (std::is_same_v<T, If>) {
            api_calls(*x.test, allow, out);
            api_calls(x.body, allow, out);
            api_calls(x.orelse, allow, out);
          } else if constexpr (std::is_same_v<T, For>) {
            api_calls(*x.iter, allow, out);
            api_calls(x.body, allow, out);
          }
        },
        s->node);
  }
}

inline void api_calls(const Expr& e, const Allowlist& allow, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Call>) {
          // Receiver first, so chained calls list in evaluation order.
          if (const auto* a = x.func->template as<Attribute>()) {
            api_calls(*a->value, allow, out);
            if (allow.is_method(a->attr)) out.push_back(a->attr);
          } else if (const auto* n = x.func->template as<Name>()) {
            if (allow.globals.contains(n->id) && !allow.builtins.contains(n->id) && n->id != "ImagePatch")
              out.push_back(n->id);
          }
          for (const auto& a : x.args) api_calls(*a, allow, out);
          for (const auto& k : x.keywords) api_calls(*k.value, allow, out);
        } else if constexpr (std::is_same_v<T, Attribute>) {
          api_calls(*x.value, allow, out);
        } else if constexpr (std::is_same_v<T, Subscript>) {
          api_calls(*x.value, allow, out);
          api_calls(*x.index, allow, out);
        } else if constexpr (std::is_same_v<T, Compare>) {
          api_calls(*x.left, allow, out);
          for (const auto& c : x.comparators) api_calls(*c, allow, out);
        } else if constexpr (std::is_same_v<T, BoolOp>) {
          for (const auto& v : x.values) api_calls(*v, allow, out);
        } else if constexpr (std::is_same_v<T, BinOp>) {
          api_calls(*x.left, allow, out);
          api_calls(*x.right, allow, out);
        } else if constexpr (std::is_same_v<T, UnaryOp>) {
          api_calls(*x.operand, allow, out);
        } else if constexpr (std::is_same_v<T, ListExpr> || std::is_same_v<T, TupleExpr>) {
          for (const auto& v : x.items) api_calls(*v, allow, out);
        } else if constexpr (std::is_same_v<T, DictExpr>) {
          for (const auto& v : x.values) api_calls(*v, allow, out);
        } else if constexpr (std::is_same_v<T, Lambda>) {
          api_calls(*x.body, allow, out);
        }
      },
      e.node);
}

}  // namespace detail

/// Static checks against the allowlist. Never throws; problems land in the report.
inline ValidationReport validate_program(const NavAst& ast, const Allowlist& allow = default_allowlist()) {
  return detail::Validator(ast, allow).run();
}

/// API calls in source order, leaving out Python builtins and the ImagePatch constructor.
inline std::vector<std::string> summarize_api_usage(const NavAst& ast, const Allowlist& allow = default_allowlist()) {
  std::vector<std::string> out;
  detail::api_calls(ast.body, allow, out);
  return out;
}

}  // namespace navcon::lang
