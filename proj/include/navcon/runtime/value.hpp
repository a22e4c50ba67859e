#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "navcon/error.hpp"
#include "navcon/lang/ast.hpp"

namespace navcon::runtime {

/// Failure while running a program. Carries the source position when known.
class ExecError : public Error {
 public:
  explicit ExecError(const std::string& message, lang::Pos pos = {})
      : Error(message), message_(message), pos_(pos) {}

  [[nodiscard]] const std::string& message() const { return message_; }
  [[nodiscard]] lang::Pos pos() const { return pos_; }
  void set_pos(lang::Pos p) {
    if (pos_.line == 0) pos_ = p;
  }
  /// "message (line L, column C)" when a position is known.
  [[nodiscard]] std::string located() const {
    if (pos_.line == 0) return message_;
    return message_ + " (line " + std::to_string(pos_.line) + ", column " + std::to_string(pos_.column) + ")";
  }

 private:
  std::string message_;
  lang::Pos pos_;
};

struct Value;
using List = std::vector<Value>;
using Dict = std::vector<std::pair<std::string, Value>>;  // insertion-ordered

struct PatchRef {
  int id = -1;
  bool operator==(const PatchRef&) const = default;
};

/// A key function: a lambda from the program or a named API function.
struct Callable {
  const lang::Lambda* lambda = nullptr;
  std::string builtin;
  bool operator==(const Callable&) const = default;
};

struct Value {
  using Node = std::variant<std::monostate, bool, std::int64_t, double, std::string, std::shared_ptr<List>,
                            std::shared_ptr<const List>, std::shared_ptr<Dict>, PatchRef, Callable>;
  Node v;

  Value() = default;
  Value(std::monostate) {}
  Value(bool b) : v(b) {}
  Value(std::int64_t i) : v(i) {}
  Value(int i) : v(static_cast<std::int64_t>(i)) {}
  Value(double d) : v(d) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(PatchRef p) : v(p) {}
  Value(Callable c) : v(std::move(c)) {}

  static Value list(List items = {}) {
    Value out;
    out.v = std::make_shared<List>(std::move(items));
    return out;
  }
  static Value tuple(List items) {
    Value out;
    out.v = std::shared_ptr<const List>(std::make_shared<List>(std::move(items)));
    return out;
  }
  static Value dict(Dict items = {}) {
    Value out;
    out.v = std::make_shared<Dict>(std::move(items));
    return out;
  }

  [[nodiscard]] bool is_none() const { return std::holds_alternative<std::monostate>(v); }
  [[nodiscard]] bool is_bool() const { return std::holds_alternative<bool>(v); }
  [[nodiscard]] bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  [[nodiscard]] bool is_float() const { return std::holds_alternative<double>(v); }
  [[nodiscard]] bool is_number() const { return is_bool() || is_int() || is_float(); }
  [[nodiscard]] bool is_str() const { return std::holds_alternative<std::string>(v); }
  [[nodiscard]] bool is_list() const { return std::holds_alternative<std::shared_ptr<List>>(v); }
  [[nodiscard]] bool is_tuple() const { return std::holds_alternative<std::shared_ptr<const List>>(v); }
  [[nodiscard]] bool is_sequence() const { return is_list() || is_tuple(); }
  [[nodiscard]] bool is_dict() const { return std::holds_alternative<std::shared_ptr<Dict>>(v); }
  [[nodiscard]] bool is_patch() const { return std::holds_alternative<PatchRef>(v); }
  [[nodiscard]] bool is_callable() const { return std::holds_alternative<Callable>(v); }

  [[nodiscard]] const std::string& str() const { return std::get<std::string>(v); }
  [[nodiscard]] PatchRef patch() const { return std::get<PatchRef>(v); }
  [[nodiscard]] List& list_items() const { return *std::get<std::shared_ptr<List>>(v); }
  [[nodiscard]] const List& items() const {
    if (is_list()) return *std::get<std::shared_ptr<List>>(v);
    return *std::get<std::shared_ptr<const List>>(v);
  }
  [[nodiscard]] Dict& dict_items() const { return *std::get<std::shared_ptr<Dict>>(v); }
  [[nodiscard]] const Value* get(std::string_view key) const {
    if (!is_dict()) return nullptr;
    for (const auto& [k, val] : dict_items())
      if (k == key) return &val;
    return nullptr;
  }
};

inline const char* type_name(const Value& x) {
  switch (x.v.index()) {
    case 0: return "NoneType";
    case 1: return "bool";
    case 2: return "int";
    case 3: return "float";
    case 4: return "str";
    case 5: return "list";
    case 6: return "tuple";
    case 7: return "dict";
    case 8: return "ImagePatch";
    default: return "function";
  }
}

inline double as_double(const Value& x) {
  if (x.is_bool()) return std::get<bool>(x.v) ? 1.0 : 0.0;
  if (x.is_int()) return static_cast<double>(std::get<std::int64_t>(x.v));
  if (x.is_float()) return std::get<double>(x.v);
  throw ExecError(std::string("expected a number, got ") + type_name(x));
}

inline std::int64_t as_int(const Value& x) {
  if (x.is_bool()) return std::get<bool>(x.v) ? 1 : 0;
  if (x.is_int()) return std::get<std::int64_t>(x.v);
  throw ExecError(std::string("expected an integer, got ") + type_name(x));
}

inline bool truthy(const Value& x) {
  return std::visit(
      [&](const auto& y) -> bool {
        using T = std::decay_t<decltype(y)>;
        if constexpr (std::is_same_v<T, std::monostate>) return false;
        else if constexpr (std::is_same_v<T, bool>) return y;
        else if constexpr (std::is_same_v<T, std::int64_t>) return y != 0;
        else if constexpr (std::is_same_v<T, double>) return y != 0.0;
        else if constexpr (std::is_same_v<T, std::string>) return !y.empty();
        else if constexpr (std::is_same_v<T, std::shared_ptr<List>> || std::is_same_v<T, std::shared_ptr<const List>> ||
                           std::is_same_v<T, std::shared_ptr<Dict>>)
          return !y->empty();
        else return true;
      },
      x.v);
}

inline bool equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (!a.is_float() && !b.is_float()) return as_int(a) == as_int(b);
    return as_double(a) == as_double(b);
  }
  if (a.is_sequence() && b.is_sequence()) {
    if (a.is_list() != b.is_list()) return false;
    const auto& x = a.items();
    const auto& y = b.items();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!equal(x[i], y[i])) return false;
    return true;
  }
  if (a.v.index() != b.v.index()) return false;
  if (a.is_none()) return true;
  if (a.is_str()) return a.str() == b.str();
  if (a.is_patch()) return a.patch() == b.patch();
  if (a.is_dict()) {
    const auto& x = a.dict_items();
    const auto& y = b.dict_items();
    if (x.size() != y.size()) return false;
    for (const auto& [k, val] : x) {
      const Value* other = b.get(k);
      if (!other || !equal(val, *other)) return false;
    }
    return true;
  }
  return false;
}

/// Three-way ordering for <, <=, >, >= and sorting; throws on unorderable types.
inline int compare(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (!a.is_float() && !b.is_float()) {
      const auto x = as_int(a), y = as_int(b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    const double x = as_double(a), y = as_double(b);
    if (std::isnan(x) || std::isnan(y)) return 0;
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.is_str() && b.is_str()) return a.str() < b.str() ? -1 : (a.str() > b.str() ? 1 : 0);
  if (a.is_sequence() && b.is_sequence() && a.is_list() == b.is_list()) {
    const auto& x = a.items();
    const auto& y = b.items();
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
      if (int c = compare(x[i], y[i])) return c;
    return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
  }
  throw ExecError(std::string("cannot order ") + type_name(a) + " and " + type_name(b));
}

inline std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, d);
    if (std::strtod(buf, nullptr) == d) break;
  }
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

/// Python-style repr.
inline std::string repr(const Value& x) {
  return std::visit(
      [&](const auto& y) -> std::string {
        using T = std::decay_t<decltype(y)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "None";
        else if constexpr (std::is_same_v<T, bool>) return y ? "True" : "False";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(y);
        else if constexpr (std::is_same_v<T, double>) return format_float(y);
        else if constexpr (std::is_same_v<T, std::string>) {
          std::string out = "'";
          for (char c : y) {
            if (c == '\'' || c == '\\') out += '\\';
            if (c == '\n') out += "\\n";
            else out += c;
          }
          return out + "'";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<List>> ||
                             std::is_same_v<T, std::shared_ptr<const List>>) {
          const bool tuple = std::is_same_v<T, std::shared_ptr<const List>>;
          std::string out = tuple ? "(" : "[";
          for (std::size_t i = 0; i < y->size(); ++i) {
            if (i) out += ", ";
            out += repr((*y)[i]);
          }
          if (tuple && y->size() == 1) out += ",";
          return out + (tuple ? ")" : "]");
        } else if constexpr (std::is_same_v<T, std::shared_ptr<Dict>>) {
          std::string out = "{";
          bool first = true;
          for (const auto& [k, val] : *y) {
            if (!first) out += ", ";
            first = false;
            out += repr(Value(k)) + ": " + repr(val);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, PatchRef>) return "<ImagePatch #" + std::to_string(y.id) + ">";
        else return y.lambda ? "<lambda>" : "<function " + y.builtin + ">";
      },
      x.v);
}

/// str() of a value: strings unquoted, everything else as repr.
inline std::string display(const Value& x) { return x.is_str() ? x.str() : repr(x); }

inline std::string summarize(const Value& x, std::size_t limit = 80) {
  std::string s = repr(x);
  if (s.size() > limit) s = s.substr(0, limit - 3) + "...";
  return s;
}

}  // namespace navcon::runtime
