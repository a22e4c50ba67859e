#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "navcon/lang/validator.hpp"
#include "navcon/runtime/patch.hpp"
#include "navcon/runtime/result.hpp"
#include "navcon/runtime/value.hpp"

namespace navcon::runtime {

struct ExecutionOptions {
  std::size_t step_budget = 100000;
  std::size_t sequence_cap = 10000;
};

struct Execution {
  NavResult result;
  ExecutionTrace trace;
  lang::ValidationReport validation;
  Value raw;  // what execute_command returned
};

namespace detail {

using namespace lang;

struct Args {
  std::vector<std::optional<Value>> slots;
  [[nodiscard]] bool has(std::size_t i) const { return i < slots.size() && slots[i].has_value(); }
  [[nodiscard]] const Value& operator[](std::size_t i) const { return *slots[i]; }
};

class Interpreter {
 public:
  Interpreter(const NavAst& ast, PatchSpace& space, ExecutionTrace& trace, ExecutionOptions opts)
      : ast_(ast), space_(space), trace_(trace), opts_(opts) {}

  Value run(const Value& argument) {
    locals_[ast_.param] = argument;
    if (exec_block(ast_.body)) return ret_;
    return Value{};
  }

 private:
  const NavAst& ast_;
  PatchSpace& space_;
  ExecutionTrace& trace_;
  ExecutionOptions opts_;
  std::map<std::string, Value> locals_;
  std::vector<std::pair<std::string, Value>> lambda_scope_;
  Value ret_;

  void step() {
    if (++trace_.steps_used > opts_.step_budget) throw ExecError("step budget exhausted");
  }

  void check_len(std::size_t n) const {
    if (n > opts_.sequence_cap) throw ExecError("sequence length cap exceeded");
  }

  // ---- statements ----

  bool exec_block(const Block& body) {
    for (const auto& s : body)
      if (exec(*s)) return true;
    return false;
  }

  bool exec(const Stmt& s) {
    step();
    try {
      return std::visit([&](const auto& x) { return exec_node(x, s); }, s.node);
    } catch (ExecError& e) {
      e.set_pos(s.pos);
      throw;
    }
  }

  bool exec_node(const Assign& a, const Stmt&) {
    assign(a.target, eval(*a.value));
    return false;
  }

  bool exec_node(const AugAssign& a, const Stmt&) {
    auto it = locals_.find(a.name);
    if (it == locals_.end()) throw ExecError("name '" + a.name + "' is not defined");
    Value rhs = eval(*a.value);
    it = locals_.find(a.name);
    it->second = binop(a.op, it->second, rhs);
    return false;
  }

  bool exec_node(const ExprStmt& e, const Stmt&) {
    eval(*e.value);
    return false;
  }

  bool exec_node(const If& i, const Stmt&) {
    if (truthy(eval(*i.test))) return exec_block(i.body);
    return exec_block(i.orelse);
  }

  bool exec_node(const For& f, const Stmt&) {
    const Value iterable = eval(*f.iter);
    if (iterable.is_list()) {
      // Live iteration, as Python does; appends during the loop are visited too.
      const auto& items = iterable.list_items();
      for (std::size_t i = 0; i < items.size(); ++i) {
        step();
        assign(f.target, items[i]);
        if (exec_block(f.body)) return true;
      }
      return false;
    }
    for (const auto& item : iterate(iterable)) {
      step();
      assign(f.target, item);
      if (exec_block(f.body)) return true;
    }
    return false;
  }

  bool exec_node(const Return& r, const Stmt&) {
    ret_ = r.value ? eval(*r.value) : Value{};
    return true;
  }

  void assign(const Target& t, const Value& v) {
    if (!t.tuple) {
      locals_[t.names.front()] = v;
      return;
    }
    const auto items = iterate(v);
    if (items.size() != t.names.size())
      throw ExecError("cannot unpack " + std::to_string(items.size()) + " values into " +
                      std::to_string(t.names.size()) + " names");
    for (std::size_t i = 0; i < items.size(); ++i) locals_[t.names[i]] = items[i];
  }

  List iterate(const Value& v) const {
    if (v.is_sequence()) return v.items();
    if (v.is_str()) {
      List out;
      for (char c : v.str()) out.emplace_back(std::string(1, c));
      return out;
    }
    if (v.is_dict()) {
      List out;
      for (const auto& [k, val] : v.dict_items()) out.emplace_back(k);
      return out;
    }
    throw ExecError(std::string("'") + type_name(v) + "' object is not iterable");
  }

  // ---- expressions ----

  Value eval(const Expr& e) {
    step();
    try {
      return std::visit([&](const auto& x) { return eval_node(x, e); }, e.node);
    } catch (ExecError& err) {
      err.set_pos(e.pos);
      throw;
    }
  }

  Value eval_node(const NoneLit&, const Expr&) { return {}; }
  Value eval_node(const BoolLit& b, const Expr&) { return b.value; }
  Value eval_node(const IntLit& i, const Expr&) { return i.value; }
  Value eval_node(const FloatLit& f, const Expr&) { return f.value; }
  Value eval_node(const StrLit& s, const Expr&) { return s.value; }

  Value eval_node(const Name& n, const Expr&) {
    for (auto it = lambda_scope_.rbegin(); it != lambda_scope_.rend(); ++it)
      if (it->first == n.id) return it->second;
    if (auto it = locals_.find(n.id); it != locals_.end()) return it->second;
    if (default_allowlist().globals.contains(n.id)) return Callable{nullptr, n.id};
    throw ExecError("name '" + n.id + "' is not defined");
  }

  Value eval_node(const Attribute& a, const Expr&) {
    const Value obj = eval(*a.value);
    if (!obj.is_patch()) throw ExecError(std::string("'") + type_name(obj) + "' object has no attribute '" + a.attr + "'");
    const auto& rec = space_.at(obj.patch());
    const auto& b = rec.bounds;
    if (a.attr == "left") return b.left;
    if (a.attr == "lower") return b.lower;
    if (a.attr == "right") return b.right;
    if (a.attr == "upper") return b.upper;
    if (a.attr == "width") return b.width();
    if (a.attr == "height") return b.height();
    if (a.attr == "horizontal_center") return b.horizontal_center();
    if (a.attr == "vertical_center") return b.vertical_center();
    if (a.attr == "frame") return rec.frame;
    throw ExecError("'ImagePatch' object has no attribute '" + a.attr + "'");
  }

  Value eval_node(const Subscript& s, const Expr&) {
    const Value obj = eval(*s.value);
    const Value idx = eval(*s.index);
    if (obj.is_dict()) {
      if (!idx.is_str()) throw ExecError("mapping keys must be strings");
      if (const Value* v = obj.get(idx.str())) return *v;
      throw ExecError("key not found: " + repr(idx));
    }
    if (!idx.is_int() && !idx.is_bool()) throw ExecError(std::string("indices must be integers, not ") + type_name(idx));
    std::int64_t i = as_int(idx);
    if (obj.is_str()) {
      const auto n = static_cast<std::int64_t>(obj.str().size());
      if (i < 0) i += n;
      if (i < 0 || i >= n) throw ExecError("string index out of range");
      return std::string(1, obj.str()[static_cast<std::size_t>(i)]);
    }
    if (!obj.is_sequence()) throw ExecError(std::string("'") + type_name(obj) + "' object is not subscriptable");
    const auto& items = obj.items();
    const auto n = static_cast<std::int64_t>(items.size());
    if (i < 0) i += n;
    if (i < 0 || i >= n) throw ExecError("index out of range");
    return items[static_cast<std::size_t>(i)];
  }

  Value eval_node(const Compare& c, const Expr&) {
    Value left = eval(*c.left);
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      Value right = eval(*c.comparators[i]);
      if (!compare_op(c.ops[i], left, right)) return false;
      left = std::move(right);
    }
    return true;
  }

  Value eval_node(const BoolOp& b, const Expr&) {
    Value v;
    for (const auto& operand : b.values) {
      v = eval(*operand);
      const bool t = truthy(v);
      if (b.op == BoolOpKind::And && !t) return v;
      if (b.op == BoolOpKind::Or && t) return v;
    }
    return v;
  }

  Value eval_node(const BinOp& b, const Expr&) {
    Value l = eval(*b.left);
    Value r = eval(*b.right);
    return binop(b.op, l, r);
  }

  Value eval_node(const UnaryOp& u, const Expr&) {
    const Value v = eval(*u.operand);
    if (u.op == UnaryKind::Not) return !truthy(v);
    if (!v.is_number()) throw ExecError(std::string("bad operand type for unary operator: ") + type_name(v));
    if (v.is_float()) return u.op == UnaryKind::Neg ? -as_double(v) : as_double(v);
    const auto i = as_int(v);
    if (u.op == UnaryKind::Pos) return i;
    if (i == INT64_MIN) throw ExecError("integer overflow");
    return -i;
  }

  Value eval_node(const ListExpr& l, const Expr&) {
    List items;
    for (const auto& x : l.items) items.push_back(eval(*x));
    check_len(items.size());
    return Value::list(std::move(items));
  }

  Value eval_node(const TupleExpr& t, const Expr&) {
    List items;
    for (const auto& x : t.items) items.push_back(eval(*x));
    return Value::tuple(std::move(items));
  }

  Value eval_node(const DictExpr& d, const Expr&) {
    Dict items;
    for (std::size_t i = 0; i < d.keys.size(); ++i) {
      const Value k = eval(*d.keys[i]);
      if (!k.is_str()) throw ExecError("mapping keys must be strings");
      Value v = eval(*d.values[i]);
      auto it = std::find_if(items.begin(), items.end(), [&](const auto& kv) { return kv.first == k.str(); });
      if (it != items.end()) it->second = std::move(v);
      else items.emplace_back(k.str(), std::move(v));
    }
    return Value::dict(std::move(items));
  }

  Value eval_node(const Lambda& l, const Expr&) { return Callable{&l, {}}; }

  Value eval_node(const Call& c, const Expr&) {
    std::vector<Value> args;
    std::vector<std::pair<std::string, Value>> kwargs;
    if (const auto* attr = c.func->as<Attribute>()) {
      const Value receiver = eval(*attr->value);
      for (const auto& a : c.args) args.push_back(eval(*a));
      for (const auto& k : c.keywords) kwargs.emplace_back(k.name, eval(*k.value));
      return call_method(receiver, attr->attr, args, kwargs);
    }
    const auto* name = c.func->as<Name>();
    if (!name) throw ExecError("call target is not an API function");
    for (const auto& a : c.args) args.push_back(eval(*a));
    for (const auto& k : c.keywords) kwargs.emplace_back(k.name, eval(*k.value));
    const Value target = eval_node(*name, *c.func);
    if (!target.is_callable()) throw ExecError("'" + name->id + "' is not callable");
    const auto& fn = std::get<Callable>(target.v);
    if (fn.lambda) {
      if (!kwargs.empty() || args.size() != 1) throw ExecError("key function takes exactly one argument");
      return call_lambda(*fn.lambda, args[0]);
    }
    return call_global(fn.builtin, args, kwargs);
  }

  // ---- operators ----

  static bool same_object(const Value& a, const Value& b) {
    if (a.v.index() != b.v.index()) return false;
    if (a.is_list()) return std::get<std::shared_ptr<List>>(a.v) == std::get<std::shared_ptr<List>>(b.v);
    if (a.is_tuple()) return std::get<std::shared_ptr<const List>>(a.v) == std::get<std::shared_ptr<const List>>(b.v);
    if (a.is_dict()) return std::get<std::shared_ptr<Dict>>(a.v) == std::get<std::shared_ptr<Dict>>(b.v);
    return equal(a, b);
  }

  bool contains(const Value& container, const Value& item) const {
    if (container.is_str()) {
      if (!item.is_str()) throw ExecError("'in <string>' requires a string operand");
      return container.str().find(item.str()) != std::string::npos;
    }
    if (container.is_dict()) return item.is_str() && container.get(item.str()) != nullptr;
    if (container.is_sequence()) {
      for (const auto& x : container.items())
        if (equal(x, item)) return true;
      return false;
    }
    throw ExecError(std::string("argument of type '") + type_name(container) + "' is not iterable");
  }

  bool compare_op(CmpOp op, const Value& a, const Value& b) const {
    switch (op) {
      case CmpOp::Eq: return equal(a, b);
      case CmpOp::Ne: return !equal(a, b);
      case CmpOp::Lt: return compare(a, b) < 0;
      case CmpOp::Gt: return compare(a, b) > 0;
      case CmpOp::Le: return compare(a, b) <= 0;
      case CmpOp::Ge: return compare(a, b) >= 0;
      case CmpOp::In: return contains(b, a);
      case CmpOp::NotIn: return !contains(b, a);
      case CmpOp::Is: return same_object(a, b);
      case CmpOp::IsNot: return !same_object(a, b);
    }
    return false;
  }

  Value repeat(const Value& seq, std::int64_t n) const {
    if (n <= 0) return seq.is_str() ? Value(std::string()) : (seq.is_list() ? Value::list() : Value::tuple({}));
    if (seq.is_str()) {
      check_len(seq.str().size() * static_cast<std::size_t>(n));
      std::string out;
      for (std::int64_t i = 0; i < n; ++i) out += seq.str();
      return out;
    }
    check_len(seq.items().size() * static_cast<std::size_t>(n));
    List out;
    for (std::int64_t i = 0; i < n; ++i) out.insert(out.end(), seq.items().begin(), seq.items().end());
    return seq.is_list() ? Value::list(std::move(out)) : Value::tuple(std::move(out));
  }

  Value binop(BinOpKind op, const Value& a, const Value& b) const {
    const std::string sym = to_string(op);
    if (op == BinOpKind::Add) {
      if (a.is_str() && b.is_str()) {
        check_len(a.str().size() + b.str().size());
        return a.str() + b.str();
      }
      if (a.is_sequence() && b.is_sequence() && a.is_list() == b.is_list()) {
        List out = a.items();
        out.insert(out.end(), b.items().begin(), b.items().end());
        check_len(out.size());
        return a.is_list() ? Value::list(std::move(out)) : Value::tuple(std::move(out));
      }
    }
    if (op == BinOpKind::Mul) {
      if ((a.is_str() || a.is_sequence()) && (b.is_int() || b.is_bool())) return repeat(a, as_int(b));
      if ((b.is_str() || b.is_sequence()) && (a.is_int() || a.is_bool())) return repeat(b, as_int(a));
    }
    if (!a.is_number() || !b.is_number())
      throw ExecError("unsupported operand types for " + sym + ": " + type_name(a) + " and " + type_name(b));
    const bool ints = !a.is_float() && !b.is_float();
    if (op == BinOpKind::Div) {
      if (as_double(b) == 0.0) throw ExecError("division by zero");
      return as_double(a) / as_double(b);
    }
    if (ints) {
      const std::int64_t x = as_int(a), y = as_int(b);
      std::int64_t out = 0;
      switch (op) {
        case BinOpKind::Add:
          if (__builtin_add_overflow(x, y, &out)) throw ExecError("integer overflow");
          return out;
        case BinOpKind::Sub:
          if (__builtin_sub_overflow(x, y, &out)) throw ExecError("integer overflow");
          return out;
        case BinOpKind::Mul:
          if (__builtin_mul_overflow(x, y, &out)) throw ExecError("integer overflow");
          return out;
        case BinOpKind::FloorDiv:
        case BinOpKind::Mod: {
          if (y == 0) throw ExecError(op == BinOpKind::Mod ? "modulo by zero" : "division by zero");
          if (x == INT64_MIN && y == -1) throw ExecError("integer overflow");
          std::int64_t q = x / y, r = x % y;
          if (r != 0 && ((r < 0) != (y < 0))) {
            --q;
            r += y;
          }
          return op == BinOpKind::FloorDiv ? q : r;
        }
        case BinOpKind::Pow: {
          if (y < 0) return std::pow(static_cast<double>(x), static_cast<double>(y));
          std::int64_t result = 1, base = x, e = y;
          while (e > 0) {
            if (e & 1)
              if (__builtin_mul_overflow(result, base, &result)) throw ExecError("integer overflow");
            e >>= 1;
            if (e > 0 && __builtin_mul_overflow(base, base, &base)) throw ExecError("integer overflow");
          }
          return result;
        }
        default: break;
      }
    }
    const double x = as_double(a), y = as_double(b);
    switch (op) {
      case BinOpKind::Add: return x + y;
      case BinOpKind::Sub: return x - y;
      case BinOpKind::Mul: return x * y;
      case BinOpKind::FloorDiv:
        if (y == 0.0) throw ExecError("division by zero");
        return std::floor(x / y);
      case BinOpKind::Mod: {
        if (y == 0.0) throw ExecError("modulo by zero");
        double r = std::fmod(x, y);
        if (r != 0.0 && ((r < 0) != (y < 0))) r += y;
        return r;
      }
      case BinOpKind::Pow: {
        const double r = std::pow(x, y);
        if (std::isnan(r) && !std::isnan(x) && !std::isnan(y)) throw ExecError("math domain error");
        return r;
      }
      default: break;
    }
    throw ExecError("unsupported operator " + sym);
  }

  // ---- calls ----

  static Args bind(const std::string& fn, const std::vector<std::string>& params, std::size_t required,
                   const std::vector<Value>& args, const std::vector<std::pair<std::string, Value>>& kwargs) {
    Args out;
    out.slots.resize(params.size());
    if (args.size() > params.size())
      throw ExecError(fn + "() takes at most " + std::to_string(params.size()) + " arguments (" +
                      std::to_string(args.size()) + " given)");
    for (std::size_t i = 0; i < args.size(); ++i) out.slots[i] = args[i];
    for (const auto& [k, v] : kwargs) {
      auto it = std::find(params.begin(), params.end(), k);
      if (it == params.end()) throw ExecError(fn + "() got an unexpected keyword argument '" + k + "'");
      auto idx = static_cast<std::size_t>(it - params.begin());
      if (out.slots[idx]) throw ExecError(fn + "() got multiple values for argument '" + k + "'");
      out.slots[idx] = v;
    }
    for (std::size_t i = 0; i < required; ++i)
      if (!out.slots[i]) throw ExecError(fn + "() missing required argument '" + params[i] + "'");
    return out;
  }

  static std::string str_arg(const std::string& fn, const Value& v) {
    if (!v.is_str()) throw ExecError(fn + "() expects a string, got " + std::string(type_name(v)));
    return v.str();
  }

  static std::vector<std::string> str_list(const std::string& fn, const Value& v) {
    if (v.is_str()) return {v.str()};
    if (!v.is_sequence()) throw ExecError(fn + "() expects a list of strings, got " + std::string(type_name(v)));
    std::vector<std::string> out;
    for (const auto& x : v.items()) out.push_back(str_arg(fn, x));
    return out;
  }

  PatchRef patch_arg(const std::string& fn, const Value& v) const {
    if (!v.is_patch()) throw ExecError(fn + "() expects an ImagePatch, got " + std::string(type_name(v)));
    return v.patch();
  }

  static Box2 box_args(const Args& a) {
    return Box2{as_double(a[0]), as_double(a[1]), as_double(a[2]), as_double(a[3])};
  }

  void record(const std::string& name, const std::vector<Value>& args,
              const std::vector<std::pair<std::string, Value>>& kwargs, const Value& result,
              std::optional<Value> receiver = {}) {
    std::string s;
    if (receiver) s += summarize(*receiver, 40) + "; ";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + summarize(args[i], 60);
    for (std::size_t i = 0; i < kwargs.size(); ++i)
      s += ((i || !args.empty()) ? ", " : "") + kwargs[i].first + "=" + summarize(kwargs[i].second, 40);
    trace_.api_calls.push_back({name, s, summarize(result)});
  }

  Value call_lambda(const Lambda& l, const Value& arg) {
    lambda_scope_.emplace_back(l.param, arg);
    try {
      Value out = eval(*l.body);
      lambda_scope_.pop_back();
      return out;
    } catch (...) {
      lambda_scope_.pop_back();
      throw;
    }
  }

  Value apply_key(const std::optional<Value>& key, const Value& item) {
    if (!key || key->is_none()) return item;
    if (!key->is_callable()) throw ExecError("key must be a function");
    const auto& fn = std::get<Callable>(key->v);
    if (fn.lambda) return call_lambda(*fn.lambda, item);
    return call_global(fn.builtin, {item}, {});
  }

  void sort_values(List& items, const std::optional<Value>& key, bool reverse) {
    std::vector<std::pair<Value, Value>> keyed;
    keyed.reserve(items.size());
    for (const auto& x : items) keyed.emplace_back(apply_key(key, x), x);
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      step();
      return reverse ? compare(b.first, a.first) < 0 : compare(a.first, b.first) < 0;
    });
    for (std::size_t i = 0; i < items.size(); ++i) items[i] = std::move(keyed[i].second);
  }

  Value call_method(const Value& receiver, const std::string& m, const std::vector<Value>& args,
                    const std::vector<std::pair<std::string, Value>>& kwargs) {
    if (receiver.is_list() && (m == "sort" || m == "append")) {
      auto& items = receiver.list_items();
      if (m == "append") {
        const Args a = bind(m, {"object"}, 1, args, {});
        if (!kwargs.empty()) throw ExecError("append() takes no keyword arguments");
        check_len(items.size() + 1);
        items.push_back(a[0]);
        return {};
      }
      if (!args.empty()) throw ExecError("sort() takes no positional arguments");
      const Args a = bind(m, {"key", "reverse"}, 0, {}, kwargs);
      sort_values(items, a.slots[0], a.has(1) && truthy(a[1]));
      record("sort", args, kwargs, Value{}, receiver);
      return {};
    }
    if (m == "sort" && !receiver.is_list())
      throw ExecError(std::string("sort() requires a list, got ") + type_name(receiver));
    if (!receiver.is_patch())
      throw ExecError(std::string("'") + type_name(receiver) + "' object has no method '" + m + "'");
    const PatchRef p = receiver.patch();
    Value out;
    if (m == "find") {
      const Args a = bind(m, {"object_name"}, 1, args, kwargs);
      List found;
      for (auto r : space_.find(p, str_arg(m, a[0]))) found.emplace_back(r);
      check_len(found.size());
      out = Value::list(std::move(found));
    } else if (m == "exists") {
      const Args a = bind(m, {"object_name"}, 1, args, kwargs);
      out = space_.exists(p, str_arg(m, a[0]));
    } else if (m == "verify_property") {
      const Args a = bind(m, {"object_name", "visual_property"}, 1, args, kwargs);
      if (a.has(1)) {
        out = space_.verify_property(p, str_arg(m, a[0]), str_arg(m, a[1]));
      } else {
        // Single-argument form: the property alone, checked on whatever the patch shows.
        const auto* obj = space_.dominant(p);
        out = obj != nullptr && obj->has_attribute(str_arg(m, a[0]));
      }
    } else if (m == "best_text_match") {
      const Args a = bind(m, {"option_list", "prefix"}, 1, args, kwargs);
      out = space_.best_text_match(p, str_list(m, a[0]));
    } else if (m == "simple_query") {
      const Args a = bind(m, {"question"}, 0, args, kwargs);
      std::optional<std::string> q;
      if (a.has(0) && !a[0].is_none()) q = str_arg(m, a[0]);
      out = space_.simple_query(p, q ? std::optional<std::string_view>(*q) : std::nullopt);
    } else if (m == "compute_depth") {
      bind(m, {}, 0, args, kwargs);
      out = space_.compute_depth(p);
    } else if (m == "crop") {
      const Args a = bind(m, {"left", "lower", "right", "upper"}, 4, args, kwargs);
      out = space_.crop(p, box_args(a));
    } else if (m == "overlaps_with") {
      const Args a = bind(m, {"left", "lower", "right", "upper"}, 4, args, kwargs);
      out = space_.overlaps_with(p, box_args(a));
    } else {
      throw ExecError("'ImagePatch' object has no method '" + m + "'");
    }
    record(m, args, kwargs, out, receiver);
    return out;
  }

  Value call_global(const std::string& fn, const std::vector<Value>& args,
                    const std::vector<std::pair<std::string, Value>>& kwargs) {
    if (fn == "len") {
      const Args a = bind(fn, {"obj"}, 1, args, {});
      const Value& v = a[0];
      if (v.is_str()) return static_cast<std::int64_t>(v.str().size());
      if (v.is_sequence()) return static_cast<std::int64_t>(v.items().size());
      if (v.is_dict()) return static_cast<std::int64_t>(v.dict_items().size());
      throw ExecError(std::string("object of type '") + type_name(v) + "' has no len()");
    }
    if (fn == "abs") {
      const Args a = bind(fn, {"x"}, 1, args, {});
      if (a[0].is_float()) return std::abs(as_double(a[0]));
      const auto i = as_int(a[0]);
      if (i == INT64_MIN) throw ExecError("integer overflow");
      return i < 0 ? -i : i;
    }
    if (fn == "sorted") {
      const Args a = bind(fn, {"iterable", "key", "reverse"}, 1, {args.begin(), args.begin() + std::min<std::size_t>(args.size(), 1)}, kwargs);
      if (args.size() > 1) throw ExecError("sorted() takes one positional argument");
      List items = iterate(a[0]);
      sort_values(items, a.slots[1], a.has(2) && truthy(a[2]));
      return Value::list(std::move(items));
    }
    if (fn == "min" || fn == "max") {
      if (args.empty()) throw ExecError(fn + "() expects at least one argument");
      const Args a = bind(fn, {"key"}, 0, {}, kwargs);
      const List items = args.size() == 1 ? iterate(args[0]) : List(args.begin(), args.end());
      if (items.empty()) throw ExecError(fn + "() arg is an empty sequence");
      std::size_t best = 0;
      Value best_key = apply_key(a.slots[0], items[0]);
      for (std::size_t i = 1; i < items.size(); ++i) {
        Value k = apply_key(a.slots[0], items[i]);
        const int c = compare(k, best_key);
        if ((fn == "min" && c < 0) || (fn == "max" && c > 0)) {
          best = i;
          best_key = std::move(k);
        }
      }
      return items[best];
    }
    if (fn == "enumerate") {
      const Args a = bind(fn, {"iterable", "start"}, 1, args, kwargs);
      const std::int64_t start = a.has(1) ? as_int(a[1]) : 0;
      List out;
      std::int64_t i = start;
      for (const auto& x : iterate(a[0])) out.push_back(Value::tuple({Value(i++), x}));
      return Value::list(std::move(out));
    }
    if (fn == "range") {
      if (!kwargs.empty()) throw ExecError("range() takes no keyword arguments");
      if (args.empty() || args.size() > 3) throw ExecError("range() expects 1 to 3 arguments");
      std::int64_t start = 0, stop = 0, stride = 1;
      if (args.size() == 1) stop = as_int(args[0]);
      else {
        start = as_int(args[0]);
        stop = as_int(args[1]);
        if (args.size() == 3) stride = as_int(args[2]);
      }
      if (stride == 0) throw ExecError("range() step must not be zero");
      List out;
      for (std::int64_t i = start; stride > 0 ? i < stop : i > stop; i += stride) {
        check_len(out.size() + 1);
        out.emplace_back(i);
      }
      return Value::list(std::move(out));
    }

    Value out;
    if (fn == "ImagePatch") {
      const Args a = bind(fn, {"image", "left", "lower", "right", "upper", "frame"}, 1, args, kwargs);
      const PatchRef base = patch_arg(fn, a[0]);
      PatchRef made = base;
      if (a.has(5) && !a[5].is_none()) {
        const std::string frame = str_arg(fn, a[5]);
        made = frame == space_.at(base).frame ? space_.copy(base) : space_.frame_patch(frame, base.id);
      } else {
        made = space_.copy(base);
      }
      const bool any_coord = a.has(1) || a.has(2) || a.has(3) || a.has(4);
      if (any_coord) {
        const Box2 cur = space_.at(made).bounds;
        auto coord = [&](std::size_t i, double fallback) {
          return a.has(i) && !a[i].is_none() ? as_double(a[i]) : fallback;
        };
        made = space_.crop(made, {coord(1, cur.left), coord(2, cur.lower), coord(3, cur.right), coord(4, cur.upper)});
      }
      out = made;
    } else if (fn == "distance") {
      const Args a = bind(fn, {"patch_a", "patch_b"}, 2, args, kwargs);
      out = space_.distance(patch_arg(fn, a[0]), patch_arg(fn, a[1]));
    } else if (fn == "best_image_match") {
      const Args a = bind(fn, {"list_patches", "content", "return_index"}, 2, args, kwargs);
      if (!a[0].is_sequence()) throw ExecError("best_image_match() expects a list of patches");
      std::vector<PatchRef> patches;
      for (const auto& x : a[0].items()) patches.push_back(patch_arg(fn, x));
      const std::size_t idx = space_.best_image_match(patches, str_list(fn, a[1]));
      if (a.has(2) && truthy(a[2])) out = static_cast<std::int64_t>(idx);
      else out = patches[idx];
    } else if (fn == "bool_to_yesno") {
      const Args a = bind(fn, {"bool_answer"}, 1, args, kwargs);
      out = truthy(a[0]) ? "yes" : "no";
    } else if (fn == "coerce_to_numeric") {
      const Args a = bind(fn, {"string"}, 1, args, kwargs);
      out = a[0].is_number() ? Value(as_double(a[0])) : Value(coerce_to_numeric(display(a[0])));
    } else if (fn == "llm_query") {
      const Args a = bind(fn, {"question", "long_answer"}, 1, args, kwargs);
      out = space_.llm_query(str_arg(fn, a[0]));
    } else if (fn == "navigate_to_object") {
      const Args a = bind(fn, {"x", "y"}, 2, args, kwargs);
      out = Value::dict({{"function", Value(std::string(kNavFunction))},
                         {"inputs", Value::tuple({Value(as_double(a[0])), Value(as_double(a[1]))})}});
    } else {
      throw ExecError("name '" + fn + "' is not callable");
    }
    record(fn, args, kwargs, out);
    return out;
  }
};

}  // namespace detail

/// Runs a program against one assembled world snapshot. Never throws for program faults.
inline Execution execute_program(const lang::NavAst& ast, const world::SceneSpec& scene,
                                 const projection::AssembledViews& views, ExecutionOptions opts = {}) {
  Execution out;
  out.validation = lang::validate_program(ast);
  if (!out.validation.ok) {
    const auto errors = out.validation.errors();
    out.result = NavResult::failure("validation failed: " + errors.front());
    return out;
  }
  PatchSpace space(scene, views, out.trace);
  try {
    const PatchRef root = space.root();
    detail::Interpreter interp(ast, space, out.trace, opts);
    out.raw = interp.run(Value(root));
    out.result = resolve_nav_result(out.raw, out.trace, views.mode);
  } catch (const ExecError& e) {
    out.result = NavResult::failure(e.located());
    out.trace.notes.push_back("runtime error: " + e.located());
  }
  return out;
}

}  // namespace navcon::runtime
