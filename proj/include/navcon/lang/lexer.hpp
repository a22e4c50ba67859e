#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "navcon/error.hpp"
#include "navcon/lang/ast.hpp"

namespace navcon::lang {

/// Syntax error or use of a construct outside the language. Positions are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, Pos pos, std::string construct = {})
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        message_(message),
        pos_(pos),
        construct_(std::move(construct)) {}

  [[nodiscard]] const std::string& message() const { return message_; }
  [[nodiscard]] Pos pos() const { return pos_; }
  [[nodiscard]] int line() const { return pos_.line; }
  [[nodiscard]] int column() const { return pos_.column; }
  /// Non-empty for unsupported-construct errors.
  [[nodiscard]] const std::string& construct() const { return construct_; }

 private:
  std::string message_;
  Pos pos_;
  std::string construct_;
};

inline SyntaxError unsupported(const std::string& construct, Pos pos) {
  return SyntaxError("unsupported construct: " + construct, pos, construct);
}

enum class Tok { Name, Int, Float, String, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind;
  std::string text;  // decoded value for strings
  Pos pos;

  [[nodiscard]] bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  [[nodiscard]] bool op(std::string_view t) const { return is(Tok::Op, t); }
};

namespace detail {

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    bool at_line_start = true;
    while (i_ < s_.size()) {
      if (at_line_start && depth_ == 0) {
        if (!line_indent()) continue;  // blank or comment-only line
        at_line_start = false;
      }
      const char c = s_[i_];
      if (c == '\n') {
        if (depth_ == 0) {
          emit(Tok::Newline, "", here());
          at_line_start = true;
        }
        advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        advance();
        continue;
      }
      if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
        continue;
      }
      if (c == '\\' && i_ + 1 < s_.size() && s_[i_ + 1] == '\n') {
        advance();
        advance();
        continue;
      }
      if (ident_start(c)) {
        name_or_string();
        continue;
      }
      if (digit(c) || (c == '.' && i_ + 1 < s_.size() && digit(s_[i_ + 1]))) {
        number();
        continue;
      }
      if (c == '"' || c == '\'') {
        string(here());
        continue;
      }
      punct();
    }
    if (!toks_.empty() && toks_.back().kind != Tok::Newline && toks_.back().kind != Tok::Dedent)
      emit(Tok::Newline, "", here());
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(Tok::Dedent, "", here());
    }
    emit(Tok::End, "", here());
    return std::move(toks_);
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  std::vector<int> indents_;
  std::vector<Token> toks_;

  [[nodiscard]] Pos here() const { return {line_, col_}; }

  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void emit(Tok k, std::string text, Pos p) { toks_.push_back({k, std::move(text), p}); }

  // Measures indentation; returns false when the line carries no tokens.
  bool line_indent() {
    int width = 0;
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\f' || s_[i_] == '\r')) {
      if (s_[i_] == ' ') ++width;
      else if (s_[i_] == '\t') width = (width / 8 + 1) * 8;
      advance();
    }
    if (i_ >= s_.size()) return true;
    if (s_[i_] == '\n' || s_[i_] == '#') {
      while (i_ < s_.size() && s_[i_] != '\n') advance();
      if (i_ < s_.size()) advance();
      return false;
    }
    const Pos p = here();
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(Tok::Indent, "", p);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(Tok::Dedent, "", p);
      }
      if (width != indents_.back()) throw SyntaxError("inconsistent dedent", p);
    }
    return true;
  }

  void name_or_string() {
    const Pos p = here();
    std::size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    const std::string word(s_.substr(i_, j - i_));
    if (j < s_.size() && (s_[j] == '"' || s_[j] == '\'') && word.size() <= 2) {
      std::string lower;
      for (char ch : word) lower += static_cast<char>(ch | 0x20);
      if (lower.find('f') != std::string::npos) throw unsupported("string formatting", p);
      if (lower.find('b') != std::string::npos) throw unsupported("bytes literal", p);
      if (lower == "r" || lower == "u") {
        while (i_ < j) advance();
        string(p, lower == "r");
        return;
      }
    }
    while (i_ < j) advance();
    emit(Tok::Name, word, p);
  }

  void number() {
    const Pos p = here();
    std::size_t j = i_;
    bool is_float = false;
    if (s_[j] == '0' && j + 1 < s_.size() && std::string_view("xXoObB").find(s_[j + 1]) != std::string_view::npos)
      throw unsupported("non-decimal integer literal", p);
    while (j < s_.size() && (digit(s_[j]) || s_[j] == '_')) ++j;
    if (j < s_.size() && s_[j] == '.') {
      is_float = true;
      ++j;
      while (j < s_.size() && (digit(s_[j]) || s_[j] == '_')) ++j;
    }
    if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && digit(s_[k])) {
        is_float = true;
        j = k;
        while (j < s_.size() && digit(s_[j])) ++j;
      }
    }
    if (j < s_.size() && (s_[j] == 'j' || s_[j] == 'J')) throw unsupported("complex literal", p);
    if (j < s_.size() && ident_start(s_[j])) throw SyntaxError("invalid number literal", p);
    std::string text;
    for (std::size_t k = i_; k < j; ++k)
      if (s_[k] != '_') text += s_[k];
    while (i_ < j) advance();
    emit(is_float ? Tok::Float : Tok::Int, text, p);
  }

  void string(Pos p, bool raw = false) {
    const char q = s_[i_];
    const bool triple = i_ + 2 < s_.size() && s_[i_ + 1] == q && s_[i_ + 2] == q;
    for (int k = 0; k < (triple ? 3 : 1); ++k) advance();
    std::string out;
    for (;;) {
      if (i_ >= s_.size()) throw SyntaxError("unterminated string literal", p);
      const char c = s_[i_];
      if (c == q) {
        if (!triple) {
          advance();
          break;
        }
        if (i_ + 2 < s_.size() && s_[i_ + 1] == q && s_[i_ + 2] == q) {
          advance();
          advance();
          advance();
          break;
        }
      }
      if (c == '\n' && !triple) throw SyntaxError("unterminated string literal", p);
      if (c == '\\' && !raw && i_ + 1 < s_.size()) {
        advance();
        const char e = s_[i_];
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '0': out += '\0'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case '\n': break;
          default:
            out += '\\';
            out += e;
        }
        continue;
      }
      out += c;
      advance();
    }
    emit(Tok::String, std::move(out), p);
  }

  void punct() {
    static constexpr std::string_view three[] = {"**=", "//=", "...", ">>=", "<<="};
    static constexpr std::string_view two[] = {"->", "**", "//", "==", "!=", "<=", ">=", "+=", "-=",
                                               "*=", "/=", "%=", "<<", ">>", ":=", "&=", "|=", "^="};
    const Pos p = here();
    const auto rest = s_.substr(i_);
    auto take = [&](std::string_view t) {
      for (std::size_t k = 0; k < t.size(); ++k) advance();
      emit(Tok::Op, std::string(t), p);
    };
    for (auto t : three)
      if (rest.starts_with(t)) return take(t);
    for (auto t : two)
      if (rest.starts_with(t)) return take(t);
    const char c = s_[i_];
    if (std::string_view("([{").find(c) != std::string_view::npos) ++depth_;
    if (std::string_view(")]}").find(c) != std::string_view::npos) {
      if (depth_ == 0) throw SyntaxError(std::string("unmatched '") + c + "'", p);
      --depth_;
    }
    if (std::string_view("()[]{}:,.;+-*/%<>=@&|^~").find(c) == std::string_view::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", p);
    take(std::string_view(&s_[i_], 1));
  }
};

}  // namespace detail

/// Splits source into tokens with explicit NEWLINE / INDENT / DEDENT markers.
inline std::vector<Token> tokenize(std::string_view src) { return detail::Lexer(src).run(); }

}  // namespace navcon::lang
