#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace navcon::text {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Crude singularization, applied symmetrically so "cones" matches "cone".
inline std::string normalize_token(std::string tok) {
  if (tok.size() > 3 && tok.back() == 's' && tok[tok.size() - 2] != 's') tok.pop_back();
  return tok;
}

/// Lowercased alphanumeric tokens with plural normalization.
inline std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(normalize_token(std::move(cur)));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(normalize_token(std::move(cur)));
  return out;
}

inline std::set<std::string> token_set(std::string_view s) {
  auto t = tokens(s);
  return {t.begin(), t.end()};
}

/// True when every token of `phrase` occurs in `query`.
inline bool phrase_in_query(std::string_view phrase, std::string_view query) {
  const auto q = token_set(query);
  const auto p = tokens(phrase);
  if (p.empty()) return false;
  return std::all_of(p.begin(), p.end(), [&](const std::string& t) { return q.count(t) > 0; });
}

/// Lowercase, punctuation stripped, whitespace collapsed.
inline std::string normalize_question(std::string_view s) {
  std::string out;
  bool space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      space = true;
    }
  }
  return out;
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic uniform in [0, 1) from a 64-bit key.
inline double unit_from(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace navcon::text
