#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "navcon/error.hpp"
#include "navcon/pipeline/command.hpp"

namespace navcon::pipeline {

inline constexpr std::string_view kQueryMarker = "INSERT_QUERY_HERE";

inline std::filesystem::path default_data_dir() {
#ifdef NAVCON_DATA_DIR
  return NAVCON_DATA_DIR;
#else
  return "data";
#endif
}

struct CodegenConfig {
  enum class Mode { Fixture, Live };
  Mode mode = Mode::Fixture;
  std::filesystem::path fixture_dir = default_data_dir() / "fixtures";
  std::string endpoint;   // full URL of a chat-completion endpoint
  std::string token_env;  // name of the variable holding the bearer token
  std::string model = "default";
  std::filesystem::path prompt_template = default_data_dir() / "prompts" / "nav_program.txt";
  int timeout_s = 60;

  void validate() const {
    if (mode == Mode::Live && (endpoint.empty() || token_env.empty()))
      throw Error("live code generation needs an endpoint and a token variable name");
  }
};

/// Program text or the reason there is none.
struct Generated {
  std::optional<std::string> program;
  std::string error;
  std::string origin;  // "fixture:<id>" or "live"
};

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool safe_fixture_id(std::string_view id) {
  if (id.empty() || id.front() == '/' || id.find("..") != std::string_view::npos) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '/';
  });
}

struct Url {
  std::string base;  // scheme://host[:port]
  std::string path;
};

inline Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("endpoint must be an absolute http(s) URL");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace detail

/// Stored program for a corpus id, byte for byte.
inline std::string load_fixture(const CodegenConfig& cfg, std::string_view id) {
  if (!detail::safe_fixture_id(id)) throw Error("invalid fixture id: " + std::string(id));
  const std::filesystem::path p = cfg.fixture_dir / (std::string(id) + ".py");
  if (!std::filesystem::is_regular_file(p)) throw Error("missing fixture: " + std::string(id));
  return detail::read_file(p);
}

/// The template with its single query marker replaced by the command text.
inline std::string assemble_prompt(std::string_view tmpl, std::string_view command_text) {
  const auto at = tmpl.find(kQueryMarker);
  if (at == std::string_view::npos) throw Error("prompt template has no query marker");
  if (tmpl.find(kQueryMarker, at + 1) != std::string_view::npos)
    throw Error("prompt template has more than one query marker");
  std::string out(tmpl.substr(0, at));
  out += command_text;
  out += tmpl.substr(at + kQueryMarker.size());
  return out;
}

/// First fenced block, else the first run of lines from a `def` through its indented body.
inline std::optional<std::string> extract_code(std::string_view response) {
  if (const auto open = response.find("```"); open != std::string_view::npos) {
    const auto line_end = response.find('\n', open);
    if (line_end != std::string_view::npos) {
      const auto close = response.find("```", line_end + 1);
      const auto body = response.substr(line_end + 1, close == std::string_view::npos ? std::string_view::npos
                                                                                     : close - line_end - 1);
      if (body.find_first_not_of(" \t\r\n") != std::string_view::npos) return std::string(body);
    }
  }
  std::istringstream in{std::string(response)};
  std::string line, out;
  bool inside = false;
  while (std::getline(in, line)) {
    if (!inside) {
      if (line.rfind("def ", 0) == 0) {
        inside = true;
        out = line + "\n";
      }
      continue;
    }
    const bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (!blank && line[0] != ' ' && line[0] != '\t') break;
    out += line + "\n";
  }
  if (!inside) return std::nullopt;
  while (out.size() > 1 && out[out.size() - 2] == '\n') out.pop_back();
  return out;
}

/// One chat-completion round trip; returns the assistant message text.
inline std::string complete(const CodegenConfig& cfg, const std::string& prompt) {
  cfg.validate();
  const char* token = std::getenv(cfg.token_env.c_str());
  if (token == nullptr || *token == '\0') throw Error("token variable " + cfg.token_env + " is not set");
  const auto url = detail::split_url(cfg.endpoint);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.base.rfind("https://", 0) == 0) throw Error("https endpoints need a build with OpenSSL");
#endif
  httplib::Client client(url.base);
  client.set_connection_timeout(cfg.timeout_s);
  client.set_read_timeout(cfg.timeout_s);
  const nlohmann::json body{{"model", cfg.model},
                            {"temperature", 0},
                            {"messages", {{{"role", "user"}, {"content", prompt}}}}};
  httplib::Headers headers{{"Authorization", std::string("Bearer ") + token}};
  const auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) throw Error("transport failure: " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error("transport failure: HTTP " + std::to_string(res->status));
  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto& choice = j.at("choices").at(0);
    if (choice.contains("message")) return choice["message"].at("content").get<std::string>();
    return choice.at("text").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error("transport failure: unexpected response shape");
  }
}

/// Program for a command: the stored fixture, or a live completion of the prompt template.
inline Generated generate_program(const NavCommand& cmd, const CodegenConfig& cfg) {
  Generated g;
  try {
    if (cfg.mode == CodegenConfig::Mode::Fixture) {
      if (!cmd.fixture) throw Error("missing fixture: no corpus entry for \"" + cmd.text + "\"");
      g.origin = "fixture:" + *cmd.fixture;
      g.program = load_fixture(cfg, *cmd.fixture);
      return g;
    }
    g.origin = "live";
    const auto prompt = assemble_prompt(detail::read_file(cfg.prompt_template), cmd.text);
    g.program = extract_code(complete(cfg, prompt));
    if (!g.program) g.error = "no code extracted";
  } catch (const Error& e) {
    g.program.reset();
    g.error = e.what();
  }
  return g;
}

}  // namespace navcon::pipeline
