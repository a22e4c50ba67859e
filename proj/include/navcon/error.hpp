#pragma once

#include <stdexcept>
#include <string>

namespace navcon {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scene file or scene invariant problem. `path` is a JSON-pointer-like field path.
class SceneError : public Error {
 public:
  SceneError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace navcon
