#pragma once

#include <stdexcept>
#include <string>

namespace deptype {

// Bad input data or a violated precondition. Maps to CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file, artifact or adapter that should exist does not. Maps to exit code 2.
class MissingResource : public std::runtime_error {
 public:
  explicit MissingResource(const std::string& what, std::string path = {})
      : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace deptype
