#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crmoji {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A resource or dataset file failed to parse. `line()` is 1-based; 0 means
/// the error is not tied to one line.
class LoadError : public Error {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Cross-table consistency failed after all rows parsed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Statistic undefined for the given input (zero variance, degenerate kappa).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace crmoji
