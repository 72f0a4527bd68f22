#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace seedscope {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, truncated or inconsistent input files.
class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A seed or word required by a metric is missing from a model.
class MissingWordError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate input (zero vectors, zero-rank matrices).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Collects non-fatal warnings (skipped records, dropped seeds).
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  std::size_t count() const noexcept { return warnings.size(); }
};

inline void warn(Diagnostics* diagnostics, std::string message) {
  if (diagnostics != nullptr) diagnostics->warn(std::move(message));
}

}  // namespace seedscope
