#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace riso {

/// Failure categories mirrored one-to-one by the C API status codes.
enum class ErrorKind {
  Argument,
  Dimension,
  Range,
  Structure,
  Unsupported,
  Size,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace riso
