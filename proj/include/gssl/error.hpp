#pragma once

#include <stdexcept>
#include <string>

namespace gssl {

// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidArgument,  // precondition violated by the caller
  Numerical,        // solver failure or violated numerical invariant
  EmptyBand,        // reconstruction band R = {i : lambda_i <= theta} is empty
  Schema,           // malformed file or config
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& msg,
                    ErrorKind kind = ErrorKind::InvalidArgument) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace gssl
