#pragma once

#include <stdexcept>
#include <string>

namespace rieszgen {

// Base of every error the library throws. `code()` is a stable
// machine-readable key (used verbatim in CLI error JSON).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

// A value outside the domain of an operation (negative base, non-finite
// result, parameter outside an open range, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::string code = "domain_error")
      : Error(std::move(code), what) {}
};

// A series whose truncation error cannot be certified below the requested
// tolerance.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error("divergence", what) {}
};

// A construction that would exceed a configured size cap.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error("resource_limit", what) {}
};

// A caller-supplied hypothesis that does not hold (distinct from a numerical
// failure of the property being checked).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what, std::string code = "precondition")
      : Error(std::move(code), what) {}
};

}  // namespace rieszgen
