#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ultra {

/// Base exception for every failure raised by the library. `kind()` is a short
/// machine-readable tag (e.g. "zero_inertia") used by the CLI error line.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Raised for a triangle with a side below the degeneracy threshold.
/// Samplers catch it and draw again.
class DegenerateTriangle : public Error {
public:
  explicit DegenerateTriangle(const std::string& message)
      : Error("degenerate_triangle", message) {}
};

}  // namespace ultra
