#pragma once

#include <stdexcept>
#include <string>

namespace hflow {

struct ConstructionError : std::runtime_error {
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// The height field left (or touched the boundary of) the tubular regime.
struct AdmissibilityError : std::runtime_error {
  explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedDimensionError : std::runtime_error {
  explicit UnsupportedDimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hflow
