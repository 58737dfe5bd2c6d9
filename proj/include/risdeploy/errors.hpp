#pragma once

#include <stdexcept>
#include <string>

namespace risdeploy {

// Invalid scene, RIS, scenario or search parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Geometry that makes a quantity undefined (coincident points, zero splits).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace risdeploy
