#pragma once

#include <stdexcept>
#include <string>

namespace anarchy {

// Error taxonomy mirrored by the CLI exit codes:
//   input_error -> 2, capacity_error -> 3, analysis_error -> 4.
// internal_error signals a solver defect, never an expected condition.

struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

struct analysis_error : std::runtime_error {
  explicit analysis_error(const std::string& what) : std::runtime_error(what) {}
};

struct internal_error : std::runtime_error {
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anarchy
