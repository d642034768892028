#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

// Bad arguments from the caller (dimension mismatch, unknown name, ...).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A constructed object fails one of its declared invariants
// (singular form, derivative/finite-difference mismatch, ...).
class invariant_violation : public std::runtime_error {
 public:
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called on an object in the wrong state
// (e.g. escape bracket of a trajectory that did not blow up).
class state_error : public std::logic_error {
 public:
  explicit state_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace geoflow
