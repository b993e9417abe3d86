#pragma once

#include <stdexcept>
#include <string>

namespace hc3 {

/// Bad input: a parameter outside its documented range, a malformed grid,
/// mismatched series truncations.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or to bracket its target.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace hc3
