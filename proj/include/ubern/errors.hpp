#pragma once

#include <stdexcept>
#include <string>

namespace ubern {

/// An input violates a documented precondition (bad prime, odd n where even
/// is required, theorem parameters out of range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation was refused because it exceeds a configured size ceiling.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient cache file failed its integrity check.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ubern
