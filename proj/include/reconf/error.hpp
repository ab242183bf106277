#pragma once

#include <stdexcept>
#include <string>

namespace reconf {

/// Raised for every contract violation reported by the library. The message
/// starts with the condition (e.g. "incomplete assignment") so callers and
/// tests can match on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reconf
