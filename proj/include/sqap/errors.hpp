#pragma once

#include <stdexcept>
#include <string>

namespace sqap {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem too large for an enumeration-based routine.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqap
