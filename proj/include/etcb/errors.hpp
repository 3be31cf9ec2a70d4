#pragma once

#include <stdexcept>
#include <string>

namespace etcb {

// Error taxonomy, mirrored by the CLI exit codes:
//   InputError    -> exit 1 (bad arguments, malformed config/log contents)
//   IoError       -> exit 2 (unreadable/unwritable files)
//   NumericError,
//   CapacityError,
//   SamplingError -> exit 3 (numeric failures and exceeded size/attempt caps)

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace etcb
