#pragma once

#include <stdexcept>
#include <string>

namespace blsm {

enum class Errc {
  InvalidConfig,
  BatchSizeMismatch,
  KeyOutOfDomain,
  EmptyBatch,
  SizeNotMultipleOfBatch,
  InvalidRange,
  InvalidArgument,
  ParseError,
  InvariantViolation,
  SpecInvalid,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace blsm
