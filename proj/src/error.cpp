#include "blsm/error.hpp"

namespace blsm {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::BatchSizeMismatch: return "BatchSizeMismatch";
    case Errc::KeyOutOfDomain: return "KeyOutOfDomain";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::SizeNotMultipleOfBatch: return "SizeNotMultipleOfBatch";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::SpecInvalid: return "SpecInvalid";
  }
  return "Unknown";
}

}  // namespace blsm
