#pragma once

// Line-oriented text form of a structure, used for golden tests and the
// `dump` CLI subcommand:
//
//   lsm b=<b> r=<r>
//   level <i>: <key>:<R|T>:<value> ...
//
// One `level` line per full level in ascending order. The sorted-array
// baseline uses `sa` in the header and a single `level 0` line. Parsing
// rebuilds the structure and validates its invariants.

#include <string>
#include <string_view>

#include "blsm/lsm.hpp"
#include "blsm/sorted_array.hpp"

namespace blsm {

std::string dump(const Lsm& lsm);
std::string dump(const SortedArray& sa);

/// Throws Error(ParseError) on malformed text, Error(InvariantViolation) when
/// the contents break the structure's invariants.
Lsm parse_lsm(std::string_view text);
SortedArray parse_sorted_array(std::string_view text);

}  // namespace blsm
