#pragma once

#include <compare>
#include <cstdint>

namespace blsm {

/// Largest original key a caller may store.
inline constexpr std::uint32_t kMaxUserKey = (1u << 31) - 2;
/// Reserved for cleanup padding; never accepted from callers.
inline constexpr std::uint32_t kPlaceboKey = (1u << 31) - 1;

/// 32-bit key variable: the 31-bit original key shifted left once, with the
/// status bit in the LSB (1 = regular, 0 = tombstone).
///
/// Sorting on the packed value places a tombstone ahead of a regular record
/// with the same original key.
class KeyVariable {
 public:
  constexpr KeyVariable() = default;
  constexpr explicit KeyVariable(std::uint32_t packed) : packed_(packed) {}

  static constexpr KeyVariable regular(std::uint32_t key) { return KeyVariable((key << 1) | 1u); }
  static constexpr KeyVariable tombstone(std::uint32_t key) { return KeyVariable(key << 1); }

  constexpr std::uint32_t packed() const { return packed_; }
  constexpr std::uint32_t original_key() const { return packed_ >> 1; }
  constexpr bool is_regular() const { return (packed_ & 1u) != 0; }
  constexpr bool is_tombstone() const { return (packed_ & 1u) == 0; }

  constexpr auto operator<=>(const KeyVariable&) const = default;

 private:
  std::uint32_t packed_ = 0;
};

/// The unit stored in every level. Tombstones carry value 0.
struct Record {
  KeyVariable key;
  std::uint32_t value = 0;

  static constexpr Record regular(std::uint32_t k, std::uint32_t v) { return {KeyVariable::regular(k), v}; }
  static constexpr Record tombstone(std::uint32_t k) { return {KeyVariable::tombstone(k), 0}; }
  static constexpr Record placebo() { return tombstone(kPlaceboKey); }

  constexpr std::uint32_t original_key() const { return key.original_key(); }
  constexpr bool is_regular() const { return key.is_regular(); }
  constexpr bool is_tombstone() const { return key.is_tombstone(); }
  constexpr bool is_placebo() const { return key.is_tombstone() && key.original_key() == kPlaceboKey; }

  constexpr bool operator==(const Record&) const = default;
};

static_assert(sizeof(Record) == 8);

/// A (key, value) pair as returned by range queries.
struct KeyValue {
  std::uint32_t key = 0;
  std::uint32_t value = 0;

  constexpr bool operator==(const KeyValue&) const = default;
};

/// Inclusive key interval [k1, k2] for count and range queries.
struct RangeQuery {
  std::uint32_t k1 = 0;
  std::uint32_t k2 = 0;
};

}  // namespace blsm
