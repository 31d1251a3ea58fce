#pragma once

// Brute-force reference dictionary. Replays batches directly against a key
// map; knows nothing about levels, sorting or tombstone encoding.
//
// Batch rules: a key deleted anywhere in a batch is dead after it; otherwise
// the first Insert of the key in the batch sets its value.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "blsm/lsm.hpp"

namespace blsm {

class Oracle {
 public:
  struct Entry {
    std::uint32_t value = 0;
    bool alive = false;

    bool operator==(const Entry&) const = default;
  };

  void apply_batch(std::span<const UpdateEntry> batch);

  LookupResult lookup(std::uint32_t key) const;
  std::size_t count(std::uint32_t k1, std::uint32_t k2) const;
  std::vector<KeyValue> range(std::uint32_t k1, std::uint32_t k2) const;

  /// Fresh oracle built by replaying the batch log from empty.
  Oracle replay() const;

  const std::map<std::uint32_t, Entry>& entries() const { return entries_; }
  const std::vector<std::vector<UpdateEntry>>& batch_log() const { return batch_log_; }

  /// Every live (key, value), sorted by key.
  std::vector<KeyValue> live_pairs() const;

 private:
  std::map<std::uint32_t, Entry> entries_;
  std::vector<std::vector<UpdateEntry>> batch_log_;
};

}  // namespace blsm
