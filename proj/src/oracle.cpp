#include "blsm/oracle.hpp"

#include <string>

#include "blsm/error.hpp"

namespace blsm {

void Oracle::apply_batch(std::span<const UpdateEntry> batch) {
  struct Outcome {
    bool deleted = false;
    bool inserted = false;
    std::uint32_t first_value = 0;
  };
  std::map<std::uint32_t, Outcome> outcome;
  for (const UpdateEntry& e : batch) {
    Outcome& o = outcome[e.key];
    if (e.op == UpdateEntry::Op::Delete) {
      o.deleted = true;
    } else if (!o.inserted) {
      o.inserted = true;
      o.first_value = e.value;
    }
  }
  for (const auto& [key, o] : outcome) {
    entries_[key] = o.deleted ? Entry{0, false} : Entry{o.first_value, true};
  }
  batch_log_.emplace_back(batch.begin(), batch.end());
}

LookupResult Oracle::lookup(std::uint32_t key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end() || !it->second.alive) return std::nullopt;
  return it->second.value;
}

std::size_t Oracle::count(std::uint32_t k1, std::uint32_t k2) const { return range(k1, k2).size(); }

std::vector<KeyValue> Oracle::range(std::uint32_t k1, std::uint32_t k2) const {
  if (k1 > k2) {
    throw Error(Errc::InvalidRange, "k1 " + std::to_string(k1) + " > k2 " + std::to_string(k2));
  }
  std::vector<KeyValue> out;
  for (auto it = entries_.lower_bound(k1); it != entries_.end() && it->first <= k2; ++it) {
    if (it->second.alive) out.push_back({it->first, it->second.value});
  }
  return out;
}

Oracle Oracle::replay() const {
  Oracle fresh;
  for (const auto& batch : batch_log_) fresh.apply_batch(batch);
  return fresh;
}

std::vector<KeyValue> Oracle::live_pairs() const {
  std::vector<KeyValue> out;
  for (const auto& [key, entry] : entries_) {
    if (entry.alive) out.push_back({key, entry.value});
  }
  return out;
}

}  // namespace blsm
