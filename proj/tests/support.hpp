#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "blsm/lsm.hpp"
#include "blsm/record.hpp"

namespace blsm::testing {

inline UpdateEntry I(std::uint32_t k, std::uint32_t v) { return UpdateEntry::insert(k, v); }
inline UpdateEntry D(std::uint32_t k) { return UpdateEntry::erase(k); }

// Level contents predicted from the batch history alone: level i holds the
// 2^i consecutive batches named by bit i of r, newest first, each batch sorted
// by packed key, then stably ordered by original key.
class ShadowLevels {
 public:
  explicit ShadowLevels(std::size_t b) : b_(b) {}

  void push(const std::vector<UpdateEntry>& batch) {
    std::vector<Record> records;
    for (const auto& e : batch) {
      records.push_back(e.op == UpdateEntry::Op::Insert ? Record::regular(e.key, e.value) : Record::tombstone(e.key));
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const Record& a, const Record& b) { return a.key.packed() < b.key.packed(); });
    batches_.push_back(std::move(records));
  }

  std::vector<std::vector<Record>> expected() const {
    const std::uint64_t r = batches_.size();
    std::vector<std::vector<Record>> levels(static_cast<std::size_t>(std::bit_width(r)));
    std::size_t next = 0;  // oldest batch not yet assigned
    for (std::size_t i = levels.size(); i-- > 0;) {
      if (((r >> i) & 1u) == 0) continue;
      const std::size_t count = std::size_t{1} << i;
      std::vector<Record> level;
      for (std::size_t j = next + count; j-- > next;) {
        level.insert(level.end(), batches_[j].begin(), batches_[j].end());
      }
      std::stable_sort(level.begin(), level.end(),
                       [](const Record& a, const Record& b) { return a.original_key() < b.original_key(); });
      levels[i] = std::move(level);
      next += count;
    }
    return levels;
  }

 private:
  std::size_t b_;
  std::vector<std::vector<Record>> batches_;
};

}  // namespace blsm::testing
