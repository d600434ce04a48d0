// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noc/types.hpp"

namespace noc {

/// Dynamic reorder-buffer allocator: first-fit over a free list of
/// contiguous slot ranges. A slot holds one response beat; bursts of any
/// length get one contiguous range, allocated at injection and freed
/// exactly once when the transaction has fully left the buffer.
class RobAllocator {
 public:
  explicit RobAllocator(std::uint32_t slot_count) : capacity_(slot_count) {
    if (slot_count > 0) free_list_.push_back({0, slot_count});
  }

  std::uint32_t capacity_slots() const { return capacity_; }
  std::uint32_t free_slots() const { return capacity_ - allocated_; }
  std::uint32_t allocated_slots() const { return allocated_; }

  /// Lowest-base contiguous range of `slots`, or nullopt when none fits.
  std::optional<std::uint32_t> allocate(std::uint32_t slots) {
    if (slots == 0) throw ConfigError("zero-slot ROB allocation");
    for (std::size_t i = 0; i < free_list_.size(); ++i) {
      Range& r = free_list_[i];
      if (r.length < slots) continue;
      const std::uint32_t base = r.base;
      r.base += slots;
      r.length -= slots;
      if (r.length == 0) free_list_.erase(free_list_.begin() + i);
      allocated_ += slots;
      return base;
    }
    if (slots <= free_slots()) ++fragmentation_misses_;
    return std::nullopt;
  }

  /// Return a previously allocated range. Coalesces with neighbours.
  void release(std::uint32_t base, std::uint32_t slots) {
    if (slots > allocated_)
      throw KernelError("ROB release of more slots than allocated");
    std::size_t i = 0;
    while (i < free_list_.size() && free_list_[i].base < base) ++i;
    if (i > 0 && free_list_[i - 1].base + free_list_[i - 1].length > base)
      throw KernelError("ROB double free at slot " + std::to_string(base));
    if (i < free_list_.size() && base + slots > free_list_[i].base)
      throw KernelError("ROB double free at slot " + std::to_string(base));
    free_list_.insert(free_list_.begin() + i, {base, slots});
    allocated_ -= slots;
    // merge i with neighbours
    if (i + 1 < free_list_.size() &&
        free_list_[i].base + free_list_[i].length == free_list_[i + 1].base) {
      free_list_[i].length += free_list_[i + 1].length;
      free_list_.erase(free_list_.begin() + i + 1);
    }
    if (i > 0 && free_list_[i - 1].base + free_list_[i - 1].length ==
                     free_list_[i].base) {
      free_list_[i - 1].length += free_list_[i].length;
      free_list_.erase(free_list_.begin() + i);
    }
  }

  /// Allocation attempts that failed despite enough total free space.
  std::uint64_t fragmentation_misses() const { return fragmentation_misses_; }

 private:
  struct Range {
    std::uint32_t base;
    std::uint32_t length;
  };

  std::uint32_t capacity_;
  std::uint32_t allocated_ = 0;
  std::vector<Range> free_list_;  // sorted by base, non-adjacent
  std::uint64_t fragmentation_misses_ = 0;
};

}  // namespace noc
