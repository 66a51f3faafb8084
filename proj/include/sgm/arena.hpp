#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <memory>
#include <vector>

namespace sgm {

/// Stack-ordered bump allocator. Frames take a mark on entry and reset to it
/// on backtrack, so memory is recycled without touching the system allocator.
/// Blocks grow in powers of two and are kept for reuse.
class Arena {
 public:
  struct Mark {
    std::size_t block = 0;
    std::size_t offset = 0;
    std::size_t in_use = 0;
  };

  explicit Arena(std::size_t first_block = 1 << 16) : first_block_(std::bit_ceil(first_block)) {}
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;
  Arena(Arena&&) = default;
  Arena& operator=(Arena&&) = default;

  /// Uninitialized storage for n objects of trivially destructible type T.
  template <class T>
  T* allocate(std::size_t n) {
    static_assert(alignof(T) <= alignof(std::max_align_t));
    return static_cast<T*>(allocate_bytes(n * sizeof(T), alignof(T)));
  }

  /// Gives back the tail of the most recent allocation.
  template <class T>
  void shrink_last(T* p, std::size_t old_n, std::size_t new_n) {
    auto* bytes = reinterpret_cast<std::byte*>(p);
    if (blocks_.empty() || new_n > old_n) return;
    Block& b = blocks_[cur_];
    if (bytes + old_n * sizeof(T) != b.data.get() + offset_) return;
    const std::size_t freed = (old_n - new_n) * sizeof(T);
    offset_ -= freed;
    in_use_ -= freed;
  }

  Mark mark() const { return {cur_, offset_, in_use_}; }
  void reset(const Mark& m) {
    cur_ = m.block;
    offset_ = m.offset;
    in_use_ = m.in_use;
  }

  std::size_t bytes_in_use() const { return in_use_; }
  std::size_t peak_bytes() const { return peak_; }
  std::size_t reserved_bytes() const {
    std::size_t s = 0;
    for (const auto& b : blocks_) s += b.size;
    return s;
  }

 private:
  struct Block {
    std::unique_ptr<std::byte[]> data;
    std::size_t size = 0;
  };

  void* allocate_bytes(std::size_t bytes, std::size_t align) {
    if (!blocks_.empty()) {
      std::size_t start = (offset_ + align - 1) & ~(align - 1);
      if (start + bytes <= blocks_[cur_].size) return commit(start, bytes);
      // Later blocks are free (stack discipline); take the next one that fits.
      if (cur_ + 1 < blocks_.size() && blocks_[cur_ + 1].size >= bytes) {
        ++cur_;
        offset_ = 0;
        return commit(0, bytes);
      }
    }
    const std::size_t last = blocks_.empty() ? first_block_ / 2 : blocks_.back().size;
    Block b{nullptr, std::max(last * 2, std::bit_ceil(std::max<std::size_t>(bytes, 1)))};
    b.data = std::make_unique<std::byte[]>(b.size);
    const std::size_t at = blocks_.empty() ? 0 : cur_ + 1;
    blocks_.insert(blocks_.begin() + static_cast<std::ptrdiff_t>(at), std::move(b));
    cur_ = at;
    offset_ = 0;
    return commit(0, bytes);
  }

  void* commit(std::size_t start, std::size_t bytes) {
    in_use_ += (start - std::min(start, offset_)) + bytes;
    offset_ = start + bytes;
    peak_ = std::max(peak_, in_use_);
    return blocks_[cur_].data.get() + start;
  }

  std::size_t first_block_;
  std::vector<Block> blocks_;
  std::size_t cur_ = 0;
  std::size_t offset_ = 0;
  std::size_t in_use_ = 0;
  std::size_t peak_ = 0;
};

}  // namespace sgm
