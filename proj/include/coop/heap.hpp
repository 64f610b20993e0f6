// Values and the tracking allocator shared by the interpreter and the
// event-loop runtime.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace coop {

/// A scalar or a pointer. Pointers name a heap cell plus an offset in `num`.
struct Value {
    int64_t num = 0;
    int32_t cell = -1;
    uint32_t gen = 0; // cell ids are reused; stale pointers keep the old generation

    static Value of(int64_t n) { return {n, -1, 0}; }
    static Value pointer(int32_t cell, int64_t offset, uint32_t gen) { return {offset, cell, gen}; }
    /// The same cell at another offset.
    Value at_offset(int64_t offset) const { return {offset, cell, gen}; }
    bool operator==(const Value &) const = default;
};

/// A fault in the executing program (bounds, division by zero, double free).
struct RuntimeFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AllocStats {
    uint64_t allocs = 0;
    uint64_t releases = 0;
    uint64_t double_releases = 0;
};

class Heap {
  public:
    /// Allocates `n` zeroed slots. Untracked cells (interpreter frames,
    /// runtime scratch) are excluded from the statistics.
    Value allocate(int64_t n, bool tracked = true);

    /// Releases a tracked cell; null is a no-op.
    void release(Value ptr);

    /// The slot `index` places past `ptr`, bounds-checked against the cell.
    Value &at(Value ptr, int64_t index = 0);

    /// Returns an untracked cell to the pool.
    void recycle(Value ptr);

    const AllocStats &stats() const { return stats_; }
    uint64_t live() const { return stats_.allocs - stats_.releases; }

  private:
    enum class State : uint8_t { Live, Released, Scratch, Free };
    // 16 bytes per cell id; the slots live in their own block, so growing
    // the table never moves them.
    struct Cell {
        std::unique_ptr<Value[]> data;
        uint32_t size = 0;
        uint32_t gen = 0;
    };
    std::vector<Cell> cells_;
    std::vector<State> states_;
    std::vector<int32_t> free_;
    AllocStats stats_;
};

/// Integer arithmetic with the program-visible semantics (wrapping, faults on
/// division by zero) used by both execution engines.
int64_t arith(const std::string &op, int64_t a, int64_t b);

/// Expands `%d` / `%%` in a print format.
std::string format_print(const std::string &fmt, const std::vector<int64_t> &args);

} // namespace coop
