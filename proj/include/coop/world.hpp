#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coop {

enum class Dir : int { In = 0, Out = 1 };

struct WorldEvent {
    int64_t tick = 0;
    int64_t chan = 0;
    Dir dir = Dir::In;
};

/// Scripted channel readiness. Events are kept sorted by tick (stable).
struct World {
    std::vector<WorldEvent> events;

    /// Lines of the form `tick <n> ready <chan> <IN|OUT>`; `#` starts a comment.
    /// Throws std::invalid_argument naming the offending line.
    static World parse(std::string_view text);
    static World load(const std::string &path);
};

} // namespace coop
