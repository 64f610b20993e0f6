#include "coop/sched.hpp"

namespace coop {

std::string Counters::report() const
{
    std::string out;
    auto line = [&](const char *k, uint64_t v) { out += std::string(k) + "=" + std::to_string(v) + "\n"; };
    line("pushes", pushes);
    line("invokes", invokes);
    line("allocs", allocs);
    line("releases", releases);
    line("double_releases", double_releases);
    line("switches", switches);
    line("spawns", spawns);
    line("max_ready", max_ready);
    return out;
}

} // namespace coop
