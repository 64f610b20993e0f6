#include "coop/world.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coop {

World World::parse(std::string_view text)
{
    World w;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string kw_tick, kw_ready, dir;
        WorldEvent ev;
        if (!(ls >> kw_tick))
            continue;
        if (kw_tick != "tick" || !(ls >> ev.tick >> kw_ready >> ev.chan >> dir) || kw_ready != "ready" ||
            (dir != "IN" && dir != "OUT") || ev.tick < 0) {
            throw std::invalid_argument("world line " + std::to_string(lineno) +
                                        ": expected 'tick <n> ready <chan> <IN|OUT>'");
        }
        ev.dir = dir == "IN" ? Dir::In : Dir::Out;
        w.events.push_back(ev);
    }
    std::stable_sort(w.events.begin(), w.events.end(),
                     [](const WorldEvent &a, const WorldEvent &b) { return a.tick < b.tick; });
    return w;
}

World World::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open world file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace coop
