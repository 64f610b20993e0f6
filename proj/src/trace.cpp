#include "coop/trace.hpp"

#include <sstream>

namespace coop {

namespace {

std::string escape(const std::string &s)
{
    std::string out;
    for (char c : s) {
        if (c == '\n')
            out += "\\n";
        else if (c == '\\')
            out += "\\\\";
        else
            out += c;
    }
    return out;
}

std::string unescape(std::string_view s)
{
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            out += s[i + 1] == 'n' ? '\n' : s[i + 1];
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::string line_of(const TraceEvent &e)
{
    switch (e.kind) {
    case EventKind::Print: return "PRINT " + escape(e.text);
    case EventKind::End: return "END " + std::to_string(e.n);
    case EventKind::Clock: return "CLOCK " + std::to_string(e.n);
    case EventKind::Error: return "ERROR " + escape(e.text);
    case EventKind::Deadlock: return "DEADLOCK " + escape(e.text);
    }
    return "";
}

} // namespace

std::vector<std::string> Trace::lines() const
{
    std::vector<std::string> out;
    out.reserve(events.size());
    for (const auto &e : events)
        out.push_back(line_of(e));
    return out;
}

std::string Trace::serialize() const
{
    std::string out;
    for (const auto &e : events) {
        out += line_of(e);
        out += '\n';
    }
    return out;
}

size_t Trace::count(EventKind k) const
{
    size_t n = 0;
    for (const auto &e : events)
        n += e.kind == k;
    return n;
}

Trace parse_trace(std::string_view text)
{
    Trace t;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto sp = line.find(' ');
        std::string head = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (head == "PRINT")
            t.print(unescape(rest));
        else if (head == "END")
            t.end(std::stoll(rest));
        else if (head == "CLOCK")
            t.clock(std::stoll(rest));
        else if (head == "ERROR")
            t.error(unescape(rest));
        else if (head == "DEADLOCK")
            t.deadlock(unescape(rest));
    }
    return t;
}

} // namespace coop
