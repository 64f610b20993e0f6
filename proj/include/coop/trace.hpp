#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

namespace coop {

enum class EventKind { Print, End, Clock, Error, Deadlock };

struct TraceEvent {
    EventKind kind;
    std::string text; // Print text, Error / Deadlock message
    int64_t n = 0;    // End task id, Clock tick

    bool operator==(const TraceEvent &) const = default;
};

/// The observable behaviour of one run: the equality domain of differential tests.
struct Trace {
    std::deque<TraceEvent> events;

    void print(std::string text) { events.push_back({EventKind::Print, std::move(text), 0}); }
    void end(int64_t task) { events.push_back({EventKind::End, {}, task}); }
    void clock(int64_t tick) { events.push_back({EventKind::Clock, {}, tick}); }
    void error(std::string msg) { events.push_back({EventKind::Error, std::move(msg), 0}); }
    void deadlock(std::string msg) { events.push_back({EventKind::Deadlock, std::move(msg), 0}); }

    /// One line per event: `PRINT <text>`, `END <task>`, `CLOCK <n>`,
    /// `ERROR <msg>`, `DEADLOCK <msg>`. Newlines and backslashes in text are escaped.
    std::string serialize() const;
    std::vector<std::string> lines() const;

    size_t count(EventKind k) const;
    bool operator==(const Trace &) const = default;
};

Trace parse_trace(std::string_view text);

} // namespace coop
