// The scheduling contract shared by the reference interpreter and the
// event-loop runtime. Both engines drive the same Scheduler, so wake orders
// cannot drift apart:
//  - the ready queue is FIFO; spawned tasks are appended at its tail while the
//    parent keeps running;
//  - timers fire in (deadline, insertion) order; sleep(0) and yield() append to
//    the ready queue;
//  - io waiters wake in registration order when a World event for their
//    (channel, direction) fires; World events are edge-triggered;
//  - cv_signal wakes the longest waiter, cv_broadcast wakes all in order;
//  - the clock only advances once the ready queue is empty, to the earliest
//    pending timer or (while someone is io-parked) World event; timers due at
//    a tick fire before World events at that tick.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coop/heap.hpp"
#include "coop/trace.hpp"
#include "coop/world.hpp"

namespace coop {

using TaskId = int64_t;

struct Counters {
    uint64_t pushes = 0;
    uint64_t invokes = 0;
    uint64_t allocs = 0;
    uint64_t releases = 0;
    uint64_t double_releases = 0;
    uint64_t switches = 0; // resumptions of parked continuations
    uint64_t spawns = 0;   // tasks created, including the entry task
    uint64_t max_ready = 0;

    /// key=value block, one counter per line.
    std::string report() const;
};

enum class RunStatus { Ok, Deadlock, Fault };

struct RunResult {
    Trace trace;
    Counters counters;
    RunStatus status = RunStatus::Ok;
    std::string message;
};

template <class Cont>
class Scheduler {
  public:
    explicit Scheduler(const World &world) : world_(world) {}

    int64_t clock() const { return clock_; }
    const Counters &counters() const { return counters_; }
    Counters &counters() { return counters_; }

    TaskId spawn(Cont c)
    {
        TaskId id = next_id_++;
        ++counters_.spawns;
        enqueue({id, std::move(c), false});
        return id;
    }

    void yield(TaskId t, Cont c) { enqueue({t, std::move(c), true}); }

    void sleep(TaskId t, Cont c, int64_t ticks)
    {
        if (ticks < 0)
            throw RuntimeFault("negative sleep duration");
        if (ticks == 0) {
            yield(t, std::move(c));
            return;
        }
        timers_.emplace(std::make_pair(clock_ + ticks, timer_seq_++), Entry{t, std::move(c), true});
    }

    void io_wait(TaskId t, Cont c, int64_t chan, int64_t dir)
    {
        if (chan < 0)
            throw RuntimeFault("unknown channel " + std::to_string(chan));
        io_[{chan, dir}].push_back({t, std::move(c), true});
        ++io_parked_;
    }

    void cv_wait(TaskId t, Cont c, int64_t cv)
    {
        check_cv(cv);
        cvs_[cv].push_back({t, std::move(c), true});
        ++cv_parked_;
    }

    void cv_signal(int64_t cv)
    {
        check_cv(cv);
        auto it = cvs_.find(cv);
        if (it == cvs_.end() || it->second.empty())
            return;
        enqueue(std::move(it->second.front()));
        it->second.pop_front();
        if (it->second.empty())
            cvs_.erase(it);
        --cv_parked_;
    }

    void cv_broadcast(int64_t cv)
    {
        check_cv(cv);
        auto it = cvs_.find(cv);
        if (it == cvs_.end())
            return;
        cv_parked_ -= it->second.size();
        for (auto &e : it->second)
            enqueue(std::move(e));
        cvs_.erase(it);
    }

    /// Drives the loop until no task can run. `step(task, cont)` runs one
    /// task until it parks (by calling back into this scheduler) or ends.
    /// Returns false on deadlock, with `message` naming the parked tasks.
    template <class Step>
    bool run(Step &&step, std::string &message)
    {
        while (true) {
            while (!ready_.empty()) {
                Entry e = std::move(ready_.front());
                ready_.pop_front();
                if (e.resumed)
                    ++counters_.switches;
                step(e.task, std::move(e.cont));
            }
            bool world_pending = io_parked_ > 0 && world_next_ < world_.events.size();
            if (timers_.empty() && !world_pending) {
                if (io_parked_ + cv_parked_ == 0)
                    return true;
                message = deadlock_message();
                return false;
            }
            int64_t next = std::numeric_limits<int64_t>::max();
            if (!timers_.empty())
                next = timers_.begin()->first.first;
            if (world_pending)
                next = std::min(next, world_.events[world_next_].tick);
            clock_ = std::max(clock_, next);
            while (!timers_.empty() && timers_.begin()->first.first <= clock_) {
                enqueue(std::move(timers_.begin()->second));
                timers_.erase(timers_.begin());
            }
            while (world_next_ < world_.events.size() && world_.events[world_next_].tick <= clock_) {
                const auto &ev = world_.events[world_next_++];
                auto it = io_.find({ev.chan, static_cast<int64_t>(ev.dir)});
                if (it == io_.end())
                    continue;
                io_parked_ -= it->second.size();
                for (auto &e : it->second)
                    enqueue(std::move(e));
                io_.erase(it);
            }
        }
    }

  private:
    struct Entry {
        TaskId task;
        Cont cont;
        bool resumed;
    };

    const World &world_;
    std::deque<Entry> ready_;
    std::map<std::pair<int64_t, uint64_t>, Entry> timers_;
    std::map<std::pair<int64_t, int64_t>, std::deque<Entry>> io_;
    // FIFO of waiters on one cv. Most cvs have one waiter at a time, and a
    // std::deque would allocate a full block for each of them.
    struct WaitQueue {
        std::vector<Entry> items;
        size_t head = 0;

        bool empty() const { return head == items.size(); }
        size_t size() const { return items.size() - head; }
        void push_back(Entry e) { items.push_back(std::move(e)); }
        Entry &front() { return items[head]; }
        void pop_front() { ++head; }
        auto begin() { return items.begin() + static_cast<std::ptrdiff_t>(head); }
        auto end() { return items.end(); }
        auto begin() const { return items.begin() + static_cast<std::ptrdiff_t>(head); }
        auto end() const { return items.end(); }
    };

    std::unordered_map<int64_t, WaitQueue> cvs_;
    size_t io_parked_ = 0;
    size_t cv_parked_ = 0;
    size_t world_next_ = 0;
    uint64_t timer_seq_ = 0;
    TaskId next_id_ = 0;
    int64_t clock_ = 0;
    Counters counters_;

    static void check_cv(int64_t cv)
    {
        if (cv < 0)
            throw RuntimeFault("unknown condition variable " + std::to_string(cv));
    }

    void enqueue(Entry e)
    {
        ready_.push_back(std::move(e));
        counters_.max_ready = std::max<uint64_t>(counters_.max_ready, ready_.size());
    }

    std::string deadlock_message() const
    {
        std::map<TaskId, std::string> parked;
        for (const auto &[key, q] : io_)
            for (const auto &e : q)
                parked[e.task] = "io " + std::to_string(key.first) + (key.second == 0 ? " IN" : " OUT");
        for (const auto &[cv, q] : cvs_)
            for (const auto &e : q)
                parked[e.task] = "cv " + std::to_string(cv);
        std::string msg = "tasks";
        for (const auto &[t, why] : parked)
            msg += " " + std::to_string(t) + "(" + why + ")";
        return msg;
    }
};

} // namespace coop
