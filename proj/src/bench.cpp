#include "coop/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coop/check.hpp"
#include "coop/parser.hpp"
#include "coop/runtime.hpp"
#include "coop_gen/tictactoe.hpp"

namespace coop {

namespace {

const std::map<std::string, std::string> &micros()
{
    static const std::map<std::string, std::string> m = {
        {"cps-call", R"(cps void f(int a) {
}

cps void main(int n) {
  for (int i = 0; i < n; i = i + 1) {
    f(i);
  }
}
)"},
        {"switch", R"(cps void worker(int n) {
  for (int i = 0; i < n; i = i + 1) {
    yield();
  }
}

cps void main(int n) {
  spawn worker(n);
  spawn worker(n);
}
)"},
        // st[0] is whose turn it is, st[1] counts running players.
        {"condvar", R"(cps void player(int* st, int n, int me) {
  for (int i = 0; i < n; i = i + 1) {
    while (st[0] != me) {
      cv_wait(me);
    }
    st[0] = 1 - me;
    cv_signal(1 - me);
  }
  st[1] = st[1] - 1;
  if (st[1] == 0) {
    cv_signal(2);
  }
}

cps void main(int n) {
  int st[2];
  st[0] = 0;
  st[1] = 2;
  spawn player(&st[0], n, 0);
  spawn player(&st[0], n, 1);
  while (st[1] > 0) {
    cv_wait(2);
  }
}
)"},
        {"spawn", R"(cps void child(int x) {
}

cps void main(int n) {
  for (int i = 0; i < n; i = i + 1) {
    spawn child(i);
  }
}
)"},
    };
    return m;
}

const char *kEcho = R"(cps void handler(int c, int* served) {
  io_wait(c, IN);
  io_wait(c, OUT);
  *served = *served + 1;
}

cps void main(int n) {
  int served = 0;
  for (int i = 0; i < n; i = i + 1) {
    io_wait(0, IN);
    spawn handler(i + 1, &served);
  }
  while (served < n) {
    sleep(1);
  }
  print("served %d\n", served);
}
)";

constexpr int64_t kLeaves = 19683;

std::shared_ptr<const Module> build(const std::string &source, const PipelineConfig &pipeline)
{
    Program p = parse(source);
    check(p);
    return load_module(compile(p, pipeline).evir);
}

RunResult checked_run(const Module &m, const std::vector<int64_t> &args, const World &w)
{
    RunResult r = run_event_loop(m, args, w);
    if (r.status != RunStatus::Ok)
        throw std::runtime_error("benchmark run failed: " + r.message);
    return r;
}

int64_t median(std::vector<int64_t> s)
{
    std::sort(s.begin(), s.end());
    return s.size() % 2 ? s[s.size() / 2] : (s[s.size() / 2 - 1] + s[s.size() / 2]) / 2;
}

int64_t timed_run(const Module &m, const std::vector<int64_t> &args, const World &w)
{
    auto t0 = std::chrono::steady_clock::now();
    checked_run(m, args, w);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

// Thread CPU time of one run; keeps other processes on the host out of the
// scaling comparison.
int64_t cpu_run(const Module &m, const std::vector<int64_t> &args)
{
    timespec t0{}, t1{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &t0);
    checked_run(m, args, {});
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &t1);
    return (t1.tv_sec - t0.tv_sec) * 1000000000LL + (t1.tv_nsec - t0.tv_nsec);
}

BenchResult measure(const std::string &name, const std::string &source, const PipelineConfig &pipeline,
                    const std::vector<int64_t> &args, const World &world, const BenchOptions &opts)
{
    BenchResult res;
    res.name = name;
    res.pipeline = pipeline_name(pipeline);
    auto module = build(source, pipeline);
    RunResult first = checked_run(*module, args, world);
    res.counters = first.counters;
    res.leaves = static_cast<int64_t>(first.trace.count(EventKind::End)) - 1;
    if (!opts.timing)
        return res;
    if (opts.trials < 5)
        throw std::invalid_argument("at least 5 trials are required");
    // `first` doubles as the warm-up run.
    if (opts.parallel) {
        std::vector<std::future<int64_t>> runs;
        for (int i = 0; i < opts.trials; ++i)
            runs.push_back(std::async(std::launch::async, [&] { return timed_run(*module, args, world); }));
        for (auto &f : runs)
            res.samples_ns.push_back(f.get());
    } else {
        for (int i = 0; i < opts.trials; ++i)
            res.samples_ns.push_back(timed_run(*module, args, world));
    }
    res.trials = opts.trials;
    res.median_ns = median(res.samples_ns);
    return res;
}

std::string fmt(const char *f, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string pad(const std::string &s, size_t w)
{
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

} // namespace

const std::vector<std::string> &micro_names()
{
    static const std::vector<std::string> names = {"cps-call", "switch", "condvar", "spawn"};
    return names;
}

std::string micro_source(const std::string &name)
{
    auto it = micros().find(name);
    if (it == micros().end())
        throw std::invalid_argument("unknown micro-benchmark " + name);
    return it->second;
}

double reference_ratio(const std::string &name)
{
    static const std::map<std::string, double> r = {
        {"cps-call", 2.45}, {"switch", 1.67}, {"condvar", 1.13}, {"spawn", 2.18},
        {"tictactoe-manual", 13.2 / 11.0}, {"tictactoe-auto", 31.3 / 26.5}};
    auto it = r.find(name);
    return it == r.end() ? 0.0 : it->second;
}

BenchResult run_micro(const std::string &name, const PipelineConfig &pipeline, int64_t n, const BenchOptions &opts)
{
    std::string src = micro_source(name);
    if (n < 10000)
        throw std::invalid_argument("micro-benchmarks need at least 10000 iterations");
    return measure(name, src, pipeline, {n}, {}, opts);
}

BenchResult run_tictactoe(const std::string &mode, int tasks, const PipelineConfig &pipeline,
                          const BenchOptions &opts)
{
    if (tasks < 1)
        throw std::invalid_argument("tic-tac-toe needs at least one task");
    const char *src;
    if (mode == "manual")
        src = gen::tictactoe_manual;
    else if (mode == "auto")
        src = gen::tictactoe_auto;
    else
        throw std::invalid_argument("unknown tic-tac-toe mode " + mode);
    BenchResult r = measure("tictactoe-" + mode, src, pipeline, {tasks, 0}, {}, opts);
    if (r.leaves != kLeaves * tasks)
        throw std::runtime_error("tic-tac-toe " + mode + " ended " + std::to_string(r.leaves) +
                                 " leaf tasks, expected " + std::to_string(kLeaves * tasks));
    return r;
}

double ScalingResult::variation() const
{
    return std::abs(ratio - 1.0);
}

std::vector<ScalingResult> run_scaling(const std::vector<ScalingCell> &cells, int low, int high, int trials)
{
    if (low < 1 || high % low != 0)
        throw std::invalid_argument("task counts must be positive and high a multiple of low");
    struct Series {
        ScalingResult res;
        std::shared_ptr<const Module> module;
        std::vector<int64_t> lo, hi, ratio_ppm;
    };
    std::vector<Series> series;
    for (const auto &c : cells) {
        if (c.mode != "auto" && c.mode != "manual")
            throw std::invalid_argument("unknown tic-tac-toe mode " + c.mode);
        Series s;
        s.res.mode = c.mode;
        s.res.pipeline = pipeline_name(c.pipeline);
        s.res.low = low;
        s.res.high = high;
        s.module = build(c.mode == "auto" ? gen::tictactoe_auto : gen::tictactoe_manual, c.pipeline);
        series.push_back(std::move(s));
    }
    int small_runs = std::min(high / low, 5);
    // Rounds go round-robin over the cells, so a slow stretch of the host
    // spreads over all of them instead of one cell's every sample.
    for (int i = 0; i <= trials; ++i) {
        for (auto &s : series) {
            // Small runs on both sides of the large one cancel drift within a round.
            int64_t a = 0, b = 0;
            for (int r = 0; r < small_runs; ++r) {
                if (r == small_runs / 2)
                    b = cpu_run(*s.module, {high, 0}) / high;
                a += cpu_run(*s.module, {low, 0});
            }
            a /= int64_t{small_runs} * low;
            if (i == 0)
                continue; // warm-up
            s.lo.push_back(a);
            s.hi.push_back(b);
            s.ratio_ppm.push_back(b * 1000000 / std::max<int64_t>(a, 1));
        }
    }
    std::vector<ScalingResult> out;
    for (auto &s : series) {
        s.res.low_ns_per_task = median(s.lo);
        s.res.high_ns_per_task = median(s.hi);
        s.res.ratio = double(median(s.ratio_ppm)) / 1e6;
        out.push_back(s.res);
    }
    return out;
}

ScalingResult run_scaling(const std::string &mode, const PipelineConfig &pipeline, int low, int high, int trials)
{
    return run_scaling({{mode, pipeline}}, low, high, trials).front();
}

BenchResult run_echo(int64_t n, const PipelineConfig &pipeline, const BenchOptions &opts)
{
    World w;
    for (int64_t i = 0; i < n; ++i) {
        w.events.push_back({3 * i + 1, 0, Dir::In});
        w.events.push_back({3 * i + 2, i + 1, Dir::In});
        w.events.push_back({3 * i + 3, i + 1, Dir::Out});
    }
    return measure("echo", kEcho, pipeline, {n}, w, opts);
}

std::string report(const std::vector<BenchResult> &results, bool timing)
{
    std::vector<std::string> names;
    std::map<std::pair<std::string, std::string>, const BenchResult *> cell;
    for (const auto &r : results) {
        if (std::find(names.begin(), names.end(), r.name) == names.end())
            names.push_back(r.name);
        cell[{r.name, r.pipeline}] = &r;
    }
    size_t w = 18;
    for (const auto &n : names)
        w = std::max(w, n.size() + 2);
    std::ostringstream os;
    if (timing) {
        os << pad("benchmark", w) << pad("callbacks env/lift", 21) << pad("statemachine env/lift", 24)
           << "reference\n";
        for (const auto &n : names) {
            os << pad(n, w);
            for (const char *ctl : {"callbacks", "statemachine"}) {
                auto env = cell.find({n, std::string(ctl) + "+env"});
                auto lift = cell.find({n, std::string(ctl) + "+lift"});
                std::string v = "-";
                if (env != cell.end() && lift != cell.end() && lift->second->median_ns > 0)
                    v = fmt("%.2f", double(env->second->median_ns) / double(lift->second->median_ns));
                os << pad(v, std::string(ctl) == "callbacks" ? 21 : 24);
            }
            double p = reference_ratio(n);
            os << (p > 0 ? fmt("%.2f", p) : "-") << "\n";
        }
    } else {
        os << pad("benchmark", w) << pad("pipeline", 20) << pad("pushes", 12) << pad("invokes", 12)
           << pad("allocs", 12) << "releases\n";
        for (const auto &r : results)
            os << pad(r.name, w) << pad(r.pipeline, 20) << pad(std::to_string(r.counters.pushes), 12)
               << pad(std::to_string(r.counters.invokes), 12) << pad(std::to_string(r.counters.allocs), 12)
               << r.counters.releases << "\n";
    }
    os << "\n";
    for (const auto &r : results) {
        std::string key = "bench." + r.name + "." + r.pipeline + ".";
        if (timing)
            os << key << "median_ns=" << r.median_ns << "\n";
        os << key << "pushes=" << r.counters.pushes << "\n";
        os << key << "invokes=" << r.counters.invokes << "\n";
        os << key << "allocs=" << r.counters.allocs << "\n";
    }
    return os.str();
}

std::vector<BenchResult> run_suite(const std::string &suite, int64_t n, const BenchOptions &opts)
{
    bool all = suite == "all";
    bool known = all || suite == "micro" || suite == "tictactoe" || suite == "echo";
    for (const auto &m : micro_names())
        known = known || suite == m;
    if (!known)
        throw std::invalid_argument("unknown suite " + suite);
    std::vector<BenchResult> out;
    for (const auto &m : micro_names())
        if (all || suite == "micro" || suite == m)
            for (const auto &c : all_pipelines())
                out.push_back(run_micro(m, c, n, opts));
    if (all || suite == "tictactoe")
        for (const char *mode : {"manual", "auto"})
            for (const auto &c : all_pipelines())
                out.push_back(run_tictactoe(mode, 1, c, opts));
    if (all || suite == "echo")
        for (const auto &c : all_pipelines())
            out.push_back(run_echo(1000, c, opts));
    return out;
}

} // namespace coop
