// Micro-benchmarks of the runtime primitives, the tic-tac-toe generator and a
// simulated echo service, timed per pipeline.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coop/pipeline.hpp"
#include "coop/sched.hpp"

namespace coop {

struct BenchOptions {
    int trials = 5;        // timed trials, after one discarded warm-up
    bool timing = true;    // false: one run, counters only
    bool parallel = false; // run trials on independent loops in parallel
};

struct BenchResult {
    std::string name;
    std::string pipeline;
    int trials = 0;
    int64_t median_ns = 0;
    std::vector<int64_t> samples_ns;
    Counters counters;
    int64_t leaves = 0; // tic-tac-toe only
};

/// `cps-call`, `switch`, `condvar`, `spawn`.
const std::vector<std::string> &micro_names();
/// The Coop source of a micro; its entry takes the iteration count.
std::string micro_source(const std::string &name);
/// Published env/lift time ratios of the reference implementation, for comparison.
double reference_ratio(const std::string &name);

/// Throws std::invalid_argument for an unknown micro or n < 10000.
BenchResult run_micro(const std::string &name, const PipelineConfig &pipeline, int64_t n,
                      const BenchOptions &opts = {});

/// mode is `manual` or `auto`. Throws std::runtime_error when the run does
/// not end exactly 19683 leaf tasks per generator.
BenchResult run_tictactoe(const std::string &mode, int tasks, const PipelineConfig &pipeline,
                          const BenchOptions &opts = {});

struct ScalingResult {
    std::string mode;
    std::string pipeline;
    int low = 1, high = 20;
    int64_t low_ns_per_task = 0;  // median
    int64_t high_ns_per_task = 0; // median
    double ratio = 1.0;           // median over rounds of high / low time per task
    /// |ratio - 1|
    double variation() const;
};

/// CPU time per generator of tic-tac-toe with `low` and `high` simultaneous
/// generators, measured as thread CPU time. Each round runs up to five small
/// runs around one large run so host drift hits both sides alike; the
/// first round is a warm-up. `high` must be a multiple of `low`.
ScalingResult run_scaling(const std::string &mode, const PipelineConfig &pipeline, int low = 1, int high = 20,
                          int trials = 5);

struct ScalingCell {
    std::string mode;
    PipelineConfig pipeline;
};

/// run_scaling over several cells with their rounds interleaved.
std::vector<ScalingResult> run_scaling(const std::vector<ScalingCell> &cells, int low = 1, int high = 20,
                                       int trials = 5);

/// Echo server over `n` scripted connections.
BenchResult run_echo(int64_t n, const PipelineConfig &pipeline, const BenchOptions &opts = {});

/// Aligned ratio table (env/lift per control style) followed by
/// `bench.<name>.<pipeline>.median_ns=<int>` lines. Without timing the table
/// lists pushes, invokes and allocations instead.
std::string report(const std::vector<BenchResult> &results, bool timing = true);

/// Every benchmark under every pipeline: the four micros at `n` iterations,
/// both tic-tac-toe modes with one generator and the echo service.
std::vector<BenchResult> run_suite(const std::string &suite, int64_t n, const BenchOptions &opts = {});

} // namespace coop
