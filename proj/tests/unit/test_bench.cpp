#include "doctest.h"

#include <stdexcept>

#include "coop/bench.hpp"
#include "helpers.hpp"

using namespace coop;

namespace {

BenchOptions counters_only()
{
    BenchOptions o;
    o.timing = false;
    return o;
}

} // namespace

TEST_CASE("bench: micro sources check")
{
    for (const auto &name : micro_names()) {
        INFO(name);
        CHECK_NOTHROW(testutil::checked(micro_source(name)));
        CHECK(reference_ratio(name) > 1.0);
    }
    CHECK_THROWS_AS(micro_source("nope"), std::invalid_argument);
}

TEST_CASE("bench: counters are deterministic")
{
    PipelineConfig c = parse_pipeline("statemachine+env");
    BenchResult a = run_micro("condvar", c, 10000, counters_only());
    BenchResult b = run_micro("condvar", c, 10000, counters_only());
    CHECK(a.counters.pushes == b.counters.pushes);
    CHECK(a.counters.invokes == b.counters.invokes);
    CHECK(a.counters.allocs == b.counters.allocs);
    CHECK(a.counters.switches == b.counters.switches);
}

TEST_CASE("bench: small iteration counts are rejected")
{
    CHECK_THROWS_AS(run_micro("switch", {}, 9999, counters_only()), std::invalid_argument);
}

TEST_CASE("bench: the switch micro resumes each worker once per iteration")
{
    BenchResult r = run_micro("switch", {}, 10000, counters_only());
    CHECK(r.counters.switches == 20000);
}

TEST_CASE("bench: cps-call pushes fewer frames as a state machine")
{
    BenchResult cb = run_micro("cps-call", parse_pipeline("callbacks+lift"), 10000, counters_only());
    BenchResult sm = run_micro("cps-call", parse_pipeline("statemachine+lift"), 10000, counters_only());
    CHECK(sm.counters.pushes < cb.counters.pushes);
}

TEST_CASE("bench: one result gives a one-row report")
{
    BenchOptions o;
    o.trials = 5;
    BenchResult r = run_micro("spawn", parse_pipeline("callbacks+lift"), 10000, o);
    CHECK(r.samples_ns.size() == 5);
    CHECK(r.median_ns > 0);
    std::string out = report({r}, true);
    CHECK(out.find("spawn") != std::string::npos);
    CHECK(out.find("bench.spawn.callbacks+lift.median_ns=") != std::string::npos);
}

TEST_CASE("bench: tic-tac-toe explores every board")
{
    for (const char *mode : {"manual", "auto"}) {
        BenchResult r = run_tictactoe(mode, 1, parse_pipeline("callbacks+env"), counters_only());
        CHECK(r.leaves == 19683);
        CHECK(r.counters.allocs == r.counters.releases);
    }
}

TEST_CASE("bench: echo serves every connection")
{
    BenchResult r = run_echo(50, parse_pipeline("statemachine+env"), counters_only());
    CHECK(r.counters.allocs == r.counters.releases);
    CHECK(r.counters.spawns >= 51);
}
