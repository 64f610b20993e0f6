#include "doctest.h"

#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

RunResult evir(const std::string &src, std::vector<int64_t> args = {})
{
    return run_event_loop(parse(src, Syntax::Internal), args);
}

const char *const kPipelines[] = {"callbacks+lift", "callbacks+env", "statemachine+lift", "statemachine+env"};

// Runs `src` on the interpreter and every pipeline and checks they agree.
std::string agreed(const std::string &src, std::vector<int64_t> args = {}, const World &w = {})
{
    Program p = checked(src);
    RunResult ref = interp(p, args, w);
    for (const char *pl : kPipelines) {
        INFO(pl);
        CHECK(run(p, pl, args, w).trace == ref.trace);
    }
    return ref.trace.serialize();
}

} // namespace

TEST_CASE("runtime: the last pushed frame runs first")
{
    RunResult r = evir("entry main;\n"
                       "void a(cont* k) { print(\"a\\n\"); invoke(k); return; }\n"
                       "void b(cont* k) { print(\"b\\n\"); invoke(k); return; }\n"
                       "void main(cont* k) { a(push(b, k)); return; }\n");
    CHECK(r.trace.serialize() == "PRINT a\\n\nPRINT b\\n\nEND 0\nCLOCK 0\n");
    CHECK(r.counters.pushes == 2);
    CHECK(r.counters.invokes == 3);
}

TEST_CASE("runtime: invoking the empty continuation ends the task")
{
    RunResult r = evir("entry main;\nvoid main(cont* k) { print(\"x\\n\"); invoke(k); return; }\n");
    CHECK(r.status == RunStatus::Ok);
    CHECK(r.trace.serialize() == "PRINT x\\n\nEND 0\nCLOCK 0\n");
    CHECK(r.counters.pushes == 0);
}

TEST_CASE("runtime: a valued invoke fills the resume frame")
{
    RunResult r = evir("entry main;\n"
                       "void two(int v, cont* k) { invoke(k, v * 2); return; }\n"
                       "void show(int y, cont* k) { print(\"%d\\n\", y); invoke(k); return; }\n"
                       "void main(cont* k) { two(21, push(show, ?, k)); return; }\n");
    CHECK(r.trace.lines().front() == "PRINT 42\\n");
}

TEST_CASE("sched: countdown ends at clock 3")
{
    std::string t = agreed(corpus("countdown"), {3});
    CHECK(t == "PRINT 3 seconds remaining\\n\nPRINT 2 seconds remaining\\n\nPRINT 1 seconds remaining\\n\n"
               "PRINT time is over!\\n\nEND 0\nCLOCK 3\n");
}

TEST_CASE("sched: sleep(0) behaves like yield")
{
    std::string t = agreed("cps void other() { print(\"other\\n\"); }\n"
                           "cps void main() { spawn other(); sleep(0); print(\"main\\n\"); }\n");
    CHECK(t == "PRINT other\\n\nEND 1\nPRINT main\\n\nEND 0\nCLOCK 0\n");
}

TEST_CASE("sched: timers with equal deadlines wake in insertion order")
{
    std::string t = agreed("cps void nap(int id) { sleep(2); print(\"%d\\n\", id); }\n"
                           "cps void main() { spawn nap(1); spawn nap(2); spawn nap(3); }\n");
    CHECK(t == "END 0\nPRINT 1\\n\nEND 1\nPRINT 2\\n\nEND 2\nPRINT 3\\n\nEND 3\nCLOCK 2\n");
}

TEST_CASE("sched: io readiness arrives at its tick")
{
    World w = World::parse("tick 5 ready 2 OUT\n");
    std::string t = agreed("cps void main() { io_wait(2, OUT); print(\"ready\\n\"); }\n", {}, w);
    CHECK(t == "PRINT ready\\n\nEND 0\nCLOCK 5\n");
}

TEST_CASE("sched: a signal without waiters is lost")
{
    Program p = checked("cps void w() { cv_wait(1); print(\"woke\\n\"); }\n"
                        "cps void main() { cv_signal(1); spawn w(); yield(); cv_signal(1); }\n");
    CHECK(agreed(print_program(p)) == "END 0\nPRINT woke\\n\nEND 1\nCLOCK 0\n");
}

TEST_CASE("sched: spawned tasks run after the parent in spawn order")
{
    std::string t = agreed("cps void child(int id) { print(\"child %d\\n\", id); }\n"
                           "cps void main() { spawn child(1); spawn child(2); print(\"parent\\n\"); }\n");
    CHECK(t == "PRINT parent\\n\nEND 0\nPRINT child 1\\n\nEND 1\nPRINT child 2\\n\nEND 2\nCLOCK 0\n");
}

TEST_CASE("sched: deadlock names every blocked task")
{
    Program p = checked("cps void w(int cv) { cv_wait(cv); }\n"
                        "cps void main() { spawn w(4); cv_wait(5); }\n");
    RunResult ref = interp(p);
    CHECK(ref.status == RunStatus::Deadlock);
    CHECK(ref.message.find("0") != std::string::npos);
    CHECK(ref.message.find("1") != std::string::npos);
    for (const char *pl : kPipelines) {
        RunResult r = run(p, pl);
        CHECK(r.status == RunStatus::Deadlock);
        CHECK(r.message == ref.message);
    }
}

TEST_CASE("runtime: allocation counters per data mode")
{
    Program cd = checked("cps void countdown(int x) {\n"
                         "  while (x > 0) { x = x - 1; sleep(1); }\n"
                         "}\n"
                         "cps void main() { countdown(3); }\n");
    RunResult env = run(cd, "callbacks+env");
    CHECK(env.counters.allocs == 1);
    CHECK(env.counters.releases == 1);
    CHECK(run(cd, "callbacks+lift").counters.allocs == 0);

    Program t = checked(corpus("tictactoe_manual"));
    for (const char *pl : {"callbacks+env", "statemachine+env"}) {
        RunResult r = run(t, pl, {1, 1});
        CHECK(r.counters.allocs == r.counters.releases);
        CHECK(r.counters.releases >= 19683);
        CHECK(r.counters.double_releases == 0);
    }
}
