#include "doctest.h"

#include <fstream>
#include <sstream>

#include "coop/check.hpp"
#include "coop/interp.hpp"
#include "coop/parser.hpp"

using namespace coop;

namespace {

RunResult run_src(const std::string &src, std::vector<int64_t> args = {}, const World &w = {})
{
    Program p = parse(src);
    check(p);
    return interpret(p, args, w);
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("interp: countdown")
{
    RunResult r = run_src(read_file(COOP_CORPUS_DIR "/countdown.coop"), {3});
    CHECK(r.status == RunStatus::Ok);
    CHECK(r.trace.serialize() == "PRINT 3 seconds remaining\\n\n"
                                 "PRINT 2 seconds remaining\\n\n"
                                 "PRINT 1 seconds remaining\\n\n"
                                 "PRINT time is over!\\n\n"
                                 "END 0\n"
                                 "CLOCK 3\n");
}

TEST_CASE("interp: empty main")
{
    RunResult r = run_src("cps void main() {}");
    CHECK(r.trace.serialize() == "END 0\nCLOCK 0\n");
}

TEST_CASE("interp: return values and plain calls")
{
    RunResult r = run_src(R"(
int sq(int x) { return x * x; }
cps int twice(int x) { yield(); return x + x; }
cps int chain(int x) { int y = twice(x); return twice(y); }
cps void main(int n) {
  int r = chain(n);
  print("%d %d\n", r, sq(n));
}
)",
                          {5});
    CHECK(r.trace.serialize() == "PRINT 20 25\\n\nEND 0\nCLOCK 0\n");
}

TEST_CASE("interp: loops with break and continue")
{
    RunResult r = run_src(R"(
cps void main(int n) {
  int s = 0;
  for (int i = 0; i < n; i = i + 1) {
    if (i == 2) continue;
    int j = 0;
    while (true) {
      j = j + 1;
      if (j > i) break;
      s = s + j;
    }
  }
  print("%d\n", s);
}
)",
                          {5});
    // i = 0,1,3,4 -> 0 + 1 + 6 + 10
    CHECK(r.trace.lines().front() == "PRINT 17\\n");
}

TEST_CASE("interp: spawn order and condvars")
{
    RunResult r = run_src(R"(
cps void waiter(int id) { cv_wait(0); print("woke %d\n", id); }
cps void main() {
  spawn waiter(1);
  spawn waiter(2);
  yield();
  cv_broadcast(0);
}
)");
    CHECK(r.trace.serialize() == "END 0\nPRINT woke 1\\n\nEND 1\nPRINT woke 2\\n\nEND 2\nCLOCK 0\n");
}

TEST_CASE("interp: faults and deadlock")
{
    RunResult div = run_src("cps void main(int n) { print(\"%d\\n\", 1 / n); }", {0});
    CHECK(div.status == RunStatus::Fault);
    CHECK(div.trace.lines().back() == "ERROR division by zero");

    RunResult dbl = run_src("cps void main() { int* p = malloc(1); free(p); free(p); }");
    CHECK(dbl.status == RunStatus::Fault);
    CHECK(dbl.counters.double_releases == 1);

    RunResult dead = run_src("cps void main() { cv_wait(3); }");
    CHECK(dead.status == RunStatus::Deadlock);
}

TEST_CASE("interp: io waits follow the world")
{
    World w = World::parse("tick 4 ready 1 IN\n");
    RunResult r = run_src("cps void main() { io_wait(1, IN); print(\"got\\n\"); }", {}, w);
    CHECK(r.trace.serialize() == "PRINT got\\n\nEND 0\nCLOCK 4\n");
}
