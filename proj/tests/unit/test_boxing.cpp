#include "doctest.h"

#include "coop/boxing.hpp"
#include "coop/normalize.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

Program boxed(const Program &p)
{
    Program out = lower_program(p);
    for (auto &f : out.functions)
        f = box_extruded(f);
    check(out);
    return out;
}

} // namespace

TEST_CASE("boxing: countdown has nothing to box")
{
    Program p = checked(corpus("countdown"));
    FunDef g = lower_control(fn(p, "countdown"));
    CHECK(extruded_vars(g).empty());
    CHECK(print_function(box_extruded(g)) == print_function(g));
}

TEST_CASE("boxing: an address-taken local becomes a cell released at every exit")
{
    Program p = checked("cps void g(int* p) { *p = 1; }\n"
                        "cps void main() {\n"
                        "  int x = 2;\n"
                        "  g(&x);\n"
                        "  print(\"%d\\n\", x);\n"
                        "  if (x > 1) { return; }\n"
                        "  x = 3;\n"
                        "}\n");
    FunDef g = lower_control(fn(p, "main"));
    CHECK(extruded_vars(g) == std::vector<std::string>{"x"});
    std::string out = print_function(box_extruded(g));
    CHECK(contains(out, "int* __box_x = malloc(1); *__box_x = 2; g(__box_x);"));
    CHECK(contains(out, "print(\"%d\\n\", *__box_x);"));
    CHECK(contains(out, "free(__box_x); return;"));
    CHECK(contains(out, "*__box_x = 3; free(__box_x); }"));
    Program b = boxed(p);
    RunResult r = interp(b);
    CHECK(r.trace == interp(p).trace);
    CHECK(r.counters.allocs == 1);
    CHECK(r.counters.releases == 1);
}

TEST_CASE("boxing: arrays are boxed and parameters are copied in")
{
    Program p = checked("cps void main(int n) {\n"
                        "  int a[3];\n"
                        "  int* q = &n;\n"
                        "  a[2] = *q + 1;\n"
                        "  yield();\n"
                        "  print(\"%d %d\\n\", a[2], n);\n"
                        "}\n");
    FunDef g = lower_control(fn(p, "main"));
    CHECK(extruded_vars(g) == std::vector<std::string>{"n", "a"});
    std::string out = print_function(box_extruded(g));
    CHECK(contains(out, "int* __box_n = malloc(1); *__box_n = n;"));
    CHECK(contains(out, "int* __box_a = malloc(3);"));
    CHECK(interp(boxed(p), {4}).trace == interp(p, {4}).trace);
}

TEST_CASE("boxing: grids shared between spawned tasks keep their trace")
{
    Program p = checked(corpus("tictactoe_auto"));
    Program b = boxed(p);
    RunResult want = interp(p, {1, 1});
    RunResult got = interp(b, {1, 1});
    CHECK(want.trace.count(EventKind::Print) == 19683);
    CHECK(got.trace == want.trace);
    CHECK(got.counters.allocs == got.counters.releases);
    CHECK(got.counters.double_releases == 0);
}
