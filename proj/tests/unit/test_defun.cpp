#include "doctest.h"

#include "coop/defun.hpp"
#include "coop/normalize.hpp"
#include "coop/split.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

FunDef machine(const Program &p, const std::string &name)
{
    return defunctionalize(split(lower_control(fn(p, name))));
}

size_t occurrences(const std::string &hay, const std::string &needle)
{
    size_t n = 0;
    for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1))
        ++n;
    return n;
}

} // namespace

TEST_CASE("defun: countdown dispatches on its states")
{
    Program p = checked(corpus("countdown"));
    FunDef d = machine(p, "countdown");
    REQUIRE(d.inner.size() == 1);
    CHECK(d.inner[0].name == "dispatch");
    CHECK(d.state_enum == "countdown_state");
    std::string out = print_function(d);
    CHECK(contains(out, "case COUNTDOWN__L0:"));
    CHECK(contains(out, "if (x <= 0) { dispatch(COUNTDOWN__L1); return; }"));
    CHECK(contains(out, "sleep(1); dispatch(COUNTDOWN__L0); return;"));
    CHECK(contains(out, "case COUNTDOWN__L1: print(\"time is over!\\n\"); return;"));
    CHECK(contains(out, "dispatch(COUNTDOWN__L0); return; }"));
}

TEST_CASE("defun: one state per inner function")
{
    Program p = checked("cps void main() { while (true) { yield(); } }\n");
    FunDef s = split(lower_control(fn(p, "main")));
    REQUIRE(s.inner.size() == 2);
    std::string out = print_function(defunctionalize(s));
    CHECK(occurrences(out, "case ") == 2);
}

TEST_CASE("defun: direct transitions become gotos")
{
    Program p = checked(corpus("countdown"));
    std::string out = print_function(optimize_direct_dispatch(machine(p, "countdown")));
    CHECK(contains(out, "if (x <= 0) goto countdown__l1_label;"));
    CHECK(contains(out, "case COUNTDOWN__L1: countdown__l1_label:"));
    CHECK(contains(out, "sleep(1); dispatch(COUNTDOWN__L0); return;"));
}

TEST_CASE("defun: transitions after a cps call stay calls")
{
    Program p = checked("cps void main() { yield(); yield(); }\n");
    FunDef d = machine(p, "main");
    CHECK(print_function(optimize_direct_dispatch(d)) == print_function(d));
}

TEST_CASE("defun: two direct and two resuming transitions")
{
    Program p = checked("cps void main(int n) {\n"
                        "  yield();\n"
                        "  if (n > 0) { print(\"p\\n\"); }\n"
                        "  yield();\n"
                        "  print(\"e\\n\");\n"
                        "}\n");
    FunDef d = machine(p, "main");
    std::string before = print_function(d);
    CHECK(occurrences(before, "case ") == 4);
    std::string after = print_function(optimize_direct_dispatch(d));
    CHECK(occurrences(after, "goto ") == 2);
    CHECK(occurrences(after, "dispatch(MAIN__") == occurrences(before, "dispatch(MAIN__") - 2);
    for (int64_t n : {0, 1}) {
        CHECK(run(p, "statemachine+lift", {n}).trace == interp(p, {n}).trace);
        CHECK(run(p, "statemachine+env", {n}).trace == interp(p, {n}).trace);
    }
}

TEST_CASE("defun: tags are uppercased function-qualified names")
{
    CHECK(state_tag("countdown__l0") == "COUNTDOWN__L0");
    CHECK(state_tag("main__entry") == "MAIN__ENTRY");
}
