#include "doctest.h"

#include <random>

#include "coop/normalize.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

TEST_CASE("normalize: countdown lowers to labels and gotos")
{
    Program p = checked(corpus("countdown"));
    FunDef g = lower_control(fn(p, "countdown"));
    CHECK(squash(print_function(g)) == squash(R"(cps void countdown(int x) {
 __l0:
  if (x <= 0) goto __l1;
  print("%d seconds remaining\n", x);
  x = x - 1;
  sleep(1);
  goto __l0;
 __l1:
  print("time is over!\n");
})"));
    CHECK(goto_form_violations(g).empty());
    CHECK(dead_labels(g).empty());
}

TEST_CASE("normalize: straight-line code gets no labels")
{
    Program p = checked("int add(int a, int b) {\n  int c = a + b;\n  return c;\n}\n"
                        "cps void main() { print(\"%d\\n\", add(1, 2)); }\n");
    FunDef g = lower_control(fn(p, "add"));
    CHECK(print_function(g) == print_function(fn(p, "add")));
    std::string m = print_function(lower_control(fn(p, "main")));
    CHECK(m.find("__l") == std::string::npos);
    CHECK(m.find("goto") == std::string::npos);
}

TEST_CASE("normalize: nested loops with break and continue keep their trace")
{
    Program p = checked(corpus("nested_loops"));
    Program lowered = lower_program(p);
    for (const auto &f : lowered.functions)
        CHECK(goto_form_violations(f).empty());
    check(lowered);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> arg(0, 30);
    for (int i = 0; i < 20; ++i) {
        int64_t n = arg(rng);
        CAPTURE(n);
        RunResult want = interp(p, {n});
        RunResult got = interp(lowered, {n});
        CHECK(want.status == RunStatus::Ok);
        CHECK(got.trace == want.trace);
    }
}

TEST_CASE("normalize: short-circuit operators become jumps")
{
    Program p = checked("int boom() { return 1 / 0; }\n"
                        "cps void main(int a) {\n"
                        "  if (a > 0 && boom() > 0) { print(\"yes\\n\"); }\n"
                        "  if (a > 0 || boom() > 0) { print(\"no\\n\"); }\n"
                        "}\n");
    Program lowered = lower_program(p);
    check(lowered);
    CHECK(print_function(fn(lowered, "main")).find("&&") == std::string::npos);
    CHECK(interp(lowered, {0}).status == RunStatus::Fault);
    CHECK(interp(lowered, {1}).status == RunStatus::Fault);
    Program q = checked("int boom() { return 1 / 0; }\n"
                        "cps void main(int a) { if (a > 0 && boom() > 0) { print(\"yes\\n\"); } }\n");
    Program lq = lower_program(q);
    check(lq);
    CHECK(interp(lq, {0}).trace == interp(q, {0}).trace);
    CHECK(interp(lq, {0}).status == RunStatus::Ok);
}

TEST_CASE("normalize: a cps result stored through an lvalue goes via a temporary")
{
    Program p = checked("cps int one() { yield(); return 1; }\n"
                        "cps void main() { int a[2]; a[1] = one(); print(\"%d\\n\", a[1]); }\n");
    std::string m = print_function(lower_control(fn(p, "main")));
    CHECK(m.find("__t0 = one()") != std::string::npos);
    CHECK(m.find("a[1] = __t0") != std::string::npos);
    CHECK_THROWS_AS(interp(lower_program(p)), std::invalid_argument);
    Program lowered = lower_program(p);
    check(lowered);
    CHECK(interp(lowered).trace == interp(p).trace);
}
