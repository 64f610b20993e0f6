#include "doctest.h"

#include "coop/cps.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

std::string evir_of(const Program &p, const std::string &pipeline, const std::string &name)
{
    Program e = compile(p, parse_pipeline(pipeline)).evir;
    return print_function(fn(e, name));
}

} // namespace

TEST_CASE("cps: lifted countdown pushes the loop before sleeping")
{
    Program p = checked(corpus("countdown"));
    std::string loop = evir_of(p, "callbacks+lift", "countdown____l0");
    CHECK(contains(loop, "void countdown____l0(int x, cont* k) {"));
    CHECK(contains(loop, "if (x <= 0) { countdown____l1(k); return; }"));
    CHECK(contains(loop, "sleep(1, push(countdown____l0, x, k)); return;"));
    CHECK(contains(evir_of(p, "callbacks+lift", "countdown____l1"), "print(\"time is over!\\n\"); invoke(k); return;"));
    CHECK(contains(evir_of(p, "callbacks+lift", "countdown"), "countdown____l0(x, k); return;"));
}

TEST_CASE("cps: non-cps helpers are emitted verbatim")
{
    Program p = checked("int add(int a, int b) { return a + b; }\n"
                        "cps void main() { print(\"%d\\n\", add(1, 2)); }\n");
    for (const auto &c : all_pipelines()) {
        Program e = compile(p, c).evir;
        CHECK(print_function(fn(e, "add")) == print_function(fn(p, "add")));
    }
}

TEST_CASE("cps: env-mode countdown releases before invoking")
{
    Program p = checked(corpus("countdown"));
    CHECK(contains(evir_of(p, "callbacks+env", "countdown____l0"),
                   "sleep(1, push(countdown____l0, __env, k)); return;"));
    CHECK(contains(evir_of(p, "callbacks+env", "countdown____l1"), "free(__env); invoke(k); return;"));
    CHECK(run(p, "callbacks+env", {3}).trace == interp(p, {3}).trace);
}

TEST_CASE("cps: a valued call leaves a hole in the resume frame")
{
    Program p = checked("cps int two(int v) { yield(); return v * 2; }\n"
                        "cps void main(int a) { int y = two(a); print(\"%d\\n\", y); }\n");
    std::string entry = evir_of(p, "callbacks+lift", "main____entry");
    CHECK(contains(entry, "two(a, push(main____l0, ?, k)); return;"));
    CHECK(contains(evir_of(p, "callbacks+lift", "two____l0"), "invoke(k, v * 2); return;"));
    CHECK(run(p, "callbacks+lift", {4}).trace == interp(p, {4}).trace);
}

TEST_CASE("cps: the converted program has no cps annotation left")
{
    Program p = checked(corpus("producer_consumer"));
    for (const auto &c : all_pipelines()) {
        Program e = compile(p, c).evir;
        for (const auto &f : e.functions) {
            CHECK_FALSE(f.is_cps);
            CHECK(f.inner.empty());
        }
    }
}
