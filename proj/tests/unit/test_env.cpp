#include "doctest.h"

#include "coop/env.hpp"
#include "coop/normalize.hpp"
#include "coop/split.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

size_t occurrences(const std::string &hay, const std::string &needle)
{
    size_t n = 0;
    for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1))
        ++n;
    return n;
}

std::pair<FunDef, StructDecl> generated(const Program &p, const std::string &name)
{
    Program prepared = prepare_environments(lower_program(p));
    return generate_environments(split(fn(prepared, name)));
}

} // namespace

TEST_CASE("env: a valued cps function writes through a return slot")
{
    Program p = checked("cps int acc(int fd) { yield(); return fd + 1; }\n"
                        "cps void main() { int c = acc(3); print(\"%d\\n\", c); }\n");
    Program r = rewrite_return_slots(lower_program(p));
    const FunDef &acc = fn(r, "acc");
    CHECK(to_string(acc.ret) == "void");
    REQUIRE(acc.params.size() == 2);
    CHECK(print_type_decl(acc.params[1].type, acc.params[1].name) == "int* __ret");
    CHECK(contains(print_function(acc), "*__ret = fd + 1; return;"));
    CHECK(contains(print_function(fn(r, "main")), "acc(3, &c);"));
}

TEST_CASE("env: a single exit gets one release marker")
{
    Program p = checked("cps void main(int n) { yield(); print(\"%d\\n\", n); }\n");
    std::string out = print_function(fn(prepare_environments(lower_program(p)), "main"));
    CHECK(contains(out, "void* __env;"));
    CHECK(occurrences(out, "free(__env)") == 1);
}

TEST_CASE("env: every exit releases the environment")
{
    Program p = checked("cps void main(int n) {\n"
                        "  int m = n * 2;\n"
                        "  yield();\n"
                        "  if (n == 1) { print(\"one\\n\"); return; }\n"
                        "  if (n == 2) { print(\"two %d\\n\", m); return; }\n"
                        "  print(\"many\\n\");\n"
                        "  return;\n"
                        "}\n");
    std::string out = print_function(fn(prepare_environments(lower_program(p)), "main"));
    CHECK(occurrences(out, "free(__env)") == 3);
    for (int64_t n : {1, 2, 3}) {
        for (const char *pl : {"callbacks+env", "statemachine+env"}) {
            RunResult r = run(p, pl, {n});
            CHECK(r.trace == interp(p, {n}).trace);
            CHECK(r.counters.allocs == 1);
            CHECK(r.counters.releases == 1);
        }
    }
}

TEST_CASE("env: countdown gets env_countdown")
{
    Program p = checked(corpus("countdown"));
    auto [f, layout] = generated(p, "countdown");
    CHECK(layout.name == "env_countdown");
    REQUIRE(layout.fields.size() == 1);
    CHECK(layout.fields[0].name == "x");
    std::string out = print_function(f);
    CHECK(contains(out, "struct env_countdown* __env = malloc(sizeof(struct env_countdown)); __env->x = x;"));
    CHECK(contains(out, "if (__env->x <= 0) { __l1(__env); return; }"));
    CHECK(contains(out, "sleep(1); __l0(__env); return;"));
    CHECK(contains(out, "print(\"time is over!\\n\"); free(__env); return;"));
}

TEST_CASE("env: countdown allocates one environment")
{
    Program p = checked(corpus("countdown") + "\n");
    Program q = checked("cps void countdown(int x) {\n"
                        "  while (x > 0) { print(\"%d\\n\", x); x = x - 1; sleep(1); }\n"
                        "  print(\"time is over!\\n\");\n"
                        "}\n"
                        "cps void main() { countdown(3); }\n");
    RunResult env = run(q, "callbacks+env");
    CHECK(env.counters.allocs == 1);
    CHECK(env.counters.releases == 1);
    CHECK(run(q, "callbacks+lift").counters.allocs == 0);
    CHECK(run(p, "callbacks+env", {3}).counters.allocs == 2); // main keeps n
}

TEST_CASE("env: an empty layout allocates nothing")
{
    Program p = checked("cps void main() { yield(); print(\"a\\n\"); }\n");
    auto [f, layout] = generated(p, "main");
    CHECK(layout.fields.empty());
    std::string out = print_function(f);
    CHECK(contains(out, "void* __env = null;"));
    CHECK(out.find("malloc") == std::string::npos);
    CHECK(out.find("free") == std::string::npos);
    RunResult r = run(p, "callbacks+env");
    CHECK(r.trace == interp(p).trace);
    CHECK(r.counters.allocs == 0);
}

TEST_CASE("env: pointer parameters index through the environment")
{
    Program p = checked("cps void fill(int* a, int n) {\n"
                        "  for (int i = 0; i < n; i = i + 1) { a[i] = i * i; yield(); }\n"
                        "}\n"
                        "cps void main() {\n"
                        "  int* a = malloc(4);\n"
                        "  fill(a, 4);\n"
                        "  print(\"%d %d\\n\", a[2], a[3]);\n"
                        "  free(a);\n"
                        "}\n");
    for (const char *pl : {"callbacks+env", "statemachine+env"}) {
        RunResult r = run(p, pl);
        CHECK(r.trace == interp(p).trace);
        CHECK(r.counters.allocs == r.counters.releases);
    }
}
