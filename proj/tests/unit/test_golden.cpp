#include "doctest.h"

#include "goldens.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace coop::testing;

TEST_CASE("golden: countdown listings")
{
    std::string src = testutil::corpus("countdown");
    for (const auto &g : golden_cases()) {
        GoldenOutcome r = run_golden(g, src, COOP_GOLDEN_DIR);
        INFO(g.name);
        INFO("expected:\n" << r.expected);
        INFO("actual:\n" << r.actual);
        CHECK(r.match);
    }
}

TEST_CASE("golden: alpha-normalization keeps structure")
{
    CHECK(alpha_normalize("void f(int a) { g(a); }") == alpha_normalize("void h(int b) { k(b); }"));
    CHECK(alpha_normalize("void f(int a) { g(a); }") != alpha_normalize("void f(int a) { g(a, a); }"));
    CHECK(alpha_normalize("void f(int a, int b) { g(a, b); }") != alpha_normalize("void f(int a, int b) { g(b, a); }"));
}

TEST_CASE("golden: a perturbed listing does not match")
{
    std::string src = testutil::corpus("countdown");
    src.replace(src.find("x - 1"), 5, "x - 2");
    for (const auto &g : golden_cases()) {
        INFO(g.name);
        CHECK_FALSE(run_golden(g, src, COOP_GOLDEN_DIR).match);
    }
}

TEST_CASE("golden: family selection keeps whole functions")
{
    std::string dump = "void main() {\n  countdown(3);\n}\nvoid countdown(int x) {\n  sleep(1);\n}\n";
    CHECK(select_family(dump, "countdown") == "void countdown(int x) {\n  sleep(1);\n}\n");
}
