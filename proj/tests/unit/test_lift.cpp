#include "doctest.h"

#include "coop/lift.hpp"
#include "coop/normalize.hpp"
#include "coop/split.hpp"
#include "helpers.hpp"

using namespace coop;
using namespace testutil;

namespace {

const FunDef &inner(const FunDef &f, const std::string &name)
{
    for (const auto &g : f.inner)
        if (g.name == name)
            return g;
    throw std::runtime_error("no inner function " + name);
}

std::string params(const FunDef &f)
{
    std::string out;
    for (const auto &p : f.params)
        out += (out.empty() ? "" : ",") + p.name;
    return out;
}

} // namespace

TEST_CASE("lift: countdown passes x to the loop only")
{
    Program p = checked(corpus("countdown"));
    FunDef l = lambda_lift(split(lower_control(fn(p, "countdown"))));
    CHECK(params(inner(l, "__l0")) == "x");
    CHECK(params(inner(l, "__l1")).empty());
    CHECK(contains(print_function(inner(l, "__l0")), "sleep(1); __l0(x); return;"));
    CHECK(contains(print_function(l), "__l0(x); return; }"));
}

TEST_CASE("lift: conservative lifting passes every variable")
{
    Program p = checked(corpus("countdown"));
    FunDef l = lambda_lift(split(lower_control(fn(p, "countdown"))), true);
    CHECK(params(inner(l, "__l1")) == "x");
}

TEST_CASE("lift: no free variables means pure floating")
{
    Program p = checked("cps void main() { yield(); print(\"a\\n\"); }\n");
    FunDef s = split(lower_control(fn(p, "main")));
    FunDef l = lambda_lift(s);
    for (const auto &g : l.inner)
        CHECK(g.params.empty());
    std::vector<FunDef> flat = float_family(l);
    REQUIRE(flat.size() == s.inner.size() + 1);
    CHECK(flat[0].name == "main____entry");
    CHECK(flat.back().name == "main");
    for (const auto &g : flat)
        CHECK(g.inner.empty());
}

TEST_CASE("lift: a variable dead in the last block is not passed")
{
    Program p = checked("cps void main(int a) {\n"
                        "  int b = a * 2;\n"
                        "  yield();\n"
                        "  print(\"%d %d\\n\", a, b);\n"
                        "  yield();\n"
                        "  print(\"%d\\n\", b);\n"
                        "}\n");
    FunDef l = lambda_lift(split(lower_control(fn(p, "main"))));
    REQUIRE(l.inner.size() == 3);
    CHECK(params(l.inner[0]) == "a"); // b is defined in the entry block
    CHECK(params(l.inner[1]) == "a,b");
    CHECK(params(l.inner[2]) == "b");
    auto live = inner_liveness(split(lower_control(fn(p, "main"))));
    CHECK(live[l.inner[2].name] == std::set<std::string>{"b"});
    Program q = p;
    q.functions = float_family(l);
    check(q);
    CHECK(interp(q, {5}).trace == interp(p, {5}).trace);
}

TEST_CASE("lift: the destination of a valued call comes last")
{
    Program p = checked("cps int two(int v) { yield(); return v * 2; }\n"
                        "cps void main(int a) {\n"
                        "  int y = two(a);\n"
                        "  print(\"%d %d\\n\", a, y);\n"
                        "}\n");
    FunDef l = lambda_lift(split(lower_control(fn(p, "main"))));
    const FunDef &resume = l.inner.back();
    REQUIRE(!resume.params.empty());
    CHECK(resume.params.back().name == "y");
}
