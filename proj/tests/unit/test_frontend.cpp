#include <doctest.h>

#include <fstream>
#include <sstream>

#include "coop/check.hpp"
#include "coop/diagnostics.hpp"
#include "coop/parser.hpp"
#include "coop/printer.hpp"

using namespace coop;

namespace {

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string countdown_source() { return read_file(COOP_CORPUS_DIR "/countdown.coop"); }

Diagnostic first_error(const std::string &src, bool run_check)
{
    try {
        Program p = parse(src);
        if (run_check)
            check(p);
    } catch (const CompileError &e) {
        return e.diagnostics().front();
    }
    FAIL("expected a compile error");
    return {};
}

int count_kind(const std::vector<Stmt> &body, StmtKind k)
{
    int n = 0;
    for (const auto &s : body) {
        n += s.kind == k;
        n += count_kind(s.body, k) + count_kind(s.alt, k);
    }
    return n;
}

} // namespace

TEST_CASE("countdown parses into one while loop with two prints and a sleep")
{
    Program p = parse(countdown_source());
    const FunDef *f = p.find("countdown");
    REQUIRE(f);
    CHECK(f->is_cps);
    REQUIRE(f->body.size() == 2);
    CHECK(f->body[0].kind == StmtKind::While);
    CHECK(f->body[0].pos.line == 3);
    const auto &loop = f->body[0].body;
    CHECK(stmt_call(loop[0])->name == "print");
    CHECK(stmt_call(loop[2])->name == "sleep");
    CHECK(stmt_call(f->body[1])->name == "print");
}

TEST_CASE("empty cps main")
{
    Program p = parse("cps void main() {}");
    REQUIRE(p.functions.size() == 1);
    CHECK(p.functions[0].is_cps);
    CHECK(p.functions[0].body.empty());
    CHECK_NOTHROW(check(p));
}

TEST_CASE("unterminated while reports the opening brace line")
{
    std::string src = countdown_source();
    // Cut right after the loop's opening brace and its first statement.
    src = src.substr(0, src.find("x = x - 1;"));
    Diagnostic d = first_error(src, false);
    CHECK(d.pos.line == 3);
    CHECK(d.message.find("'{'") != std::string::npos);
}

TEST_CASE("duplicate function names are rejected")
{
    Diagnostic d = first_error("cps void main() {}\ncps void main() {}", false);
    CHECK(d.message.find("duplicate function") != std::string::npos);
    CHECK(d.pos.line == 2);
}

TEST_CASE("user gotos are rejected")
{
    Diagnostic d = first_error("cps void main() { goto x; }", false);
    CHECK(d.message.find("goto") != std::string::npos);
}

TEST_CASE("check marks cps call sites")
{
    Program p = parse(countdown_source());
    check(p);
    const auto &loop = p.find("countdown")->body[0].body;
    const Expr *sleep = stmt_call(loop[2]);
    CHECK(sleep->call == CallKind::Prim);
    CHECK(sleep->prim == Prim::Sleep);
    CHECK(stmt_call(loop[0])->call == CallKind::Print);
    CHECK(stmt_call(p.find("main")->body[0])->call == CallKind::Cps);
    CHECK(loop[1].exprs[0].slot == 0);
}

TEST_CASE("check errors")
{
    SUBCASE("cps call in non-cps context")
    {
        auto d = first_error("void f() { sleep(1); }\ncps void main() { f(); }", true);
        CHECK(d.message == "cps call in non-cps context");
    }
    SUBCASE("use before declaration")
    {
        auto d = first_error("cps void main() { x = 1; int x; }", true);
        CHECK(d.message.find("undeclared variable 'x'") != std::string::npos);
    }
    SUBCASE("type mismatch")
    {
        auto d = first_error("cps void main() { int x; x = true; }", true);
        CHECK(d.message.find("type mismatch") != std::string::npos);
    }
    SUBCASE("address of a non-addressable expression")
    {
        auto d = first_error("cps void main() { int x; int* p; p = &(x + 1); }", true);
        CHECK(d.message.find("address-of") != std::string::npos);
    }
    SUBCASE("cps call nested in an expression")
    {
        auto d = first_error("cps int f() { return 1; }\ncps void main() { int x; x = f() + 1; }", true);
        CHECK(d.message.find("must be a statement") != std::string::npos);
    }
    SUBCASE("negative sleep literal")
    {
        auto d = first_error("cps void main() { sleep(-1); }", true);
        CHECK(d.message.find("negative") != std::string::npos);
    }
    SUBCASE("entry must be cps")
    {
        auto d = first_error("void main() {}", true);
        CHECK(d.message.find("must be cps") != std::string::npos);
    }
    SUBCASE("print format arity")
    {
        auto d = first_error("cps void main() { print(\"%d %d\\n\", 1); }", true);
        CHECK(d.message.find("print format") != std::string::npos);
    }
}

TEST_CASE("diagnostics are printed as file:line:col: message")
{
    try {
        Program p = parse("cps void main() {\n  y = 2;\n}");
        check(p);
        FAIL("expected error");
    } catch (const CompileError &e) {
        CHECK(format_diagnostics("t.coop", e.diagnostics()) ==
              "t.coop:2:3: use of undeclared variable 'y'\n");
    }
}

TEST_CASE("check is idempotent")
{
    Program p = parse(countdown_source());
    check(p);
    std::string once = print_program(p);
    Program again = p;
    check(again);
    CHECK(print_program(again) == once);
    CHECK(again.find("countdown")->nslots == p.find("countdown")->nslots);
}

TEST_CASE("parse . print . parse is stable")
{
    const char *sources[] = {
        "cps void main() {}",
        "int f(int a, bool b) { int c[4]; c[a % 4] = -a * (a + 2); if (b && !(a < 3) || a == 7) { return c[1]; } else return 0; }\n"
        "cps void main() { int i; for (i = 0; i < 3; i = i + 1) { if (i == 1) continue; print(\"%d\\n\", f(i, true)); } }",
        "cps int g(int* p) { *p = *p - 1; io_wait(2, OUT); return *p; }\n"
        "cps void main() { int x = 4; int y; y = g(&x); spawn g(&x); while (true) { cv_wait(0); break; } }",
    };
    for (const char *src : sources) {
        Program a = parse(src);
        std::string printed = print_program(a);
        Program b = parse(printed);
        CHECK(print_program(b) == printed);
    }
}
