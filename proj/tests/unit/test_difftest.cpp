#include "doctest.h"

#include "coop/difftest.hpp"
#include "helpers.hpp"

using namespace coop;

TEST_CASE("difftest: the corpus agrees on every engine")
{
    std::vector<CorpusEntry> corpus = load_corpus(COOP_CORPUS_DIR);
    REQUIRE(corpus.size() == 12);
    DifftestReport rep = difftest(corpus);
    INFO(rep.matrix());
    CHECK(rep.cells.size() == 60);
    CHECK(rep.ok());
    for (const auto &c : rep.cells) {
        if (c.engine == "interp")
            continue;
        INFO(c.program << " " << c.engine);
        if (c.engine.find("env") != std::string::npos) {
            CHECK(c.counters.allocs == c.counters.releases);
            CHECK(c.counters.double_releases == 0);
        }
    }
}

TEST_CASE("difftest: faults agree across engines")
{
    CorpusEntry e{"div", "cps void main(int n) { print(\"a\\n\"); yield(); print(\"%d\\n\", 1 / n); }\n", {0}, {}};
    DifftestReport rep = difftest({e});
    REQUIRE(rep.cells.size() == 5);
    CHECK(rep.ok());
    for (const auto &c : rep.cells) {
        CHECK(c.status == RunStatus::Fault);
        CHECK(c.trace_lines == rep.cells[0].trace_lines);
    }
}

TEST_CASE("difftest: a program that does not check fails its cells")
{
    CorpusEntry e{"bad", "cps void main() { undefined_thing(); }\n", {}, {}};
    DifftestReport rep = difftest({e});
    CHECK_FALSE(rep.ok());
    CHECK(rep.passed() == 0);
    CHECK(rep.matrix().find("bad") != std::string::npos);
}

TEST_CASE("difftest: corpus entries pick up args and worlds")
{
    std::vector<CorpusEntry> corpus = load_corpus(COOP_CORPUS_DIR);
    for (const auto &e : corpus) {
        if (e.name == "countdown")
            CHECK(!e.args.empty());
        if (e.name == "select_waiter")
            CHECK(!e.world.events.empty());
    }
}
