// Differential testing of every pipeline against the reference interpreter.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coop/sched.hpp"
#include "coop/world.hpp"

namespace coop {

/// `<name>.coop` plus optional `<name>.args` (whitespace-separated integers)
/// and `<name>.world`.
struct CorpusEntry {
    std::string name;
    std::string source;
    std::vector<int64_t> args;
    World world;
};

/// Every `.coop` file of `dir`, sorted by name.
std::vector<CorpusEntry> load_corpus(const std::string &dir);

struct Cell {
    std::string program;
    std::string engine; // `interp` or a pipeline name
    bool pass = false;
    std::string detail; // first diverging line, or the failure
    RunStatus status = RunStatus::Ok;
    Counters counters;
    size_t trace_lines = 0;
};

struct DifftestReport {
    std::vector<Cell> cells;
    double seconds = 0;

    size_t passed() const;
    bool ok() const { return passed() == cells.size(); }
    /// One row per program, one column per engine, then one line per failing cell.
    std::string matrix() const;
};

/// Runs each entry through the interpreter and the four pipelines. The
/// compiled program is printed and re-parsed before it runs, so the EventIR
/// text form is exercised as well.
DifftestReport difftest(const std::vector<CorpusEntry> &corpus);

} // namespace coop
