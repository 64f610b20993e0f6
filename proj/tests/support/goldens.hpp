// Countdown dumps compared against the hand-transcribed listings in
// tests/golden. Shared by the unit tests and the acceptance binary.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coop/check.hpp"
#include "coop/parser.hpp"
#include "coop/pipeline.hpp"
#include "coop/printer.hpp"

namespace coop::testing {

struct GoldenCase {
    const char *name; // golden file stem
    const char *pipeline;
    const char *stage;
};

inline const std::vector<GoldenCase> &golden_cases()
{
    static const std::vector<GoldenCase> cases = {
        {"split", "callbacks+lift", "split"},
        {"lift", "callbacks+lift", "lift"},
        {"cps", "callbacks+lift", "cps"},
        {"defun", "statemachine+lift", "float"},
        {"env", "callbacks+env", "env-generate"},
    };
    return cases;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Keeps the top-level items (declarations and whole functions) whose first
/// line mentions `family`.
inline std::string select_family(const std::string &dump, const std::string &family)
{
    std::istringstream in(dump);
    std::string line, out, item;
    bool keep = false;
    auto flush = [&] {
        if (keep)
            out += item;
        item.clear();
    };
    while (std::getline(in, line)) {
        bool top = !line.empty() && line[0] != ' ' && line[0] != '}';
        if (top) {
            flush();
            keep = line.find(family) != std::string::npos;
        }
        item += line + "\n";
    }
    flush();
    return out;
}

struct GoldenOutcome {
    bool match = false;
    std::string expected; // alpha-normalized
    std::string actual;   // alpha-normalized
};

inline GoldenOutcome run_golden(const GoldenCase &g, const std::string &source, const std::string &golden_dir)
{
    Program p = parse(source);
    check(p);
    PipelineConfig c = parse_pipeline(g.pipeline);
    c.dumps.insert(g.stage);
    Compiled out = compile(p, c);
    std::string dump;
    for (const auto &[stage, text] : out.dumps)
        if (stage == g.stage)
            dump = text;
    GoldenOutcome r;
    r.actual = alpha_normalize(select_family(dump, "countdown"));
    r.expected = alpha_normalize(read_file(golden_dir + "/" + g.name + ".txt"));
    r.match = !r.expected.empty() && r.actual == r.expected;
    return r;
}

} // namespace coop::testing
