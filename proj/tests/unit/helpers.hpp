#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coop/check.hpp"
#include "coop/interp.hpp"
#include "coop/parser.hpp"
#include "coop/pipeline.hpp"
#include "coop/printer.hpp"
#include "coop/runtime.hpp"

namespace testutil {

inline coop::Program checked(const std::string &src)
{
    coop::Program p = coop::parse(src);
    coop::check(p);
    return p;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus(const std::string &name) { return read_file(COOP_CORPUS_DIR "/" + name + ".coop"); }

inline const coop::FunDef &fn(const coop::Program &p, const std::string &name)
{
    for (const auto &f : p.functions)
        if (f.name == name)
            return f;
    throw std::runtime_error("no function " + name);
}

/// Replaces function `f` of `p` (matched by name).
inline coop::Program with(coop::Program p, const coop::FunDef &f)
{
    for (auto &g : p.functions)
        if (g.name == f.name)
            g = f;
    return p;
}

inline coop::RunResult interp(const coop::Program &p, std::vector<int64_t> args = {}, const coop::World &w = {})
{
    return coop::interpret(p, args, w);
}

/// Compiles with a pipeline, round-trips the EventIR text and runs it.
inline coop::RunResult run(const coop::Program &p, const std::string &pipeline, std::vector<int64_t> args = {},
                           const coop::World &w = {})
{
    coop::Compiled c = coop::compile(p, coop::parse_pipeline(pipeline));
    coop::Program evir = coop::parse(coop::print_program(c.evir, true), coop::Syntax::Internal);
    return coop::run_event_loop(evir, args, w);
}

/// Token stream with whitespace collapsed, for structural comparisons.
inline std::string squash(const std::string &s)
{
    std::string out;
    bool space = false;
    for (char c : s) {
        if (c == ' ' || c == '\n' || c == '\t') {
            space = !out.empty();
            continue;
        }
        if (space)
            out += ' ';
        space = false;
        out += c;
    }
    return out;
}

inline bool contains(const std::string &hay, const std::string &needle)
{
    return squash(hay).find(squash(needle)) != std::string::npos;
}

} // namespace testutil
