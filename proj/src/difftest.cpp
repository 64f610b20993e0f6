#include "coop/difftest.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coop/check.hpp"
#include "coop/diagnostics.hpp"
#include "coop/interp.hpp"
#include "coop/parser.hpp"
#include "coop/pipeline.hpp"
#include "coop/printer.hpp"
#include "coop/runtime.hpp"

namespace fs = std::filesystem;

namespace coop {

namespace {

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_diff(const Trace &want, const Trace &got)
{
    auto a = want.lines(), b = got.lines();
    for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        std::string x = i < a.size() ? a[i] : "<end>";
        std::string y = i < b.size() ? b[i] : "<end>";
        if (x != y)
            return "line " + std::to_string(i + 1) + ": expected `" + x + "`, got `" + y + "`";
    }
    return {};
}

} // namespace

std::vector<CorpusEntry> load_corpus(const std::string &dir)
{
    std::vector<fs::path> files;
    for (const auto &e : fs::directory_iterator(dir))
        if (e.path().extension() == ".coop")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto &f : files) {
        CorpusEntry c;
        c.name = f.stem().string();
        c.source = slurp(f);
        fs::path args = fs::path(f).replace_extension(".args");
        if (fs::exists(args)) {
            std::istringstream in(slurp(args));
            int64_t v;
            while (in >> v)
                c.args.push_back(v);
        }
        fs::path world = fs::path(f).replace_extension(".world");
        if (fs::exists(world))
            c.world = World::load(world.string());
        out.push_back(std::move(c));
    }
    return out;
}

size_t DifftestReport::passed() const
{
    return static_cast<size_t>(std::count_if(cells.begin(), cells.end(), [](const Cell &c) { return c.pass; }));
}

std::string DifftestReport::matrix() const
{
    std::vector<std::string> engines{"interp"};
    for (const auto &c : all_pipelines())
        engines.push_back(pipeline_name(c));
    std::vector<std::string> programs;
    for (const auto &c : cells)
        if (std::find(programs.begin(), programs.end(), c.program) == programs.end())
            programs.push_back(c.program);
    size_t w = 8;
    for (const auto &p : programs)
        w = std::max(w, p.size() + 2);
    std::ostringstream os;
    os << std::string(w, ' ');
    for (const auto &e : engines)
        os << e << std::string(e.size() < 20 ? 20 - e.size() : 1, ' ');
    os << "\n";
    for (const auto &p : programs) {
        os << p << std::string(w - p.size(), ' ');
        for (const auto &e : engines) {
            std::string mark = "-";
            for (const auto &c : cells)
                if (c.program == p && c.engine == e)
                    mark = c.pass ? "pass" : "FAIL";
            os << mark << std::string(20 - mark.size(), ' ');
        }
        os << "\n";
    }
    for (const auto &c : cells)
        if (!c.pass)
            os << "FAIL " << c.program << " " << c.engine << ": " << c.detail << "\n";
    os << passed() << "/" << cells.size() << " cells pass\n";
    return os.str();
}

DifftestReport difftest(const std::vector<CorpusEntry> &corpus)
{
    DifftestReport rep;
    auto t0 = std::chrono::steady_clock::now();
    for (const auto &entry : corpus) {
        Program p;
        Cell ref;
        ref.program = entry.name;
        ref.engine = "interp";
        RunResult want;
        try {
            p = parse(entry.source);
            check(p);
            want = interpret(p, entry.args, entry.world);
            ref.pass = true;
            ref.status = want.status;
            ref.counters = want.counters;
            ref.trace_lines = want.trace.events.size();
        } catch (const CompileError &e) {
            ref.detail = format_diagnostics(entry.name + ".coop", e.diagnostics());
        } catch (const std::exception &e) {
            ref.detail = e.what();
        }
        rep.cells.push_back(ref);
        for (const auto &config : all_pipelines()) {
            Cell cell;
            cell.program = entry.name;
            cell.engine = pipeline_name(config);
            if (!ref.pass) {
                cell.detail = "no reference trace";
                rep.cells.push_back(cell);
                continue;
            }
            try {
                Compiled c = compile(p, config);
                Program evir = parse(print_program(c.evir, true), Syntax::Internal);
                RunResult got = run_event_loop(evir, entry.args, entry.world);
                cell.status = got.status;
                cell.counters = got.counters;
                cell.trace_lines = got.trace.events.size();
                cell.pass = got.trace == want.trace;
                if (!cell.pass)
                    cell.detail = first_diff(want.trace, got.trace);
            } catch (const std::exception &e) {
                cell.detail = e.what();
            }
            rep.cells.push_back(cell);
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace coop
