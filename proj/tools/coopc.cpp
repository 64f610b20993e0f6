// coopc: compile, run, difftest and bench Coop programs.
//
// Exit codes: 0 success, 1 compile or check error, 2 usage error,
// 3 difftest failure, 4 runtime deadlock.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coop/bench.hpp"
#include "coop/check.hpp"
#include "coop/diagnostics.hpp"
#include "coop/difftest.hpp"
#include "coop/interp.hpp"
#include "coop/parser.hpp"
#include "coop/pipeline.hpp"
#include "coop/printer.hpp"
#include "coop/runtime.hpp"

namespace fs = std::filesystem;
using namespace coop;

namespace {

enum Exit { kOk = 0, kCompile = 1, kUsage = 2, kDifftest = 3, kDeadlock = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineFlags {
    std::string pipeline;
    std::string control;
    std::string data;
    bool no_direct_dispatch = false;
    bool conservative_lift = false;

    void add(CLI::App *cmd)
    {
        cmd->add_option("--pipeline", pipeline, "control+data, e.g. callbacks+lift");
        cmd->add_option("--control", control, "callbacks or statemachine")
            ->check(CLI::IsMember({"callbacks", "statemachine"}));
        cmd->add_option("--data", data, "lift or env")->check(CLI::IsMember({"lift", "env"}));
        cmd->add_flag("--no-direct-dispatch", no_direct_dispatch, "keep dispatch calls between inner functions");
        cmd->add_flag("--conservative-lift", conservative_lift, "lift every free variable, live or not");
    }

    PipelineConfig config() const
    {
        PipelineConfig c;
        if (!pipeline.empty()) {
            if (!control.empty() || !data.empty())
                throw UsageError("--pipeline cannot be combined with --control or --data");
            try {
                c = parse_pipeline(pipeline);
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
        }
        if (control == "statemachine")
            c.control = Control::StateMachine;
        if (data == "env")
            c.data = Data::Env;
        c.direct_dispatch = !no_direct_dispatch;
        c.conservative_lift = conservative_lift;
        return c;
    }
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load_checked(const std::string &path)
{
    Program p = parse(slurp(path));
    check(p);
    return p;
}

int cmd_compile(const std::string &file, const PipelineFlags &flags, const std::vector<std::string> &dumps,
                bool alpha, std::string out)
{
    PipelineConfig config = flags.config();
    for (const auto &d : dumps) {
        std::string stage = d.rfind("after=", 0) == 0 ? d.substr(6) : d;
        const auto &known = dump_stages();
        if (std::find(known.begin(), known.end(), stage) == known.end())
            throw UsageError("unknown dump point '" + d + "'");
        config.dumps.insert(stage);
    }
    config.alpha = alpha;
    Compiled c = compile(load_checked(file), config);
    for (const auto &[stage, text] : c.dumps) {
        if (c.dumps.size() > 1)
            std::cout << "// after=" << stage << "\n";
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << "\n";
    }
    if (out.empty())
        out = fs::path(file).replace_extension(".evir").string();
    std::string evir = print_program(c.evir, true);
    if (out == "-") {
        std::cout << evir;
    } else {
        std::ofstream f(out);
        if (!f)
            throw UsageError("cannot write " + out);
        f << evir;
    }
    return kOk;
}

int cmd_run(const std::string &file, const PipelineFlags &flags, bool interp, const std::string &world_file,
            const std::vector<int64_t> &args, bool counters)
{
    World world;
    if (!world_file.empty())
        world = World::load(world_file);
    RunResult r;
    bool is_evir = fs::path(file).extension() == ".evir";
    if (is_evir) {
        if (interp)
            throw UsageError("--interp needs a .coop file");
        r = run_event_loop(parse(slurp(file), Syntax::Internal), args, world);
    } else if (interp) {
        r = interpret(load_checked(file), args, world);
    } else {
        r = run_event_loop(compile(load_checked(file), flags.config()).evir, args, world);
    }
    std::cout << r.trace.serialize();
    if (counters)
        std::cerr << r.counters.report();
    if (r.status == RunStatus::Deadlock) {
        std::cerr << r.message << "\n";
        return kDeadlock;
    }
    return kOk;
}

int cmd_difftest(const std::string &dir)
{
    DifftestReport rep = difftest(load_corpus(dir));
    std::cout << rep.matrix();
    for (const auto &c : rep.cells) {
        if (c.engine == "interp" || !c.pass)
            continue;
        const Counters &k = c.counters;
        if (k.allocs != k.releases || k.double_releases)
            std::cout << "LEAK " << c.program << " " << c.engine << ": allocs=" << k.allocs
                      << " releases=" << k.releases << " double_releases=" << k.double_releases << "\n";
    }
    std::cout << "elapsed " << rep.seconds << " s\n";
    return rep.ok() ? kOk : kDifftest;
}

int cmd_bench(const std::string &suite, int trials, int64_t n, bool counters_only, bool parallel,
              const std::string &out)
{
    std::ostringstream os;
    if (suite == "scaling") {
        std::vector<ScalingCell> cells;
        for (const char *mode : {"manual", "auto"})
            for (const auto &c : all_pipelines())
                cells.push_back({mode, c});
        for (const ScalingResult &r : run_scaling(cells, 1, 20, trials)) {
            os << "tictactoe-" << r.mode << " " << r.pipeline << " 1 task " << r.low_ns_per_task / 1e6
               << " ms/task, 20 tasks " << r.high_ns_per_task / 1e6 << " ms/task, variation "
               << r.variation() * 100 << " %\n";
            os << "bench.scaling.tictactoe-" << r.mode << "." << r.pipeline << ".ratio=" << r.ratio << "\n";
        }
    } else {
        BenchOptions opts;
        opts.trials = trials;
        opts.timing = !counters_only;
        opts.parallel = parallel;
        std::vector<BenchResult> results;
        try {
            results = run_suite(suite, n, opts);
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        os << report(results, opts.timing);
    }
    std::cout << os.str();
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f)
            throw UsageError("cannot write " + out);
        f << os.str();
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Coop compiler, runtime and test driver"};
    app.require_subcommand(1);

    std::string file, out, world, dir = "corpus", suite = "all";
    std::vector<std::string> dumps;
    std::vector<int64_t> args;
    bool alpha = false, interp = false, counters = false, counters_only = false, parallel = false;
    int trials = 5;
    int64_t n = 100000;
    PipelineFlags compile_flags, run_flags;

    auto *compile_cmd = app.add_subcommand("compile", "compile a .coop file to EventIR");
    compile_cmd->add_option("file", file, "source file")->required();
    compile_flags.add(compile_cmd);
    compile_cmd->add_option("--dump", dumps, "print the program after=<stage>");
    compile_cmd->add_flag("--alpha", alpha, "alpha-normalize dumps");
    compile_cmd->add_option("-o,--output", out, "EventIR output file, - for stdout");

    auto *run_cmd = app.add_subcommand("run", "run a .coop or .evir file and print its trace");
    run_cmd->add_option("file", file, "program")->required();
    run_cmd->add_option("args", args, "entry arguments");
    run_flags.add(run_cmd);
    run_cmd->add_flag("--interp", interp, "use the reference interpreter");
    run_cmd->add_option("--world", world, "scripted channel events")->check(CLI::ExistingFile);
    run_cmd->add_flag("--counters", counters, "print runtime counters to stderr");

    auto *diff_cmd = app.add_subcommand("difftest", "run a corpus through the interpreter and all pipelines");
    diff_cmd->add_option("dir", dir, "corpus directory")->check(CLI::ExistingDirectory);

    auto *bench_cmd = app.add_subcommand("bench", "time benchmarks per pipeline");
    bench_cmd->add_option("--suite", suite, "all, micro, tictactoe, echo, scaling or a micro name");
    bench_cmd->add_option("--trials", trials, "timed trials per cell")->check(CLI::Range(5, 1000));
    bench_cmd->add_option("--n", n, "micro-benchmark iterations")->check(CLI::Range(int64_t{10000}, int64_t{1} << 40));
    bench_cmd->add_flag("--counters-only", counters_only, "deterministic counters, no timing");
    bench_cmd->add_flag("--parallel", parallel, "run trials on parallel loop instances");
    bench_cmd->add_option("--out", out, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (compile_cmd->parsed())
            return cmd_compile(file, compile_flags, dumps, alpha, out);
        if (run_cmd->parsed())
            return cmd_run(file, run_flags, interp, world, args, counters);
        if (diff_cmd->parsed())
            return cmd_difftest(dir);
        return cmd_bench(suite, trials, n, counters_only, parallel, out);
    } catch (const CompileError &e) {
        std::cerr << format_diagnostics(file, e.diagnostics());
        return kCompile;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const InternalError &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kCompile;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCompile;
    }
}
