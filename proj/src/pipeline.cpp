#include "coop/pipeline.hpp"

#include <stdexcept>

#include "coop/boxing.hpp"
#include "coop/cps.hpp"
#include "coop/defun.hpp"
#include "coop/env.hpp"
#include "coop/lift.hpp"
#include "coop/normalize.hpp"
#include "coop/printer.hpp"
#include "coop/split.hpp"

namespace coop {

std::string pipeline_name(const PipelineConfig &c)
{
    return std::string(c.control == Control::Callbacks ? "callbacks" : "statemachine") + "+" +
           (c.data == Data::Lift ? "lift" : "env");
}

PipelineConfig parse_pipeline(const std::string &name)
{
    for (auto c : all_pipelines())
        if (pipeline_name(c) == name)
            return c;
    throw std::invalid_argument("unknown pipeline '" + name + "'");
}

std::vector<PipelineConfig> all_pipelines()
{
    std::vector<PipelineConfig> out;
    for (Control c : {Control::Callbacks, Control::StateMachine})
        for (Data d : {Data::Lift, Data::Env}) {
            PipelineConfig p;
            p.control = c;
            p.data = d;
            out.push_back(p);
        }
    return out;
}

const std::vector<std::string> &dump_stages()
{
    static const std::vector<std::string> stages = {"normalize", "boxing", "env-prepare", "split", "defun",
                                                    "lift",      "env-generate", "float", "cps"};
    return stages;
}

namespace {

EnumDecl state_enum_of(const FunDef &f)
{
    EnumDecl e;
    e.name = f.state_enum;
    for (const auto &arm : f.inner.at(0).body.at(0).body)
        e.tags.push_back(arm.name);
    return e;
}

} // namespace

Compiled compile(const Program &checked, const PipelineConfig &config)
{
    Compiled out;
    auto dump = [&](const std::string &stage, const Program &p) {
        if (!config.dumps.count(stage))
            return;
        std::string text;
        if (stage == "float" || stage == "cps")
            text = print_program(p, stage == "cps");
        else
            for (const auto &f : p.functions)
                text += print_family(p, f) + "\n";
        out.dumps.push_back({stage, config.alpha ? alpha_normalize(text) : text});
    };

    Program p = lower_program(checked);
    dump("normalize", p);

    bool sm = config.control == Control::StateMachine;
    if (config.data == Data::Lift) {
        if (sm)
            p = rewrite_return_slots(p);
        for (auto &f : p.functions)
            f = box_extruded(f);
        dump("boxing", p);
    } else {
        p = prepare_environments(p);
        for (auto &f : p.functions)
            if (!f.is_cps)
                f = box_extruded(f);
        dump("env-prepare", p);
    }

    for (auto &f : p.functions) {
        if (!f.is_cps)
            continue;
        f = split(f);
        TailReport r = validate_tails(f);
        if (!r.ok())
            throw InternalError("split: " + r.violations.front());
    }
    dump("split", p);

    if (sm) {
        for (auto &f : p.functions) {
            if (!f.is_cps)
                continue;
            f = defunctionalize(f);
            if (config.direct_dispatch)
                f = optimize_direct_dispatch(f);
            if (!f.state_enum.empty())
                p.enums.push_back(state_enum_of(f));
        }
        dump("defun", p);
    }

    if (config.data == Data::Lift) {
        for (auto &f : p.functions)
            if (f.is_cps)
                f = lambda_lift(f, config.conservative_lift);
        dump("lift", p);
    } else {
        for (auto &f : p.functions) {
            if (!f.is_cps)
                continue;
            auto [g, layout] = generate_environments(f);
            f = std::move(g);
            if (!layout.fields.empty())
                p.structs.push_back(std::move(layout));
        }
        dump("env-generate", p);
    }

    Program flat;
    flat.entry = p.entry;
    flat.enums = p.enums;
    flat.structs = p.structs;
    for (const auto &f : p.functions)
        for (auto &g : float_family(f))
            flat.functions.push_back(std::move(g));
    dump("float", flat);

    out.evir = cps_convert(flat);
    dump("cps", out.evir);
    return out;
}

} // namespace coop
