#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

enum class Control { Callbacks, StateMachine };
enum class Data { Lift, Env };

struct PipelineConfig {
    Control control = Control::Callbacks;
    Data data = Data::Lift;
    bool direct_dispatch = true;
    bool conservative_lift = false;
    std::set<std::string> dumps; // stage names to capture
    bool alpha = false;          // alpha-normalize captured dumps
};

/// `callbacks+lift`, `statemachine+env`, ...
std::string pipeline_name(const PipelineConfig &c);
/// Inverse of pipeline_name; throws std::invalid_argument.
PipelineConfig parse_pipeline(const std::string &name);
/// The four control x data combinations.
std::vector<PipelineConfig> all_pipelines();

/// Stage names accepted by `dumps`, in pipeline order.
const std::vector<std::string> &dump_stages();

struct Compiled {
    Program evir;
    std::vector<std::pair<std::string, std::string>> dumps; // (stage, text)
};

/// Runs every pass of the configured pipeline on a checked program.
/// Throws InternalError when a pass invariant fails.
Compiled compile(const Program &checked, const PipelineConfig &config);

} // namespace coop
