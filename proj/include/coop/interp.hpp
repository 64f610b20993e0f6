#pragma once

#include <cstdint>
#include <vector>

#include "coop/ast.hpp"
#include "coop/sched.hpp"
#include "coop/world.hpp"

namespace coop {

/// Runs a checked Coop program directly, task by task, under the shared
/// scheduling contract. This is the semantic oracle for every pipeline.
/// Program faults end the run with an ERROR event; throws
/// std::invalid_argument when `args` do not fit the entry function.
RunResult interpret(const Program &checked, const std::vector<int64_t> &args, const World &world = {});

} // namespace coop
