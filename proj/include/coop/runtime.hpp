#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "coop/ast.hpp"
#include "coop/sched.hpp"
#include "coop/world.hpp"

namespace coop {

/// EventIR compiled to flat per-function instruction lists.
class Module;

/// Resolves names, slots and struct layouts of an EventIR program.
/// Throws InternalError on malformed input (unknown names, arity mismatch).
std::shared_ptr<const Module> load_module(const Program &evir);

/// Runs the event loop from the module's entry function. Faults in the
/// program end the run with an ERROR event; throws std::invalid_argument
/// when `args` do not fit the entry function.
RunResult run_event_loop(const Module &m, const std::vector<int64_t> &args, const World &world = {});
RunResult run_event_loop(const Program &evir, const std::vector<int64_t> &args, const World &world = {});

} // namespace coop
