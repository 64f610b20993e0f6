#pragma once

#include "coop/ast.hpp"

namespace coop {

/// Resolves every variable use to its declaration slot, types every
/// expression, and classifies every call site (plain, cps, primitive, print).
/// Enforces that cps calls and primitives only occur inside cps functions and
/// only in statement position. Throws CompileError listing every problem.
/// Running it again on its own output changes nothing.
void check(Program &p);

} // namespace coop
