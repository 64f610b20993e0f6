#pragma once

#include <utility>

#include "coop/ast.hpp"

namespace coop {

/// Rewrites every valued cps function `T f(..)` to `void f(.., T* __ret)`:
/// `return v` stores through the slot, `y = f(..)` becomes `f(.., &y)`, and
/// spawns of valued functions pass the runtime-owned `sink`.
Program rewrite_return_slots(const Program &p);

/// Return slots, plus an opaque `__env` handle in every cps function with a
/// `free(__env)` marker before each exit. Runs on goto form, before split.
Program prepare_environments(const Program &p);

/// Builds the environment layout of an env-prepared (and split) function:
/// the handle is allocated and parameter fields set on entry, every variable
/// becomes an `__env->x` field, and inner functions take the handle as an
/// added parameter. An empty layout allocates nothing and passes `null`.
/// Returns the family and its layout (no fields when empty).
std::pair<FunDef, StructDecl> generate_environments(const FunDef &f);

} // namespace coop
