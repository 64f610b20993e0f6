#pragma once

#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

/// Variables of `f` whose address is taken, plus every local array, in
/// declaration order (parameters first).
std::vector<std::string> extruded_vars(const FunDef &f);

/// Moves every extruded variable of a goto-form function into a heap cell
/// `__box_<x>` allocated at entry and released before every exit.
FunDef box_extruded(const FunDef &f);

} // namespace coop
