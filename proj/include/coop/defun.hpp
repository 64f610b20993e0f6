#pragma once

#include "coop/ast.hpp"

namespace coop {

/// Replaces the inner functions of a split function by one inner function
/// `dispatch(enum <f>_state s)` switching over the former bodies; sibling
/// calls become `dispatch(TAG)`. Tags are the uppercased `<f><inner>` names,
/// which keeps them unique across the program.
/// Functions without inner functions are returned unchanged.
FunDef defunctionalize(const FunDef &split_fn);

/// Inside the dispatch function, turns each `dispatch(TAG); return;` that does
/// not follow an external cps call into `goto <inner>_label;`, the label being
/// placed at the start of the targeted arm.
FunDef optimize_direct_dispatch(const FunDef &defun_fn);

/// Uppercases a name (`countdown__l0` -> `COUNTDOWN__L0`).
std::string state_tag(const std::string &inner);

} // namespace coop
