#pragma once

#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

/// Replaces every structured control construct of a checked function by
/// `if (c) goto L;`, `goto L;` and labels. Also:
///  - gives every local a function-unique name (shadowing decls are renamed),
///  - lowers `&&` / `||` to short-circuit jumps,
///  - routes every cps call result into a plain variable (fresh `__t<n>`),
///  - places a label after every cps call that is not followed by a goto
///    (always after a valued one), so each call is followed by a jump.
/// Fresh labels are `__l<n>`, numbered per function from zero.
FunDef lower_control(const FunDef &f);

/// Applies lower_control to every function.
Program lower_program(const Program &p);

/// Structural GotoForm violations (empty when the body is well formed).
std::vector<std::string> goto_form_violations(const FunDef &f);

/// Labels not reachable from the function entry.
std::vector<std::string> dead_labels(const FunDef &f);

/// Logical negation with comparison flipping (`!(a > b)` becomes `a <= b`).
Expr negate(Expr e);

} // namespace coop
