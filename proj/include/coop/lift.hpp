#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

/// Variables live at the entry of each inner function of a split function
/// (fixpoint over the inner-function call graph).
std::map<std::string, std::set<std::string>> inner_liveness(const FunDef &split_fn);

/// Parameter lifting: every inner function receives the variables live at its
/// entry (all of the outer variables when `conservative`), appended after its
/// own parameters; call sites pass them along. The resume function of a
/// valued cps call always takes the destination variable last.
FunDef lambda_lift(const FunDef &split_fn, bool conservative = false);

/// Block floating: inner functions become top-level `<outer>__<inner>`
/// functions, listed before the outer one.
std::vector<FunDef> float_family(const FunDef &f);

} // namespace coop
