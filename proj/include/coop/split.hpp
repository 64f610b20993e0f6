#pragma once

#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

/// Turns every labelled block of a goto-form cps function into an inner
/// function and every jump into a tail call. Declarations are hoisted to the
/// outer function, whose body becomes the decls plus `first(); return;`.
/// A body without labels is returned unchanged.
FunDef split(const FunDef &f);

/// Tail classes of split functions.
enum class TailClass : char {
    Return = 'a',   // return, with or without value
    TailCall = 'b', // tail call to a cps function (or an intra-switch goto)
    Resume = 'c',   // external cps call followed by a tail call to an inner function
};

struct TailInfo {
    std::string function; // inner function name, or the outer one
    TailClass cls;
    SourcePos pos;
};

struct TailReport {
    std::vector<TailInfo> tails;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Classifies every tail of `f` and its inner functions.
TailReport validate_tails(const FunDef &f);

} // namespace coop
