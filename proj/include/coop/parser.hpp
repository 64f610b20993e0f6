#pragma once

#include <string_view>

#include "coop/ast.hpp"

namespace coop {

enum class Syntax {
    Source,   // user-facing Coop: no goto, labels, or compiler intrinsics
    Internal, // EventIR text and compiler dumps
};

/// Parses a whole program. Every node carries its source position.
/// Throws CompileError on syntax errors or duplicate function names.
Program parse(std::string_view source, Syntax syntax = Syntax::Source);

Prim primitive_named(std::string_view name);
std::string_view primitive_name(Prim p);

} // namespace coop
