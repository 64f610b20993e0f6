#pragma once

#include <string>
#include <string_view>

#include "coop/ast.hpp"

namespace coop {

std::string print_expr(const Expr &e);
std::string print_type_decl(const Type &t, const std::string &name);

/// Pretty-prints a function, including any nested inner functions.
std::string print_function(const FunDef &f);

/// Prints the enum/struct declarations belonging to `f` followed by `f`.
std::string print_family(const Program &p, const FunDef &f);

/// Prints the whole program. With `entry_line` the `entry <name>;` header
/// used by `.evir` files is emitted first.
std::string print_program(const Program &p, bool entry_line = false);

/// Canonicalizes text for golden comparison: whitespace collapsed to single
/// spaces between tokens and every non-keyword identifier renamed to `v<N>`
/// in order of first occurrence.
std::string alpha_normalize(std::string_view text);

std::string escape_string(std::string_view s);

} // namespace coop
