// Small traversal helpers shared by the transformation passes.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

/// Pre-order visit of every expression in `body` (nested statements included,
/// nested functions excluded).
void visit_exprs(const std::vector<Stmt> &body, const std::function<void(const Expr &)> &fn);

/// Pre-order rewrite. When `fn` returns true the node is considered replaced
/// and its children are not visited.
void rewrite_exprs(std::vector<Stmt> &body, const std::function<bool(Expr &)> &fn);
bool rewrite_expr(Expr &e, const std::function<bool(Expr &)> &fn);

/// Calls `fn` on every statement list (the body itself first).
void visit_lists(std::vector<Stmt> &body, const std::function<void(std::vector<Stmt> &)> &fn);

/// Variable names in order of first use.
std::vector<std::string> vars_in_order(const std::vector<Stmt> &body);

/// Types of the parameters and of every declared local of `f`.
std::map<std::string, Type> declared_types(const FunDef &f);

/// Variables used in `f` (or its inner functions) that `f` neither declares
/// nor receives.
std::vector<std::string> free_vars(const FunDef &f);

} // namespace coop
