#pragma once

#include "coop/ast.hpp"

namespace coop {

/// One-pass partial CPS conversion of a flat, closed program into EventIR.
/// Every cps function gets a trailing `cont* k`; tails become
///   (a) `invoke(k[, v]); return;`
///   (b) `g(args, k); return;`
///   (c) `ext(args, push(resume, live..., k)); return;`
/// where the destination of a valued call is replaced by the hole `?`.
/// Non-cps functions are emitted unchanged; no `cps` annotation remains.
Program cps_convert(const Program &flat);

} // namespace coop
