#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

struct Diagnostic {
    SourcePos pos;
    std::string message;
};

/// Raised by the frontend (parse and check) with every diagnostic collected.
class CompileError : public std::runtime_error {
  public:
    explicit CompileError(std::vector<Diagnostic> diags);
    CompileError(SourcePos pos, const std::string &message);

    const std::vector<Diagnostic> &diagnostics() const { return diags_; }

  private:
    std::vector<Diagnostic> diags_;
};

/// One `file:line:col: message` line per diagnostic.
std::string format_diagnostics(const std::string &file, const std::vector<Diagnostic> &diags);

} // namespace coop
