#include "coop/diagnostics.hpp"

namespace coop {

namespace {
std::string summary(const std::vector<Diagnostic> &diags)
{
    if (diags.empty())
        return "compile error";
    const auto &d = diags.front();
    return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": " + d.message;
}
} // namespace

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(summary(diags)), diags_(std::move(diags))
{
}

CompileError::CompileError(SourcePos pos, const std::string &message)
    : CompileError(std::vector<Diagnostic>{{pos, message}})
{
}

std::string format_diagnostics(const std::string &file, const std::vector<Diagnostic> &diags)
{
    std::string out;
    for (const auto &d : diags) {
        out += file + ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": " +
               d.message + "\n";
    }
    return out;
}

} // namespace coop
