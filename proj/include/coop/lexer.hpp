#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coop/ast.hpp"

namespace coop {

enum class TokKind { Ident, Int, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text; // identifier, punctuation, or decoded string literal
    int64_t value = 0;
    SourcePos pos;
};

/// Tokenizes Coop (and EventIR) text. Throws CompileError on bad characters
/// or unterminated literals/comments.
std::vector<Token> lex(std::string_view source);

} // namespace coop
