#include "coop/lexer.hpp"

#include <cctype>

#include "coop/diagnostics.hpp"

namespace coop {

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n = 1) {
        while (n-- > 0 && i < src.size()) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto peek = [&](size_t off = 0) { return i + off < src.size() ? src[i + off] : '\0'; };

    static const char *puncts[] = {"->", "<=", ">=", "==", "!=", "&&", "||", "(", ")", "{", "}",
                                   "[",  "]",  ";",  ",",  "=",  "<",  ">",  "+", "-", "*", "/",
                                   "%",  "!",  "&",  ":",  "?"};

    while (i < src.size()) {
        char c = peek();
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && peek() != '\n')
                advance();
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            SourcePos start{line, col};
            advance(2);
            while (i < src.size() && !(peek() == '*' && peek(1) == '/'))
                advance();
            if (i >= src.size())
                throw CompileError(start, "unterminated comment");
            advance(2);
            continue;
        }

        Token t;
        t.pos = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = TokKind::Ident;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                t.text += peek();
                advance();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = TokKind::Int;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                t.text += peek();
                advance();
            }
            try {
                t.value = std::stoll(t.text);
            } catch (const std::out_of_range &) {
                throw CompileError(t.pos, "integer literal out of range");
            }
        } else if (c == '"') {
            t.kind = TokKind::String;
            advance();
            while (true) {
                if (i >= src.size() || peek() == '\n')
                    throw CompileError(t.pos, "unterminated string literal");
                char ch = peek();
                if (ch == '"') {
                    advance();
                    break;
                }
                if (ch == '\\') {
                    char esc = peek(1);
                    switch (esc) {
                    case 'n': t.text += '\n'; break;
                    case 't': t.text += '\t'; break;
                    case '\\': t.text += '\\'; break;
                    case '"': t.text += '"'; break;
                    default:
                        throw CompileError({line, col}, std::string("unknown escape '\\") + esc + "'");
                    }
                    advance(2);
                    continue;
                }
                t.text += ch;
                advance();
            }
        } else {
            t.kind = TokKind::Punct;
            for (const char *p : puncts) {
                std::string_view pv(p);
                if (src.substr(i, pv.size()) == pv) {
                    t.text = p;
                    break;
                }
            }
            if (t.text.empty())
                throw CompileError(t.pos, std::string("unexpected character '") + c + "'");
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = TokKind::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

} // namespace coop
