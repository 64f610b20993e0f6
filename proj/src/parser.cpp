#include "coop/parser.hpp"

#include <set>

#include "coop/diagnostics.hpp"
#include "coop/lexer.hpp"

namespace coop {

Prim primitive_named(std::string_view name)
{
    if (name == "sleep") return Prim::Sleep;
    if (name == "io_wait") return Prim::IoWait;
    if (name == "cv_wait") return Prim::CvWait;
    if (name == "cv_signal") return Prim::CvSignal;
    if (name == "cv_broadcast") return Prim::CvBroadcast;
    if (name == "yield") return Prim::Yield;
    return Prim::None;
}

std::string_view primitive_name(Prim p)
{
    switch (p) {
    case Prim::Sleep: return "sleep";
    case Prim::IoWait: return "io_wait";
    case Prim::CvWait: return "cv_wait";
    case Prim::CvSignal: return "cv_signal";
    case Prim::CvBroadcast: return "cv_broadcast";
    case Prim::Yield: return "yield";
    case Prim::None: break;
    }
    return "";
}

namespace {

class Parser {
  public:
    Parser(std::vector<Token> toks, Syntax syntax) : toks_(std::move(toks)), syntax_(syntax) {}

    Program program()
    {
        Program p;
        std::set<std::string> names;
        while (!at_end()) {
            if (internal() && accept_word("entry")) {
                p.entry = expect_ident("entry function name").text;
                expect(";");
                continue;
            }
            if (internal() && peek_word("enum") && peek(2).text == "{") {
                next();
                EnumDecl e;
                e.name = expect_ident("enum name").text;
                expect("{");
                if (!accept("}")) {
                    do {
                        e.tags.push_back(expect_ident("state tag").text);
                        tags_.insert(e.tags.back());
                    } while (accept(","));
                    expect("}");
                }
                accept(";");
                p.enums.push_back(std::move(e));
                continue;
            }
            if (internal() && peek_word("struct") && peek(2).text == "{") {
                next();
                StructDecl s;
                s.name = expect_ident("struct name").text;
                expect("{");
                while (!accept("}")) {
                    Param f;
                    f.type = type();
                    f.name = expect_ident("field name").text;
                    array_suffix(f.type);
                    expect(";");
                    s.fields.push_back(std::move(f));
                }
                accept(";");
                p.structs.push_back(std::move(s));
                continue;
            }
            FunDef f = function();
            if (!names.insert(f.name).second)
                throw CompileError(f.pos, "duplicate function '" + f.name + "'");
            p.functions.push_back(std::move(f));
        }
        return p;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    Syntax syntax_;
    std::set<std::string> tags_;

    bool internal() const { return syntax_ == Syntax::Internal; }
    const Token &peek(size_t off = 0) const
    {
        size_t i = std::min(pos_ + off, toks_.size() - 1);
        return toks_[i];
    }
    bool at_end() const { return peek().kind == TokKind::End; }
    const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    static std::string describe(const Token &t)
    {
        switch (t.kind) {
        case TokKind::End: return "end of input";
        case TokKind::String: return "string literal";
        case TokKind::Int: return "'" + t.text + "'";
        default: return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail(const Token &t, const std::string &what)
    {
        throw CompileError(t.pos, "expected " + what + ", found " + describe(t));
    }

    bool is_punct(const std::string &p, size_t off = 0) const
    {
        return peek(off).kind == TokKind::Punct && peek(off).text == p;
    }
    bool accept(const std::string &p)
    {
        if (is_punct(p)) {
            next();
            return true;
        }
        return false;
    }
    const Token &expect(const std::string &p)
    {
        if (!is_punct(p))
            fail(peek(), "'" + p + "'");
        return next();
    }
    // Reports a missing closer at the position of its opener.
    void expect_close(const std::string &p, SourcePos open)
    {
        if (is_punct(p)) {
            next();
            return;
        }
        if (at_end() && open.line > 0)
            throw CompileError(open, "expected '" + p + "' to close the '" +
                                         std::string(p == "}" ? "{" : "(") + "' opened here");
        fail(peek(), "'" + p + "'");
    }
    bool peek_word(const std::string &w, size_t off = 0) const
    {
        return peek(off).kind == TokKind::Ident && peek(off).text == w;
    }
    bool accept_word(const std::string &w)
    {
        if (peek_word(w)) {
            next();
            return true;
        }
        return false;
    }
    const Token &expect_ident(const std::string &what)
    {
        if (peek().kind != TokKind::Ident || is_keyword(peek().text))
            fail(peek(), what);
        return next();
    }

    static bool is_keyword(const std::string &w)
    {
        static const std::set<std::string> kw = {
            "cps",   "void",  "int",    "bool",  "if",     "else",   "while",  "for",
            "break", "continue", "return", "spawn", "print", "true", "false", "IN",
            "OUT",   "malloc", "free",  "sizeof", "goto",  "switch", "case",   "struct",
            "enum",  "cont",  "push",   "invoke", "sink",  "null"};
        return kw.count(w) > 0;
    }

    bool starts_type() const
    {
        if (peek().kind != TokKind::Ident)
            return false;
        const auto &w = peek().text;
        if (w == "int" || w == "bool" || w == "void")
            return true;
        return internal() && (w == "cont" || w == "struct" || w == "enum");
    }

    Type type()
    {
        const Token &t = peek();
        if (accept_word("int"))
            return accept("*") ? Type::ptr(TypeKind::Int) : Type::int_();
        if (accept_word("bool"))
            return accept("*") ? Type::ptr(TypeKind::Bool) : Type::bool_();
        if (accept_word("void")) {
            if (internal() && accept("*"))
                return Type::env("");
            return Type::void_();
        }
        if (internal()) {
            if (accept_word("cont")) {
                expect("*");
                return Type::cont();
            }
            if (accept_word("struct")) {
                std::string name = expect_ident("struct name").text;
                expect("*");
                return Type::env(name);
            }
            if (accept_word("enum"))
                return Type::state(expect_ident("enum name").text);
        }
        fail(t, "a type");
    }

    void array_suffix(Type &t)
    {
        if (!is_punct("["))
            return;
        const Token &open = next();
        if (t.kind != TypeKind::Int)
            throw CompileError(open.pos, "only int arrays are supported");
        if (peek().kind != TokKind::Int)
            fail(peek(), "array length");
        int64_t n = next().value;
        if (n <= 0 || n > 1'000'000)
            throw CompileError(open.pos, "array length must be between 1 and 1000000");
        expect("]");
        t = Type::array(static_cast<int>(n));
    }

    FunDef function()
    {
        FunDef f;
        f.pos = peek().pos;
        f.is_cps = accept_word("cps");
        f.ret = type();
        f.name = expect_ident("function name").text;
        SourcePos open = expect("(").pos;
        if (!is_punct(")")) {
            if (peek_word("void") && is_punct(")", 1)) {
                next();
            } else {
                do {
                    Param p;
                    p.type = type();
                    p.name = expect_ident("parameter name").text;
                    f.params.push_back(std::move(p));
                } while (accept(","));
            }
        }
        expect_close(")", open);
        f.body = block_body(f.inner);
        return f;
    }

    std::vector<Stmt> block_body()
    {
        std::vector<FunDef> nested;
        auto body = block_body(nested);
        if (!nested.empty())
            throw CompileError(nested.front().pos, "nested function definition not allowed here");
        return body;
    }

    // Parses `{ ... }`; nested function definitions (internal dumps only) go to `nested`.
    std::vector<Stmt> block_body(std::vector<FunDef> &nested)
    {
        SourcePos open = expect("{").pos;
        std::vector<Stmt> out;
        while (!is_punct("}")) {
            if (at_end())
                expect_close("}", open);
            if (internal() && is_nested_function()) {
                nested.push_back(function());
                continue;
            }
            out.push_back(statement());
        }
        next();
        return out;
    }

    bool is_nested_function() const
    {
        if (peek_word("cps"))
            return true;
        // `T name(` at statement level
        size_t off = 0;
        if (!starts_type())
            return false;
        const auto &w = peek().text;
        off = (w == "struct" || w == "enum") ? 2 : 1;
        if (is_punct("*", off))
            ++off;
        return peek(off).kind == TokKind::Ident && is_punct("(", off + 1);
    }

    std::vector<Stmt> sub_statement()
    {
        if (is_punct("{"))
            return block_body();
        std::vector<Stmt> v;
        v.push_back(statement());
        return v;
    }

    Stmt statement()
    {
        const Token &t = peek();
        Stmt s;
        s.pos = t.pos;
        if (is_punct("{")) {
            s.kind = StmtKind::Block;
            s.body = block_body();
            return s;
        }
        if (starts_type()) {
            s = declaration();
            expect(";");
            return s;
        }
        if (t.kind == TokKind::Ident) {
            const std::string w = t.text;
            if (w == "if") {
                next();
                expect("(");
                s.kind = StmtKind::If;
                s.exprs.push_back(expr());
                expect(")");
                s.body = sub_statement();
                if (accept_word("else"))
                    s.alt = sub_statement();
                return s;
            }
            if (w == "while") {
                next();
                expect("(");
                s.kind = StmtKind::While;
                s.exprs.push_back(expr());
                expect(")");
                s.body = sub_statement();
                return s;
            }
            if (w == "for") {
                next();
                expect("(");
                s.kind = StmtKind::For;
                if (!is_punct(";"))
                    s.init.push_back(starts_type() ? declaration() : simple_statement());
                expect(";");
                if (!is_punct(";"))
                    s.exprs.push_back(expr());
                expect(";");
                if (!is_punct(")"))
                    s.step.push_back(simple_statement());
                expect(")");
                s.body = sub_statement();
                return s;
            }
            if (w == "break" || w == "continue") {
                next();
                s.kind = w == "break" ? StmtKind::Break : StmtKind::Continue;
                expect(";");
                return s;
            }
            if (w == "return") {
                next();
                s.kind = StmtKind::Return;
                if (!is_punct(";"))
                    s.exprs.push_back(expr());
                expect(";");
                return s;
            }
            if (w == "spawn") {
                next();
                s.kind = StmtKind::Spawn;
                Expr call = expr();
                if (call.kind != ExprKind::Call || call.call == CallKind::Print)
                    throw CompileError(call.pos, "spawn expects a function call");
                s.exprs.push_back(std::move(call));
                expect(";");
                return s;
            }
            if (w == "free") {
                next();
                s.kind = StmtKind::Release;
                SourcePos open = expect("(").pos;
                s.exprs.push_back(expr());
                expect_close(")", open);
                expect(";");
                return s;
            }
            if (w == "goto") {
                if (!internal())
                    throw CompileError(t.pos, "goto is not allowed in Coop source");
                next();
                s.kind = StmtKind::Goto;
                s.name = expect_ident("label").text;
                expect(";");
                return s;
            }
            if (internal()) {
                if (w == "invoke") {
                    next();
                    s.kind = StmtKind::Invoke;
                    expect("(");
                    expect_ident("continuation");
                    if (accept(","))
                        s.exprs.push_back(expr());
                    expect(")");
                    expect(";");
                    return s;
                }
                if (w == "switch") {
                    next();
                    s.kind = StmtKind::Switch;
                    expect("(");
                    s.exprs.push_back(expr());
                    expect(")");
                    SourcePos open = expect("{").pos;
                    while (!accept("}")) {
                        if (at_end())
                            expect_close("}", open);
                        if (!accept_word("case"))
                            fail(peek(), "'case'");
                        Stmt c;
                        c.kind = StmtKind::Case;
                        c.pos = peek().pos;
                        c.name = expect_ident("state tag").text;
                        expect(":");
                        while (!peek_word("case") && !is_punct("}") && !at_end())
                            c.body.push_back(statement());
                        s.body.push_back(std::move(c));
                    }
                    return s;
                }
                if (is_punct(":", 1) && !is_keyword(w)) {
                    next();
                    next();
                    s.kind = StmtKind::Label;
                    s.name = w;
                    return s;
                }
            }
        }
        s = simple_statement();
        expect(";");
        return s;
    }

    Stmt declaration()
    {
        Stmt s;
        s.pos = peek().pos;
        s.kind = StmtKind::Decl;
        s.type = type();
        if (s.type.kind == TypeKind::Void)
            throw CompileError(s.pos, "variable of type void");
        s.name = expect_ident("variable name").text;
        array_suffix(s.type);
        if (accept("=")) {
            if (s.type.kind == TypeKind::Array)
                throw CompileError(s.pos, "array initializers are not supported");
            s.exprs.push_back(expr());
        }
        return s;
    }

    // Assignment or expression statement, without the trailing ';'.
    Stmt simple_statement()
    {
        SourcePos p = peek().pos;
        Expr e = expr();
        if (accept("=")) {
            if (e.kind != ExprKind::Var && e.kind != ExprKind::Index && e.kind != ExprKind::Deref &&
                e.kind != ExprKind::Field)
                throw CompileError(e.pos, "left-hand side of assignment is not assignable");
            Stmt s = Stmt::assign(std::move(e), expr());
            s.pos = p;
            return s;
        }
        Stmt s = Stmt::expr_stmt(std::move(e));
        s.pos = p;
        return s;
    }

    // Precedence climbing over binary operators.
    static int precedence(const std::string &op)
    {
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=") return 3;
        if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
        if (op == "+" || op == "-") return 5;
        if (op == "*" || op == "/" || op == "%") return 6;
        return 0;
    }

    Expr expr(int min_prec = 1)
    {
        Expr lhs = unary();
        while (peek().kind == TokKind::Punct) {
            std::string op = peek().text;
            int prec = precedence(op);
            if (prec < min_prec || prec == 0)
                break;
            SourcePos p = next().pos;
            Expr rhs = expr(prec + 1);
            Expr b = Expr::binary(op, std::move(lhs), std::move(rhs));
            b.pos = p;
            b.type = {};
            lhs = std::move(b);
        }
        return lhs;
    }

    Expr unary()
    {
        const Token &t = peek();
        if (t.kind == TokKind::Punct && (t.text == "-" || t.text == "!" || t.text == "&" || t.text == "*")) {
            std::string op = next().text;
            Expr inner = unary();
            Expr e;
            e.pos = t.pos;
            if (op == "&") {
                e.kind = ExprKind::AddrOf;
            } else if (op == "*") {
                e.kind = ExprKind::Deref;
            } else {
                e.kind = ExprKind::Unary;
                e.op = op;
            }
            e.kids.push_back(std::move(inner));
            return e;
        }
        return postfix(primary());
    }

    Expr postfix(Expr e)
    {
        while (true) {
            if (is_punct("[")) {
                SourcePos p = next().pos;
                Expr idx = expr();
                expect("]");
                Expr ix;
                ix.kind = ExprKind::Index;
                ix.pos = p;
                ix.kids.push_back(std::move(e));
                ix.kids.push_back(std::move(idx));
                e = std::move(ix);
            } else if (internal() && is_punct("->")) {
                SourcePos p = next().pos;
                Expr f;
                f.kind = ExprKind::Field;
                f.pos = p;
                f.name = expect_ident("field name").text;
                f.kids.push_back(std::move(e));
                e = std::move(f);
            } else {
                return e;
            }
        }
    }

    std::vector<Expr> call_args(SourcePos open)
    {
        std::vector<Expr> args;
        if (!is_punct(")")) {
            do {
                args.push_back(expr());
            } while (accept(","));
        }
        expect_close(")", open);
        return args;
    }

    Expr primary()
    {
        const Token &t = peek();
        Expr e;
        e.pos = t.pos;
        switch (t.kind) {
        case TokKind::Int:
            next();
            return Expr::int_lit(t.value, t.pos);
        case TokKind::String:
            next();
            e.kind = ExprKind::StrLit;
            e.name = t.text;
            return e;
        case TokKind::Punct:
            if (t.text == "(") {
                next();
                Expr inner = expr();
                expect(")");
                return inner;
            }
            if (internal() && t.text == "?") {
                next();
                e.kind = ExprKind::Hole;
                return e;
            }
            fail(t, "an expression");
        case TokKind::End:
            fail(t, "an expression");
        case TokKind::Ident:
            break;
        }
        const std::string w = next().text;
        if (w == "true" || w == "false")
            return Expr::bool_lit(w == "true", t.pos);
        if (w == "IN" || w == "OUT") {
            e.kind = ExprKind::DirLit;
            e.ival = w == "IN" ? 0 : 1;
            e.type = Type::int_();
            return e;
        }
        if (internal() && w == "null") {
            e.kind = ExprKind::Null;
            return e;
        }
        if (internal() && w == "sink") {
            e.kind = ExprKind::Sink;
            return e;
        }
        if (w == "malloc") {
            e.kind = ExprKind::Alloc;
            SourcePos open = expect("(").pos;
            if (internal() && accept_word("sizeof")) {
                expect("(");
                if (!accept_word("struct"))
                    fail(peek(), "'struct'");
                e.name = expect_ident("struct name").text;
                expect(")");
            } else {
                e.kids.push_back(expr());
            }
            expect_close(")", open);
            return e;
        }
        if (internal() && w == "push") {
            e.kind = ExprKind::Push;
            SourcePos open = expect("(").pos;
            e.name = expect_ident("function name").text;
            while (accept(","))
                e.kids.push_back(expr());
            expect_close(")", open);
            return e;
        }
        if (is_keyword(w) && w != "print")
            throw CompileError(t.pos, "expected an expression, found '" + w + "'");
        if (is_punct("(")) {
            SourcePos open = next().pos;
            e.kind = ExprKind::Call;
            e.name = w;
            e.kids = call_args(open);
            if (w == "print") {
                e.call = CallKind::Print;
            } else if ((e.prim = primitive_named(w)) != Prim::None) {
                e.call = CallKind::Prim;
            }
            return e;
        }
        if (internal() && tags_.count(w)) {
            e.kind = ExprKind::Tag;
            e.name = w;
            return e;
        }
        e.kind = ExprKind::Var;
        e.name = w;
        return e;
    }
};

} // namespace

Program parse(std::string_view source, Syntax syntax)
{
    Parser p(lex(source), syntax);
    return p.program();
}

} // namespace coop
