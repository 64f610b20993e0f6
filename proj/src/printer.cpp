#include "coop/printer.hpp"

#include <map>
#include <set>
#include <sstream>

#include "coop/lexer.hpp"
#include "coop/parser.hpp"

namespace coop {

std::string escape_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        default: out += c;
        }
    }
    return out + "\"";
}

namespace {

int binary_prec(const std::string &op)
{
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    return 6;
}

constexpr int kUnaryPrec = 7;
constexpr int kPostfixPrec = 8;

int expr_prec(const Expr &e)
{
    switch (e.kind) {
    case ExprKind::Binary: return binary_prec(e.op);
    case ExprKind::Unary:
    case ExprKind::AddrOf:
    case ExprKind::Deref: return kUnaryPrec;
    default: return kPostfixPrec + 1;
    }
}

void emit(std::string &out, const Expr &e, int min_prec);

void emit_wrapped(std::string &out, const Expr &e, int min_prec)
{
    if (expr_prec(e) < min_prec) {
        out += "(";
        emit(out, e, 0);
        out += ")";
    } else {
        emit(out, e, min_prec);
    }
}

void emit_args(std::string &out, const std::vector<Expr> &args, size_t from = 0)
{
    for (size_t i = from; i < args.size(); ++i) {
        if (i > from)
            out += ", ";
        emit(out, args[i], 0);
    }
}

void emit(std::string &out, const Expr &e, int)
{
    switch (e.kind) {
    case ExprKind::IntLit: out += std::to_string(e.ival); break;
    case ExprKind::BoolLit: out += e.ival ? "true" : "false"; break;
    case ExprKind::DirLit: out += e.ival == 0 ? "IN" : "OUT"; break;
    case ExprKind::StrLit: out += escape_string(e.name); break;
    case ExprKind::Null: out += "null"; break;
    case ExprKind::Sink: out += "sink"; break;
    case ExprKind::Hole: out += "?"; break;
    case ExprKind::Var:
    case ExprKind::Tag: out += e.name; break;
    case ExprKind::Index:
        emit_wrapped(out, e.kids[0], kPostfixPrec);
        out += "[";
        emit(out, e.kids[1], 0);
        out += "]";
        break;
    case ExprKind::Field:
        emit_wrapped(out, e.kids[0], kPostfixPrec);
        out += "->" + e.name;
        break;
    case ExprKind::AddrOf:
        out += "&";
        emit_wrapped(out, e.kids[0], kUnaryPrec);
        break;
    case ExprKind::Deref:
        out += "*";
        emit_wrapped(out, e.kids[0], kUnaryPrec);
        break;
    case ExprKind::Unary:
        out += e.op;
        // keep "- -x" from lexing as a different token sequence
        if (e.op == "-" && e.kids[0].kind == ExprKind::Unary && e.kids[0].op == "-")
            out += " ";
        emit_wrapped(out, e.kids[0], kUnaryPrec);
        break;
    case ExprKind::Binary: {
        int p = binary_prec(e.op);
        emit_wrapped(out, e.kids[0], p);
        out += " " + e.op + " ";
        emit_wrapped(out, e.kids[1], p + 1);
        break;
    }
    case ExprKind::Call:
        out += e.name + "(";
        emit_args(out, e.kids);
        out += ")";
        break;
    case ExprKind::Push:
        out += "push(" + e.name;
        for (const auto &k : e.kids) {
            out += ", ";
            emit(out, k, 0);
        }
        out += ")";
        break;
    case ExprKind::Alloc:
        out += "malloc(";
        if (!e.name.empty())
            out += "sizeof(struct " + e.name + ")";
        else
            emit(out, e.kids[0], 0);
        out += ")";
        break;
    }
}

class StmtPrinter {
  public:
    explicit StmtPrinter(std::ostringstream &os) : os_(os) {}

    void function(const FunDef &f, int depth)
    {
        indent(depth);
        if (f.is_cps)
            os_ << "cps ";
        os_ << to_string(f.ret) << " " << f.name << "(";
        for (size_t i = 0; i < f.params.size(); ++i) {
            if (i)
                os_ << ", ";
            os_ << print_type_decl(f.params[i].type, f.params[i].name);
        }
        os_ << ") {\n";
        // Inner functions go right before the trailing tail call of the outer body.
        size_t split_at = f.body.size();
        if (!f.inner.empty() && f.body.size() >= 2 && f.body.back().kind == StmtKind::Return &&
            f.body[f.body.size() - 2].kind == StmtKind::ExprStmt)
            split_at = f.body.size() - 2;
        for (size_t i = 0; i < split_at; ++i)
            stmt(f.body[i], depth + 1);
        for (const auto &g : f.inner)
            function(g, depth + 1);
        for (size_t i = split_at; i < f.body.size(); ++i)
            stmt(f.body[i], depth + 1);
        indent(depth);
        os_ << "}\n";
    }

    void stmt(const Stmt &s, int depth)
    {
        if (s.kind == StmtKind::Label) {
            indent(depth > 0 ? depth - 1 : 0);
            os_ << " " << s.name << ":\n";
            return;
        }
        if (s.kind == StmtKind::Case) {
            indent(depth > 0 ? depth - 1 : 0);
            os_ << " case " << s.name << ":\n";
            for (const auto &b : s.body)
                stmt(b, depth);
            return;
        }
        indent(depth);
        switch (s.kind) {
        case StmtKind::If:
            os_ << "if (" << print_expr(s.exprs[0]) << ")";
            if (s.alt.empty() && s.body.size() == 1 && s.body[0].kind == StmtKind::Goto) {
                os_ << " goto " << s.body[0].name << ";\n";
                return;
            }
            block(s.body, depth);
            if (!s.alt.empty()) {
                os_ << " else";
                block(s.alt, depth);
            }
            os_ << "\n";
            return;
        case StmtKind::While:
            os_ << "while (" << print_expr(s.exprs[0]) << ")";
            block(s.body, depth);
            os_ << "\n";
            return;
        case StmtKind::For:
            os_ << "for (" << (s.init.empty() ? "" : simple(s.init[0])) << "; "
                << (s.exprs.empty() ? "" : print_expr(s.exprs[0])) << "; "
                << (s.step.empty() ? "" : simple(s.step[0])) << ")";
            block(s.body, depth);
            os_ << "\n";
            return;
        case StmtKind::Block:
            os_ << "{\n";
            for (const auto &b : s.body)
                stmt(b, depth + 1);
            indent(depth);
            os_ << "}\n";
            return;
        case StmtKind::Switch:
            os_ << "switch (" << print_expr(s.exprs[0]) << ") {\n";
            for (const auto &c : s.body)
                stmt(c, depth + 2);
            indent(depth);
            os_ << "}\n";
            return;
        default:
            os_ << simple(s) << ";\n";
        }
    }

    static std::string simple(const Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Decl: {
            std::string out = print_type_decl(s.type, s.name);
            if (!s.exprs.empty())
                out += " = " + print_expr(s.exprs[0]);
            return out;
        }
        case StmtKind::Assign: return print_expr(s.exprs[0]) + " = " + print_expr(s.exprs[1]);
        case StmtKind::ExprStmt: return print_expr(s.exprs[0]);
        case StmtKind::Return: return s.exprs.empty() ? "return" : "return " + print_expr(s.exprs[0]);
        case StmtKind::Break: return "break";
        case StmtKind::Continue: return "continue";
        case StmtKind::Goto: return "goto " + s.name;
        case StmtKind::Spawn: return "spawn " + print_expr(s.exprs[0]);
        case StmtKind::Release: return "free(" + print_expr(s.exprs[0]) + ")";
        case StmtKind::Invoke:
            return s.exprs.empty() ? "invoke(k)" : "invoke(k, " + print_expr(s.exprs[0]) + ")";
        default: return "/* ? */";
        }
    }

  private:
    std::ostringstream &os_;

    void indent(int depth)
    {
        for (int i = 0; i < depth; ++i)
            os_ << "  ";
    }

    static bool is_compound(const Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::If:
        case StmtKind::While:
        case StmtKind::For:
        case StmtKind::Block:
        case StmtKind::Switch:
        case StmtKind::Label:
        case StmtKind::Case: return true;
        default: return false;
        }
    }

    void block(const std::vector<Stmt> &body, int depth)
    {
        bool inline_form = body.size() <= 2;
        for (const auto &b : body)
            inline_form = inline_form && !is_compound(b);
        if (inline_form) {
            os_ << " {";
            for (const auto &b : body)
                os_ << " " << simple(b) << ";";
            os_ << " }";
            return;
        }
        os_ << " {\n";
        for (const auto &b : body)
            stmt(b, depth + 1);
        indent(depth);
        os_ << "}";
    }
};

void print_decls(std::ostringstream &os, const Program &p, const FunDef *only)
{
    for (const auto &e : p.enums) {
        if (only && e.name != only->state_enum)
            continue;
        os << "enum " << e.name << " {";
        for (size_t i = 0; i < e.tags.size(); ++i)
            os << (i ? ", " : " ") << e.tags[i];
        os << " };\n";
    }
    for (const auto &s : p.structs) {
        if (only && s.name != "env_" + only->name)
            continue;
        os << "struct " << s.name << " {";
        for (const auto &f : s.fields)
            os << " " << print_type_decl(f.type, f.name) << ";";
        os << " };\n";
    }
}

} // namespace

std::string print_expr(const Expr &e)
{
    std::string out;
    emit(out, e, 0);
    return out;
}

std::string print_type_decl(const Type &t, const std::string &name)
{
    if (t.kind == TypeKind::Array)
        return "int " + name + "[" + std::to_string(t.length) + "]";
    return to_string(t) + " " + name;
}

std::string print_function(const FunDef &f)
{
    std::ostringstream os;
    StmtPrinter(os).function(f, 0);
    return os.str();
}

std::string print_family(const Program &p, const FunDef &f)
{
    std::ostringstream os;
    print_decls(os, p, &f);
    StmtPrinter(os).function(f, 0);
    return os.str();
}

std::string print_program(const Program &p, bool entry_line)
{
    std::ostringstream os;
    if (entry_line)
        os << "entry " << p.entry << ";\n";
    print_decls(os, p, nullptr);
    StmtPrinter printer(os);
    for (size_t i = 0; i < p.functions.size(); ++i) {
        if (i || entry_line || !p.enums.empty() || !p.structs.empty())
            os << "\n";
        printer.function(p.functions[i], 0);
    }
    return os.str();
}

std::string alpha_normalize(std::string_view text)
{
    static const std::set<std::string> fixed = {
        "cps",   "void",  "int",   "bool",     "if",     "else",     "while",   "for",
        "break", "continue", "return", "spawn", "print", "true",  "false",   "IN",
        "OUT",   "malloc", "free", "sizeof",   "goto",   "switch",   "case",    "struct",
        "enum",  "cont",  "push",  "invoke",   "sink",   "null",     "entry",   "sleep",
        "io_wait", "cv_wait", "cv_signal", "cv_broadcast", "yield"};
    std::map<std::string, std::string> renames;
    std::string out;
    for (const auto &t : lex(text)) {
        if (t.kind == TokKind::End)
            break;
        std::string piece;
        if (t.kind == TokKind::String) {
            piece = escape_string(t.text);
        } else if (t.kind == TokKind::Ident && !fixed.count(t.text)) {
            auto [it, fresh] = renames.try_emplace(t.text, "v" + std::to_string(renames.size()));
            piece = it->second;
        } else {
            piece = t.text;
        }
        if (!out.empty())
            out += ' ';
        out += piece;
    }
    return out;
}

} // namespace coop
