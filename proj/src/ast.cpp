#include "coop/ast.hpp"

namespace coop {

std::string to_string(const Type &t)
{
    auto scalar = [](TypeKind k) { return k == TypeKind::Bool ? "bool" : "int"; };
    switch (t.kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Ptr: return std::string(scalar(t.elem)) + "*";
    case TypeKind::Array: return "int[" + std::to_string(t.length) + "]";
    case TypeKind::Cont: return "cont*";
    case TypeKind::Env: return t.tag.empty() ? "void*" : "struct " + t.tag + "*";
    case TypeKind::State: return "enum " + t.tag;
    }
    return "?";
}

Expr Expr::int_lit(int64_t v, SourcePos p)
{
    Expr e;
    e.kind = ExprKind::IntLit;
    e.ival = v;
    e.pos = p;
    e.type = Type::int_();
    return e;
}

Expr Expr::bool_lit(bool v, SourcePos p)
{
    Expr e;
    e.kind = ExprKind::BoolLit;
    e.ival = v ? 1 : 0;
    e.pos = p;
    e.type = Type::bool_();
    return e;
}

Expr Expr::var(std::string name, Type t, SourcePos p)
{
    Expr e;
    e.kind = ExprKind::Var;
    e.name = std::move(name);
    e.type = std::move(t);
    e.pos = p;
    return e;
}

Expr Expr::unary(std::string op, Expr x)
{
    Expr e;
    e.kind = ExprKind::Unary;
    e.pos = x.pos;
    e.op = std::move(op);
    e.type = e.op == "!" ? Type::bool_() : Type::int_();
    e.kids.push_back(std::move(x));
    return e;
}

Expr Expr::binary(std::string op, Expr l, Expr r)
{
    Expr e;
    e.kind = ExprKind::Binary;
    e.pos = l.pos;
    e.op = std::move(op);
    bool arith = e.op == "+" || e.op == "-" || e.op == "*" || e.op == "/" || e.op == "%";
    e.type = arith ? Type::int_() : Type::bool_();
    e.kids.push_back(std::move(l));
    e.kids.push_back(std::move(r));
    return e;
}

Expr Expr::make_call(std::string callee, std::vector<Expr> args, CallKind kind)
{
    Expr e;
    e.kind = ExprKind::Call;
    e.name = std::move(callee);
    e.kids = std::move(args);
    e.call = kind;
    return e;
}

Expr Expr::addr_of(Expr x)
{
    Expr e;
    e.kind = ExprKind::AddrOf;
    e.pos = x.pos;
    e.type = Type::ptr(x.type.kind == TypeKind::Bool ? TypeKind::Bool : TypeKind::Int);
    e.kids.push_back(std::move(x));
    return e;
}

Expr Expr::deref(Expr x)
{
    Expr e;
    e.kind = ExprKind::Deref;
    e.pos = x.pos;
    e.type = x.type.elem == TypeKind::Bool ? Type::bool_() : Type::int_();
    e.kids.push_back(std::move(x));
    return e;
}

Expr Expr::field(Expr env, std::string name, Type t)
{
    Expr e;
    e.kind = ExprKind::Field;
    e.pos = env.pos;
    e.name = std::move(name);
    e.type = std::move(t);
    e.kids.push_back(std::move(env));
    return e;
}

Expr Expr::tag(std::string name, std::string enum_name)
{
    Expr e;
    e.kind = ExprKind::Tag;
    e.name = std::move(name);
    e.type = Type::state(std::move(enum_name));
    return e;
}

Stmt Stmt::decl(std::string name, Type t)
{
    Stmt s;
    s.kind = StmtKind::Decl;
    s.name = std::move(name);
    s.type = std::move(t);
    return s;
}

Stmt Stmt::decl_init(std::string name, Type t, Expr init)
{
    Stmt s = decl(std::move(name), std::move(t));
    s.exprs.push_back(std::move(init));
    return s;
}

Stmt Stmt::assign(Expr lhs, Expr rhs)
{
    Stmt s;
    s.kind = StmtKind::Assign;
    s.pos = lhs.pos;
    s.exprs.push_back(std::move(lhs));
    s.exprs.push_back(std::move(rhs));
    return s;
}

Stmt Stmt::expr_stmt(Expr e)
{
    Stmt s;
    s.kind = StmtKind::ExprStmt;
    s.pos = e.pos;
    s.exprs.push_back(std::move(e));
    return s;
}

Stmt Stmt::ret()
{
    Stmt s;
    s.kind = StmtKind::Return;
    return s;
}

Stmt Stmt::ret(Expr e)
{
    Stmt s;
    s.kind = StmtKind::Return;
    s.pos = e.pos;
    s.exprs.push_back(std::move(e));
    return s;
}

Stmt Stmt::label(std::string name)
{
    Stmt s;
    s.kind = StmtKind::Label;
    s.name = std::move(name);
    return s;
}

Stmt Stmt::goto_(std::string target)
{
    Stmt s;
    s.kind = StmtKind::Goto;
    s.name = std::move(target);
    return s;
}

Stmt Stmt::if_goto(Expr cond, std::string target)
{
    return if_(std::move(cond), {goto_(std::move(target))});
}

Stmt Stmt::if_(Expr cond, std::vector<Stmt> then, std::vector<Stmt> otherwise)
{
    Stmt s;
    s.kind = StmtKind::If;
    s.pos = cond.pos;
    s.exprs.push_back(std::move(cond));
    s.body = std::move(then);
    s.alt = std::move(otherwise);
    return s;
}

Stmt Stmt::release(Expr e)
{
    Stmt s;
    s.kind = StmtKind::Release;
    s.exprs.push_back(std::move(e));
    return s;
}

Stmt Stmt::invoke()
{
    Stmt s;
    s.kind = StmtKind::Invoke;
    return s;
}

Stmt Stmt::invoke(Expr value)
{
    Stmt s = invoke();
    s.exprs.push_back(std::move(value));
    return s;
}

bool FunDef::has_param(const std::string &n) const
{
    for (const auto &p : params)
        if (p.name == n)
            return true;
    return false;
}

const FunDef *Program::find(const std::string &name) const
{
    for (const auto &f : functions)
        if (f.name == name)
            return &f;
    return nullptr;
}

FunDef *Program::find(const std::string &name)
{
    for (auto &f : functions)
        if (f.name == name)
            return &f;
    return nullptr;
}

bool is_cps_call(const Expr &e)
{
    return e.kind == ExprKind::Call && (e.call == CallKind::Cps || e.call == CallKind::Prim);
}

const Expr *stmt_call(const Stmt &s)
{
    const Expr *e = nullptr;
    switch (s.kind) {
    case StmtKind::ExprStmt:
    case StmtKind::Return:
    case StmtKind::Decl:
        if (!s.exprs.empty())
            e = &s.exprs[0];
        break;
    case StmtKind::Assign: e = &s.exprs[1]; break;
    default: break;
    }
    return e && e->kind == ExprKind::Call ? e : nullptr;
}

Expr *stmt_call(Stmt &s)
{
    return const_cast<Expr *>(stmt_call(static_cast<const Stmt &>(s)));
}

bool is_terminator(const Stmt &s)
{
    return s.kind == StmtKind::Return || s.kind == StmtKind::Goto;
}

} // namespace coop
