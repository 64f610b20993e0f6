#include "coop/check.hpp"

#include <map>
#include <optional>

#include "coop/diagnostics.hpp"
#include "coop/parser.hpp"

namespace coop {

namespace {

struct Binding {
    int slot;
    Type type;
};

struct Signature {
    bool is_cps;
    Type ret;
    std::vector<Type> params;
};

class Checker {
  public:
    explicit Checker(Program &p) : prog_(p) {}

    void run()
    {
        for (const auto &f : prog_.functions) {
            Signature sig{f.is_cps, f.ret, {}};
            for (const auto &p : f.params)
                sig.params.push_back(p.type);
            sigs_[f.name] = std::move(sig);
            if (primitive_named(f.name) != Prim::None || f.name == "print")
                error(f.pos, "function '" + f.name + "' shadows a built-in");
        }
        const FunDef *entry = prog_.find(prog_.entry);
        if (!entry)
            error({1, 1}, "missing entry function '" + prog_.entry + "'");
        else if (!entry->is_cps)
            error(entry->pos, "entry function '" + prog_.entry + "' must be cps");

        for (auto &f : prog_.functions)
            function(f);
        if (!diags_.empty())
            throw CompileError(std::move(diags_));
    }

  private:
    Program &prog_;
    std::map<std::string, Signature> sigs_;
    std::vector<Diagnostic> diags_;
    std::vector<std::map<std::string, Binding>> scopes_;
    FunDef *fn_ = nullptr;
    int next_slot_ = 0;
    int loop_depth_ = 0;

    struct Abort {};

    void error(SourcePos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }
    [[noreturn]] void fail(SourcePos pos, std::string msg)
    {
        error(pos, std::move(msg));
        throw Abort{};
    }

    void function(FunDef &f)
    {
        fn_ = &f;
        next_slot_ = 0;
        loop_depth_ = 0;
        scopes_.clear();
        scopes_.emplace_back();
        if (f.ret.kind != TypeKind::Void && !f.ret.is_scalar())
            error(f.pos, "return type must be int, bool, or void");
        for (auto &p : f.params) {
            if (!p.type.is_scalar() && p.type.kind != TypeKind::Ptr)
                error(f.pos, "parameter '" + p.name + "' must have scalar or pointer type");
            p.slot = next_slot_++;
            if (!scopes_.back().emplace(p.name, Binding{p.slot, p.type}).second)
                error(f.pos, "duplicate parameter '" + p.name + "'");
        }
        block(f.body, false);
        f.nslots = next_slot_;
    }

    void block(std::vector<Stmt> &body, bool new_scope = true)
    {
        if (new_scope)
            scopes_.emplace_back();
        for (auto &s : body) {
            try {
                stmt(s);
            } catch (const Abort &) {
            }
        }
        if (new_scope)
            scopes_.pop_back();
    }

    const Binding *lookup(const std::string &name) const
    {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end())
                return &f->second;
        }
        return nullptr;
    }

    void declare(Stmt &s)
    {
        s.slot = next_slot_++;
        if (!scopes_.back().emplace(s.name, Binding{s.slot, s.type}).second)
            fail(s.pos, "redeclaration of '" + s.name + "'");
    }

    static bool assignable(const Type &to, const Type &from)
    {
        if (to.kind != from.kind)
            return false;
        if (to.kind == TypeKind::Ptr)
            return to.elem == from.elem;
        return to.is_scalar();
    }

    // Checks a value-producing top-level expression that may be a cps call.
    Type rhs(Expr &e, bool cps_allowed) { return expr(e, cps_allowed); }

    void stmt(Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Block: block(s.body); break;
        case StmtKind::Decl:
            if (!s.exprs.empty()) {
                Type t = rhs(s.exprs[0], true);
                if (s.exprs[0].kind == ExprKind::Alloc && s.type.kind == TypeKind::Ptr)
                    t = s.type;
                if (!assignable(s.type, t))
                    fail(s.exprs[0].pos, "type mismatch: cannot initialize " + to_string(s.type) +
                                             " with " + to_string(t));
            }
            declare(s);
            break;
        case StmtKind::Assign: {
            Type lt = lvalue(s.exprs[0]);
            Type rt = rhs(s.exprs[1], true);
            if (s.exprs[1].kind == ExprKind::Alloc && lt.kind == TypeKind::Ptr)
                rt = lt;
            if (!assignable(lt, rt))
                fail(s.pos, "type mismatch: cannot assign " + to_string(rt) + " to " + to_string(lt));
            break;
        }
        case StmtKind::If:
            condition(s.exprs[0]);
            block(s.body);
            block(s.alt);
            break;
        case StmtKind::While:
            condition(s.exprs[0]);
            ++loop_depth_;
            block(s.body);
            --loop_depth_;
            break;
        case StmtKind::For:
            scopes_.emplace_back();
            for (auto &i : s.init)
                stmt(i);
            if (!s.exprs.empty())
                condition(s.exprs[0]);
            for (auto &st : s.step)
                stmt(st);
            ++loop_depth_;
            block(s.body);
            --loop_depth_;
            scopes_.pop_back();
            break;
        case StmtKind::Break:
        case StmtKind::Continue:
            if (loop_depth_ == 0)
                fail(s.pos, std::string(s.kind == StmtKind::Break ? "break" : "continue") +
                                " outside of a loop");
            break;
        case StmtKind::Return: {
            if (s.exprs.empty()) {
                if (fn_->ret.kind != TypeKind::Void)
                    fail(s.pos, "return without a value in function returning " + to_string(fn_->ret));
                break;
            }
            Type t = rhs(s.exprs[0], true);
            if (fn_->ret.kind == TypeKind::Void)
                fail(s.pos, "return with a value in void function");
            if (!assignable(fn_->ret, t))
                fail(s.pos, "type mismatch: returning " + to_string(t) + " from function returning " +
                                to_string(fn_->ret));
            break;
        }
        case StmtKind::ExprStmt: expr(s.exprs[0], true, true); break;
        case StmtKind::Spawn: {
            Expr &call = s.exprs[0];
            auto it = sigs_.find(call.name);
            if (it == sigs_.end() || !it->second.is_cps)
                fail(call.pos, "spawn target '" + call.name + "' is not a cps function");
            call_args(call, it->second);
            call.call = CallKind::Cps;
            call.type = it->second.ret;
            break;
        }
        case StmtKind::Release: {
            Type t = expr(s.exprs[0]);
            if (t.kind != TypeKind::Ptr)
                fail(s.pos, "free expects a pointer");
            break;
        }
        case StmtKind::Label:
        case StmtKind::Goto: break; // goto form, produced by lowering
        case StmtKind::Switch:
        case StmtKind::Case:
        case StmtKind::Invoke: fail(s.pos, "compiler-internal statement in source program");
        }
    }

    void condition(Expr &e)
    {
        Type t = expr(e);
        if (!t.is_scalar())
            fail(e.pos, "condition must be int or bool");
    }

    Type lvalue(Expr &e)
    {
        if (e.kind == ExprKind::Var) {
            Type t = expr(e);
            if (t.kind == TypeKind::Array)
                fail(e.pos, "cannot assign to array '" + e.name + "'");
            return t;
        }
        if (e.kind == ExprKind::Index || e.kind == ExprKind::Deref)
            return expr(e);
        fail(e.pos, "expression is not assignable");
    }

    void call_args(Expr &call, const Signature &sig)
    {
        if (call.kids.size() != sig.params.size())
            fail(call.pos, "'" + call.name + "' expects " + std::to_string(sig.params.size()) +
                               " argument(s), got " + std::to_string(call.kids.size()));
        for (size_t i = 0; i < call.kids.size(); ++i) {
            Type t = expr(call.kids[i]);
            if (!assignable(sig.params[i], t))
                fail(call.kids[i].pos, "type mismatch in argument " + std::to_string(i + 1) + " of '" +
                                           call.name + "': expected " + to_string(sig.params[i]) +
                                           ", got " + to_string(t));
        }
    }

    static std::optional<int64_t> constant(const Expr &e)
    {
        if (e.kind == ExprKind::IntLit)
            return e.ival;
        if (e.kind == ExprKind::Unary && e.op == "-")
            if (auto v = constant(e.kids[0]))
                return -*v;
        return std::nullopt;
    }

    Type int_arg(Expr &e)
    {
        Type t = expr(e);
        if (t.kind != TypeKind::Int)
            fail(e.pos, "expected an int argument");
        return t;
    }

    Type call(Expr &e, bool cps_allowed, bool statement)
    {
        if (e.call == CallKind::Print || e.name == "print") {
            e.call = CallKind::Print;
            if (!statement)
                fail(e.pos, "print can only be used as a statement");
            if (e.kids.empty() || e.kids[0].kind != ExprKind::StrLit)
                fail(e.pos, "print expects a format string literal");
            const std::string &fmt = e.kids[0].name;
            size_t holes = 0;
            for (size_t i = 0; i < fmt.size(); ++i) {
                if (fmt[i] != '%')
                    continue;
                if (i + 1 < fmt.size() && fmt[i + 1] == 'd') {
                    ++holes;
                    ++i;
                } else if (i + 1 < fmt.size() && fmt[i + 1] == '%') {
                    ++i;
                } else {
                    fail(e.kids[0].pos, "unsupported format directive; only %d and %% are allowed");
                }
            }
            if (holes != e.kids.size() - 1)
                fail(e.pos, "print format expects " + std::to_string(holes) + " argument(s), got " +
                                std::to_string(e.kids.size() - 1));
            e.kids[0].type = Type::void_();
            for (size_t i = 1; i < e.kids.size(); ++i) {
                Type t = expr(e.kids[i]);
                if (!t.is_scalar())
                    fail(e.kids[i].pos, "print arguments must be int or bool");
            }
            e.type = Type::void_();
            return e.type;
        }

        Prim prim = primitive_named(e.name);
        if (prim != Prim::None) {
            e.call = CallKind::Prim;
            e.prim = prim;
            if (!fn_->is_cps)
                fail(e.pos, "cps call in non-cps context");
            if (!cps_allowed)
                fail(e.pos, "cps call '" + e.name + "' must be a statement or the right-hand side of an assignment");
            size_t arity = prim == Prim::Yield ? 0 : prim == Prim::IoWait ? 2 : 1;
            if (e.kids.size() != arity)
                fail(e.pos, "'" + e.name + "' expects " + std::to_string(arity) + " argument(s)");
            for (auto &k : e.kids)
                int_arg(k);
            if (prim == Prim::Sleep)
                if (auto v = constant(e.kids[0]); v && *v < 0)
                    fail(e.kids[0].pos, "negative sleep duration");
            if (prim == Prim::IoWait && e.kids[1].kind != ExprKind::DirLit)
                fail(e.kids[1].pos, "io_wait direction must be IN or OUT");
            e.type = Type::void_();
            return e.type;
        }

        auto it = sigs_.find(e.name);
        if (it == sigs_.end())
            fail(e.pos, "call to undeclared function '" + e.name + "'");
        const Signature &sig = it->second;
        e.call = sig.is_cps ? CallKind::Cps : CallKind::Plain;
        if (sig.is_cps && !fn_->is_cps)
            fail(e.pos, "cps call in non-cps context");
        if (sig.is_cps && !cps_allowed)
            fail(e.pos, "cps call '" + e.name + "' must be a statement or the right-hand side of an assignment");
        call_args(e, sig);
        e.type = sig.ret;
        return e.type;
    }

    Type expr(Expr &e, bool cps_allowed = false, bool statement = false)
    {
        Type t = expr_inner(e, cps_allowed, statement);
        e.type = t;
        if (t.kind == TypeKind::Void && !statement)
            fail(e.pos, "void value used in an expression");
        return t;
    }

    Type expr_inner(Expr &e, bool cps_allowed, bool statement)
    {
        switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::DirLit: return Type::int_();
        case ExprKind::BoolLit: return Type::bool_();
        case ExprKind::StrLit: fail(e.pos, "string literals are only allowed as print formats");
        case ExprKind::Var: {
            const Binding *b = lookup(e.name);
            if (!b)
                fail(e.pos, "use of undeclared variable '" + e.name + "'");
            e.slot = b->slot;
            return b->type;
        }
        case ExprKind::Index: {
            Expr &base = e.kids[0];
            Type bt = base.kind == ExprKind::Var ? var_any(base) : expr(base);
            if (bt.kind != TypeKind::Array && bt.kind != TypeKind::Ptr)
                fail(e.pos, "indexing a value that is neither an array nor a pointer");
            if (expr(e.kids[1]).kind != TypeKind::Int)
                fail(e.kids[1].pos, "array index must be int");
            return bt.kind == TypeKind::Ptr && bt.elem == TypeKind::Bool ? Type::bool_() : Type::int_();
        }
        case ExprKind::AddrOf: {
            Expr &target = e.kids[0];
            if (target.kind == ExprKind::Var) {
                Type t = var_any(target);
                if (!t.is_scalar())
                    fail(e.pos, "address-of applies only to scalar variables and array elements");
                return Type::ptr(t.kind);
            }
            if (target.kind == ExprKind::Index) {
                Type t = expr(target);
                return Type::ptr(t.kind);
            }
            fail(e.pos, "address-of applies only to scalar variables and array elements");
        }
        case ExprKind::Deref: {
            Type t = expr(e.kids[0]);
            if (t.kind != TypeKind::Ptr)
                fail(e.pos, "dereferencing a non-pointer");
            return t.elem == TypeKind::Bool ? Type::bool_() : Type::int_();
        }
        case ExprKind::Unary: {
            Type t = expr(e.kids[0]);
            if (e.op == "-") {
                if (t.kind != TypeKind::Int)
                    fail(e.pos, "unary '-' expects int");
                return Type::int_();
            }
            if (!t.is_scalar())
                fail(e.pos, "'!' expects int or bool");
            return Type::bool_();
        }
        case ExprKind::Binary: {
            Type l = expr(e.kids[0]);
            Type r = expr(e.kids[1]);
            const std::string &op = e.op;
            if (op == "&&" || op == "||") {
                if (!l.is_scalar() || !r.is_scalar())
                    fail(e.pos, "'" + op + "' expects int or bool operands");
                return Type::bool_();
            }
            if (op == "==" || op == "!=") {
                if (!assignable(l, r))
                    fail(e.pos, "type mismatch: comparing " + to_string(l) + " with " + to_string(r));
                return Type::bool_();
            }
            if (l.kind != TypeKind::Int || r.kind != TypeKind::Int)
                fail(e.pos, "type mismatch: '" + op + "' expects int operands");
            if (op == "<" || op == "<=" || op == ">" || op == ">=")
                return Type::bool_();
            return Type::int_();
        }
        case ExprKind::Call: return call(e, cps_allowed, statement);
        case ExprKind::Alloc:
            if (!e.name.empty())
                fail(e.pos, "sizeof is compiler-internal");
            if (expr(e.kids[0]).kind != TypeKind::Int)
                fail(e.pos, "malloc expects an int cell count");
            return Type::ptr(TypeKind::Int);
        default: fail(e.pos, "compiler-internal expression in source program");
        }
    }

    // A variable reference whose array type is acceptable (indexing, address-of).
    Type var_any(Expr &e)
    {
        const Binding *b = lookup(e.name);
        if (!b)
            fail(e.pos, "use of undeclared variable '" + e.name + "'");
        e.slot = b->slot;
        e.type = b->type;
        return b->type;
    }
};

} // namespace

void check(Program &p)
{
    Checker(p).run();
}

} // namespace coop
