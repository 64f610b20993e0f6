#include "coop/cps.hpp"

#include <set>

namespace coop {

namespace {

Expr cont_var() { return Expr::var("k", Type::cont()); }

bool cps_stmt(const Stmt &s)
{
    const Expr *c = stmt_call(s);
    return c && is_cps_call(*c);
}

class Converter {
  public:
    explicit Converter(const Program &p)
    {
        for (const auto &f : p.functions)
            if (f.is_cps)
                cps_.insert(f.name);
    }

    FunDef function(const FunDef &f)
    {
        FunDef out = f;
        if (!f.is_cps)
            return out;
        out.is_cps = false;
        out.ret = Type::void_();
        out.params.push_back({"k", Type::cont(), -1});
        out.body = list(f.body, true);
        return out;
    }

  private:
    std::set<std::string> cps_;

    bool is_cps_target(const Expr &call) const
    {
        return call.kind == ExprKind::Call && (call.call == CallKind::Prim || cps_.count(call.name));
    }

    std::vector<Stmt> list(const std::vector<Stmt> &body, bool function_body)
    {
        std::vector<Stmt> out;
        for (size_t i = 0; i < body.size(); ++i) {
            const Stmt &s = body[i];
            switch (s.kind) {
            case StmtKind::Return:
                out.push_back(s.exprs.empty() ? Stmt::invoke() : Stmt::invoke(s.exprs[0]));
                out.push_back(Stmt::ret());
                return out;
            case StmtKind::If: {
                Stmt c = s;
                c.body = list(s.body, false);
                c.alt = list(s.alt, false);
                out.push_back(std::move(c));
                continue;
            }
            case StmtKind::Switch: {
                Stmt c = s;
                for (auto &arm : c.body)
                    arm.body = list(arm.body, false);
                out.push_back(std::move(c));
                continue;
            }
            default: break;
            }
            if (!cps_stmt(s)) {
                out.push_back(s);
                continue;
            }
            bool tail = s.kind == StmtKind::ExprStmt && i + 1 < body.size() &&
                        body[i + 1].kind == StmtKind::Return && body[i + 1].exprs.empty();
            if (tail) {
                Expr call = s.exprs[0];
                call.kids.push_back(cont_var());
                out.push_back(Stmt::expr_stmt(std::move(call)));
                out.push_back(Stmt::ret());
                return out;
            }
            // class (c): ext(args); resume(live); return;
            if (i + 2 >= body.size() || body[i + 1].kind != StmtKind::ExprStmt ||
                body[i + 2].kind != StmtKind::Return)
                throw InternalError("cps_convert: malformed tail in '" + stmt_call(s)->name + "'");
            Expr resume = body[i + 1].exprs[0];
            if (s.kind == StmtKind::Assign) {
                if (resume.kids.empty() || resume.kids.back().kind != ExprKind::Var ||
                    resume.kids.back().name != s.exprs[0].name)
                    throw InternalError("cps_convert: resume function does not receive the call result");
                resume.kids.back() = Expr();
                resume.kids.back().kind = ExprKind::Hole;
            }
            Expr push;
            push.kind = ExprKind::Push;
            push.name = resume.name;
            push.kids = std::move(resume.kids);
            push.kids.push_back(cont_var());
            Expr call = *stmt_call(s);
            call.type = Type::void_();
            call.kids.push_back(std::move(push));
            Stmt c = Stmt::expr_stmt(std::move(call));
            c.pos = s.pos;
            out.push_back(std::move(c));
            out.push_back(Stmt::ret());
            return out;
        }
        if (function_body && (out.empty() || (!is_terminator(out.back()) && out.back().kind != StmtKind::Switch))) {
            out.push_back(Stmt::invoke());
            out.push_back(Stmt::ret());
        }
        return out;
    }
};

} // namespace

Program cps_convert(const Program &flat)
{
    Converter c(flat);
    Program out = flat;
    for (auto &f : out.functions) {
        if (!f.inner.empty())
            throw InternalError("cps_convert: nested function '" + f.name + "'");
        f = c.function(f);
    }
    return out;
}

} // namespace coop
