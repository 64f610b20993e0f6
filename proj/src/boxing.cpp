#include "coop/boxing.hpp"

#include <set>

#include "coop/ast_util.hpp"

namespace coop {

namespace {

void collect_extruded(const std::vector<Stmt> &body, std::set<std::string> &out)
{
    visit_exprs(body, [&](const Expr &e) {
        if (e.kind != ExprKind::AddrOf)
            return;
        const Expr &target = e.kids[0];
        if (target.kind == ExprKind::Var)
            out.insert(target.name);
        else if (target.kind == ExprKind::Index && target.kids[0].kind == ExprKind::Var)
            out.insert(target.kids[0].name);
    });
    for (const auto &s : body) {
        if (s.kind == StmtKind::Decl && s.type.kind == TypeKind::Array)
            out.insert(s.name);
        collect_extruded(s.body, out);
        collect_extruded(s.alt, out);
        collect_extruded(s.init, out);
        collect_extruded(s.step, out);
    }
}

void decl_order(const std::vector<Stmt> &body, std::vector<std::string> &out)
{
    for (const auto &s : body) {
        if (s.kind == StmtKind::Decl)
            out.push_back(s.name);
        decl_order(s.init, out);
        decl_order(s.body, out);
        decl_order(s.alt, out);
        decl_order(s.step, out);
    }
}

Expr alloc(int64_t n, Type t)
{
    Expr e;
    e.kind = ExprKind::Alloc;
    e.kids.push_back(Expr::int_lit(n));
    e.type = t;
    return e;
}

} // namespace

std::vector<std::string> extruded_vars(const FunDef &f)
{
    std::set<std::string> found;
    collect_extruded(f.body, found);
    std::vector<std::string> order;
    for (const auto &p : f.params)
        order.push_back(p.name);
    decl_order(f.body, order);
    std::vector<std::string> out;
    for (const auto &v : order)
        if (found.erase(v))
            out.push_back(v);
    return out;
}

FunDef box_extruded(const FunDef &f)
{
    std::vector<std::string> boxed = extruded_vars(f);
    if (boxed.empty())
        return f;
    std::map<std::string, Type> types = declared_types(f);
    std::set<std::string> is_boxed(boxed.begin(), boxed.end());

    auto cell_type = [&](const std::string &v) {
        const Type &t = types.at(v);
        return Type::ptr(t.kind == TypeKind::Array ? TypeKind::Int : t.kind);
    };
    auto cell = [&](const std::string &v) { return Expr::var("__box_" + v, cell_type(v)); };
    auto contents = [&](const std::string &v) {
        Expr d = Expr::deref(cell(v));
        d.type = types.at(v);
        return d;
    };
    auto rewrite = [&](Expr &e) -> bool {
        if (e.kind == ExprKind::AddrOf && e.kids[0].kind == ExprKind::Var && is_boxed.count(e.kids[0].name)) {
            e = cell(e.kids[0].name);
            return true;
        }
        if (e.kind == ExprKind::Var && is_boxed.count(e.name)) {
            e = types.at(e.name).kind == TypeKind::Array ? cell(e.name) : contents(e.name);
            return true;
        }
        return false;
    };
    auto uses_cell = [&](const Expr &e) {
        bool found = false;
        visit_exprs({Stmt::expr_stmt(e)}, [&](const Expr &x) {
            if (x.kind == ExprKind::Var && x.name.rfind("__box_", 0) == 0)
                found = true;
        });
        return found;
    };

    FunDef out = f;
    std::vector<Stmt> body;
    for (const auto &v : boxed) {
        const Type &t = types.at(v);
        int64_t n = t.kind == TypeKind::Array ? t.length : 1;
        body.push_back(Stmt::decl_init("__box_" + v, cell_type(v), alloc(n, cell_type(v))));
        if (f.has_param(v))
            body.push_back(Stmt::assign(contents(v), Expr::var(v, t)));
    }
    auto releases = [&](std::vector<Stmt> &to) {
        for (const auto &v : boxed)
            to.push_back(Stmt::release(cell(v)));
    };

    std::vector<Stmt> pending;
    bool has_rv = false;
    for (const Stmt &orig : f.body) {
        Stmt s = orig;
        if (!pending.empty() && s.kind != StmtKind::Label)
            throw InternalError("boxing: valued cps call not followed by a label");
        if (s.kind == StmtKind::Decl && is_boxed.count(s.name)) {
            if (!s.exprs.empty()) {
                rewrite_expr(s.exprs[0], rewrite);
                body.push_back(Stmt::assign(contents(s.name), s.exprs[0]));
            }
            continue;
        }
        if (s.kind == StmtKind::Assign && is_cps_call(s.exprs[1]) && s.exprs[0].kind == ExprKind::Var &&
            is_boxed.count(s.exprs[0].name)) {
            std::string v = s.exprs[0].name;
            std::string tmp = "__val_" + v;
            if (!types.count(tmp)) {
                types[tmp] = types.at(v);
                body.insert(body.begin(), Stmt::decl(tmp, types.at(v)));
            }
            rewrite_expr(s.exprs[1], rewrite);
            s.exprs[0] = Expr::var(tmp, types.at(v));
            body.push_back(std::move(s));
            pending.push_back(Stmt::assign(contents(v), Expr::var(tmp, types.at(v))));
            continue;
        }
        for (auto &e : s.exprs)
            rewrite_expr(e, rewrite);
        rewrite_exprs(s.body, rewrite);
        if (s.kind == StmtKind::Return) {
            if (!s.exprs.empty() && uses_cell(s.exprs[0])) {
                Expr rv = Expr::var("__rv", f.ret);
                if (!has_rv) {
                    body.insert(body.begin(), Stmt::decl("__rv", f.ret));
                    has_rv = true;
                }
                body.push_back(Stmt::assign(rv, s.exprs[0]));
                s.exprs[0] = rv;
            }
            releases(body);
            body.push_back(std::move(s));
            continue;
        }
        bool label = s.kind == StmtKind::Label;
        body.push_back(std::move(s));
        if (label) {
            for (auto &p : pending)
                body.push_back(std::move(p));
            pending.clear();
        }
    }
    if (body.empty() || !is_terminator(body.back()))
        releases(body);
    out.body = std::move(body);
    return out;
}

} // namespace coop
