#include "coop/ast_util.hpp"

#include <algorithm>
#include <set>

namespace coop {

namespace {

void visit_expr(const Expr &e, const std::function<void(const Expr &)> &fn)
{
    fn(e);
    for (const auto &k : e.kids)
        visit_expr(k, fn);
}

void collect_decls(const std::vector<Stmt> &body, std::map<std::string, Type> &out)
{
    for (const auto &s : body) {
        if (s.kind == StmtKind::Decl)
            out[s.name] = s.type;
        collect_decls(s.init, out);
        collect_decls(s.body, out);
        collect_decls(s.alt, out);
        collect_decls(s.step, out);
    }
}

} // namespace

void visit_exprs(const std::vector<Stmt> &body, const std::function<void(const Expr &)> &fn)
{
    for (const auto &s : body) {
        visit_exprs(s.init, fn);
        for (const auto &e : s.exprs)
            visit_expr(e, fn);
        visit_exprs(s.body, fn);
        visit_exprs(s.alt, fn);
        visit_exprs(s.step, fn);
    }
}

bool rewrite_expr(Expr &e, const std::function<bool(Expr &)> &fn)
{
    if (fn(e))
        return true;
    for (auto &k : e.kids)
        rewrite_expr(k, fn);
    return false;
}

void rewrite_exprs(std::vector<Stmt> &body, const std::function<bool(Expr &)> &fn)
{
    for (auto &s : body) {
        rewrite_exprs(s.init, fn);
        for (auto &e : s.exprs)
            rewrite_expr(e, fn);
        rewrite_exprs(s.body, fn);
        rewrite_exprs(s.alt, fn);
        rewrite_exprs(s.step, fn);
    }
}

void visit_lists(std::vector<Stmt> &body, const std::function<void(std::vector<Stmt> &)> &fn)
{
    fn(body);
    for (auto &s : body) {
        visit_lists(s.init, fn);
        visit_lists(s.body, fn);
        visit_lists(s.alt, fn);
        visit_lists(s.step, fn);
    }
}

std::vector<std::string> vars_in_order(const std::vector<Stmt> &body)
{
    std::vector<std::string> out;
    std::set<std::string> seen;
    visit_exprs(body, [&](const Expr &e) {
        if (e.kind == ExprKind::Var && seen.insert(e.name).second)
            out.push_back(e.name);
    });
    return out;
}

std::map<std::string, Type> declared_types(const FunDef &f)
{
    std::map<std::string, Type> out;
    for (const auto &p : f.params)
        out[p.name] = p.type;
    collect_decls(f.body, out);
    return out;
}

std::vector<std::string> free_vars(const FunDef &f)
{
    std::map<std::string, Type> bound = declared_types(f);
    std::vector<std::string> out;
    auto add = [&](const std::string &v) {
        if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    };
    for (const auto &v : vars_in_order(f.body))
        add(v);
    for (const auto &g : f.inner)
        for (const auto &v : free_vars(g))
            add(v);
    return out;
}

} // namespace coop
