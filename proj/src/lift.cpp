#include "coop/lift.hpp"

#include <algorithm>

#include "coop/ast_util.hpp"

namespace coop {

namespace {

using VarSet = std::set<std::string>;

void uses(const Expr &e, VarSet &out)
{
    if (e.kind == ExprKind::Var)
        out.insert(e.name);
    for (const auto &k : e.kids)
        uses(k, out);
}

class Liveness {
  public:
    explicit Liveness(const FunDef &f)
    {
        for (const auto &g : f.inner) {
            inner_.insert(g.name);
            live_in[g.name];
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto &g : f.inner) {
                VarSet in = list(g.body, 0, {}, changed);
                for (const auto &p : g.params)
                    in.erase(p.name);
                if (in != live_in[g.name]) {
                    live_in[g.name] = std::move(in);
                    changed = true;
                }
            }
        }
    }

    std::map<std::string, VarSet> live_in;

  private:
    VarSet inner_;
    std::map<std::string, VarSet> labels_;

    VarSet list(const std::vector<Stmt> &body, size_t from, VarSet out, bool &changed)
    {
        VarSet live = std::move(out);
        for (size_t i = body.size(); i-- > from;)
            live = stmt(body[i], std::move(live), changed);
        return live;
    }

    VarSet stmt(const Stmt &s, VarSet live, bool &changed)
    {
        switch (s.kind) {
        case StmtKind::Return: {
            VarSet r;
            for (const auto &e : s.exprs)
                uses(e, r);
            return r;
        }
        case StmtKind::Goto: return labels_[s.name];
        case StmtKind::Label: {
            VarSet &l = labels_[s.name];
            if (l != live) {
                l = live;
                changed = true;
            }
            return live;
        }
        case StmtKind::If: {
            VarSet r = list(s.body, 0, live, changed);
            VarSet a = list(s.alt, 0, live, changed);
            r.insert(a.begin(), a.end());
            uses(s.exprs[0], r);
            return r;
        }
        case StmtKind::Switch: {
            VarSet r;
            for (const auto &c : s.body) {
                VarSet arm = list(c.body, 0, {}, changed);
                r.insert(arm.begin(), arm.end());
            }
            uses(s.exprs[0], r);
            return r;
        }
        case StmtKind::Assign: {
            const Expr &lhs = s.exprs[0];
            if (lhs.kind == ExprKind::Var)
                live.erase(lhs.name);
            else
                uses(lhs, live);
            uses(s.exprs[1], live);
            return live;
        }
        case StmtKind::ExprStmt: {
            const Expr &e = s.exprs[0];
            if (e.kind == ExprKind::Call && inner_.count(e.name)) {
                // tail call: whatever follows is unreachable
                VarSet r = live_in[e.name];
                uses(e, r);
                return r;
            }
            uses(e, live);
            return live;
        }
        case StmtKind::Decl:
            live.erase(s.name);
            for (const auto &e : s.exprs)
                uses(e, live);
            return live;
        default:
            for (const auto &e : s.exprs)
                uses(e, live);
            return live;
        }
    }
};

// Destination variable of the valued cps call resumed by each inner function.
std::map<std::string, std::string> resume_dests(const FunDef &f)
{
    std::map<std::string, std::string> out;
    auto scan = [&](std::vector<Stmt> &body) {
        for (size_t i = 0; i + 1 < body.size(); ++i) {
            const Stmt &s = body[i];
            const Stmt &next = body[i + 1];
            if (s.kind == StmtKind::Assign && is_cps_call(s.exprs[1]) && next.kind == StmtKind::ExprStmt &&
                next.exprs[0].kind == ExprKind::Call)
                out[next.exprs[0].name] = s.exprs[0].name;
        }
    };
    FunDef copy = f;
    for (auto &g : copy.inner)
        visit_lists(g.body, scan);
    return out;
}

} // namespace

std::map<std::string, std::set<std::string>> inner_liveness(const FunDef &split_fn)
{
    return Liveness(split_fn).live_in;
}

FunDef lambda_lift(const FunDef &f, bool conservative)
{
    if (f.inner.empty())
        return f;
    std::map<std::string, Type> types = declared_types(f);

    // global first-use order: outer params, then every variable as it appears
    std::vector<std::string> order;
    for (const auto &p : f.params)
        order.push_back(p.name);
    auto add_order = [&](const std::vector<Stmt> &body) {
        for (const auto &v : vars_in_order(body))
            if (std::find(order.begin(), order.end(), v) == order.end())
                order.push_back(v);
    };
    add_order(f.body);
    for (const auto &g : f.inner)
        add_order(g.body);

    std::map<std::string, VarSet> live = inner_liveness(f);
    std::map<std::string, std::string> dests = resume_dests(f);

    std::map<std::string, std::vector<std::string>> lifted;
    for (const auto &g : f.inner) {
        auto dest = dests.find(g.name);
        std::vector<std::string> ps;
        for (const auto &v : order) {
            if (!types.count(v) || g.has_param(v))
                continue;
            if (dest != dests.end() && v == dest->second)
                continue;
            if (conservative || live[g.name].count(v))
                ps.push_back(v);
        }
        if (dest != dests.end())
            ps.push_back(dest->second);
        lifted[g.name] = std::move(ps);
    }

    auto pass_args = [&](std::vector<Stmt> &body) {
        rewrite_exprs(body, [&](Expr &e) {
            if (e.kind == ExprKind::Call && lifted.count(e.name)) {
                for (const auto &v : lifted[e.name])
                    e.kids.push_back(Expr::var(v, types.at(v)));
                return true;
            }
            return false;
        });
    };

    FunDef out = f;
    out.inner.clear();
    for (const auto &g0 : f.inner) {
        FunDef g = g0;
        const auto &ps = lifted[g.name];
        pass_args(g.body);
        for (const auto &v : ps)
            g.params.push_back({v, types.at(v), -1});
        // locals the function still needs
        std::vector<Stmt> decls;
        VarSet used;
        visit_exprs(g.body, [&](const Expr &e) {
            if (e.kind == ExprKind::Var)
                used.insert(e.name);
        });
        for (const auto &v : order) {
            if (!types.count(v) || g.has_param(v))
                continue;
            if (used.count(v))
                decls.push_back(Stmt::decl(v, types.at(v)));
        }
        g.body.insert(g.body.begin(), decls.begin(), decls.end());
        out.inner.push_back(std::move(g));
    }

    // the outer body keeps only the declarations it still refers to
    pass_args(out.body);
    VarSet used;
    visit_exprs(out.body, [&](const Expr &e) {
        if (e.kind == ExprKind::Var)
            used.insert(e.name);
    });
    std::vector<Stmt> body;
    for (auto &s : out.body)
        if (s.kind != StmtKind::Decl || used.count(s.name))
            body.push_back(std::move(s));
    out.body = std::move(body);
    return out;
}

std::vector<FunDef> float_family(const FunDef &f)
{
    std::map<std::string, std::string> names;
    for (const auto &g : f.inner)
        names[g.name] = f.name + "__" + g.name;
    auto rename = [&](std::vector<Stmt> &body) {
        rewrite_exprs(body, [&](Expr &e) {
            if ((e.kind == ExprKind::Call || e.kind == ExprKind::Push) && names.count(e.name))
                e.name = names[e.name];
            return false;
        });
    };
    std::vector<FunDef> out;
    for (const auto &g : f.inner) {
        FunDef h = g;
        h.name = names[g.name];
        rename(h.body);
        out.push_back(std::move(h));
    }
    FunDef outer = f;
    outer.inner.clear();
    rename(outer.body);
    out.push_back(std::move(outer));
    return out;
}

} // namespace coop
