#include "coop/env.hpp"

#include <set>

#include "coop/ast_util.hpp"

namespace coop {

namespace {

const char *const kHandle = "__env";

void decl_list(const std::vector<Stmt> &body, std::vector<Param> &out)
{
    for (const auto &s : body) {
        if (s.kind == StmtKind::Decl && s.name != kHandle)
            out.push_back({s.name, s.type, s.slot});
        decl_list(s.init, out);
        decl_list(s.body, out);
        decl_list(s.alt, out);
        decl_list(s.step, out);
    }
}

Expr sink()
{
    Expr e;
    e.kind = ExprKind::Sink;
    return e;
}

} // namespace

Program rewrite_return_slots(const Program &p)
{
    std::map<std::string, Type> valued; // cps functions returning a value
    for (const auto &f : p.functions)
        if (f.is_cps && f.ret.kind != TypeKind::Void)
            valued[f.name] = f.ret;

    Program out = p;
    for (auto &f : out.functions) {
        if (!f.is_cps)
            continue;
        Type slot_type;
        bool has_slot = valued.count(f.name) > 0;
        if (has_slot) {
            slot_type = Type::ptr(f.ret.kind);
            f.params.push_back({"__ret", slot_type, -1});
            f.ret = Type::void_();
        }
        visit_lists(f.body, [&](std::vector<Stmt> &body) {
            std::vector<Stmt> next;
            for (auto &s : body) {
                if (s.kind == StmtKind::Return && !s.exprs.empty() && has_slot) {
                    Expr slot = Expr::deref(Expr::var("__ret", slot_type));
                    slot.type = Type{slot_type.elem, TypeKind::Int, 0, {}};
                    next.push_back(Stmt::assign(slot, s.exprs[0]));
                    s.exprs.clear();
                    next.push_back(std::move(s));
                    continue;
                }
                if (s.kind == StmtKind::Assign && is_cps_call(s.exprs[1]) && valued.count(s.exprs[1].name)) {
                    Expr call = s.exprs[1];
                    call.kids.push_back(Expr::addr_of(s.exprs[0]));
                    call.type = Type::void_();
                    Stmt c = Stmt::expr_stmt(std::move(call));
                    c.pos = s.pos;
                    next.push_back(std::move(c));
                    continue;
                }
                if (s.kind == StmtKind::Spawn && valued.count(s.exprs[0].name))
                    s.exprs[0].kids.push_back(sink());
                next.push_back(std::move(s));
            }
            body = std::move(next);
        });
    }
    return out;
}

Program prepare_environments(const Program &p)
{
    Program out = rewrite_return_slots(p);
    for (auto &f : out.functions) {
        if (!f.is_cps)
            continue;
        Expr handle = Expr::var(kHandle, Type::env(""));
        std::vector<Stmt> body;
        body.push_back(Stmt::decl(kHandle, Type::env("")));
        for (auto &s : f.body) {
            if (s.kind == StmtKind::Return)
                body.push_back(Stmt::release(handle));
            body.push_back(std::move(s));
        }
        if (!is_terminator(body.back()))
            body.push_back(Stmt::release(handle));
        f.body = std::move(body);
    }
    return out;
}

std::pair<FunDef, StructDecl> generate_environments(const FunDef &f)
{
    StructDecl layout;
    layout.name = "env_" + f.name;
    for (const auto &prm : f.params)
        layout.fields.push_back(prm);
    decl_list(f.body, layout.fields);
    bool empty = layout.fields.empty();

    std::map<std::string, Type> fields;
    for (const auto &fl : layout.fields)
        fields[fl.name] = fl.type;
    Type handle_type = Type::env(empty ? "" : layout.name);
    Expr handle = Expr::var(kHandle, handle_type);

    auto rewrite = [&](std::vector<Stmt> &body, const std::set<std::string> &calls) {
        std::vector<Stmt> next;
        for (auto &s : body) {
            if (s.kind == StmtKind::Decl && (fields.count(s.name) || s.name == kHandle))
                continue;
            if (s.kind == StmtKind::Release && s.exprs[0].kind == ExprKind::Var && s.exprs[0].name == kHandle) {
                if (!empty)
                    next.push_back(Stmt::release(handle));
                continue;
            }
            next.push_back(std::move(s));
        }
        body = std::move(next);
        rewrite_exprs(body, [&](Expr &e) {
            if (e.kind == ExprKind::Var && fields.count(e.name)) {
                e = Expr::field(handle, e.name, fields.at(e.name));
                return true;
            }
            if (e.kind == ExprKind::Call && calls.count(e.name)) {
                for (auto &k : e.kids)
                    rewrite_expr(k, [&](Expr &x) {
                        if (x.kind == ExprKind::Var && fields.count(x.name)) {
                            x = Expr::field(handle, x.name, fields.at(x.name));
                            return true;
                        }
                        return false;
                    });
                e.kids.push_back(handle);
                return true;
            }
            return false;
        });
    };

    std::set<std::string> inner_names;
    for (const auto &g : f.inner)
        inner_names.insert(g.name);

    FunDef out = f;
    for (auto &g : out.inner) {
        rewrite(g.body, inner_names);
        g.params.push_back({kHandle, handle_type, -1});
    }
    rewrite(out.body, inner_names);

    std::vector<Stmt> prologue;
    if (empty) {
        Expr null;
        null.kind = ExprKind::Null;
        prologue.push_back(Stmt::decl_init(kHandle, handle_type, null));
    } else {
        Expr alloc;
        alloc.kind = ExprKind::Alloc;
        alloc.name = layout.name;
        alloc.type = handle_type;
        prologue.push_back(Stmt::decl_init(kHandle, handle_type, alloc));
        for (const auto &prm : f.params)
            prologue.push_back(
                Stmt::assign(Expr::field(handle, prm.name, prm.type), Expr::var(prm.name, prm.type)));
    }
    out.body.insert(out.body.begin(), prologue.begin(), prologue.end());
    return {std::move(out), std::move(layout)};
}

} // namespace coop
