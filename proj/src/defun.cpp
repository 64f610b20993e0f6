#include "coop/defun.hpp"

#include <cctype>
#include <set>

#include "coop/ast_util.hpp"

namespace coop {

namespace {

const char *const kDispatch = "dispatch";

std::string lower(std::string s)
{
    for (auto &c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_dispatch_call(const Stmt &s)
{
    return s.kind == StmtKind::ExprStmt && s.exprs[0].kind == ExprKind::Call && s.exprs[0].name == kDispatch;
}

bool cps_stmt(const Stmt &s)
{
    const Expr *c = stmt_call(s);
    return c && is_cps_call(*c);
}

} // namespace

std::string state_tag(const std::string &inner)
{
    std::string s = inner;
    for (auto &c : s)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

FunDef defunctionalize(const FunDef &f)
{
    if (f.inner.empty())
        return f;
    std::string enum_name = f.name + "_state";
    std::set<std::string> names;
    for (const auto &g : f.inner)
        names.insert(g.name);

    auto redirect = [&](std::vector<Stmt> &body) {
        rewrite_exprs(body, [&](Expr &e) {
            if (e.kind == ExprKind::Call && names.count(e.name)) {
                if (!e.kids.empty())
                    throw InternalError("defunctionalize: inner call with arguments");
                e.kids.push_back(Expr::tag(state_tag(f.name + e.name), enum_name));
                e.name = kDispatch;
                return true;
            }
            return false;
        });
    };

    FunDef dispatch;
    dispatch.name = kDispatch;
    dispatch.is_cps = true;
    dispatch.ret = Type::void_();
    dispatch.pos = f.pos;
    dispatch.params.push_back({"s", Type::state(enum_name), -1});
    Stmt sw;
    sw.kind = StmtKind::Switch;
    sw.exprs.push_back(Expr::var("s", Type::state(enum_name)));
    for (const auto &g : f.inner) {
        if (!g.params.empty())
            throw InternalError("defunctionalize: inner function with parameters");
        Stmt arm;
        arm.kind = StmtKind::Case;
        arm.name = state_tag(f.name + g.name);
        arm.body = g.body;
        for (const auto &s : arm.body)
            if (s.kind == StmtKind::Assign && is_cps_call(s.exprs[1]))
                throw InternalError("defunctionalize: valued cps call needs a return slot");
        redirect(arm.body);
        sw.body.push_back(std::move(arm));
    }
    dispatch.body.push_back(std::move(sw));

    FunDef out = f;
    out.inner = {std::move(dispatch)};
    out.state_enum = enum_name;
    redirect(out.body);
    return out;
}

FunDef optimize_direct_dispatch(const FunDef &f)
{
    if (f.inner.size() != 1 || f.inner[0].name != kDispatch)
        return f;
    FunDef out = f;
    Stmt &sw = out.inner[0].body.at(0);
    std::set<std::string> targeted;

    auto label_of = [](const std::string &tag) { return lower(tag) + "_label"; };

    std::function<void(std::vector<Stmt> &)> arm = [&](std::vector<Stmt> &body) {
        std::vector<Stmt> next;
        for (size_t i = 0; i < body.size(); ++i) {
            Stmt &s = body[i];
            bool direct = is_dispatch_call(s) && i + 1 < body.size() && body[i + 1].kind == StmtKind::Return &&
                          (next.empty() || !cps_stmt(next.back()));
            if (direct) {
                std::string tag = s.exprs[0].kids[0].name;
                targeted.insert(tag);
                next.push_back(Stmt::goto_(label_of(tag)));
                ++i; // drop the return
                continue;
            }
            if (s.kind == StmtKind::If) {
                arm(s.body);
                arm(s.alt);
            }
            next.push_back(std::move(s));
        }
        body = std::move(next);
    };
    for (auto &c : sw.body)
        arm(c.body);
    for (auto &c : sw.body)
        if (targeted.count(c.name))
            c.body.insert(c.body.begin(), Stmt::label(label_of(c.name)));
    return out;
}

} // namespace coop
