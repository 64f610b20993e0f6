#include "coop/split.hpp"

#include <set>

namespace coop {

namespace {

Stmt tail_call(const std::string &fn)
{
    return Stmt::expr_stmt(Expr::make_call(fn, {}, CallKind::Cps));
}

bool is_call_stmt(const Stmt &s)
{
    return s.kind == StmtKind::ExprStmt && s.exprs[0].kind == ExprKind::Call;
}

} // namespace

FunDef split(const FunDef &f)
{
    bool has_label = false;
    for (const auto &s : f.body)
        has_label = has_label || s.kind == StmtKind::Label;
    if (!has_label)
        return f;

    FunDef out = f;
    out.body.clear();
    std::vector<Stmt> code;
    for (const auto &s : f.body) {
        if (s.kind != StmtKind::Decl) {
            code.push_back(s);
            continue;
        }
        Stmt d = Stmt::decl(s.name, s.type);
        d.pos = s.pos;
        d.slot = s.slot;
        out.body.push_back(std::move(d));
        if (!s.exprs.empty()) {
            Stmt a = Stmt::assign(Expr::var(s.name, s.type, s.pos), s.exprs[0]);
            a.pos = s.pos;
            code.push_back(std::move(a));
        }
    }

    // blocks: (name, statements)
    std::vector<std::pair<std::string, std::vector<Stmt>>> blocks;
    if (!code.empty() && code.front().kind != StmtKind::Label)
        blocks.push_back({"__entry", {}});
    for (auto &s : code) {
        if (s.kind == StmtKind::Label)
            blocks.push_back({s.name, {}});
        else
            blocks.back().second.push_back(std::move(s));
    }

    for (size_t b = 0; b < blocks.size(); ++b) {
        FunDef inner;
        inner.name = blocks[b].first;
        inner.is_cps = true;
        inner.ret = Type::void_();
        inner.pos = f.pos;
        bool ended = false;
        for (auto &s : blocks[b].second) {
            if (ended)
                break;
            if (s.kind == StmtKind::Goto) {
                inner.body.push_back(tail_call(s.name));
                inner.body.push_back(Stmt::ret());
                ended = true;
            } else if (s.kind == StmtKind::If) {
                std::string target = s.body.at(0).name;
                s.body = {tail_call(target), Stmt::ret()};
                inner.body.push_back(std::move(s));
            } else {
                ended = s.kind == StmtKind::Return;
                inner.body.push_back(std::move(s));
            }
        }
        if (!ended) {
            if (b + 1 < blocks.size())
                inner.body.push_back(tail_call(blocks[b + 1].first));
            inner.body.push_back(Stmt::ret());
        }
        out.inner.push_back(std::move(inner));
    }
    out.body.push_back(tail_call(blocks.front().first));
    out.body.push_back(Stmt::ret());
    return out;
}

namespace {

class TailChecker {
  public:
    TailChecker(const FunDef &f, TailReport &r) : report_(r)
    {
        for (const auto &g : f.inner)
            inner_.insert(g.name);
    }

    void function(const std::string &name, const std::vector<Stmt> &body)
    {
        fn_ = name;
        if (!list(body))
            add(TailClass::Return, body.empty() ? SourcePos{} : body.back().pos);
    }

  private:
    TailReport &report_;
    std::set<std::string> inner_;
    std::string fn_;

    void add(TailClass c, SourcePos pos) { report_.tails.push_back({fn_, c, pos}); }

    void violation(const Stmt &s, const std::string &what)
    {
        report_.violations.push_back(fn_ + ":" + std::to_string(s.pos.line) + ":" +
                                      std::to_string(s.pos.col) + ": " + what);
    }

    static bool cps_stmt(const Stmt &s)
    {
        const Expr *c = stmt_call(s);
        return c && is_cps_call(*c);
    }

    // Returns true when the list ends in a tail.
    bool list(const std::vector<Stmt> &body)
    {
        for (size_t i = 0; i < body.size(); ++i) {
            const Stmt &s = body[i];
            switch (s.kind) {
            case StmtKind::If:
                list(s.body);
                list(s.alt);
                continue;
            case StmtKind::Switch:
                for (const auto &c : s.body)
                    if (!list(c.body))
                        violation(c, "switch arm without a tail");
                continue;
            case StmtKind::Goto:
                add(TailClass::TailCall, s.pos);
                return finish(body, i);
            case StmtKind::Return: {
                if (!s.exprs.empty() && cps_stmt(s))
                    violation(s, "cps call in a return value");
                add(TailClass::Return, s.pos);
                return finish(body, i);
            }
            default: break;
            }
            if (!cps_stmt(s))
                continue;
            bool tail = s.kind == StmtKind::ExprStmt && i + 1 < body.size() &&
                        body[i + 1].kind == StmtKind::Return && body[i + 1].exprs.empty();
            if (tail) {
                add(TailClass::TailCall, s.pos);
                return finish(body, i + 1);
            }
            bool resume = i + 2 < body.size() && is_call_stmt(body[i + 1]) &&
                          body[i + 1].exprs[0].call == CallKind::Cps &&
                          inner_.count(body[i + 1].exprs[0].name) &&
                          body[i + 2].kind == StmtKind::Return && body[i + 2].exprs.empty();
            if (resume) {
                add(TailClass::Resume, s.pos);
                return finish(body, i + 2);
            }
            violation(s, "cps call '" + stmt_call(s)->name + "' is not in tail position");
        }
        return false;
    }

    bool finish(const std::vector<Stmt> &body, size_t last)
    {
        for (size_t j = last + 1; j < body.size(); ++j)
            if (body[j].kind != StmtKind::Case)
                violation(body[j], "statement after a tail");
        return true;
    }
};

} // namespace

TailReport validate_tails(const FunDef &f)
{
    TailReport r;
    TailChecker c(f, r);
    c.function(f.name, f.body);
    for (const auto &g : f.inner)
        c.function(g.name, g.body);
    return r;
}

} // namespace coop
