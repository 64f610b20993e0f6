#include "coop/normalize.hpp"

#include <map>
#include <set>

namespace coop {

Expr negate(Expr e)
{
    static const std::map<std::string, std::string> flip = {
        {"<", ">="}, {">=", "<"}, {">", "<="}, {"<=", ">"}, {"==", "!="}, {"!=", "=="}};
    if (e.kind == ExprKind::Binary) {
        auto it = flip.find(e.op);
        if (it != flip.end()) {
            e.op = it->second;
            return e;
        }
    }
    if (e.kind == ExprKind::Unary && e.op == "!" && e.kids[0].type.kind == TypeKind::Bool)
        return std::move(e.kids[0]);
    if (e.kind == ExprKind::BoolLit) {
        e.ival = !e.ival;
        return e;
    }
    return Expr::unary("!", std::move(e));
}

namespace {

bool is_logical(const Expr &e)
{
    return e.kind == ExprKind::Binary && (e.op == "&&" || e.op == "||");
}

bool always_true(const Expr &e)
{
    return (e.kind == ExprKind::BoolLit || e.kind == ExprKind::IntLit) && e.ival != 0;
}

// Gives every declaration a function-unique name, keyed by checker slot.
class Renamer {
  public:
    void function(FunDef &f)
    {
        for (const auto &p : f.params) {
            used_.insert(p.name);
            names_[p.slot] = p.name;
        }
        stmts(f.body);
    }

  private:
    std::set<std::string> used_;
    std::map<int, std::string> names_;

    void stmts(std::vector<Stmt> &body)
    {
        for (auto &s : body)
            stmt(s);
    }

    void stmt(Stmt &s)
    {
        // initializer refers to the outer binding, so rename it first
        for (auto &e : s.exprs)
            expr(e);
        if (s.kind == StmtKind::Decl) {
            std::string name = s.name;
            for (int n = 1; used_.count(name); ++n)
                name = s.name + "_" + std::to_string(n);
            used_.insert(name);
            names_[s.slot] = name;
            s.name = name;
        }
        stmts(s.init);
        stmts(s.body);
        stmts(s.alt);
        stmts(s.step);
        if (s.kind == StmtKind::For && !s.exprs.empty())
            expr(s.exprs[0]);
    }

    void expr(Expr &e)
    {
        if (e.kind == ExprKind::Var && e.slot >= 0) {
            auto it = names_.find(e.slot);
            if (it != names_.end())
                e.name = it->second;
        }
        for (auto &k : e.kids)
            expr(k);
    }
};

class Lowerer {
  public:
    explicit Lowerer(const FunDef &f) : fn_(f) {}

    std::vector<Stmt> run()
    {
        stmts(fn_.body);
        if (fn_.ret.kind != TypeKind::Void && (out_.empty() || !is_terminator(out_.back()))) {
            out_.push_back(Stmt::ret(fn_.ret.kind == TypeKind::Bool ? Expr::bool_lit(false)
                                                                     : Expr::int_lit(0)));
        }
        return mark_cps_resumptions();
    }

  private:
    const FunDef &fn_;
    std::vector<Stmt> out_;
    int labels_ = 0;
    int temps_ = 0;

    struct Loop {
        std::string brk, cont;
    };
    std::vector<Loop> loops_;

    std::string fresh_label() { return "__l" + std::to_string(labels_++); }

    Expr fresh_temp(const Type &t)
    {
        std::string name = "__t" + std::to_string(temps_++);
        Stmt d = Stmt::decl(name, t);
        out_.push_back(std::move(d));
        return Expr::var(name, t);
    }

    void emit(Stmt s) { out_.push_back(std::move(s)); }
    void label(const std::string &l) { emit(Stmt::label(l)); }

    void stmts(const std::vector<Stmt> &body)
    {
        for (const auto &s : body)
            stmt(s);
    }

    // A cps call result always lands in a plain variable.
    Stmt cps_assign(Expr dest, Expr call, SourcePos pos)
    {
        Stmt s = Stmt::assign(std::move(dest), std::move(call));
        s.pos = pos;
        return s;
    }

    void stmt(const Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Block: stmts(s.body); break;
        case StmtKind::Decl: {
            if (s.exprs.empty() || !is_cps_call(s.exprs[0])) {
                Stmt d = s;
                if (!d.exprs.empty())
                    d.exprs[0] = hoist(d.exprs[0]);
                emit(std::move(d));
                break;
            }
            Stmt d = Stmt::decl(s.name, s.type);
            d.pos = s.pos;
            d.slot = s.slot;
            emit(std::move(d));
            emit(cps_assign(Expr::var(s.name, s.type, s.pos), call_args_hoisted(s.exprs[0]), s.pos));
            break;
        }
        case StmtKind::Assign: {
            const Expr &rhs = s.exprs[1];
            if (is_cps_call(rhs)) {
                Expr call = call_args_hoisted(rhs);
                if (s.exprs[0].kind == ExprKind::Var) {
                    emit(cps_assign(s.exprs[0], std::move(call), s.pos));
                } else {
                    Expr t = fresh_temp(rhs.type);
                    emit(cps_assign(t, std::move(call), s.pos));
                    Stmt a = Stmt::assign(hoist(s.exprs[0]), t);
                    a.pos = s.pos;
                    emit(std::move(a));
                }
                break;
            }
            Stmt a = s;
            a.exprs[0] = hoist(s.exprs[0]);
            a.exprs[1] = hoist(s.exprs[1]);
            emit(std::move(a));
            break;
        }
        case StmtKind::ExprStmt: {
            const Expr &e = s.exprs[0];
            if (is_cps_call(e) && e.type.kind != TypeKind::Void) {
                Expr t = fresh_temp(e.type);
                emit(cps_assign(t, call_args_hoisted(e), s.pos));
                break;
            }
            Stmt x = s;
            x.exprs[0] = e.kind == ExprKind::Call ? call_args_hoisted(e) : hoist(e);
            emit(std::move(x));
            break;
        }
        case StmtKind::Return: {
            if (!s.exprs.empty() && is_cps_call(s.exprs[0])) {
                Expr t = fresh_temp(s.exprs[0].type);
                emit(cps_assign(t, call_args_hoisted(s.exprs[0]), s.pos));
                Stmt r = Stmt::ret(t);
                r.pos = s.pos;
                emit(std::move(r));
                break;
            }
            Stmt r = s;
            if (!r.exprs.empty())
                r.exprs[0] = hoist(r.exprs[0]);
            emit(std::move(r));
            break;
        }
        case StmtKind::Spawn:
        case StmtKind::Release: {
            Stmt x = s;
            x.exprs[0] = s.kind == StmtKind::Spawn ? call_args_hoisted(s.exprs[0]) : hoist(s.exprs[0]);
            emit(std::move(x));
            break;
        }
        case StmtKind::If: {
            std::string end = fresh_label();
            if (s.alt.empty()) {
                jump_if_false(s.exprs[0], end);
                stmts(s.body);
                label(end);
            } else {
                std::string other = fresh_label();
                jump_if_false(s.exprs[0], other);
                stmts(s.body);
                emit(Stmt::goto_(end));
                label(other);
                stmts(s.alt);
                label(end);
            }
            break;
        }
        case StmtKind::While: {
            std::string top = fresh_label();
            std::string end = fresh_label();
            label(top);
            if (!always_true(s.exprs[0]))
                jump_if_false(s.exprs[0], end);
            loops_.push_back({end, top});
            stmts(s.body);
            loops_.pop_back();
            emit(Stmt::goto_(top));
            label(end);
            break;
        }
        case StmtKind::For: {
            stmts(s.init);
            std::string top = fresh_label();
            std::string end = fresh_label();
            std::string next = s.step.empty() ? top : fresh_label();
            label(top);
            if (!s.exprs.empty() && !always_true(s.exprs[0]))
                jump_if_false(s.exprs[0], end);
            loops_.push_back({end, next});
            stmts(s.body);
            loops_.pop_back();
            if (!s.step.empty()) {
                label(next);
                stmts(s.step);
            }
            emit(Stmt::goto_(top));
            label(end);
            break;
        }
        case StmtKind::Break: emit(Stmt::goto_(loops_.back().brk)); break;
        case StmtKind::Continue: emit(Stmt::goto_(loops_.back().cont)); break;
        default: emit(s); break;
        }
    }

    Expr call_args_hoisted(const Expr &call)
    {
        Expr c = call;
        for (auto &k : c.kids)
            k = hoist(k);
        return c;
    }

    // Replaces every && / || inside a value context by a temp computed with jumps.
    Expr hoist(const Expr &e)
    {
        if (is_logical(e)) {
            Expr t = fresh_temp(Type::bool_());
            bool is_and = e.op == "&&";
            std::string end = fresh_label();
            emit(Stmt::assign(t, Expr::bool_lit(!is_and)));
            if (is_and) {
                jump_if_false(e.kids[0], end);
                jump_if_false(e.kids[1], end);
            } else {
                jump_if_true(e.kids[0], end);
                jump_if_true(e.kids[1], end);
            }
            emit(Stmt::assign(t, Expr::bool_lit(is_and)));
            label(end);
            return t;
        }
        Expr c = e;
        for (auto &k : c.kids)
            k = hoist(k);
        return c;
    }

    void jump_if_false(const Expr &c, const std::string &target)
    {
        if (c.kind == ExprKind::Unary && c.op == "!") {
            jump_if_true(c.kids[0], target);
        } else if (is_logical(c) && c.op == "&&") {
            jump_if_false(c.kids[0], target);
            jump_if_false(c.kids[1], target);
        } else if (is_logical(c)) {
            std::string taken = fresh_label();
            jump_if_true(c.kids[0], taken);
            jump_if_false(c.kids[1], target);
            label(taken);
        } else {
            emit(Stmt::if_goto(negate(hoist(c)), target));
        }
    }

    void jump_if_true(const Expr &c, const std::string &target)
    {
        if (c.kind == ExprKind::Unary && c.op == "!") {
            jump_if_false(c.kids[0], target);
        } else if (is_logical(c) && c.op == "||") {
            jump_if_true(c.kids[0], target);
            jump_if_true(c.kids[1], target);
        } else if (is_logical(c)) {
            std::string skip = fresh_label();
            jump_if_false(c.kids[0], skip);
            jump_if_true(c.kids[1], target);
            label(skip);
        } else {
            emit(Stmt::if_goto(hoist(c), target));
        }
    }

    std::vector<Stmt> mark_cps_resumptions()
    {
        std::vector<Stmt> result;
        for (size_t i = 0; i < out_.size(); ++i) {
            result.push_back(std::move(out_[i]));
            const Expr *call = stmt_call(result.back());
            if (!call || !is_cps_call(*call))
                continue;
            bool valued = result.back().kind == StmtKind::Assign;
            bool followed_by_jump =
                i + 1 < out_.size() &&
                (out_[i + 1].kind == StmtKind::Goto || out_[i + 1].kind == StmtKind::Label);
            if (valued || !followed_by_jump)
                result.push_back(Stmt::label(fresh_label()));
        }
        return result;
    }
};

void collect_labels(const std::vector<Stmt> &body, std::map<std::string, int> &labels,
                    std::set<std::string> &targets, std::vector<std::string> &errors)
{
    for (const auto &s : body) {
        switch (s.kind) {
        case StmtKind::Label: ++labels[s.name]; break;
        case StmtKind::Goto: targets.insert(s.name); break;
        case StmtKind::If:
            if (!s.alt.empty() || s.body.size() != 1 || s.body[0].kind != StmtKind::Goto)
                errors.push_back("if with a block body");
            else
                targets.insert(s.body[0].name);
            break;
        case StmtKind::While:
        case StmtKind::For:
        case StmtKind::Break:
        case StmtKind::Continue:
        case StmtKind::Block:
        case StmtKind::Switch:
            errors.push_back("structured statement in goto form");
            break;
        default: break;
        }
    }
}

} // namespace

FunDef lower_control(const FunDef &f)
{
    FunDef renamed = f;
    Renamer().function(renamed);
    FunDef out = renamed;
    out.body = Lowerer(renamed).run();
    return out;
}

Program lower_program(const Program &p)
{
    Program out = p;
    for (auto &f : out.functions)
        f = lower_control(f);
    return out;
}

std::vector<std::string> goto_form_violations(const FunDef &f)
{
    std::vector<std::string> errors;
    std::map<std::string, int> labels;
    std::set<std::string> targets;
    collect_labels(f.body, labels, targets, errors);
    for (const auto &[name, n] : labels)
        if (n != 1)
            errors.push_back("label " + name + " defined " + std::to_string(n) + " times");
    for (const auto &t : targets)
        if (!labels.count(t))
            errors.push_back("goto to undefined label " + t);
    return errors;
}

std::vector<std::string> dead_labels(const FunDef &f)
{
    std::map<std::string, size_t> at;
    for (size_t i = 0; i < f.body.size(); ++i)
        if (f.body[i].kind == StmtKind::Label)
            at[f.body[i].name] = i;
    std::set<size_t> seen;
    std::vector<size_t> work = {0};
    while (!work.empty()) {
        size_t i = work.back();
        work.pop_back();
        for (; i < f.body.size(); ++i) {
            if (!seen.insert(i).second)
                break;
            const Stmt &s = f.body[i];
            if (s.kind == StmtKind::If && s.body.size() == 1 && s.body[0].kind == StmtKind::Goto)
                work.push_back(at[s.body[0].name]);
            if (s.kind == StmtKind::Goto) {
                work.push_back(at[s.name]);
                break;
            }
            if (s.kind == StmtKind::Return)
                break;
        }
    }
    std::vector<std::string> dead;
    for (const auto &[name, i] : at)
        if (!seen.count(i))
            dead.push_back(name);
    return dead;
}

} // namespace coop
