#include <map>

#include "coop/parser.hpp"
#include "runtime_module.hpp"

namespace coop {

namespace {

struct Layout {
    std::map<std::string, std::pair<int64_t, Type>> fields;
    int64_t size = 0;
};

class Loader {
  public:
    explicit Loader(const Program &p) : p_(p)
    {
        for (const auto &e : p.enums)
            for (size_t i = 0; i < e.tags.size(); ++i)
                tags_[e.tags[i]] = static_cast<int64_t>(i);
        for (const auto &s : p.structs) {
            Layout &l = structs_[s.name];
            for (const auto &f : s.fields) {
                l.fields[f.name] = {l.size, f.type};
                l.size += f.type.slots();
            }
        }
        for (const auto &f : p.functions) {
            if (fun_ids_.count(f.name))
                fail("duplicate function '" + f.name + "'");
            fun_ids_[f.name] = static_cast<int32_t>(m_->funs.size());
            CFun cf;
            cf.name = f.name;
            cf.cps = !f.params.empty() && f.params.back().type.kind == TypeKind::Cont;
            cf.nparams = static_cast<int32_t>(f.params.size()) - (cf.cps ? 1 : 0);
            for (int32_t i = 0; i < cf.nparams; ++i)
                cf.param_types.push_back(f.params[i].type);
            m_->funs.push_back(std::move(cf));
        }
    }

    std::shared_ptr<Module> run()
    {
        for (size_t i = 0; i < p_.functions.size(); ++i)
            function(p_.functions[i], m_->funs[i]);
        auto it = fun_ids_.find(p_.entry);
        if (it == fun_ids_.end())
            fail("no entry function '" + p_.entry + "'");
        m_->entry = it->second;
        if (!m_->funs[m_->entry].cps)
            fail("entry function '" + p_.entry + "' takes no continuation");
        return m_;
    }

  private:
    const Program &p_;
    std::shared_ptr<Module> m_ = std::make_shared<Module>();
    std::map<std::string, int32_t> fun_ids_;
    std::map<std::string, int64_t> tags_;
    std::map<std::string, Layout> structs_;

    // per function
    std::string fn_;
    std::map<std::string, std::pair<int32_t, Type>> locals_;
    std::map<std::string, int32_t> labels_;
    std::vector<std::pair<size_t, std::string>> patches_;
    std::vector<Instr> *code_ = nullptr;

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw InternalError("evir" + (fn_.empty() ? std::string() : " '" + fn_ + "'") + ": " + msg);
    }

    int32_t fun_id(const std::string &name) const
    {
        auto it = fun_ids_.find(name);
        if (it == fun_ids_.end())
            fail("unknown function '" + name + "'");
        return it->second;
    }

    void declare(const std::string &name, const Type &t)
    {
        if (t.kind == TypeKind::Array)
            fail("local array '" + name + "'");
        if (locals_.count(name))
            fail("duplicate local '" + name + "'");
        locals_[name] = {static_cast<int32_t>(locals_.size()), t};
    }

    void function(const FunDef &f, CFun &cf)
    {
        fn_ = f.name;
        locals_.clear();
        labels_.clear();
        patches_.clear();
        code_ = &cf.code;
        for (int32_t i = 0; i < cf.nparams; ++i)
            declare(f.params[i].name, f.params[i].type);
        collect_decls(f.body);
        cf.nlocals = static_cast<int32_t>(locals_.size());
        stmts(f.body);
        emit(bare(IOp::Return));
        for (auto &[at, label] : patches_) {
            auto it = labels_.find(label);
            if (it == labels_.end())
                fail("unknown label '" + label + "'");
            (*code_)[at].target = it->second;
        }
        fn_.clear();
    }

    void collect_decls(const std::vector<Stmt> &body)
    {
        for (const auto &s : body) {
            if (s.kind == StmtKind::Decl)
                declare(s.name, s.type);
            collect_decls(s.body);
            collect_decls(s.alt);
        }
    }

    static Instr bare(IOp op)
    {
        Instr i;
        i.op = op;
        return i;
    }

    size_t emit(Instr i)
    {
        code_->push_back(std::move(i));
        return code_->size() - 1;
    }

    int32_t pc() const { return static_cast<int32_t>(code_->size()); }

    const std::pair<int32_t, Type> &local(const std::string &name) const
    {
        auto it = locals_.find(name);
        if (it == locals_.end())
            fail("unknown variable '" + name + "'");
        return it->second;
    }

    // Resolves `base->field`; returns the base expression, offset and type.
    std::tuple<CExpr, int64_t, Type> field(const Expr &e)
    {
        const Expr &base = e.kids.at(0);
        if (base.kind != ExprKind::Var)
            fail("field access on a non-variable");
        const Type &t = local(base.name).second;
        auto sit = structs_.find(t.tag);
        if (t.kind != TypeKind::Env || sit == structs_.end())
            fail("'" + base.name + "' is not an environment pointer");
        auto fit = sit->second.fields.find(e.name);
        if (fit == sit->second.fields.end())
            fail("no field '" + e.name + "' in " + t.tag);
        return {expr(base), fit->second.first, fit->second.second};
    }

    CExpr node(Op op, std::vector<CExpr> kids = {}, int64_t a = 0, int64_t b = 0)
    {
        CExpr c;
        c.op = op;
        c.kids = std::move(kids);
        c.a = a;
        c.b = b;
        return c;
    }

    CExpr address(const Expr &e)
    {
        switch (e.kind) {
        case ExprKind::Index: {
            const Expr &base = e.kids[0];
            if (base.kind == ExprKind::Field) {
                auto [env, off, t] = field(base);
                if (t.kind == TypeKind::Array)
                    return node(Op::AddrFieldIndex, {env, expr(e.kids[1])}, off, t.length);
            }
            return node(Op::AddrIndex, {expr(base), expr(e.kids[1])});
        }
        case ExprKind::Field: {
            auto [env, off, t] = field(e);
            return node(Op::AddrField, {env}, off);
        }
        case ExprKind::Deref: return expr(e.kids[0]);
        default: fail("address of a non-addressable expression");
        }
    }

    CExpr expr(const Expr &e)
    {
        static const std::map<std::string, Op> binops = {
            {"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}, {"%", Op::Mod},
            {"<", Op::Lt},  {"<=", Op::Le}, {">", Op::Gt},  {">=", Op::Ge}, {"==", Op::Eq},
            {"!=", Op::Ne}, {"&&", Op::And}, {"||", Op::Or}};
        switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::DirLit: return node(Op::Const, {}, e.ival);
        case ExprKind::Null: return node(Op::Const);
        case ExprKind::Tag: {
            auto it = tags_.find(e.name);
            if (it == tags_.end())
                fail("unknown state tag '" + e.name + "'");
            return node(Op::Const, {}, it->second);
        }
        case ExprKind::Sink: return node(Op::Sink);
        case ExprKind::Var: {
            const auto &[slot, t] = local(e.name);
            return node(Op::Local, {}, slot);
        }
        case ExprKind::Deref: return node(Op::Deref, {expr(e.kids[0])});
        case ExprKind::Index: {
            const Expr &base = e.kids[0];
            if (base.kind == ExprKind::Field) {
                auto [env, off, t] = field(base);
                if (t.kind == TypeKind::Array)
                    return node(Op::FieldIndex, {env, expr(e.kids[1])}, off, t.length);
            }
            return node(Op::Index, {expr(base), expr(e.kids[1])});
        }
        case ExprKind::Field: {
            auto [env, off, t] = field(e);
            if (t.kind == TypeKind::Array)
                fail("array field used as a value");
            return node(Op::Field, {env}, off);
        }
        case ExprKind::AddrOf: return address(e.kids[0]);
        case ExprKind::Unary: return node(e.op == "-" ? Op::Neg : Op::Not, {expr(e.kids[0])});
        case ExprKind::Binary: {
            auto it = binops.find(e.op);
            if (it == binops.end())
                fail("unknown operator '" + e.op + "'");
            return node(it->second, {expr(e.kids[0]), expr(e.kids[1])});
        }
        case ExprKind::Call: {
            int32_t id = fun_id(e.name);
            const CFun &callee = m_->funs[id];
            if (callee.cps)
                fail("cps function '" + e.name + "' called as an expression");
            if (static_cast<int32_t>(e.kids.size()) != callee.nparams)
                fail("arity mismatch calling '" + e.name + "'");
            std::vector<CExpr> args;
            for (const auto &k : e.kids)
                args.push_back(expr(k));
            return node(Op::Call, std::move(args), id);
        }
        case ExprKind::Alloc:
            if (!e.name.empty()) {
                auto it = structs_.find(e.name);
                if (it == structs_.end())
                    fail("unknown struct '" + e.name + "'");
                return node(Op::AllocSize, {}, it->second.size);
            }
            return node(Op::Alloc, {expr(e.kids[0])});
        default: fail("unexpected expression '" + e.name + "'");
        }
    }

    bool is_cont(const Expr &e) const { return e.kind == ExprKind::Var && e.name == "k"; }

    // Splits the continuation argument of a cps or primitive call.
    void continuation(const Expr &last, Instr &in)
    {
        if (is_cont(last))
            return;
        if (last.kind != ExprKind::Push || last.kids.empty() || !is_cont(last.kids.back()))
            fail("continuation argument must be k or push(..., k)");
        in.push_fn = fun_id(last.name);
        const CFun &target = m_->funs[in.push_fn];
        if (!target.cps || static_cast<int32_t>(last.kids.size()) - 1 != target.nparams)
            fail("arity mismatch pushing '" + last.name + "'");
        for (size_t i = 0; i + 1 < last.kids.size(); ++i) {
            const Expr &a = last.kids[i];
            if (a.kind == ExprKind::Hole) {
                if (in.hole >= 0)
                    fail("two holes in one frame");
                in.hole = static_cast<int32_t>(i);
                in.push_args.push_back(node(Op::Const));
            } else {
                in.push_args.push_back(expr(a));
            }
        }
    }

    void call_stmt(const Expr &e)
    {
        Instr in;
        if (e.call == CallKind::Print || e.name == "print") {
            in.op = IOp::Print;
            in.text = e.kids.at(0).name;
            for (size_t i = 1; i < e.kids.size(); ++i)
                in.args.push_back(expr(e.kids[i]));
            emit(std::move(in));
            return;
        }
        Prim prim = primitive_named(e.name);
        if (prim != Prim::None) {
            if (e.kids.empty())
                fail("primitive '" + e.name + "' without continuation");
            in.op = IOp::PrimCall;
            in.prim = prim;
            for (size_t i = 0; i + 1 < e.kids.size(); ++i)
                in.args.push_back(expr(e.kids[i]));
            continuation(e.kids.back(), in);
            emit(std::move(in));
            return;
        }
        int32_t id = fun_id(e.name);
        const CFun &callee = m_->funs[id];
        if (!callee.cps) {
            in.op = IOp::Eval;
            in.e = expr(e);
            emit(std::move(in));
            return;
        }
        if (static_cast<int32_t>(e.kids.size()) != callee.nparams + 1)
            fail("arity mismatch calling '" + e.name + "'");
        in.op = IOp::CpsCall;
        in.target = id;
        for (int32_t i = 0; i < callee.nparams; ++i)
            in.args.push_back(expr(e.kids[i]));
        continuation(e.kids.back(), in);
        emit(std::move(in));
    }

    void jump(IOp op, const std::string &label, CExpr cond = {})
    {
        Instr in;
        in.op = op;
        in.e = std::move(cond);
        patches_.push_back({emit(std::move(in)), label});
    }

    void store(const Expr &lhs, CExpr value)
    {
        Instr in;
        in.e = std::move(value);
        if (lhs.kind == ExprKind::Var) {
            in.op = IOp::Store;
            in.slot = local(lhs.name).first;
        } else {
            in.op = IOp::StoreAt;
            in.addr = address(lhs);
        }
        emit(std::move(in));
    }

    void stmts(const std::vector<Stmt> &body)
    {
        for (const auto &s : body)
            stmt(s);
    }

    void stmt(const Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Block: stmts(s.body); break;
        case StmtKind::Decl:
            if (!s.exprs.empty())
                store(Expr::var(s.name), expr(s.exprs[0]));
            break;
        case StmtKind::Assign: store(s.exprs[0], expr(s.exprs[1])); break;
        case StmtKind::ExprStmt:
            if (s.exprs[0].kind == ExprKind::Call) {
                call_stmt(s.exprs[0]);
            } else {
                Instr in;
                in.op = IOp::Eval;
                in.e = expr(s.exprs[0]);
                emit(std::move(in));
            }
            break;
        case StmtKind::If: {
            if (s.alt.empty() && s.body.size() == 1 && s.body[0].kind == StmtKind::Goto) {
                jump(IOp::JumpIfTrue, s.body[0].name, expr(s.exprs[0]));
                break;
            }
            Instr test;
            test.op = IOp::JumpIfFalse;
            test.e = expr(s.exprs[0]);
            size_t at = emit(std::move(test));
            stmts(s.body);
            if (s.alt.empty()) {
                (*code_)[at].target = pc();
                break;
            }
            size_t skip = emit(bare(IOp::Jump));
            (*code_)[at].target = pc();
            stmts(s.alt);
            (*code_)[skip].target = pc();
            break;
        }
        case StmtKind::Label: labels_[s.name] = pc(); break;
        case StmtKind::Goto: jump(IOp::Jump, s.name); break;
        case StmtKind::Return: {
            Instr in;
            in.op = IOp::Return;
            if (!s.exprs.empty()) {
                in.has_value = true;
                in.e = expr(s.exprs[0]);
            }
            emit(std::move(in));
            break;
        }
        case StmtKind::Invoke: {
            Instr in;
            in.op = IOp::Invoke;
            if (!s.exprs.empty()) {
                in.has_value = true;
                in.e = expr(s.exprs[0]);
            }
            emit(std::move(in));
            break;
        }
        case StmtKind::Switch: {
            Instr in;
            in.op = IOp::Switch;
            in.e = expr(s.exprs[0]);
            size_t at = emit(std::move(in));
            for (const auto &arm : s.body) {
                auto it = tags_.find(arm.name);
                if (it == tags_.end())
                    fail("unknown state tag '" + arm.name + "'");
                auto &table = (*code_)[at].table;
                if (table.size() <= static_cast<size_t>(it->second))
                    table.resize(static_cast<size_t>(it->second) + 1, -1);
                table[static_cast<size_t>(it->second)] = pc();
                stmts(arm.body);
            }
            break;
        }
        case StmtKind::Spawn: {
            const Expr &call = s.exprs[0];
            Instr in;
            in.op = IOp::Spawn;
            in.target = fun_id(call.name);
            const CFun &callee = m_->funs[in.target];
            if (!callee.cps || static_cast<int32_t>(call.kids.size()) != callee.nparams)
                fail("bad spawn of '" + call.name + "'");
            for (const auto &k : call.kids)
                in.args.push_back(expr(k));
            emit(std::move(in));
            break;
        }
        case StmtKind::Release: {
            Instr in;
            in.op = IOp::Release;
            in.e = expr(s.exprs[0]);
            emit(std::move(in));
            break;
        }
        default: fail("unexpected statement");
        }
    }
};

} // namespace

std::shared_ptr<const Module> load_module(const Program &evir) { return Loader(evir).run(); }

} // namespace coop
