#include "coop/interp.hpp"

#include <map>
#include <stdexcept>

#include "coop/ast_util.hpp"

namespace coop {

namespace {

struct Layout {
    std::vector<int64_t> offset; // by slot
    std::vector<Type> type;      // by slot
    int64_t size = 0;
};

struct Ctl {
    const std::vector<Stmt> *list = nullptr;
    size_t idx = 0;
    const Stmt *loop = nullptr; // set for loop frames
    int phase = 0;              // for-loops: 1 = body done, step pending
};

struct Activation {
    const FunDef *fn;
    const Layout *layout;
    Value frame;
    std::vector<Ctl> ctl;
    const Stmt *pending = nullptr; // statement waiting for a cps call's result
};

struct TaskState {
    std::vector<Activation> stack;
};

struct Park {
    Prim prim = Prim::None;
    int64_t a = 0, b = 0;
};

void collect_slots(const std::vector<Stmt> &body, std::map<int, Type> &slots)
{
    for (const auto &s : body) {
        if (s.kind == StmtKind::Decl)
            slots[s.slot] = s.type;
        collect_slots(s.init, slots);
        collect_slots(s.body, slots);
        collect_slots(s.alt, slots);
        collect_slots(s.step, slots);
    }
}

bool truthy(Value v) { return v.num != 0 || v.cell >= 0; }

class Interpreter {
  public:
    Interpreter(const Program &p, const World &w) : prog_(p), sched_(w)
    {
        for (const auto &f : p.functions) {
            fns_[f.name] = &f;
            std::map<int, Type> slots;
            for (const auto &param : f.params)
                slots[param.slot] = param.type;
            collect_slots(f.body, slots);
            bool resolved = slots.empty() || (slots.begin()->first >= 0 && slots.rbegin()->first < f.nslots);
            visit_exprs(f.body, [&](const Expr &e) {
                if (e.kind == ExprKind::Var && (e.slot < 0 || e.slot >= f.nslots))
                    resolved = false;
            });
            if (!resolved)
                throw std::invalid_argument("function '" + f.name + "' has unresolved variables; check it first");
            Layout &l = layouts_[&f];
            l.offset.assign(static_cast<size_t>(f.nslots), 0);
            l.type.assign(static_cast<size_t>(f.nslots), Type{});
            for (const auto &[slot, t] : slots) {
                l.offset[slot] = l.size;
                l.type[slot] = t;
                l.size += t.slots();
            }
        }
    }

    RunResult run(const std::vector<int64_t> &args)
    {
        RunResult result;
        const FunDef *entry = prog_.find(prog_.entry);
        if (!entry)
            throw std::invalid_argument("no entry function '" + prog_.entry + "'");
        if (args.size() != entry->params.size())
            throw std::invalid_argument("entry function '" + entry->name + "' expects " +
                                        std::to_string(entry->params.size()) + " argument(s)");
        std::vector<Value> values;
        for (size_t i = 0; i < args.size(); ++i) {
            if (!entry->params[i].type.is_scalar())
                throw std::invalid_argument("entry parameters must be int or bool");
            values.push_back(Value::of(args[i]));
        }
        try {
            TaskState root;
            root.stack.push_back(activation(entry, values));
            sched_.spawn(std::move(root));
            std::string message;
            auto step = [this](TaskId id, TaskState &&s) { this->step(id, std::move(s)); };
            if (sched_.run(step, message)) {
                trace_.clock(sched_.clock());
            } else {
                trace_.deadlock(message);
                result.status = RunStatus::Deadlock;
                result.message = "deadlock: " + message;
            }
        } catch (const RuntimeFault &f) {
            trace_.error(f.what());
            result.status = RunStatus::Fault;
            result.message = f.what();
        }
        result.trace = std::move(trace_);
        result.counters = sched_.counters();
        result.counters.allocs = heap_.stats().allocs;
        result.counters.releases = heap_.stats().releases;
        result.counters.double_releases = heap_.stats().double_releases;
        return result;
    }

  private:
    const Program &prog_;
    Heap heap_;
    Scheduler<TaskState> sched_;
    Trace trace_;
    std::map<std::string, const FunDef *> fns_;
    std::map<const FunDef *, Layout> layouts_;

    Activation activation(const FunDef *f, const std::vector<Value> &args)
    {
        const Layout &l = layouts_.at(f);
        Activation a{f, &l, heap_.allocate(l.size, false), {}, nullptr};
        for (size_t i = 0; i < args.size(); ++i)
            heap_.at(a.frame, l.offset[f->params[i].slot]) = args[i];
        a.ctl.push_back({&f->body, 0, nullptr, 0});
        return a;
    }

    void step(TaskId id, TaskState &&s)
    {
        Park park;
        if (!drive(s.stack, 0, &park, nullptr)) {
            trace_.end(id);
            return;
        }
        switch (park.prim) {
        case Prim::Sleep: sched_.sleep(id, std::move(s), park.a); break;
        case Prim::Yield: sched_.yield(id, std::move(s)); break;
        case Prim::IoWait: sched_.io_wait(id, std::move(s), park.a, park.b); break;
        case Prim::CvWait: sched_.cv_wait(id, std::move(s), park.a); break;
        default: throw std::logic_error("bad park request");
        }
    }

    Value call_plain(const FunDef *f, const std::vector<Value> &args)
    {
        std::vector<Activation> st;
        st.push_back(activation(f, args));
        Value r;
        drive(st, 0, nullptr, &r);
        return r;
    }

    std::vector<Value> eval_args(const Expr &call, Activation &a)
    {
        std::vector<Value> v;
        v.reserve(call.kids.size());
        for (const auto &k : call.kids)
            v.push_back(eval(k, a));
        return v;
    }

    // Starts a call found in statement position. Returns true if the task must park.
    bool start_call(std::vector<Activation> &st, const Stmt &s, const Expr &call, Park *park)
    {
        Activation &a = st.back();
        switch (call.call) {
        case CallKind::Print: {
            std::vector<int64_t> args;
            for (size_t i = 1; i < call.kids.size(); ++i)
                args.push_back(eval(call.kids[i], a).num);
            trace_.print(format_print(call.kids[0].name, args));
            return false;
        }
        case CallKind::Prim: {
            std::vector<Value> args = eval_args(call, a);
            switch (call.prim) {
            case Prim::CvSignal: sched_.cv_signal(args[0].num); return false;
            case Prim::CvBroadcast: sched_.cv_broadcast(args[0].num); return false;
            default:
                park->prim = call.prim;
                park->a = args.empty() ? 0 : args[0].num;
                park->b = args.size() > 1 ? args[1].num : 0;
                return true;
            }
        }
        case CallKind::Cps: {
            std::vector<Value> args = eval_args(call, a);
            a.pending = &s;
            st.push_back(activation(fns_.at(call.name), args));
            return false;
        }
        default: {
            Value v = eval(call, a);
            complete(st.back(), s, v);
            return false;
        }
        }
    }

    // Delivers the value of the call carried by `s` in activation `a`.
    void complete(Activation &a, const Stmt &s, Value v)
    {
        if (s.kind == StmtKind::Assign)
            heap_.at(address(s.exprs[0], a)) = v;
        else if (s.kind == StmtKind::Decl)
            heap_.at(a.frame, a.layout->offset[s.slot]) = v;
    }

    // Pops the top activation returning `v`, delivering it to the caller.
    void finish(std::vector<Activation> &st, size_t base, Value v, Value *result)
    {
        while (true) {
            heap_.recycle(st.back().frame);
            st.pop_back();
            if (st.size() == base) {
                if (result)
                    *result = v;
                return;
            }
            Activation &caller = st.back();
            const Stmt *p = caller.pending;
            caller.pending = nullptr;
            if (!p)
                return;
            if (p->kind == StmtKind::Return)
                continue;
            complete(caller, *p, v);
            return;
        }
    }

    // Runs until the stack drops to `base` (returns false) or the task parks (true).
    bool drive(std::vector<Activation> &st, size_t base, Park *park, Value *result)
    {
        while (st.size() > base) {
            Activation &a = st.back();
            if (a.ctl.empty()) {
                finish(st, base, Value::of(0), result);
                continue;
            }
            Ctl &c = a.ctl.back();
            if (c.loop) {
                const Stmt &loop = *c.loop;
                if (loop.kind == StmtKind::For && c.phase == 1) {
                    c.phase = 2;
                    a.ctl.push_back({&loop.step, 0, nullptr, 0});
                    continue;
                }
                bool go = loop.exprs.empty() || truthy(eval(loop.exprs[0], a));
                if (go) {
                    c.phase = 1;
                    a.ctl.push_back({&loop.body, 0, nullptr, 0});
                } else {
                    a.ctl.pop_back();
                }
                continue;
            }
            if (c.idx >= c.list->size()) {
                a.ctl.pop_back();
                continue;
            }
            const Stmt &s = (*c.list)[c.idx++];
            switch (s.kind) {
            case StmtKind::Block: a.ctl.push_back({&s.body, 0, nullptr, 0}); break;
            case StmtKind::Decl:
                if (s.exprs.empty())
                    break;
                if (s.exprs[0].kind == ExprKind::Call) {
                    if (start_call(st, s, s.exprs[0], park))
                        return true;
                } else {
                    heap_.at(a.frame, a.layout->offset[s.slot]) = eval(s.exprs[0], a);
                }
                break;
            case StmtKind::Assign:
                if (s.exprs[1].kind == ExprKind::Call) {
                    if (start_call(st, s, s.exprs[1], park))
                        return true;
                } else {
                    Value v = eval(s.exprs[1], a);
                    heap_.at(address(s.exprs[0], a)) = v;
                }
                break;
            case StmtKind::ExprStmt:
                if (s.exprs[0].kind == ExprKind::Call) {
                    if (start_call(st, s, s.exprs[0], park))
                        return true;
                } else {
                    eval(s.exprs[0], a);
                }
                break;
            case StmtKind::If:
                a.ctl.push_back({truthy(eval(s.exprs[0], a)) ? &s.body : &s.alt, 0, nullptr, 0});
                break;
            case StmtKind::While: a.ctl.push_back({nullptr, 0, &s, 0}); break;
            case StmtKind::For:
                a.ctl.push_back({nullptr, 0, &s, 0});
                a.ctl.push_back({&s.init, 0, nullptr, 0});
                break;
            case StmtKind::Break:
            case StmtKind::Continue:
                while (!a.ctl.back().loop)
                    a.ctl.pop_back();
                if (s.kind == StmtKind::Break)
                    a.ctl.pop_back();
                break;
            case StmtKind::Return:
                if (s.exprs.empty()) {
                    finish(st, base, Value{}, result);
                } else if (is_cps_call(s.exprs[0])) {
                    if (start_call(st, s, s.exprs[0], park))
                        return true;
                } else {
                    finish(st, base, eval(s.exprs[0], a), result);
                }
                break;
            case StmtKind::Spawn: {
                const Expr &call = s.exprs[0];
                TaskState child;
                child.stack.push_back(activation(fns_.at(call.name), eval_args(call, a)));
                sched_.spawn(std::move(child));
                break;
            }
            case StmtKind::Release: heap_.release(eval(s.exprs[0], a)); break;
            case StmtKind::Label: break;
            case StmtKind::Goto: jump(a, s.name); break;
            default: throw std::logic_error("interpreter: unexpected statement");
            }
        }
        return false;
    }

    // Gotos only target labels in the outermost statement list (goto form).
    void jump(Activation &a, const std::string &label)
    {
        const auto &body = a.fn->body;
        for (size_t i = 0; i < body.size(); ++i) {
            if (body[i].kind == StmtKind::Label && body[i].name == label) {
                a.ctl.clear();
                a.ctl.push_back({&body, i + 1, nullptr, 0});
                return;
            }
        }
        throw std::logic_error("interpreter: no label " + label);
    }

    Value address(const Expr &e, Activation &a)
    {
        switch (e.kind) {
        case ExprKind::Var: return a.frame.at_offset(a.layout->offset[e.slot]);
        case ExprKind::Deref: {
            Value p = eval(e.kids[0], a);
            heap_.at(p);
            return p;
        }
        case ExprKind::Index: {
            const Expr &base = e.kids[0];
            int64_t i = eval(e.kids[1], a).num;
            if (base.kind == ExprKind::Var && base.type.kind == TypeKind::Array) {
                if (i < 0 || i >= base.type.length)
                    throw RuntimeFault("index out of bounds");
                return a.frame.at_offset(a.layout->offset[base.slot] + i);
            }
            Value p = eval(base, a);
            heap_.at(p, i);
            return p.at_offset(p.num + i);
        }
        default: throw std::logic_error("interpreter: not an lvalue");
        }
    }

    Value eval(const Expr &e, Activation &a)
    {
        switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::DirLit: return Value::of(e.ival);
        case ExprKind::Var: return heap_.at(a.frame, a.layout->offset[e.slot]);
        case ExprKind::Index:
        case ExprKind::Deref: return heap_.at(address(e, a));
        case ExprKind::AddrOf: return address(e.kids[0], a);
        case ExprKind::Unary: {
            Value v = eval(e.kids[0], a);
            if (e.op == "-")
                return Value::of(arith("-", 0, v.num));
            return Value::of(truthy(v) ? 0 : 1);
        }
        case ExprKind::Binary: {
            const std::string &op = e.op;
            if (op == "&&") {
                if (!truthy(eval(e.kids[0], a)))
                    return Value::of(0);
                return Value::of(truthy(eval(e.kids[1], a)) ? 1 : 0);
            }
            if (op == "||") {
                if (truthy(eval(e.kids[0], a)))
                    return Value::of(1);
                return Value::of(truthy(eval(e.kids[1], a)) ? 1 : 0);
            }
            Value l = eval(e.kids[0], a);
            Value r = eval(e.kids[1], a);
            if (op == "==")
                return Value::of(l == r);
            if (op == "!=")
                return Value::of(!(l == r));
            if (op == "<")
                return Value::of(l.num < r.num);
            if (op == "<=")
                return Value::of(l.num <= r.num);
            if (op == ">")
                return Value::of(l.num > r.num);
            if (op == ">=")
                return Value::of(l.num >= r.num);
            return Value::of(arith(op, l.num, r.num));
        }
        case ExprKind::Call: return call_plain(fns_.at(e.name), eval_args(e, a));
        case ExprKind::Alloc: return heap_.allocate(eval(e.kids[0], a).num);
        default: throw std::logic_error("interpreter: unexpected expression");
        }
    }
};

} // namespace

RunResult interpret(const Program &checked, const std::vector<int64_t> &args, const World &world)
{
    return Interpreter(checked, world).run(args);
}

} // namespace coop
