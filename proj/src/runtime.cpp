#include "coop/runtime.hpp"

#include <bit>
#include <stdexcept>

#include "runtime_module.hpp"

namespace coop {

namespace {

struct Frame {
    int32_t fn;
    int32_t hole; // absolute index into the task's slots, or -1
    uint32_t base;
    uint32_t n;
};

static_assert(sizeof(Frame) == sizeof(Value));

// One task's continuation in a single buffer: each frame's saved arguments
// followed by its header, so resuming touches one allocation.
struct TaskCont {
    std::vector<Value> slots;

    bool empty() const { return slots.empty(); }
    Frame top() const { return std::bit_cast<Frame>(slots.back()); }
};

struct Park {
    Prim prim = Prim::None;
    int64_t a = 0, b = 0;
};

inline bool truthy(Value v) { return v.num != 0 || v.cell >= 0; }

inline int64_t wrap(uint64_t v) { return static_cast<int64_t>(v); }

class EventLoop {
  public:
    EventLoop(const Module &m, const World &w) : m_(m), sched_(w) {}

    RunResult run(const std::vector<int64_t> &args)
    {
        RunResult result;
        const CFun &entry = m_.funs[m_.entry];
        std::vector<Value> values;
        size_t user = 0;
        for (const auto &t : entry.param_types)
            user += t.is_scalar() ? 1 : 0;
        if (args.size() != user)
            throw std::invalid_argument("entry function '" + entry.name + "' expects " + std::to_string(user) +
                                        " argument(s)");
        sink_ = heap_.allocate(1, false);
        size_t next = 0;
        for (const auto &t : entry.param_types) {
            if (t.is_scalar())
                values.push_back(Value::of(args[next++]));
            else
                values.push_back(sink_);
        }
        try {
            TaskCont root;
            push(root, m_.entry, values.data(), values.size(), -1);
            --sched_.counters().pushes; // the initial frame is not a push
            sched_.spawn(std::move(root));
            std::string message;
            auto step = [this](TaskId id, TaskCont &&c) { this->step(id, std::move(c)); };
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
    const Module &m_;
    Heap heap_;
    Scheduler<TaskCont> sched_;
    Trace trace_;
    Value sink_;
    std::vector<Value> stack_; // locals of running functions
    std::vector<Value> scratch_;

    void push(TaskCont &c, int32_t fn, const Value *args, size_t n, int32_t hole)
    {
        uint32_t base = static_cast<uint32_t>(c.slots.size());
        c.slots.insert(c.slots.end(), args, args + n);
        Frame f{fn, hole < 0 ? -1 : static_cast<int32_t>(base) + hole, base, static_cast<uint32_t>(n)};
        c.slots.push_back(std::bit_cast<Value>(f));
        ++sched_.counters().pushes;
    }

    void step(TaskId id, TaskCont &&c)
    {
        while (!c.empty()) {
            Frame f = c.top();
            ++sched_.counters().invokes;
            const CFun &fn = m_.funs[f.fn];
            stack_.assign(static_cast<size_t>(fn.nlocals), Value{});
            std::copy(c.slots.begin() + f.base, c.slots.begin() + f.base + f.n, stack_.begin());
            c.slots.resize(f.base);
            Park park;
            exec_cps(fn, c, park);
            if (park.prim == Prim::None)
                continue;
            switch (park.prim) {
            case Prim::Sleep: sched_.sleep(id, std::move(c), park.a); return;
            case Prim::Yield: sched_.yield(id, std::move(c)); return;
            case Prim::IoWait: sched_.io_wait(id, std::move(c), park.a, park.b); return;
            case Prim::CvWait: sched_.cv_wait(id, std::move(c), park.a); return;
            default: throw std::logic_error("bad park");
            }
        }
        trace_.end(id);
    }

    // Evaluates call arguments into scratch_, returning the start offset.
    size_t eval_args(const std::vector<CExpr> &args, size_t base)
    {
        size_t start = scratch_.size();
        for (const auto &a : args) {
            Value v = eval(a, base);
            scratch_.push_back(v);
        }
        return start;
    }

    void push_resume(const Instr &in, TaskCont &c, size_t base)
    {
        if (in.push_fn < 0)
            return;
        size_t start = eval_args(in.push_args, base);
        push(c, in.push_fn, scratch_.data() + start, in.push_args.size(), in.hole);
        scratch_.resize(start);
    }

    // Runs one activation of a converted function with locals at stack_[0..).
    void exec_cps(const CFun &fn, TaskCont &c, Park &park)
    {
        const Instr *code = fn.code.data();
        size_t pc = 0;
        while (true) {
            const Instr &in = code[pc++];
            switch (in.op) {
            case IOp::Return: return;
            case IOp::CpsCall: {
                size_t start = eval_args(in.args, 0);
                push_resume(in, c, 0);
                push(c, in.target, scratch_.data() + start, in.args.size(), -1);
                scratch_.resize(start);
                break;
            }
            case IOp::PrimCall: {
                int64_t a = in.args.size() > 0 ? eval(in.args[0], 0).num : 0;
                int64_t b = in.args.size() > 1 ? eval(in.args[1], 0).num : 0;
                push_resume(in, c, 0);
                switch (in.prim) {
                case Prim::CvSignal: sched_.cv_signal(a); break;
                case Prim::CvBroadcast: sched_.cv_broadcast(a); break;
                default: park = {in.prim, a, b}; break;
                }
                break;
            }
            case IOp::Invoke:
                if (in.has_value) {
                    Value v = eval(in.e, 0);
                    if (!c.empty() && c.top().hole >= 0)
                        c.slots[static_cast<size_t>(c.top().hole)] = v;
                }
                break;
            case IOp::Spawn: {
                size_t start = eval_args(in.args, 0);
                TaskCont child;
                push(child, in.target, scratch_.data() + start, in.args.size(), -1);
                --sched_.counters().pushes;
                scratch_.resize(start);
                sched_.spawn(std::move(child));
                break;
            }
            default: pc = plain(in, pc, 0); break;
            }
        }
    }

    // Executes a non-control instruction; returns the next pc.
    size_t plain(const Instr &in, size_t pc, size_t base)
    {
        switch (in.op) {
        case IOp::Store: {
            Value v = eval(in.e, base);
            stack_[base + static_cast<size_t>(in.slot)] = v;
            return pc;
        }
        case IOp::StoreAt: {
            Value v = eval(in.e, base);
            heap_.at(eval(in.addr, base)) = v;
            return pc;
        }
        case IOp::Eval: eval(in.e, base); return pc;
        case IOp::Print: {
            std::vector<int64_t> args;
            args.reserve(in.args.size());
            for (const auto &a : in.args)
                args.push_back(eval(a, base).num);
            trace_.print(format_print(in.text, args));
            return pc;
        }
        case IOp::JumpIfFalse: return truthy(eval(in.e, base)) ? pc : static_cast<size_t>(in.target);
        case IOp::JumpIfTrue: return truthy(eval(in.e, base)) ? static_cast<size_t>(in.target) : pc;
        case IOp::Jump: return static_cast<size_t>(in.target);
        case IOp::Switch: {
            int64_t t = eval(in.e, base).num;
            if (t < 0 || t >= static_cast<int64_t>(in.table.size()) || in.table[static_cast<size_t>(t)] < 0)
                throw RuntimeFault("bad state tag");
            return static_cast<size_t>(in.table[static_cast<size_t>(t)]);
        }
        case IOp::Release: heap_.release(eval(in.e, base)); return pc;
        default: throw std::logic_error("runtime: control instruction in plain context");
        }
    }

    Value call_plain(const CFun &fn, const std::vector<CExpr> &args, size_t caller_base)
    {
        size_t start = eval_args(args, caller_base);
        size_t base = stack_.size();
        stack_.resize(base + static_cast<size_t>(fn.nlocals));
        std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(start), scratch_.end(),
                  stack_.begin() + static_cast<std::ptrdiff_t>(base));
        scratch_.resize(start);
        Value result;
        const Instr *code = fn.code.data();
        size_t pc = 0;
        while (true) {
            const Instr &in = code[pc++];
            if (in.op == IOp::Return) {
                if (in.has_value)
                    result = eval(in.e, base);
                break;
            }
            pc = plain(in, pc, base);
        }
        stack_.resize(base);
        return result;
    }

    Value cell_at(Value p, int64_t i) { return heap_.at(p, i); }

    Value field_index_addr(const CExpr &e, size_t base)
    {
        Value env = eval(e.kids[0], base);
        int64_t i = eval(e.kids[1], base).num;
        if (i < 0 || i >= e.b)
            throw RuntimeFault("index out of bounds");
        heap_.at(env, e.a + i);
        return env.at_offset(env.num + e.a + i);
    }

    Value eval(const CExpr &e, size_t base)
    {
        switch (e.op) {
        case Op::Const: return Value::of(e.a);
        case Op::Local: return stack_[base + static_cast<size_t>(e.a)];
        case Op::Deref: return heap_.at(eval(e.kids[0], base));
        case Op::Index: {
            Value p = eval(e.kids[0], base);
            return heap_.at(p, eval(e.kids[1], base).num);
        }
        case Op::Field: return heap_.at(eval(e.kids[0], base), e.a);
        case Op::FieldIndex: return heap_.at(field_index_addr(e, base));
        case Op::AddrIndex: {
            Value p = eval(e.kids[0], base);
            int64_t i = eval(e.kids[1], base).num;
            heap_.at(p, i);
            return p.at_offset(p.num + i);
        }
        case Op::AddrField: {
            Value env = eval(e.kids[0], base);
            heap_.at(env, e.a);
            return env.at_offset(env.num + e.a);
        }
        case Op::AddrFieldIndex: return field_index_addr(e, base);
        case Op::Neg: return Value::of(wrap(0 - static_cast<uint64_t>(eval(e.kids[0], base).num)));
        case Op::Not: return Value::of(truthy(eval(e.kids[0], base)) ? 0 : 1);
        case Op::And:
            if (!truthy(eval(e.kids[0], base)))
                return Value::of(0);
            return Value::of(truthy(eval(e.kids[1], base)) ? 1 : 0);
        case Op::Or:
            if (truthy(eval(e.kids[0], base)))
                return Value::of(1);
            return Value::of(truthy(eval(e.kids[1], base)) ? 1 : 0);
        case Op::Call: return call_plain(m_.funs[static_cast<size_t>(e.a)], e.kids, base);
        case Op::Alloc: return heap_.allocate(eval(e.kids[0], base).num);
        case Op::AllocSize: return heap_.allocate(e.a);
        case Op::Sink: return sink_;
        default: break;
        }
        Value l = eval(e.kids[0], base);
        Value r = eval(e.kids[1], base);
        auto ul = static_cast<uint64_t>(l.num), ur = static_cast<uint64_t>(r.num);
        switch (e.op) {
        case Op::Add: return Value::of(wrap(ul + ur));
        case Op::Sub: return Value::of(wrap(ul - ur));
        case Op::Mul: return Value::of(wrap(ul * ur));
        case Op::Div: return Value::of(arith("/", l.num, r.num));
        case Op::Mod: return Value::of(arith("%", l.num, r.num));
        case Op::Lt: return Value::of(l.num < r.num);
        case Op::Le: return Value::of(l.num <= r.num);
        case Op::Gt: return Value::of(l.num > r.num);
        case Op::Ge: return Value::of(l.num >= r.num);
        case Op::Eq: return Value::of(l == r);
        case Op::Ne: return Value::of(!(l == r));
        default: throw std::logic_error("runtime: bad expression");
        }
    }
};

} // namespace

RunResult run_event_loop(const Module &m, const std::vector<int64_t> &args, const World &world)
{
    return EventLoop(m, world).run(args);
}

RunResult run_event_loop(const Program &evir, const std::vector<int64_t> &args, const World &world)
{
    auto m = load_module(evir);
    return run_event_loop(*m, args, world);
}

} // namespace coop
