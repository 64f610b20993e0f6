#include "coop/heap.hpp"

#include <algorithm>

namespace coop {

Value Heap::allocate(int64_t n, bool tracked)
{
    if (n < 0 || n > (int64_t{1} << 24))
        throw RuntimeFault("bad allocation size " + std::to_string(n));
    auto size = static_cast<uint32_t>(n);
    int32_t id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        Cell &c = cells_[static_cast<size_t>(id)];
        if (c.size != size) {
            c.data = std::make_unique<Value[]>(size);
            c.size = size;
        } else {
            std::fill_n(c.data.get(), size, Value{});
        }
        ++c.gen;
    } else {
        id = static_cast<int32_t>(cells_.size());
        cells_.push_back({std::make_unique<Value[]>(size), size, 0});
        states_.push_back(State::Live);
    }
    states_[static_cast<size_t>(id)] = tracked ? State::Live : State::Scratch;
    if (tracked)
        ++stats_.allocs;
    return Value::pointer(id, 0, cells_[static_cast<size_t>(id)].gen);
}

void Heap::release(Value ptr)
{
    if (ptr.cell < 0)
        return;
    auto id = static_cast<size_t>(ptr.cell);
    if (id >= cells_.size())
        throw RuntimeFault("release of an invalid pointer");
    State &st = states_[id];
    bool stale = cells_[id].gen != ptr.gen;
    if (st == State::Scratch && !stale)
        throw RuntimeFault("release of a non-heap pointer");
    if (stale || st == State::Released || st == State::Free) {
        ++stats_.double_releases;
        throw RuntimeFault("double release");
    }
    if (ptr.num != 0)
        throw RuntimeFault("release of an interior pointer");
    st = State::Released;
    free_.push_back(ptr.cell);
    ++stats_.releases;
}

void Heap::recycle(Value ptr)
{
    states_[static_cast<size_t>(ptr.cell)] = State::Free;
    free_.push_back(ptr.cell);
}

Value &Heap::at(Value ptr, int64_t index)
{
    if (ptr.cell < 0)
        throw RuntimeFault("null pointer dereference");
    auto id = static_cast<size_t>(ptr.cell);
    Cell &c = cells_[id];
    // A reused id has a newer generation, so a stale pointer fails here
    // before the state is consulted.
    if (c.gen != ptr.gen)
        throw RuntimeFault("use after release");
    State st = states_[id];
    if (st == State::Released || st == State::Free)
        throw RuntimeFault("use after release");
    int64_t i = ptr.num + index;
    if (i < 0 || i >= static_cast<int64_t>(c.size))
        throw RuntimeFault("index out of bounds");
    return c.data[static_cast<size_t>(i)];
}

int64_t arith(const std::string &op, int64_t a, int64_t b)
{
    auto ua = static_cast<uint64_t>(a), ub = static_cast<uint64_t>(b);
    switch (op[0]) {
    case '+': return static_cast<int64_t>(ua + ub);
    case '-': return static_cast<int64_t>(ua - ub);
    case '*': return static_cast<int64_t>(ua * ub);
    case '/':
    case '%':
        if (b == 0)
            throw RuntimeFault("division by zero");
        if (b == -1)
            return op[0] == '/' ? static_cast<int64_t>(0 - ua) : 0;
        return op[0] == '/' ? a / b : a % b;
    }
    throw RuntimeFault("unknown operator " + op);
}

std::string format_print(const std::string &fmt, const std::vector<int64_t> &args)
{
    std::string out;
    size_t next = 0;
    for (size_t i = 0; i < fmt.size(); ++i) {
        if (fmt[i] == '%' && i + 1 < fmt.size()) {
            if (fmt[i + 1] == 'd') {
                out += std::to_string(next < args.size() ? args[next] : 0);
                ++next;
                ++i;
                continue;
            }
            if (fmt[i + 1] == '%') {
                out += '%';
                ++i;
                continue;
            }
        }
        out += fmt[i];
    }
    return out;
}

} // namespace coop
