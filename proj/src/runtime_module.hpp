// Internal representation shared by the module loader and the event loop.
#pragma once

#include <string>
#include <vector>

#include "coop/ast.hpp"
#include "coop/runtime.hpp"

namespace coop {

enum class Op : uint8_t {
    Const,
    Local,
    Deref,          // *kids[0]
    Index,          // kids[0][kids[1]], pointer base
    Field,          // kids[0]->(a)
    FieldIndex,     // kids[0]->(a)[kids[1]], length b
    AddrIndex,      // &kids[0][kids[1]]
    AddrField,      // &kids[0]->(a)
    AddrFieldIndex, // &kids[0]->(a)[kids[1]], length b
    Neg,
    Not,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    Call, // plain function a
    Alloc,
    AllocSize, // a cells
    Sink,
};

struct CExpr {
    Op op = Op::Const;
    int64_t a = 0;
    int64_t b = 0;
    std::vector<CExpr> kids;
};

enum class IOp : uint8_t {
    Store,      // locals[slot] = e
    StoreAt,    // *addr = e
    Eval,
    Print,
    JumpIfFalse,
    JumpIfTrue,
    Jump,
    Return,     // plain function return, optional value
    Invoke,     // write optional value into the top frame's hole
    CpsCall,    // push resume frame (optional), push callee frame
    PrimCall,   // push resume frame (optional), then the primitive
    Switch,
    Spawn,
    Release,
};

struct Instr {
    IOp op = IOp::Eval;
    int32_t slot = 0;
    int32_t target = 0; // jump target, callee id
    Prim prim = Prim::None;
    bool has_value = false;
    CExpr e;
    CExpr addr;
    std::vector<CExpr> args;
    int32_t push_fn = -1;
    int32_t hole = -1; // index of the hole within push_args
    std::vector<CExpr> push_args;
    std::vector<int32_t> table; // switch: tag value -> pc
    std::string text;           // print format
};

struct CFun {
    std::string name;
    bool cps = false; // takes a continuation
    int32_t nparams = 0;
    int32_t nlocals = 0;
    std::vector<Type> param_types;
    std::vector<Instr> code;
};

class Module {
  public:
    std::vector<CFun> funs;
    int32_t entry = -1;
};

} // namespace coop
