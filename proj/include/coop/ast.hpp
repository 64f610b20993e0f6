// Abstract syntax shared by every stage: Coop source programs, the
// intermediate goto/split/lifted forms, and the EventIR target.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coop {

struct SourcePos {
    int line = 0;
    int col = 0;
};

enum class TypeKind { Void, Int, Bool, Ptr, Array, Cont, Env, State };

struct Type {
    TypeKind kind = TypeKind::Void;
    TypeKind elem = TypeKind::Int; // Ptr / Array element
    int length = 0;                // Array
    std::string tag;               // Env struct name, State enum name

    static Type void_() { return {}; }
    static Type int_() { return {TypeKind::Int, TypeKind::Int, 0, {}}; }
    static Type bool_() { return {TypeKind::Bool, TypeKind::Int, 0, {}}; }
    static Type ptr(TypeKind elem = TypeKind::Int) { return {TypeKind::Ptr, elem, 0, {}}; }
    static Type array(int n) { return {TypeKind::Array, TypeKind::Int, n, {}}; }
    static Type cont() { return {TypeKind::Cont, TypeKind::Int, 0, {}}; }
    static Type env(std::string name) { return {TypeKind::Env, TypeKind::Int, 0, std::move(name)}; }
    static Type state(std::string name) { return {TypeKind::State, TypeKind::Int, 0, std::move(name)}; }

    bool is_scalar() const { return kind == TypeKind::Int || kind == TypeKind::Bool; }
    int slots() const { return kind == TypeKind::Array ? length : 1; }
    bool operator==(const Type &) const = default;
};

std::string to_string(const Type &t);

enum class Prim { None, Sleep, IoWait, CvWait, CvSignal, CvBroadcast, Yield };

enum class CallKind { Unresolved, Plain, Cps, Prim, Print };

enum class ExprKind {
    IntLit,
    BoolLit,
    DirLit,  // IN / OUT
    StrLit,
    Null,
    Sink,    // runtime-owned return slot
    Var,
    Index,   // kids[0][kids[1]]
    AddrOf,
    Deref,
    Unary,
    Binary,
    Call,
    Field,   // kids[0]->name
    Tag,     // state enum constant
    Push,    // push(name, kids..., k)
    Hole,    // reserved return-value slot inside push
    Alloc,   // malloc(kids[0]) or malloc(sizeof(struct name))
};

struct Expr {
    ExprKind kind = ExprKind::IntLit;
    SourcePos pos;
    Type type;
    int64_t ival = 0;
    std::string name;
    std::string op;
    std::vector<Expr> kids;
    CallKind call = CallKind::Unresolved;
    Prim prim = Prim::None;
    int slot = -1; // Var: declaration slot inside the enclosing function

    static Expr int_lit(int64_t v, SourcePos p = {});
    static Expr bool_lit(bool v, SourcePos p = {});
    static Expr var(std::string name, Type t = {}, SourcePos p = {});
    static Expr unary(std::string op, Expr e);
    static Expr binary(std::string op, Expr l, Expr r);
    static Expr make_call(std::string callee, std::vector<Expr> args, CallKind kind = CallKind::Cps);
    static Expr addr_of(Expr e);
    static Expr deref(Expr e);
    static Expr field(Expr env, std::string name, Type t);
    static Expr tag(std::string name, std::string enum_name);
};

enum class StmtKind {
    Block,
    Decl,
    Assign,
    If,
    While,
    For,
    Break,
    Continue,
    Return,
    ExprStmt,
    Label,
    Goto,
    Spawn,
    Release,
    Switch,
    Case,
    Invoke,
};

struct Stmt {
    StmtKind kind = StmtKind::Block;
    SourcePos pos;
    std::string name; // Decl variable, Label / Goto target, Case tag
    Type type;        // Decl
    int slot = -1;    // Decl
    std::vector<Expr> exprs;
    std::vector<Stmt> body; // Block, If-then, While, For, Switch cases, Case body
    std::vector<Stmt> alt;  // If-else
    std::vector<Stmt> init; // For
    std::vector<Stmt> step; // For

    static Stmt decl(std::string name, Type t);
    static Stmt decl_init(std::string name, Type t, Expr init);
    static Stmt assign(Expr lhs, Expr rhs);
    static Stmt expr_stmt(Expr e);
    static Stmt ret();
    static Stmt ret(Expr e);
    static Stmt label(std::string name);
    static Stmt goto_(std::string target);
    static Stmt if_goto(Expr cond, std::string target);
    static Stmt if_(Expr cond, std::vector<Stmt> then, std::vector<Stmt> otherwise = {});
    static Stmt release(Expr e);
    static Stmt invoke();
    static Stmt invoke(Expr value);

    bool has_value() const { return !exprs.empty(); }
};

struct Param {
    std::string name;
    Type type;
    int slot = -1;
};

struct FunDef {
    std::string name;
    bool is_cps = false;
    Type ret;
    std::vector<Param> params;
    std::vector<Stmt> body;
    std::vector<FunDef> inner; // inner functions after splitting
    SourcePos pos;
    int nslots = 0; // number of declaration slots after checking

    // Set by defunctionalisation: the enum naming the dispatch states.
    std::string state_enum;

    bool has_param(const std::string &n) const;
};

struct StructDecl {
    std::string name;
    std::vector<Param> fields;
};

struct EnumDecl {
    std::string name;
    std::vector<std::string> tags;
};

struct Program {
    std::vector<EnumDecl> enums;
    std::vector<StructDecl> structs;
    std::vector<FunDef> functions;
    std::string entry = "main";

    const FunDef *find(const std::string &name) const;
    FunDef *find(const std::string &name);
};

// Internal compiler error: a pass received input violating its precondition.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

bool is_cps_call(const Expr &e);

// The call expression carried by a statement in one of the positions a cps
// call may occupy (`f(..);`, `lv = f(..);`, `T v = f(..);`, `return f(..);`),
// or nullptr.
const Expr *stmt_call(const Stmt &s);
Expr *stmt_call(Stmt &s);

bool is_terminator(const Stmt &s);

} // namespace coop
