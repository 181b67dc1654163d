#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "twr/diag.hpp"
#include "twr/types.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Core IR. This is the reversible kernel language every surface program is
// desugared into: values, flat expressions over variable operands, and
// statements (plus the with-do block, which is erased before circuits).
// -------------------------------------------------------------------------

// v ::= x | () | (x1, x2) | n | true | false | null<t> | addr<t>(a) | default<t>
//
// `default<t>` is the all-zero-bit literal of an arbitrary type; for scalars
// it coincides with 0 / false / null and for pairs it is the only way to
// write a literal. `addr` is a concrete cell address; user code cannot write
// one, but the allocator prologue is expressed with them.
struct Value {
    enum class Kind { Var, Unit, Pair, Number, True, False, Null, Addr, Default };
    Kind kind = Kind::Unit;
    std::string x, x2;   // Var: x; Pair: (x, x2)
    uint64_t n = 0;      // Number / Addr
    TypePtr type;        // Null / Addr (pointee) / Default (the whole type)

    static Value var(std::string name);
    static Value unit();
    static Value pair(std::string a, std::string b);
    static Value number(uint64_t n);
    static Value boolean(bool b);
    static Value null(TypePtr pointee);
    static Value addr(TypePtr pointee, uint64_t a);
    static Value zero(TypePtr t); // default<t>

    // True for constant bit patterns (everything except Var and Pair).
    // Controlled binds of these are the zero-T special case of the cost model.
    bool is_literal() const { return kind != Kind::Var && kind != Kind::Pair; }
};

enum class BinOp { And, Or, Add, Sub, Mul, Eq, Neq, Lt };

// e ::= v | x.1 | x.2 | not x | test x | x1 op x2
// Operands are always variable names; the frontend flattens nested
// expressions into with-scoped temporaries.
struct Expr {
    enum class Kind { Val, Proj1, Proj2, Not, Test, Bin };
    Kind kind = Kind::Val;
    Value val;          // Val
    std::string x, y;   // operand names
    BinOp op = BinOp::And;

    static Expr value(Value v);
    static Expr proj(int which, std::string x);
    static Expr not_(std::string x);
    static Expr test(std::string x);
    static Expr bin(BinOp op, std::string x, std::string y);
};

// s ::= skip | s1; s2 | if x { s } | let x <- e | let x -> e
//     | had x | x1 <-> x2 | *x1 <-> x2 | with { s1 } do { s2 }
struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
    enum class Kind { Skip, Seq, If, Bind, Unbind, Had, Swap, MemSwap, WithDo };
    Kind kind = Kind::Skip;
    std::string x, y; // If: guard x; Bind/Unbind/Had: x; Swap: x,y; MemSwap: *x <-> y
    Expr e;           // Bind/Unbind
    StmtPtr a, b;     // Seq: a;b  If: a  WithDo: with{a}do{b}
    Span span;

    static StmtPtr skip(Span sp = {});
    static StmtPtr seq(StmtPtr a, StmtPtr b);
    static StmtPtr if_(std::string guard, StmtPtr body, Span sp = {});
    static StmtPtr bind(std::string x, Expr e, Span sp = {});
    static StmtPtr unbind(std::string x, Expr e, Span sp = {});
    static StmtPtr had(std::string x, Span sp = {});
    static StmtPtr swap(std::string x, std::string y, Span sp = {});
    static StmtPtr memswap(std::string ptr, std::string val, Span sp = {});
    static StmtPtr with_do(StmtPtr a, StmtPtr b, Span sp = {});
};

bool value_equal(const Value& a, const Value& b);
bool expr_equal(const Expr& a, const Expr& b);
// Structural equality, ignoring spans.
bool stmt_equal(const StmtPtr& a, const StmtPtr& b);

// Builds a right-nested sequence out of a statement list (skip for empty).
StmtPtr seq_of(const std::vector<StmtPtr>& items);
// Flattens nested sequences into a list, dropping skips.
std::vector<StmtPtr> seq_items(const StmtPtr& s);

// Statement reversal: swaps bind/unbind, reverses sequences, recurses under
// if; with{a}do{b} reverses to with{a}do{reverse(b)}. Involutive.
StmtPtr reverse_stmt(const StmtPtr& s);

// The set of variable names a statement may modify. Guards of well-formed
// ifs never appear in the modified set of their own body.
std::set<std::string> modified_vars(const StmtPtr& s);

// Every variable name a statement mentions at all: modified targets, guard
// variables, expression operands, swap/memswap operands.
std::set<std::string> touched_vars(const StmtPtr& s);
// Operand names of an expression (including pair-value components).
std::set<std::string> expr_vars(const Expr& e);

// Expands every with{a}do{b} into a; b; reverse(a). Off-the-shelf definition
// used by the checker, the cost model and the circuit layer alike.
StmtPtr expand_with(const StmtPtr& s);

// Bit pattern of a literal value (LSB first; pairs are impossible as
// literals, `default` is all zero). Numbers and addresses are truncated to
// the word width.
uint64_t literal_bits(const Value& v, uint32_t word_width);

// Canonical pretty-printer: one statement per line, two-space indent,
// "with {" / "} do {" / "}" block markers.
std::string value_str(const Value& v);
std::string expr_str(const Expr& e);
std::string stmt_str(const StmtPtr& s);

} // namespace twr
