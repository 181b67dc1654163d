#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "twr/core_ir.hpp"
#include "twr/diag.hpp"
#include "twr/types.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Surface language: what .twr files contain before inlining and desugaring.
// Functions carry static (compile-time) parameters in brackets that drive
// bounded recursion; expressions may nest freely; if-statements may carry
// else-branches. All of it is erased on the way to the core IR.
// -------------------------------------------------------------------------

// Types as written, possibly via named aliases ("type list = ...").
struct SType;
using STypePtr = std::shared_ptr<const SType>;
struct SType {
    enum class Kind { Unit, Uint, Bool, Pair, Ptr, Named };
    Kind kind;
    STypePtr fst, snd;
    std::string name; // Named
    Span span;
};

// Compile-time integer expressions appearing in call brackets: n, 3, n-1, 2*k.
struct StaticExpr;
using StaticExprPtr = std::shared_ptr<const StaticExpr>;
struct StaticExpr {
    enum class Kind { Num, Var, Bin };
    Kind kind;
    int64_t n = 0;
    std::string name;
    char op = 0; // '+', '-', '*'
    StaticExprPtr lhs, rhs;
    Span span;
};

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;
struct SExpr {
    enum class Kind {
        Var, Number, True, False, Unit, Null, Default, Alloc,
        Pair, Proj, Not, Test, Bin, Call,
    };
    Kind kind;
    std::string name;        // Var / Call target
    uint64_t n = 0;          // Number
    STypePtr type;           // Null/Default/Alloc payload type (Null may omit it)
    SExprPtr a, b;           // Pair / Bin operands / Proj & unary operand in a
    int proj = 0;            // Proj: 1 or 2
    BinOp op = BinOp::And;   // Bin
    std::vector<StaticExprPtr> static_args; // Call bracket expressions
    std::vector<SExprPtr> args;             // Call arguments
    Span span;
};

struct SStmt;
using SStmtPtr = std::shared_ptr<const SStmt>;
struct SStmt {
    enum class Kind { Let, Unlet, If, With, Swap, MemSwap, Had, Skip, Free, Call };
    Kind kind;
    std::string x, y;            // Let/Unlet/Had/Free: x; Swap/MemSwap: x,y
    SExprPtr e;                  // Let/Unlet value, If guard, Call expression
    std::vector<SStmtPtr> body;  // If then-branch / With block
    std::vector<SStmtPtr> body2; // If else-branch / Do block
    bool has_else = false;
    Span span;
};

struct SFun {
    std::string name;
    std::vector<std::string> static_params;
    std::vector<std::pair<std::string, STypePtr>> params;
    std::vector<SStmtPtr> body;
    std::string return_var; // "" for none
    Span return_span;
    Span span;
};

struct SProgram {
    std::vector<std::pair<std::string, STypePtr>> typedefs; // in declaration order
    std::vector<SFun> functions;

    const SFun* find(const std::string& name) const {
        for (auto& f : functions)
            if (f.name == name) return &f;
        return nullptr;
    }
};

// Parses a whole source file. Throws CompileError with line:col on bad input.
SProgram parse_program(const std::string& source);

// Debugging pretty-printer producing valid surface syntax;
// parse(print(parse(src))) == parse(src).
std::string program_str(const SProgram& prog);

} // namespace twr
