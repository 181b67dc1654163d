#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/check.hpp"
#include "twr/core_ir.hpp"
#include "twr/frontend.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Classical reference interpreter over core IR (basis-state semantics).
// One register per live name: a re-declared name XORs into the same
// register; unbinding the last occurrence requires the register to cancel
// to zero. Arithmetic (+, −, *) may only initialize a fresh register.
// Hadamard has no classical meaning and is rejected.
// -------------------------------------------------------------------------

struct InterpOptions {
    uint32_t word_width = 8;
    uint32_t cells = 16;
};

struct MachineState {
    struct Slot {
        uint64_t value = 0;
        uint32_t count = 0; // binding multiplicity of the shared register
    };
    std::map<std::string, Slot> vars;
    std::vector<uint64_t> memory; // cell values; cell 0 exists but is never touched

    uint64_t var(const std::string& x) const;
};

// Interpreter error distinct from CompileError: the program is well-formed
// but a run-time obligation failed (unbind mismatch).
struct InterpError : std::runtime_error {
    Span span;
    InterpError(Span s, const std::string& msg)
        : std::runtime_error(s.synthetic() ? msg : s.str() + ": " + msg), span(s) {}
};

// Runs a statement from a given state. `ctx` types the free variables and
// evolves alongside the state.
void interp_stmt(const StmtPtr& s, Context& ctx, MachineState& st, const InterpOptions& opt);

// Runs prologue + body on the given input values (missing inputs are zero).
MachineState interp_program(const FrontendResult& fe,
                            const std::map<std::string, uint64_t>& inputs,
                            const InterpOptions& opt);

} // namespace twr
