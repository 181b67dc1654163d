#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/check.hpp"
#include "twr/circuits.hpp"
#include "twr/core_ir.hpp"
#include "twr/frontend.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Lowering: core IR -> register allocation + abstract instructions + the
// MCX-level circuit. Variables live in contiguous wire ranges; re-declared
// names alias the same range (XOR semantics); an if pushes its guard wire
// onto a control stack that is appended to every emitted gate. Variables
// touched by a with-block and live at both ends of the do-block are pinned
// to their register for the do-block's duration.
// -------------------------------------------------------------------------

struct LoweringOptions {
    uint32_t word_width = 8;
    uint32_t cells = 16;
};

struct WireRange {
    uint32_t start = 0;
    uint32_t width = 0;
    bool overlaps(const WireRange& o) const {
        return start < o.start + o.width && o.start < start + width;
    }
    bool operator==(const WireRange& o) const {
        return start == o.start && width == o.width;
    }
};

struct AbstractInstr {
    enum class Op {
        XorConst,
        XorReg,
        ProjectXor,
        NotOp,
        TestOp,
        AndOp,
        OrOp,
        Add,
        Sub,
        Mul,
        Eq,
        Neq,
        Lt,
        SwapRegs,
        MemSwap,
        Hadamard,
    };
    Op op = Op::XorConst;
    std::vector<WireRange> regs; // regs[0] is the written operand
    uint64_t imm = 0;            // XorConst bit pattern
    WireRange scratch;           // zero-borrowed helper wires
    uint32_t mem_base = 0, cell_bits = 0, cells = 0; // MemSwap geometry
    std::vector<uint32_t> controls; // guard wires, outermost first
    bool reversed = false;          // emitted as the reverse gate sequence
    Span span;
};

// Helper wires an opcode needs at the given operand width.
uint32_t scratch_bits(AbstractInstr::Op op, uint32_t width);

// Stable lower-case opcode name ("xor_const", "add", ...).
const char* instr_op_name(AbstractInstr::Op op);

// Appends the instruction's MCX-level gate template to the circuit.
// Guard controls are appended to every emitted gate; literal stores carry
// the value flag. Throws CompileError if a wire would appear twice on one
// gate (e.g. a guard used as an operand under its own if).
void emit_instr(const AbstractInstr& i, Circuit& c);

std::string instr_str(const AbstractInstr& i);

// Ranges a with-block pinned, with entry/exit snapshots (equal by
// construction; recorded for the register-constraint tests).
struct WithPinRecord {
    std::vector<std::string> names;
    std::vector<WireRange> entry_ranges;
    std::vector<WireRange> exit_ranges;
};

struct LoweredProgram {
    Circuit circuit; // mcx level, prologue gates first
    std::vector<AbstractInstr> instrs;
    std::vector<std::pair<std::string, WireRange>> inputs;
    std::map<std::string, WireRange> outputs; // registers live at program end
    WireRange memory;    // wires of cells 1..M−1; width 0 when memory unused
    uint32_t cell_bits = 0;
    uint64_t qubits = 0; // total wires allocated (the high-water mark)
    std::vector<WithPinRecord> pins;
    size_t prologue_gate_count = 0;
};

LoweredProgram lower_program(const FrontendResult& fe, const LoweringOptions& opt);

// The abstract instructions a single primitive statement lowers to, with
// operand registers freshly allocated from the types in `ctx` (memory
// geometry derived from the pointer operand for a memswap). This is the
// generator behind the cost-constants table: counting the gates of these
// instructions yields the per-primitive constants.
std::vector<AbstractInstr> primitive_instrs(const StmtPtr& prim, const Context& ctx,
                                            const LoweringOptions& opt);

} // namespace twr
