#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twr/diag.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Concrete circuits at three refinement levels:
//   mcx       — X gates with any number of controls, plus H.
//   toffoli   — X gates with at most 2 controls, H, and the CH macro.
//   cliffordT — X with at most 1 control, H, S, S†, T, T†, Z, CH macro.
//
// A gate keeps its control wires in two lists: `controls`/`neg_controls`
// are the controls belonging to the primitive's own template, and `guards`
// are the if-condition wires stacked on top by control flow. The split is
// cost-relevant: every guard control is realized by a compute/uncompute
// Toffoli pair (2 × 7 T), while template controls are decomposed with the
// recursive ancilla scheme (2(c−2)+1 Toffolis for c ≥ 2). Literal-store X
// gates (`value_flag`) absorb their innermost guard for free by becoming a
// CNOT, and a guarded H becomes the CH macro (8 T) on its innermost guard.
// -------------------------------------------------------------------------

struct Gate {
    enum class Kind { X, H, CH, S, Sdg, T, Tdg, Z };
    Kind kind = Kind::X;
    uint32_t target = 0;
    std::vector<uint32_t> controls;     // template controls, positive
    std::vector<uint32_t> neg_controls; // template controls, negated
    std::vector<uint32_t> guards;       // if-controls, positive, outermost first
    bool value_flag = false;            // X that stores a literal bit

    uint32_t total_controls() const {
        return static_cast<uint32_t>(controls.size() + neg_controls.size() +
                                     guards.size());
    }

    static Gate x(uint32_t target, std::vector<uint32_t> controls = {},
                  std::vector<uint32_t> negs = {});
    static Gate h(uint32_t target);
    static Gate ch(uint32_t control, uint32_t target);
    static Gate phase(Kind k, uint32_t target);
};

// Gate identity for round-trip and equivalence checks: kind, target and the
// full control multiset with polarity. The template/guard split and the
// value flag are costing metadata, not part of the gate's action.
bool gate_action_equal(const Gate& a, const Gate& b);

enum class Level { Mcx, Toffoli, CliffordT };

struct Circuit {
    Level level = Level::Mcx;
    uint32_t n_wires = 0;
    std::vector<std::string> wire_names; // size n_wires once finalized
    std::vector<Gate> gates;

    void push(Gate g);
    // Appends a wire with the given name, returning its index.
    uint32_t add_wire(const std::string& name);
};

struct GateCounts {
    uint64_t t = 0;        // T + T† tally (formula-priced at mcx/toffoli level)
    uint64_t toffoli = 0;  // X gates with exactly 2 controls
    uint64_t mcx_ge2 = 0;  // X gates with ≥ 2 controls
    uint64_t cnot = 0;     // X gates with exactly 1 control
    uint64_t x = 0;        // X gates with no controls
    uint64_t h = 0;
    uint64_t s = 0; // S + S†
    uint64_t z = 0;
    uint64_t ch = 0;
    uint64_t qubits = 0;
    uint64_t t_formula = 0;      // closed-form T prediction (== t when decomposed)
    uint64_t total_gates = 0;
    uint64_t surplus_controls = 0; // Σ max(0, total controls − 1) over X gates
};

// T cost of one gate under the cost-model-aligned decomposition:
//   X, value-flagged:    0 if unguarded, else 14·(guards−1)
//   X, otherwise:        14·guards + (c ≥ 2 ? 14c − 21 : 0) over template controls
//   H:                   0 if unguarded, else 8 + 14·(guards−1)
//   CH: 8.  T/T†: 1.  others: 0.
uint64_t t_cost_of_gate(const Gate& g);

GateCounts count_gates(const Circuit& c);

// MCX → Toffoli: guard controls via AND-chain Toffoli pairs, template
// controls via the recursive ancilla decomposition, negative controls via
// X conjugation, guarded H via the CH macro. Ancillas come from a shared
// pool past the existing wires and every one is returned to zero.
Circuit decompose_mcx(const Circuit& c);

// Toffoli → Clifford+T: each Toffoli becomes the fixed 16-gate, 7-T
// template; CH is kept as a macro gate of recorded T-cost 8.
Circuit decompose_toffoli(const Circuit& c);

// The 16-gate Clifford+T realization of Toffoli(c1, c2 → t).
std::vector<Gate> toffoli_template(uint32_t c1, uint32_t c2, uint32_t t);

// Circuit file format:
//   .v <wire names>        all wires
//   .i <wire names>        input wires
//   BEGIN … END            one gate per line: `tof c1 … ck t` (negated
//   controls carry a trailing '), `H w`, `T w`, `T* w`, `S w`, `S* w`,
//   `Z w`, `ch c t`.
std::string write_qc(const Circuit& c, const std::vector<std::string>& inputs);
Circuit read_qc(const std::string& text);

// Unique per-wire file tokens: the wire's recorded name, suffixed with
// `_w<index>` wherever names collide or are empty.
std::vector<std::string> wire_tokens(const Circuit& c);

} // namespace twr
