#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/circuits.hpp"
#include "twr/frontend.hpp"
#include "twr/lowering.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Circuit execution and equivalence checking.
// -------------------------------------------------------------------------

// Applies an X-family circuit to a basis state (one byte per wire, 0/1).
// Phase gates leave basis states untouched; H and CH are rejected because
// they are not permutations. `bits` is resized to the circuit's wire count.
std::vector<uint8_t> run_basis(const Circuit& c, std::vector<uint8_t> bits);

// Full statevector simulation for small circuits (≤ 22 wires). Wire w is
// bit w of the state index. CH applies an exact controlled Hadamard.
using Amp = std::complex<double>;
std::vector<Amp> run_statevector(const Circuit& c, std::vector<Amp> state);

struct EquivOptions {
    uint64_t budget = 1000;         // sampled cases when not exhaustive
    uint64_t seed = 0xC0FFEE;       // sampling seed
    uint32_t exhaustive_limit = 20; // exhaustive when total input bits ≤ this
};

struct EquivResult {
    bool equivalent = true;
    uint64_t cases = 0;
    bool exhaustive = false;
    std::string counterexample; // first observed mismatch, empty when none
};

// Output equivalence of two compilations of the same entry: equal named
// outputs and equal memory on every tried basis input, with every
// non-input wire starting at zero.
EquivResult check_equivalence(const LoweredProgram& a, const LoweredProgram& b,
                              const EquivOptions& o = {});

// Agreement of a compiled circuit with the reference interpreter on named
// outputs and memory over the same input enumeration.
EquivResult check_against_interp(const FrontendResult& fe, const LoweredProgram& lp,
                                 const LoweringOptions& lopt, const EquivOptions& o = {});

} // namespace twr
