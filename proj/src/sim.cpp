#include "twr/sim.hpp"

#include "twr/diag.hpp"
#include "twr/interp.hpp"
#include "twr/types.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace twr {

namespace {

bool gate_fires(const Gate& g, const std::vector<uint8_t>& bits) {
    for (uint32_t w : g.controls)
        if (!bits[w]) return false;
    for (uint32_t w : g.guards)
        if (!bits[w]) return false;
    for (uint32_t w : g.neg_controls)
        if (bits[w]) return false;
    return true;
}

} // namespace

std::vector<uint8_t> run_basis(const Circuit& c, std::vector<uint8_t> bits) {
    bits.resize(c.n_wires, 0);
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::X:
                if (gate_fires(g, bits)) bits[g.target] ^= 1;
                break;
            case Gate::Kind::T:
            case Gate::Kind::Tdg:
            case Gate::Kind::S:
            case Gate::Kind::Sdg:
            case Gate::Kind::Z:
                break; // diagonal: basis states are eigenstates
            case Gate::Kind::H:
            case Gate::Kind::CH:
                throw InternalError("basis simulation of a non-permutation gate (H)");
        }
    }
    return bits;
}

std::vector<Amp> run_statevector(const Circuit& c, std::vector<Amp> state) {
    if (c.n_wires > 22) throw InternalError("statevector simulation beyond 22 wires");
    size_t dim = size_t(1) << c.n_wires;
    if (state.size() != dim) throw InternalError("statevector dimension mismatch");
    const double isq2 = 1.0 / std::sqrt(2.0);
    const Amp tphase = std::polar(1.0, std::acos(-1.0) / 4.0);

    auto ctrl_ok = [&](size_t idx, const Gate& g) {
        for (uint32_t w : g.controls)
            if (!((idx >> w) & 1)) return false;
        for (uint32_t w : g.guards)
            if (!((idx >> w) & 1)) return false;
        for (uint32_t w : g.neg_controls)
            if ((idx >> w) & 1) return false;
        return true;
    };

    for (const Gate& g : c.gates) {
        size_t tbit = size_t(1) << g.target;
        switch (g.kind) {
            case Gate::Kind::X:
                for (size_t i = 0; i < dim; ++i)
                    if (!(i & tbit) && ctrl_ok(i, g)) std::swap(state[i], state[i | tbit]);
                break;
            case Gate::Kind::H:
            case Gate::Kind::CH:
                for (size_t i = 0; i < dim; ++i) {
                    if ((i & tbit) || !ctrl_ok(i, g)) continue;
                    Amp a = state[i], b = state[i | tbit];
                    state[i] = (a + b) * isq2;
                    state[i | tbit] = (a - b) * isq2;
                }
                break;
            case Gate::Kind::S:
                for (size_t i = 0; i < dim; ++i)
                    if ((i & tbit) && ctrl_ok(i, g)) state[i] *= Amp(0, 1);
                break;
            case Gate::Kind::Sdg:
                for (size_t i = 0; i < dim; ++i)
                    if ((i & tbit) && ctrl_ok(i, g)) state[i] *= Amp(0, -1);
                break;
            case Gate::Kind::T:
                for (size_t i = 0; i < dim; ++i)
                    if ((i & tbit) && ctrl_ok(i, g)) state[i] *= tphase;
                break;
            case Gate::Kind::Tdg:
                for (size_t i = 0; i < dim; ++i)
                    if ((i & tbit) && ctrl_ok(i, g)) state[i] *= std::conj(tphase);
                break;
            case Gate::Kind::Z:
                for (size_t i = 0; i < dim; ++i)
                    if ((i & tbit) && ctrl_ok(i, g)) state[i] *= -1.0;
                break;
        }
    }
    return state;
}

namespace {

uint64_t mask_of(uint32_t w) { return w >= 64 ? ~uint64_t(0) : (uint64_t(1) << w) - 1; }

std::vector<uint8_t> range_slice(const std::vector<uint8_t>& bits, const WireRange& r) {
    std::vector<uint8_t> out(r.width);
    for (uint32_t i = 0; i < r.width; ++i) out[i] = bits[r.start + i];
    return out;
}

uint64_t slice_value(const std::vector<uint8_t>& slice) {
    uint64_t v = 0;
    for (uint32_t i = 0; i < slice.size() && i < 64; ++i)
        v |= uint64_t(slice[i]) << i;
    return v;
}

std::string slice_str(const std::vector<uint8_t>& slice) {
    if (slice.size() <= 64) return std::to_string(slice_value(slice));
    std::string s;
    for (size_t i = slice.size(); i-- > 0;) s += slice[i] ? '1' : '0';
    return "0b" + s;
}

// Shared input enumeration: one named assignment per case.
struct InputEnum {
    std::vector<std::pair<std::string, uint32_t>> inputs; // name, width
    uint32_t total_bits = 0;
    bool exhaustive = false;
    uint64_t cases = 0;
    std::mt19937_64 rng;

    InputEnum(const std::vector<std::pair<std::string, WireRange>>& ins, const EquivOptions& o)
        : rng(o.seed) {
        for (const auto& [name, r] : ins) {
            inputs.emplace_back(name, r.width);
            total_bits += r.width;
        }
        exhaustive = total_bits <= o.exhaustive_limit;
        cases = exhaustive ? (uint64_t(1) << total_bits) : o.budget;
    }

    std::map<std::string, uint64_t> assignment(uint64_t idx) {
        std::map<std::string, uint64_t> m;
        if (exhaustive) {
            uint32_t off = 0;
            for (const auto& [name, w] : inputs) {
                m[name] = (idx >> off) & mask_of(w);
                off += w;
            }
        } else {
            for (const auto& [name, w] : inputs) m[name] = rng() & mask_of(w);
        }
        return m;
    }
};

std::vector<uint8_t> run_with_inputs(const LoweredProgram& lp,
                                     const std::map<std::string, uint64_t>& vals) {
    std::vector<uint8_t> bits(lp.circuit.n_wires, 0);
    for (const auto& [name, r] : lp.inputs) {
        uint64_t v = vals.count(name) ? vals.at(name) : 0;
        for (uint32_t i = 0; i < r.width && i < 64; ++i)
            bits[r.start + i] = uint8_t((v >> i) & 1);
    }
    return run_basis(lp.circuit, std::move(bits));
}

std::string describe_inputs(const std::map<std::string, uint64_t>& vals) {
    std::ostringstream os;
    for (const auto& [k, v] : vals) os << k << "=" << v << " ";
    return os.str();
}

} // namespace

EquivResult check_equivalence(const LoweredProgram& a, const LoweredProgram& b,
                              const EquivOptions& o) {
    EquivResult res;
    if (a.inputs.size() != b.inputs.size())
        throw InternalError("equivalence check over different input signatures");
    for (size_t i = 0; i < a.inputs.size(); ++i)
        if (a.inputs[i].first != b.inputs[i].first ||
            a.inputs[i].second.width != b.inputs[i].second.width)
            throw InternalError("equivalence check over different input signatures");

    InputEnum en(a.inputs, o);
    res.exhaustive = en.exhaustive;
    for (uint64_t i = 0; i < en.cases; ++i) {
        auto vals = en.assignment(i);
        auto abits = run_with_inputs(a, vals);
        auto bbits = run_with_inputs(b, vals);
        ++res.cases;

        // Named outputs must agree on both sides.
        if (a.outputs.size() != b.outputs.size()) {
            res.equivalent = false;
            res.counterexample = "output variable sets differ";
            return res;
        }
        for (const auto& [name, ra] : a.outputs) {
            auto itb = b.outputs.find(name);
            if (itb == b.outputs.end() || itb->second.width != ra.width) {
                res.equivalent = false;
                res.counterexample = "output variable '" + name + "' missing on one side";
                return res;
            }
            auto va = range_slice(abits, ra);
            auto vb = range_slice(bbits, itb->second);
            if (va != vb) {
                res.equivalent = false;
                res.counterexample = "inputs " + describe_inputs(vals) + "-> " + name + ": " +
                                     slice_str(va) + " vs " + slice_str(vb);
                return res;
            }
        }
        auto ma = range_slice(abits, a.memory);
        auto mb = range_slice(bbits, b.memory);
        if (ma != mb) {
            res.equivalent = false;
            res.counterexample =
                "inputs " + describe_inputs(vals) + "-> memory contents differ";
            return res;
        }
    }
    return res;
}

EquivResult check_against_interp(const FrontendResult& fe, const LoweredProgram& lp,
                                 const LoweringOptions& lopt, const EquivOptions& o) {
    EquivResult res;
    InterpOptions iopt{lopt.word_width, lopt.cells};
    InputEnum en(lp.inputs, o);
    res.exhaustive = en.exhaustive;
    for (uint64_t i = 0; i < en.cases; ++i) {
        auto vals = en.assignment(i);
        auto bits = run_with_inputs(lp, vals);
        MachineState st = interp_program(fe, vals, iopt);
        ++res.cases;

        if (st.vars.size() != lp.outputs.size()) {
            res.equivalent = false;
            res.counterexample = "live variable sets differ between circuit and interpreter";
            return res;
        }
        for (const auto& [name, r] : lp.outputs) {
            auto it = st.vars.find(name);
            if (it == st.vars.end()) {
                res.equivalent = false;
                res.counterexample = "variable '" + name + "' not live in the interpreter";
                return res;
            }
            uint64_t vc = slice_value(range_slice(bits, r));
            if (r.width > 64)
                throw InternalError("interpreter comparison beyond 64-bit registers");
            if (vc != it->second.value) {
                res.equivalent = false;
                res.counterexample = "inputs " + describe_inputs(vals) + "-> " + name +
                                     ": circuit " + std::to_string(vc) + " vs interpreter " +
                                     std::to_string(it->second.value);
                return res;
            }
        }
        for (uint32_t cell = 1; lp.cell_bits > 0 && cell * lp.cell_bits <= lp.memory.width;
             ++cell) {
            WireRange rc{lp.memory.start + (cell - 1) * lp.cell_bits, lp.cell_bits};
            uint64_t vc = slice_value(range_slice(bits, rc));
            if (vc != st.memory.at(cell)) {
                res.equivalent = false;
                res.counterexample = "inputs " + describe_inputs(vals) + "-> memory cell " +
                                     std::to_string(cell) + ": circuit " + std::to_string(vc) +
                                     " vs interpreter " + std::to_string(st.memory.at(cell));
                return res;
            }
        }
    }
    return res;
}

} // namespace twr
