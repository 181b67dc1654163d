#include "twr/circuits.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace twr {

Gate Gate::x(uint32_t target, std::vector<uint32_t> controls,
             std::vector<uint32_t> negs) {
    Gate g;
    g.kind = Kind::X;
    g.target = target;
    g.controls = std::move(controls);
    g.neg_controls = std::move(negs);
    return g;
}

Gate Gate::h(uint32_t target) {
    Gate g;
    g.kind = Kind::H;
    g.target = target;
    return g;
}

Gate Gate::ch(uint32_t control, uint32_t target) {
    Gate g;
    g.kind = Kind::CH;
    g.target = target;
    g.controls = {control};
    return g;
}

Gate Gate::phase(Kind k, uint32_t target) {
    Gate g;
    g.kind = k;
    g.target = target;
    return g;
}

bool gate_action_equal(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.target != b.target) return false;
    auto pos = [](const Gate& g) {
        std::vector<uint32_t> v = g.controls;
        v.insert(v.end(), g.guards.begin(), g.guards.end());
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<uint32_t> an = a.neg_controls, bn = b.neg_controls;
    std::sort(an.begin(), an.end());
    std::sort(bn.begin(), bn.end());
    return pos(a) == pos(b) && an == bn;
}

void Circuit::push(Gate g) { gates.push_back(std::move(g)); }

uint32_t Circuit::add_wire(const std::string& name) {
    wire_names.push_back(name);
    return n_wires++;
}

// ---- counting ---------------------------------------------------------------

static uint64_t mcx_t_formula(uint64_t c) {
    return c >= 2 ? 14 * c - 21 : 0;
}

uint64_t t_cost_of_gate(const Gate& g) {
    uint64_t d = g.guards.size();
    uint64_t c0 = g.controls.size() + g.neg_controls.size();
    switch (g.kind) {
        case Gate::Kind::X:
            if (g.value_flag) return d == 0 ? 0 : 14 * (d - 1);
            return 14 * d + mcx_t_formula(c0);
        case Gate::Kind::H: return d == 0 ? 0 : 8 + 14 * (d - 1);
        case Gate::Kind::CH: return 8 + 14 * d;
        case Gate::Kind::T:
        case Gate::Kind::Tdg: return 1;
        default: return 0;
    }
}

GateCounts count_gates(const Circuit& c) {
    GateCounts n;
    n.qubits = c.n_wires;
    n.total_gates = c.gates.size();
    for (const Gate& g : c.gates) {
        n.t_formula += t_cost_of_gate(g);
        switch (g.kind) {
            case Gate::Kind::X: {
                uint64_t tc = g.total_controls();
                if (tc == 0) n.x++;
                else if (tc == 1) n.cnot++;
                else {
                    n.mcx_ge2++;
                    if (tc == 2) n.toffoli++;
                }
                if (tc > 0) n.surplus_controls += tc - 1;
                break;
            }
            case Gate::Kind::H: n.h++; break;
            case Gate::Kind::CH: n.ch++; break;
            case Gate::Kind::S:
            case Gate::Kind::Sdg: n.s++; break;
            case Gate::Kind::Z: n.z++; break;
            case Gate::Kind::T:
            case Gate::Kind::Tdg: n.t++; break;
        }
    }
    n.t += 8 * n.ch;
    return n;
}

// ---- MCX → Toffoli ----------------------------------------------------------

namespace {

// Zero-initialized helper wires, reused across gates.
class AncillaPool {
public:
    explicit AncillaPool(Circuit& c) : c_(c) {}
    uint32_t get() {
        if (!free_.empty()) {
            uint32_t w = free_.back();
            free_.pop_back();
            return w;
        }
        return c_.add_wire("anc" + std::to_string(counter_++));
    }
    void put(uint32_t w) { free_.push_back(w); }

private:
    Circuit& c_;
    std::vector<uint32_t> free_;
    uint32_t counter_ = 0;
};

struct McxDecomposer {
    Circuit& out;
    AncillaPool pool;

    explicit McxDecomposer(Circuit& c) : out(c), pool(c) {}

    void toffoli(uint32_t a, uint32_t b, uint32_t t) {
        out.push(Gate::x(t, {a, b}));
    }

    // AND-chain over `wires` (≥ 1 of them): the first wire is taken as-is and
    // every further wire costs one compute Toffoli into a fresh ancilla.
    // Returns the wire holding the conjunction plus the gates/ancillas to
    // undo, in compute order.
    struct Chain {
        uint32_t end;
        std::vector<Gate> compute;
        std::vector<uint32_t> ancs;
    };
    Chain make_chain(const std::vector<uint32_t>& wires) {
        Chain ch;
        ch.end = wires.front();
        for (size_t i = 1; i < wires.size(); ++i) {
            uint32_t a = pool.get();
            ch.compute.push_back(Gate::x(a, {wires[i], ch.end}));
            ch.ancs.push_back(a);
            ch.end = a;
        }
        return ch;
    }
    void emit_chain(const Chain& ch) {
        for (const Gate& g : ch.compute) out.push(g);
    }
    void undo_chain(const Chain& ch) {
        for (auto it = ch.compute.rbegin(); it != ch.compute.rend(); ++it)
            out.push(*it);
        for (uint32_t a : ch.ancs) pool.put(a);
    }

    // X with `ctrls` positive controls onto `t`: identity/CNOT/Toffoli for
    // c ≤ 2, else Toffoli(c_{n−1}, c_n → anc) around the recursion.
    void fig5(std::vector<uint32_t> ctrls, uint32_t t) {
        size_t n = ctrls.size();
        if (n == 0) {
            out.push(Gate::x(t));
            return;
        }
        if (n == 1) {
            out.push(Gate::x(t, {ctrls[0]}));
            return;
        }
        if (n == 2) {
            toffoli(ctrls[0], ctrls[1], t);
            return;
        }
        uint32_t a = pool.get();
        uint32_t cn = ctrls[n - 1], cm = ctrls[n - 2];
        toffoli(cm, cn, a);
        ctrls.resize(n - 2);
        ctrls.push_back(a);
        fig5(std::move(ctrls), t);
        toffoli(cm, cn, a);
        pool.put(a);
    }

    void emit_x(const Gate& g) {
        // Negated template controls are X-conjugated to positive.
        for (uint32_t w : g.neg_controls) out.push(Gate::x(w));
        std::vector<uint32_t> base = g.controls;
        base.insert(base.end(), g.neg_controls.begin(), g.neg_controls.end());

        if (g.guards.empty()) {
            if (g.value_flag || base.empty()) out.push(Gate::x(g.target));
            else fig5(base, g.target);
        } else if (g.value_flag) {
            // Literal store: the innermost guard is a free direct control.
            Chain ch = make_chain(g.guards);
            emit_chain(ch);
            out.push(Gate::x(g.target, {ch.end}));
            undo_chain(ch);
        } else if (base.empty()) {
            // No template control to seed the chain: a rail wire held at 1
            // makes every guard cost one Toffoli pair.
            uint32_t rail = pool.get();
            out.push(Gate::x(rail));
            std::vector<uint32_t> seed = {rail};
            seed.insert(seed.end(), g.guards.begin(), g.guards.end());
            Chain ch = make_chain(seed);
            emit_chain(ch);
            out.push(Gate::x(g.target, {ch.end}));
            undo_chain(ch);
            out.push(Gate::x(rail));
            pool.put(rail);
        } else {
            // Seed the guard chain with one template control; the rest of
            // the template controls decompose recursively.
            std::vector<uint32_t> seed = {base[0]};
            seed.insert(seed.end(), g.guards.begin(), g.guards.end());
            Chain ch = make_chain(seed);
            emit_chain(ch);
            std::vector<uint32_t> core = {ch.end};
            core.insert(core.end(), base.begin() + 1, base.end());
            fig5(std::move(core), g.target);
            undo_chain(ch);
        }

        for (uint32_t w : g.neg_controls) out.push(Gate::x(w));
    }

    void emit_h(const Gate& g) {
        if (g.guards.empty()) {
            out.push(Gate::h(g.target));
            return;
        }
        Chain ch = make_chain(g.guards);
        emit_chain(ch);
        out.push(Gate::ch(ch.end, g.target));
        undo_chain(ch);
    }
};

} // namespace

Circuit decompose_mcx(const Circuit& c) {
    require(c.level == Level::Mcx, "decompose_mcx: circuit is not at mcx level");
    Circuit out;
    out.level = Level::Toffoli;
    out.n_wires = c.n_wires;
    out.wire_names = c.wire_names;
    McxDecomposer d(out);
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::X: d.emit_x(g); break;
            case Gate::Kind::H: d.emit_h(g); break;
            default:
                throw InternalError("decompose_mcx: unexpected gate kind");
        }
    }
    return out;
}

// ---- Toffoli → Clifford+T ---------------------------------------------------

std::vector<Gate> toffoli_template(uint32_t c1, uint32_t c2, uint32_t t) {
    using K = Gate::Kind;
    return {
        Gate::h(t),
        Gate::x(t, {c2}),
        Gate::phase(K::Tdg, t),
        Gate::x(t, {c1}),
        Gate::phase(K::T, t),
        Gate::x(t, {c2}),
        Gate::phase(K::Tdg, t),
        Gate::phase(K::Tdg, c2),
        Gate::x(t, {c1}),
        Gate::phase(K::T, t),
        Gate::x(c2, {c1}),
        Gate::phase(K::Tdg, c2),
        Gate::h(t),
        Gate::x(c2, {c1}),
        Gate::phase(K::S, c2),
        Gate::phase(K::T, c1),
    };
}

Circuit decompose_toffoli(const Circuit& c) {
    require(c.level == Level::Toffoli,
            "decompose_toffoli: circuit is not at toffoli level");
    Circuit out;
    out.level = Level::CliffordT;
    out.n_wires = c.n_wires;
    out.wire_names = c.wire_names;
    for (const Gate& g : c.gates) {
        if (g.kind == Gate::Kind::X && g.total_controls() == 2) {
            require(g.neg_controls.empty() && g.guards.empty(),
                    "decompose_toffoli: unresolved control metadata");
            for (Gate tg : toffoli_template(g.controls[0], g.controls[1],
                                            g.target))
                out.push(std::move(tg));
        } else {
            require(g.kind != Gate::Kind::X || g.total_controls() <= 1,
                    "decompose_toffoli: gate with too many controls");
            out.push(g);
        }
    }
    return out;
}

// ---- .qc format ---------------------------------------------------------

// One unique token per wire: the recorded name, "w<idx>" as a fallback, and
// an "_w<idx>" suffix where names would collide.
std::vector<std::string> wire_tokens(const Circuit& c) {
    std::vector<std::string> tokens(c.n_wires);
    std::set<std::string> used;
    for (uint32_t w = 0; w < c.n_wires; ++w) {
        std::string base = w < c.wire_names.size() && !c.wire_names[w].empty()
                               ? c.wire_names[w]
                               : "w" + std::to_string(w);
        std::string tok = base;
        while (used.count(tok)) tok = base + "_w" + std::to_string(w), base = tok;
        used.insert(tok);
        tokens[w] = std::move(tok);
    }
    return tokens;
}

std::string write_qc(const Circuit& c, const std::vector<std::string>& inputs) {
    std::vector<std::string> tok = wire_tokens(c);
    std::ostringstream os;
    os << ".v";
    for (uint32_t w = 0; w < c.n_wires; ++w) os << ' ' << tok[w];
    os << "\n.i";
    for (const std::string& name : inputs) os << ' ' << name;
    os << "\nBEGIN\n";
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::X:
                os << "tof";
                for (uint32_t w : g.controls) os << ' ' << tok[w];
                for (uint32_t w : g.neg_controls) os << ' ' << tok[w] << '\'';
                for (uint32_t w : g.guards) os << ' ' << tok[w];
                os << ' ' << tok[g.target];
                break;
            case Gate::Kind::H: os << "H " << tok[g.target]; break;
            case Gate::Kind::T: os << "T " << tok[g.target]; break;
            case Gate::Kind::Tdg: os << "T* " << tok[g.target]; break;
            case Gate::Kind::S: os << "S " << tok[g.target]; break;
            case Gate::Kind::Sdg: os << "S* " << tok[g.target]; break;
            case Gate::Kind::Z: os << "Z " << tok[g.target]; break;
            case Gate::Kind::CH:
                os << "ch " << tok[g.controls[0]] << ' ' << tok[g.target];
                break;
        }
        os << '\n';
    }
    os << "END\n";
    return os.str();
}

Circuit read_qc(const std::string& text) {
    Circuit c;
    std::map<std::string, uint32_t> index;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool in_body = false, saw_v = false;
    auto fail = [&](const std::string& msg) {
        throw CompileError("circuit file line " + std::to_string(lineno) +
                           ": " + msg);
    };
    auto wire = [&](const std::string& tok) -> uint32_t {
        auto it = index.find(tok);
        if (it == index.end()) fail("unknown wire '" + tok + "'");
        return it->second;
    };
    bool has_phase = false, has_ch = false;
    uint32_t max_ctrl = 0;
    while (std::getline(is, line)) {
        lineno++;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == ".v") {
            saw_v = true;
            std::string name;
            while (ls >> name) {
                if (index.count(name)) fail("duplicate wire '" + name + "'");
                index[name] = c.add_wire(name);
            }
        } else if (tok == ".i") {
            continue; // inputs recorded by the caller's side tables
        } else if (tok == "BEGIN") {
            if (!saw_v) fail("BEGIN before .v header");
            in_body = true;
        } else if (tok == "END") {
            in_body = false;
        } else {
            if (!in_body) fail("gate line outside BEGIN/END");
            std::vector<std::string> args;
            std::string a;
            while (ls >> a) args.push_back(a);
            if (tok == "tof") {
                if (args.empty()) fail("tof needs a target");
                Gate g = Gate::x(wire(args.back()));
                for (size_t i = 0; i + 1 < args.size(); ++i) {
                    std::string name = args[i];
                    if (!name.empty() && name.back() == '\'') {
                        name.pop_back();
                        g.neg_controls.push_back(wire(name));
                    } else {
                        g.controls.push_back(wire(name));
                    }
                }
                max_ctrl = std::max(max_ctrl, g.total_controls());
                c.push(std::move(g));
            } else if (tok == "ch") {
                if (args.size() != 2) fail("ch needs a control and a target");
                has_ch = true;
                c.push(Gate::ch(wire(args[0]), wire(args[1])));
            } else if (tok == "H" || tok == "T" || tok == "T*" || tok == "S" ||
                       tok == "S*" || tok == "Z") {
                if (args.size() != 1) fail(tok + " needs exactly one wire");
                Gate::Kind k = tok == "H"    ? Gate::Kind::H
                               : tok == "T"  ? Gate::Kind::T
                               : tok == "T*" ? Gate::Kind::Tdg
                               : tok == "S"  ? Gate::Kind::S
                               : tok == "S*" ? Gate::Kind::Sdg
                                             : Gate::Kind::Z;
                if (k != Gate::Kind::H) has_phase = true;
                c.push(Gate::phase(k, wire(args[0])));
            } else {
                fail("unknown gate '" + tok + "'");
            }
        }
    }
    if (has_phase) c.level = Level::CliffordT;
    else if (max_ctrl > 2) c.level = Level::Mcx;
    else if (has_ch) c.level = Level::Toffoli;
    else c.level = Level::Mcx;
    return c;
}

} // namespace twr
