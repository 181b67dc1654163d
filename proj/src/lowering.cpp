#include "twr/lowering.hpp"

#include "twr/diag.hpp"
#include "twr/types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace twr {

uint32_t scratch_bits(AbstractInstr::Op op, uint32_t width) {
    switch (op) {
        case AbstractInstr::Op::Add:
        case AbstractInstr::Op::Sub:
        case AbstractInstr::Op::Mul:
            return 1; // ripple-carry wire
        case AbstractInstr::Op::Lt:
            return width; // borrow chain
        default:
            return 0;
    }
}

namespace {

// Every wire on a gate must be distinct: a guard that doubles as an operand
// (or a duplicated guard) would change the gate's meaning silently.
void require_distinct(const Gate& g, Span sp) {
    std::vector<uint32_t> ws;
    ws.reserve(1 + g.controls.size() + g.neg_controls.size() + g.guards.size());
    ws.push_back(g.target);
    ws.insert(ws.end(), g.controls.begin(), g.controls.end());
    ws.insert(ws.end(), g.neg_controls.begin(), g.neg_controls.end());
    ws.insert(ws.end(), g.guards.begin(), g.guards.end());
    std::sort(ws.begin(), ws.end());
    if (std::adjacent_find(ws.begin(), ws.end()) != ws.end())
        throw CompileError(
            sp, "wire used twice on one gate (an if-guard cannot also be an operand of the "
                "guarded statement, and a guard cannot be tested twice)");
}

std::vector<uint32_t> join(std::vector<uint32_t> a, std::initializer_list<uint32_t> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Builds one instruction's gate template. Guard controls are appended to
// every gate; only literal stores carry the value flag.
struct TemplateEmitter {
    const AbstractInstr& in;
    std::vector<Gate> out;

    explicit TemplateEmitter(const AbstractInstr& i) : in(i) {}

    void gate(Gate g) {
        g.guards = in.controls;
        require_distinct(g, in.span);
        out.push_back(std::move(g));
    }
    void x(uint32_t t, std::vector<uint32_t> cs = {}, std::vector<uint32_t> ns = {}) {
        gate(Gate::x(t, std::move(cs), std::move(ns)));
    }
    void store(uint32_t t) {
        Gate g = Gate::x(t);
        g.value_flag = true;
        gate(std::move(g));
    }

    const WireRange& r(size_t i) const { return in.regs.at(i); }

    // Cuccaro ripple blocks over (carry-in wire, accumulator bit, addend
    // bit); `ec` is an extra per-gate template control (shifted adds).
    void maj(uint32_t c, uint32_t acc, uint32_t ad, const std::vector<uint32_t>& ec) {
        x(acc, join(ec, {ad}));
        x(c, join(ec, {ad}));
        x(ad, join(ec, {c, acc}));
    }
    void uma(uint32_t c, uint32_t acc, uint32_t ad, const std::vector<uint32_t>& ec) {
        x(ad, join(ec, {c, acc}));
        x(c, join(ec, {ad}));
        x(acc, join(ec, {c}));
    }
    // acc[0..n) += ad[0..n); the addend is restored, the carry wire must be
    // and stays 0 (carry-in is injected by conjugating that wire).
    void ripple(uint32_t carry, uint32_t acc0, uint32_t ad0, uint32_t n,
                const std::vector<uint32_t>& ec) {
        for (uint32_t i = 0; i < n; ++i)
            maj(i == 0 ? carry : ad0 + i - 1, acc0 + i, ad0 + i, ec);
        for (uint32_t i = n; i-- > 0;)
            uma(i == 0 ? carry : ad0 + i - 1, acc0 + i, ad0 + i, ec);
    }

    void emit_xor_const() {
        for (uint32_t b = 0; b < r(0).width && b < 64; ++b)
            if ((in.imm >> b) & 1) store(r(0).start + b);
    }
    void emit_xor_reg() {
        for (uint32_t b = 0; b < r(0).width; ++b) x(r(0).start + b, {r(1).start + b});
    }
    void emit_not() {
        x(r(1).start);
        x(r(0).start, {r(1).start});
        x(r(1).start);
    }
    void emit_test() {
        std::vector<uint32_t> negs;
        for (uint32_t b = 0; b < r(1).width; ++b) negs.push_back(r(1).start + b);
        x(r(0).start, {}, std::move(negs));
        x(r(0).start);
    }
    void emit_and() { x(r(0).start, {r(1).start, r(2).start}); }
    void emit_or() {
        x(r(0).start, {}, {r(1).start, r(2).start});
        x(r(0).start);
    }
    void emit_add() {
        for (uint32_t b = 0; b < r(0).width; ++b) x(r(0).start + b, {r(1).start + b});
        ripple(in.scratch.start, r(0).start, r(2).start, r(0).width, {});
    }
    void emit_sub() {
        for (uint32_t b = 0; b < r(2).width; ++b) x(r(2).start + b);
        x(in.scratch.start); // carry-in 1: acc += ~z + 1
        for (uint32_t b = 0; b < r(0).width; ++b) x(r(0).start + b, {r(1).start + b});
        ripple(in.scratch.start, r(0).start, r(2).start, r(0).width, {});
        x(in.scratch.start);
        for (uint32_t b = 0; b < r(2).width; ++b) x(r(2).start + b);
    }
    void emit_mul() {
        // Shift-and-add: for each multiplier bit z_j, a z_j-controlled add
        // of y into the target's upper slice.
        uint32_t w = r(0).width;
        for (uint32_t j = 0; j < w; ++j)
            ripple(in.scratch.start, r(0).start + j, r(1).start, w - j, {r(2).start + j});
    }
    void scaffold_eq(bool open) {
        // Turns each z bit into (y_b == z_b); self-inverse.
        for (uint32_t i = 0; i < r(1).width; ++i) {
            uint32_t b = open ? i : r(1).width - 1 - i;
            if (open) {
                x(r(2).start + b, {r(1).start + b});
                x(r(2).start + b);
            } else {
                x(r(2).start + b);
                x(r(2).start + b, {r(1).start + b});
            }
        }
    }
    void emit_eq(bool negate) {
        scaffold_eq(true);
        std::vector<uint32_t> cs;
        for (uint32_t b = 0; b < r(1).width; ++b) cs.push_back(r(2).start + b);
        x(r(0).start, std::move(cs));
        scaffold_eq(false);
        if (negate) x(r(0).start);
    }
    void lt_borrow(bool forward) {
        // b_{i+1} = majority(~y_i, z_i, b_i); b_1 starts the chain.
        uint32_t w = r(1).width;
        auto bwire = [&](uint32_t i) { return in.scratch.start + i - 1; };
        std::vector<Gate> local;
        auto add = [&](Gate g) { local.push_back(std::move(g)); };
        add(Gate::x(bwire(1), {r(2).start}, {r(1).start}));
        for (uint32_t i = 1; i < w; ++i) {
            add(Gate::x(bwire(i + 1), {r(2).start + i}, {r(1).start + i}));
            add(Gate::x(bwire(i + 1), {bwire(i)}, {r(1).start + i}));
            add(Gate::x(bwire(i + 1), {r(2).start + i, bwire(i)}));
        }
        if (!forward) std::reverse(local.begin(), local.end());
        for (auto& g : local) gate(std::move(g));
    }
    void emit_lt() {
        lt_borrow(true);
        x(r(0).start, {in.scratch.start + r(1).width - 1});
        lt_borrow(false);
    }
    void emit_swap() {
        for (uint32_t b = 0; b < r(0).width; ++b) {
            x(r(0).start + b, {r(1).start + b});
            x(r(1).start + b, {r(0).start + b});
            x(r(0).start + b, {r(1).start + b});
        }
    }
    void emit_mem_swap() {
        // Swap the value register with every addressable cell, conditioned
        // on the pointer equalling that cell's address. Cell 0 has no wires
        // and is never matched: a null dereference does nothing.
        uint32_t aw = r(1).width;
        uint64_t addressable = aw >= 32 ? uint64_t(in.cells) : std::min<uint64_t>(in.cells, uint64_t(1) << aw);
        for (uint64_t a = 1; a < addressable; ++a) {
            std::vector<uint32_t> pos, neg;
            for (uint32_t j = 0; j < aw; ++j)
                ((a >> j) & 1 ? pos : neg).push_back(r(1).start + j);
            for (uint32_t b = 0; b < in.cell_bits; ++b) {
                uint32_t m = in.mem_base + uint32_t(a - 1) * in.cell_bits + b;
                uint32_t v = r(0).start + b;
                x(m, {v});
                auto cs = pos;
                cs.push_back(m);
                x(v, std::move(cs), neg);
                x(m, {v});
            }
        }
    }
    void emit_had() { gate(Gate::h(r(0).start)); }

    void run() {
        switch (in.op) {
            case AbstractInstr::Op::XorConst: emit_xor_const(); break;
            case AbstractInstr::Op::XorReg:
            case AbstractInstr::Op::ProjectXor: emit_xor_reg(); break;
            case AbstractInstr::Op::NotOp: emit_not(); break;
            case AbstractInstr::Op::TestOp: emit_test(); break;
            case AbstractInstr::Op::AndOp: emit_and(); break;
            case AbstractInstr::Op::OrOp: emit_or(); break;
            case AbstractInstr::Op::Add: emit_add(); break;
            case AbstractInstr::Op::Sub: emit_sub(); break;
            case AbstractInstr::Op::Mul: emit_mul(); break;
            case AbstractInstr::Op::Eq: emit_eq(false); break;
            case AbstractInstr::Op::Neq: emit_eq(true); break;
            case AbstractInstr::Op::Lt: emit_lt(); break;
            case AbstractInstr::Op::SwapRegs: emit_swap(); break;
            case AbstractInstr::Op::MemSwap: emit_mem_swap(); break;
            case AbstractInstr::Op::Hadamard: emit_had(); break;
        }
        if (in.reversed) std::reverse(out.begin(), out.end());
    }
};

} // namespace

const char* instr_op_name(AbstractInstr::Op op) {
    switch (op) {
        case AbstractInstr::Op::XorConst: return "xor_const";
        case AbstractInstr::Op::XorReg: return "xor_reg";
        case AbstractInstr::Op::ProjectXor: return "project_xor";
        case AbstractInstr::Op::NotOp: return "not";
        case AbstractInstr::Op::TestOp: return "test";
        case AbstractInstr::Op::AndOp: return "and";
        case AbstractInstr::Op::OrOp: return "or";
        case AbstractInstr::Op::Add: return "add";
        case AbstractInstr::Op::Sub: return "sub";
        case AbstractInstr::Op::Mul: return "mul";
        case AbstractInstr::Op::Eq: return "eq";
        case AbstractInstr::Op::Neq: return "neq";
        case AbstractInstr::Op::Lt: return "lt";
        case AbstractInstr::Op::SwapRegs: return "swap";
        case AbstractInstr::Op::MemSwap: return "mem_swap";
        case AbstractInstr::Op::Hadamard: return "had";
    }
    return "?";
}

void emit_instr(const AbstractInstr& in, Circuit& c) {
    TemplateEmitter e(in);
    e.run();
    for (auto& g : e.out) c.push(std::move(g));
}

std::string instr_str(const AbstractInstr& in) {
    std::ostringstream os;
    os << instr_op_name(in.op);
    if (in.reversed) os << "^-1";
    for (const auto& r : in.regs) os << " [" << r.start << "+" << r.width << ")";
    if (in.op == AbstractInstr::Op::XorConst) os << " imm=" << in.imm;
    if (in.scratch.width) os << " scratch=[" << in.scratch.start << "+" << in.scratch.width << ")";
    if (in.op == AbstractInstr::Op::MemSwap)
        os << " mem=[" << in.mem_base << " x" << in.cells << " cell=" << in.cell_bits << "]";
    if (!in.controls.empty()) {
        os << " @ctrl[";
        for (size_t i = 0; i < in.controls.size(); ++i)
            os << (i ? " " : "") << in.controls[i];
        os << "]";
    }
    return os.str();
}

namespace {

// First-fit allocator over an unbounded wire pool. Released ranges return
// to a free set; the high-water mark is the qubit count.
class WirePool {
  public:
    uint32_t allocate(uint32_t n, Circuit& circ) {
        if (n == 0) return total_;
        for (uint32_t s = 0;; ++s) {
            bool ok = true;
            for (uint32_t i = 0; i < n; ++i) {
                uint32_t w = s + i;
                if (w < total_ && !free_.count(w)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                for (uint32_t i = 0; i < n; ++i) {
                    uint32_t w = s + i;
                    if (w < total_)
                        free_.erase(w);
                    else {
                        circ.add_wire("");
                        ++total_;
                    }
                }
                return s;
            }
        }
    }
    void release(const WireRange& r) {
        for (uint32_t i = 0; i < r.width; ++i) free_.insert(r.start + i);
    }
    uint32_t total() const { return total_; }

  private:
    std::set<uint32_t> free_;
    uint32_t total_ = 0;
};

class Lowerer {
  public:
    explicit Lowerer(const LoweringOptions& opt) : opt_(opt) {
        ccfg_.word_width = opt.word_width;
        ccfg_.cells = opt.cells;
        lp_.circuit.level = Level::Mcx;
    }

    void setup_inputs(const std::vector<std::pair<std::string, TypePtr>>& inputs,
                      bool record) {
        for (const auto& [name, ty] : inputs) {
            WireRange r = alloc_named(type_bits(ty, opt_.word_width), name);
            regs_[name] = r;
            ctx_.bind(name, ty);
            if (record) lp_.inputs.emplace_back(name, r);
        }
    }

    void setup_memory(const TypePtr& cell_type) {
        lp_.cell_bits = type_bits(cell_type, opt_.word_width);
        uint32_t n_cells = opt_.cells > 0 ? opt_.cells - 1 : 0;
        uint32_t n = n_cells * lp_.cell_bits;
        uint32_t base = pool_.allocate(n, lp_.circuit);
        for (uint32_t a = 1; a <= n_cells; ++a)
            for (uint32_t b = 0; b < lp_.cell_bits; ++b) {
                std::string nm = "mem" + std::to_string(a);
                if (lp_.cell_bits > 1) nm += "." + std::to_string(b);
                name_wire(base + (a - 1) * lp_.cell_bits + b, nm);
            }
        lp_.memory = {base, n};
        has_memory_ = true;
    }

    void mark_prologue() { lp_.prologue_gate_count = lp_.circuit.gates.size(); }

    void lower(const StmtPtr& s) {
        if (!s) return;
        switch (s->kind) {
            case Stmt::Kind::Skip: return;
            case Stmt::Kind::Seq:
                lower(s->a);
                lower(s->b);
                return;
            case Stmt::Kind::If: {
                WireRange g = reg_of(s->x, s->span);
                guards_.push_back(g.start);
                lower(s->a);
                guards_.pop_back();
                return;
            }
            case Stmt::Kind::Bind: lower_bind(s, false); return;
            case Stmt::Kind::Unbind: lower_bind(s, true); return;
            case Stmt::Kind::Had: {
                AbstractInstr ins = base_instr(s->span);
                ins.op = AbstractInstr::Op::Hadamard;
                ins.regs = {reg_of(s->x, s->span)};
                emit(ins);
                return;
            }
            case Stmt::Kind::Swap: {
                AbstractInstr ins = base_instr(s->span);
                ins.op = AbstractInstr::Op::SwapRegs;
                ins.regs = {reg_of(s->x, s->span), reg_of(s->y, s->span)};
                if (s->x == s->y)
                    throw CompileError(s->span, "swapping a variable with itself");
                emit(ins);
                return;
            }
            case Stmt::Kind::MemSwap: {
                if (!has_memory_)
                    throw InternalError("memswap lowered without a memory setup");
                AbstractInstr ins = base_instr(s->span);
                ins.op = AbstractInstr::Op::MemSwap;
                ins.regs = {reg_of(s->y, s->span), reg_of(s->x, s->span)};
                ins.mem_base = lp_.memory.start;
                ins.cell_bits = lp_.cell_bits;
                ins.cells = opt_.cells;
                if (ins.regs[0].width != lp_.cell_bits)
                    throw InternalError("memswap operand width does not match the cell width");
                emit(ins);
                return;
            }
            case Stmt::Kind::WithDo: {
                lower(s->a);
                WithPinRecord rec;
                for (const auto& name : touched_vars(s->a)) {
                    auto it = regs_.find(name);
                    if (it == regs_.end()) continue;
                    pin(name, it->second);
                    rec.names.push_back(name);
                    rec.entry_ranges.push_back(it->second);
                }
                lower(s->b);
                for (const auto& name : rec.names)
                    rec.exit_ranges.push_back(current_range(name, s->span));
                for (const auto& name : rec.names) unpin(name);
                lp_.pins.push_back(std::move(rec));
                lower(reverse_stmt(s->a));
                return;
            }
        }
    }

    LoweredProgram finish() {
        for (const auto& [name, r] : regs_) lp_.outputs[name] = r;
        lp_.qubits = pool_.total();
        return std::move(lp_);
    }

  private:
    AbstractInstr base_instr(Span sp) const {
        AbstractInstr ins;
        ins.span = sp;
        ins.controls = guards_;
        return ins;
    }

    WireRange reg_of(const std::string& x, Span sp) const {
        auto it = regs_.find(x);
        if (it == regs_.end())
            throw CompileError(sp, "variable '" + x + "' has no register (not in scope)");
        return it->second;
    }

    WireRange current_range(const std::string& name, Span sp) const {
        auto it = regs_.find(name);
        if (it != regs_.end()) return it->second;
        auto pt = pinned_.find(name);
        if (pt != pinned_.end()) return pt->second.range;
        throw CompileError(sp, "with-block operand '" + name + "' vanished from scope");
    }

    size_t multiplicity(const std::string& x) const {
        size_t n = 0;
        for (const auto& [name, ty] : ctx_.entries())
            if (name == x) ++n;
        return n;
    }

    void name_wire(uint32_t w, const std::string& desired) {
        auto& slot = lp_.circuit.wire_names.at(w);
        if (!slot.empty()) return;
        std::string nm = desired;
        if (used_names_.count(nm)) nm += "_w" + std::to_string(w);
        used_names_.insert(nm);
        slot = nm;
    }

    WireRange alloc_named(uint32_t bits, const std::string& var) {
        uint32_t base = pool_.allocate(bits, lp_.circuit);
        for (uint32_t b = 0; b < bits; ++b)
            name_wire(base + b, bits == 1 ? var : var + "." + std::to_string(b));
        return {base, bits};
    }

    WireRange alloc_scratch(uint32_t bits) {
        uint32_t base = pool_.allocate(bits, lp_.circuit);
        for (uint32_t b = 0; b < bits; ++b)
            name_wire(base + b, "s" + std::to_string(base + b));
        return {base, bits};
    }

    void pin(const std::string& name, const WireRange& r) {
        auto& p = pinned_[name];
        if (p.refs == 0) p.range = r;
        ++p.refs;
    }
    void unpin(const std::string& name) {
        auto it = pinned_.find(name);
        if (it == pinned_.end()) throw InternalError("unpin of an unpinned name");
        if (--it->second.refs == 0) {
            if (!regs_.count(name)) pool_.release(it->second.range);
            pinned_.erase(it);
        }
    }

    void emit(AbstractInstr& ins) {
        uint32_t opw = ins.regs.size() > 1 ? ins.regs[1].width : ins.regs[0].width;
        if (ins.op == AbstractInstr::Op::Mul || ins.op == AbstractInstr::Op::Add ||
            ins.op == AbstractInstr::Op::Sub)
            opw = ins.regs[0].width;
        uint32_t sb = scratch_bits(ins.op, opw);
        if (sb) ins.scratch = alloc_scratch(sb);
        emit_instr(ins, lp_.circuit);
        if (sb) pool_.release(ins.scratch);
        lp_.instrs.push_back(ins);
    }

    static bool is_arith(BinOp op) {
        return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul;
    }

    void lower_bind(const StmtPtr& s, bool unbinding) {
        const Expr& e = s->e;
        TypePtr t = check_expr(ctx_, e, ccfg_, s->span);
        uint32_t B = type_bits(t, opt_.word_width);

        if (e.kind == Expr::Kind::Bin && is_arith(e.op)) {
            bool sole = !unbinding ? !ctx_.contains(s->x) : multiplicity(s->x) == 1;
            if (!sole)
                throw CompileError(s->span,
                                   "arithmetic (re-)binding of an already-live variable is not "
                                   "supported; bind a fresh name instead");
            if (e.op == BinOp::Mul && e.x == e.y)
                throw CompileError(s->span, "multiplying a variable by itself is not supported");
        }
        if (e.kind == Expr::Kind::Bin &&
            (e.op == BinOp::Eq || e.op == BinOp::Neq || e.op == BinOp::Lt) && e.x == e.y)
            throw CompileError(s->span, "comparing a variable with itself is not supported");

        WireRange tgt;
        if (unbinding) {
            tgt = reg_of(s->x, s->span);
            if (tgt.width != B)
                throw InternalError("unbind width mismatch after checking");
        } else if (ctx_.contains(s->x)) {
            tgt = reg_of(s->x, s->span);
            if (tgt.width != B)
                throw CompileError(s->span, "re-binding '" + s->x +
                                                "' at a different bit width is not supported");
        } else if (auto it = pinned_.find(s->x); it != pinned_.end()) {
            tgt = it->second.range;
            if (tgt.width != B)
                throw CompileError(s->span,
                                   "variable '" + s->x +
                                       "' is reserved by an enclosing with-block and cannot be "
                                       "re-bound at a different bit width");
            regs_[s->x] = tgt;
        } else {
            tgt = alloc_named(B, s->x);
            regs_[s->x] = tgt;
        }

        // Build the instruction(s) for this expression shape.
        std::vector<AbstractInstr> ins_list;
        auto mk = [&](AbstractInstr::Op op, std::vector<WireRange> rs) {
            AbstractInstr ins = base_instr(s->span);
            ins.op = op;
            ins.regs = std::move(rs);
            ins.reversed = unbinding;
            return ins;
        };
        switch (e.kind) {
            case Expr::Kind::Val: {
                const Value& v = e.val;
                if (v.is_literal()) {
                    AbstractInstr ins = mk(AbstractInstr::Op::XorConst, {tgt});
                    ins.imm = literal_bits(v, opt_.word_width);
                    ins_list.push_back(std::move(ins));
                } else if (v.kind == Value::Kind::Var) {
                    ins_list.push_back(mk(AbstractInstr::Op::XorReg, {tgt, reg_of(v.x, s->span)}));
                } else { // pair of variables
                    WireRange ra = reg_of(v.x, s->span);
                    WireRange rb = reg_of(v.x2, s->span);
                    ins_list.push_back(
                        mk(AbstractInstr::Op::XorReg, {{tgt.start, ra.width}, ra}));
                    ins_list.push_back(
                        mk(AbstractInstr::Op::XorReg, {{tgt.start + ra.width, rb.width}, rb}));
                }
                break;
            }
            case Expr::Kind::Proj1:
            case Expr::Kind::Proj2: {
                TypePtr pt = *ctx_.lookup(e.x);
                WireRange rp = reg_of(e.x, s->span);
                uint32_t b1 = type_bits(pt->fst, opt_.word_width);
                uint32_t off = e.kind == Expr::Kind::Proj1 ? 0 : b1;
                ins_list.push_back(
                    mk(AbstractInstr::Op::ProjectXor, {tgt, {rp.start + off, B}}));
                break;
            }
            case Expr::Kind::Not:
                ins_list.push_back(mk(AbstractInstr::Op::NotOp, {tgt, reg_of(e.x, s->span)}));
                break;
            case Expr::Kind::Test:
                ins_list.push_back(mk(AbstractInstr::Op::TestOp, {tgt, reg_of(e.x, s->span)}));
                break;
            case Expr::Kind::Bin: {
                WireRange ry = reg_of(e.x, s->span);
                WireRange rz = reg_of(e.y, s->span);
                AbstractInstr::Op op = AbstractInstr::Op::AndOp;
                switch (e.op) {
                    case BinOp::And: op = AbstractInstr::Op::AndOp; break;
                    case BinOp::Or: op = AbstractInstr::Op::OrOp; break;
                    case BinOp::Add: op = AbstractInstr::Op::Add; break;
                    case BinOp::Sub: op = AbstractInstr::Op::Sub; break;
                    case BinOp::Mul: op = AbstractInstr::Op::Mul; break;
                    case BinOp::Eq: op = AbstractInstr::Op::Eq; break;
                    case BinOp::Neq: op = AbstractInstr::Op::Neq; break;
                    case BinOp::Lt: op = AbstractInstr::Op::Lt; break;
                }
                ins_list.push_back(mk(op, {tgt, ry, rz}));
                break;
            }
        }
        if (unbinding) std::reverse(ins_list.begin(), ins_list.end());
        for (auto& ins : ins_list) emit(ins);

        if (unbinding) {
            ctx_.unbind(s->x, s->span);
            if (!ctx_.contains(s->x)) {
                WireRange r = regs_.at(s->x);
                regs_.erase(s->x);
                if (!pinned_.count(s->x)) pool_.release(r);
            }
        } else {
            ctx_.bind(s->x, t);
        }
    }

    struct Pin {
        WireRange range;
        int refs = 0;
    };

    LoweringOptions opt_;
    CheckConfig ccfg_;
    LoweredProgram lp_;
    WirePool pool_;
    Context ctx_;
    std::map<std::string, WireRange> regs_;
    std::map<std::string, Pin> pinned_;
    std::vector<uint32_t> guards_;
    std::set<std::string> used_names_;
    bool has_memory_ = false;
};

} // namespace

LoweredProgram lower_program(const FrontendResult& fe, const LoweringOptions& opt) {
    Lowerer lw(opt);
    lw.setup_inputs(fe.inputs, /*record=*/true);
    if (fe.uses_memory) lw.setup_memory(fe.cell_type);
    lw.lower(fe.prologue);
    lw.mark_prologue();
    lw.lower(fe.body);
    return lw.finish();
}

std::vector<AbstractInstr> primitive_instrs(const StmtPtr& prim, const Context& ctx,
                                            const LoweringOptions& opt) {
    Lowerer lw(opt);
    lw.setup_inputs(ctx.entries(), /*record=*/false);
    if (prim->kind == Stmt::Kind::MemSwap) {
        auto pt = ctx.lookup(prim->x);
        if (!pt || (*pt)->kind != Type::Kind::Ptr)
            throw InternalError("memswap pointer operand is not a pointer");
        lw.setup_memory((*pt)->fst);
    }
    lw.lower(prim);
    return lw.finish().instrs;
}

} // namespace twr
