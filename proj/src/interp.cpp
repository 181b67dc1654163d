#include "twr/interp.hpp"

#include "twr/diag.hpp"
#include "twr/types.hpp"

#include <algorithm>

namespace twr {

uint64_t MachineState::var(const std::string& x) const {
    auto it = vars.find(x);
    if (it == vars.end())
        throw InternalError("interpreter read of unbound variable '" + x + "'");
    return it->second.value;
}

namespace {

uint64_t mask_bits(uint32_t w) {
    return w >= 64 ? ~uint64_t(0) : (uint64_t(1) << w) - 1;
}

struct Interp {
    Context& ctx;
    MachineState& st;
    const InterpOptions& opt;
    CheckConfig ccfg;
    uint32_t inactive = 0; // enclosing ifs whose guard is 0

    Interp(Context& c, MachineState& s, const InterpOptions& o) : ctx(c), st(s), opt(o) {
        ccfg.word_width = opt.word_width;
        ccfg.cells = opt.cells;
    }

    bool active() const { return inactive == 0; }

    uint64_t eval(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Val: {
                const Value& v = e.val;
                if (v.is_literal()) return literal_bits(v, opt.word_width);
                if (v.kind == Value::Kind::Var) return st.var(v.x);
                uint32_t b1 = type_bits(*ctx.lookup(v.x), opt.word_width);
                return st.var(v.x) | (b1 >= 64 ? 0 : st.var(v.x2) << b1);
            }
            case Expr::Kind::Proj1:
            case Expr::Kind::Proj2: {
                TypePtr pt = *ctx.lookup(e.x);
                uint32_t b1 = type_bits(pt->fst, opt.word_width);
                uint32_t b2 = type_bits(pt->snd, opt.word_width);
                uint64_t v = st.var(e.x);
                return e.kind == Expr::Kind::Proj1 ? (v & mask_bits(b1))
                                                   : ((b1 >= 64 ? 0 : v >> b1) & mask_bits(b2));
            }
            case Expr::Kind::Not: return (~st.var(e.x)) & 1;
            case Expr::Kind::Test: return st.var(e.x) != 0 ? 1 : 0;
            case Expr::Kind::Bin: {
                uint64_t y = st.var(e.x), z = st.var(e.y);
                uint64_t m = mask_bits(opt.word_width);
                switch (e.op) {
                    case BinOp::And: return y & z & 1;
                    case BinOp::Or: return (y | z) & 1;
                    case BinOp::Add: return (y + z) & m;
                    case BinOp::Sub: return (y - z) & m;
                    case BinOp::Mul: return (y * z) & m;
                    case BinOp::Eq: return y == z ? 1 : 0;
                    case BinOp::Neq: return y != z ? 1 : 0;
                    case BinOp::Lt: return y < z ? 1 : 0;
                }
                break;
            }
        }
        throw InternalError("unreachable expression kind");
    }

    static bool is_arith(const Expr& e) {
        return e.kind == Expr::Kind::Bin &&
               (e.op == BinOp::Add || e.op == BinOp::Sub || e.op == BinOp::Mul);
    }

    void run(const StmtPtr& s) {
        if (!s) return;
        switch (s->kind) {
            case Stmt::Kind::Skip: return;
            case Stmt::Kind::Seq:
                run(s->a);
                run(s->b);
                return;
            case Stmt::Kind::If: {
                bool taken = (st.var(s->x) & 1) != 0;
                if (!taken) ++inactive;
                run(s->a);
                if (!taken) --inactive;
                return;
            }
            case Stmt::Kind::Bind: {
                TypePtr t = check_expr(ctx, s->e, ccfg, s->span);
                auto& slot = st.vars[s->x];
                if (is_arith(s->e)) {
                    if (slot.count > 0)
                        throw CompileError(s->span,
                                           "arithmetic re-binding of an already-live variable "
                                           "is not supported; bind a fresh name instead");
                    slot.value = active() ? eval(s->e) : 0;
                } else {
                    slot.value ^= active() ? eval(s->e) : 0;
                }
                ++slot.count;
                ctx.bind(s->x, t);
                return;
            }
            case Stmt::Kind::Unbind: {
                check_expr(ctx, s->e, ccfg, s->span);
                auto it = st.vars.find(s->x);
                if (it == st.vars.end())
                    throw InternalError("unbind of unbound variable '" + s->x + "'");
                auto& slot = it->second;
                if (is_arith(s->e)) {
                    if (slot.count != 1)
                        throw CompileError(s->span,
                                           "arithmetic un-binding of a re-declared variable "
                                           "is not supported");
                    slot.value = (slot.value - (active() ? eval(s->e) : 0)) &
                                 mask_bits(opt.word_width);
                } else {
                    slot.value ^= active() ? eval(s->e) : 0;
                }
                ctx.unbind(s->x, s->span);
                if (--slot.count == 0) {
                    if (slot.value != 0)
                        throw InterpError(s->span, "un-binding '" + s->x +
                                                       "' leaves a non-zero register (value " +
                                                       std::to_string(slot.value) + ")");
                    st.vars.erase(it);
                }
                return;
            }
            case Stmt::Kind::Had:
                throw InterpError(s->span, "hadamard has no classical interpretation");
            case Stmt::Kind::Swap: {
                if (s->x == s->y)
                    throw CompileError(s->span, "swapping a variable with itself");
                if (active()) std::swap(st.vars.at(s->x).value, st.vars.at(s->y).value);
                return;
            }
            case Stmt::Kind::MemSwap: {
                if (active()) {
                    uint64_t addr = st.var(s->x);
                    uint64_t addressable =
                        opt.word_width >= 32
                            ? uint64_t(opt.cells)
                            : std::min<uint64_t>(opt.cells, uint64_t(1) << opt.word_width);
                    if (addr >= 1 && addr < addressable)
                        std::swap(st.memory.at(size_t(addr)), st.vars.at(s->y).value);
                }
                return;
            }
            case Stmt::Kind::WithDo:
                run(s->a);
                run(s->b);
                run(reverse_stmt(s->a));
                return;
        }
    }
};

} // namespace

void interp_stmt(const StmtPtr& s, Context& ctx, MachineState& st, const InterpOptions& opt) {
    Interp in(ctx, st, opt);
    in.run(s);
}

MachineState interp_program(const FrontendResult& fe,
                            const std::map<std::string, uint64_t>& inputs,
                            const InterpOptions& opt) {
    MachineState st;
    st.memory.assign(opt.cells, 0);
    Context ctx;
    for (const auto& [name, ty] : fe.inputs) {
        auto it = inputs.find(name);
        uint64_t v = it == inputs.end() ? 0 : it->second;
        st.vars[name] = {v & mask_bits(type_bits(ty, opt.word_width)), 1};
        ctx.bind(name, ty);
    }
    interp_stmt(fe.prologue, ctx, st, opt);
    interp_stmt(fe.body, ctx, st, opt);
    return st;
}

} // namespace twr
