#include "twr/costmodel.hpp"

#include "twr/diag.hpp"
#include "twr/types.hpp"

#include <sstream>

namespace twr {

namespace {

std::string entry_key(const AbstractInstr& i) {
    std::ostringstream os;
    os << instr_op_name(i.op);
    for (const auto& r : i.regs) os << (os.tellp() ? "/" : "") << "w" << r.width;
    if (i.op == AbstractInstr::Op::XorConst) os << "/v" << i.imm;
    if (i.op == AbstractInstr::Op::MemSwap)
        os << "/cells" << i.cells << "x" << i.cell_bits;
    return os.str();
}

} // namespace

CostConstants::Entry CostConstants::primitive(const StmtPtr& prim, const Context& ctx) const {
    Entry total;
    for (const AbstractInstr& i : primitive_instrs(prim, ctx, opt_)) {
        std::string key = entry_key(i);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            Circuit tmp;
            tmp.level = Level::Mcx;
            emit_instr(i, tmp);
            Entry e;
            e.mcx = tmp.gates.size();
            for (const Gate& g : tmp.gates) e.t += t_cost_of_gate(g);
            it = cache_.emplace(key, e).first;
        }
        total.mcx += it->second.mcx;
        total.t += it->second.t;
    }
    return total;
}

namespace {

bool literal_bind(const StmtPtr& s) {
    return (s->kind == Stmt::Kind::Bind || s->kind == Stmt::Kind::Unbind) &&
           s->e.kind == Expr::Kind::Val && s->e.val.is_literal();
}

struct Walker {
    const CostConstants& k;
    CheckConfig ccfg;
    CostReport* rep = nullptr;

    explicit Walker(const CostConstants& kk, CostReport* r) : k(kk), rep(r) {
        ccfg.word_width = k.options().word_width;
        ccfg.cells = k.options().cells;
    }

    void record(Span sp, uint64_t mcx, uint64_t t, uint64_t t_ctrl) {
        if (rep) rep->records.push_back({sp, mcx, t, t_ctrl});
    }

    void step(Context& ctx, const StmtPtr& s) { ctx = check_stmt(ctx, s, ccfg); }

    uint64_t mcx(const StmtPtr& s, Context& ctx) {
        switch (s->kind) {
            case Stmt::Kind::Skip: return 0;
            case Stmt::Kind::Seq: {
                uint64_t a = mcx(s->a, ctx);
                return a + mcx(s->b, ctx);
            }
            case Stmt::Kind::If: return mcx(s->a, ctx);
            case Stmt::Kind::WithDo:
                throw InternalError("cost walk reached an unexpanded with-do");
            default: {
                auto e = k.primitive(s, ctx);
                step(ctx, s);
                return e.mcx;
            }
        }
    }

    // t(s) with no enclosing if.
    uint64_t t_plain(const StmtPtr& s, Context& ctx) {
        switch (s->kind) {
            case Stmt::Kind::Skip: return 0;
            case Stmt::Kind::Seq: {
                uint64_t a = t_plain(s->a, ctx);
                return a + t_plain(s->b, ctx);
            }
            case Stmt::Kind::If: return t_guarded(s->a, ctx);
            case Stmt::Kind::WithDo:
                throw InternalError("cost walk reached an unexpanded with-do");
            default: {
                auto e = k.primitive(s, ctx);
                record(s->span, e.mcx, e.t, 0);
                step(ctx, s);
                return e.t;
            }
        }
    }

    // t(if x { s }): one enclosing if around s.
    uint64_t t_guarded(const StmtPtr& s, Context& ctx) {
        switch (s->kind) {
            case Stmt::Kind::Skip: return 0;
            case Stmt::Kind::Seq: {
                uint64_t a = t_guarded(s->a, ctx);
                return a + t_guarded(s->b, ctx);
            }
            case Stmt::Kind::Had: {
                auto e = k.primitive(s, ctx);
                record(s->span, e.mcx, k.ch_t(), 0);
                step(ctx, s);
                return k.ch_t();
            }
            case Stmt::Kind::WithDo:
                throw InternalError("cost walk reached an unexpanded with-do");
            default: {
                if (literal_bind(s)) {
                    auto e = k.primitive(s, ctx);
                    record(s->span, e.mcx, 0, 0);
                    step(ctx, s);
                    return 0;
                }
                Context probe = ctx;
                uint64_t m = mcx(s, probe);
                uint64_t lift = k.ctrl_t() * m;
                record(s->span, 0, lift, lift);
                return lift + t_plain(s, ctx);
            }
        }
    }
};

} // namespace

uint64_t mcx_complexity(const StmtPtr& s, const Context& ctx, const CostConstants& k) {
    Walker w(k, nullptr);
    Context c = ctx;
    return w.mcx(expand_with(s), c);
}

uint64_t t_complexity(const StmtPtr& s, const Context& ctx, const CostConstants& k) {
    Walker w(k, nullptr);
    Context c = ctx;
    return w.t_plain(expand_with(s), c);
}

CostReport cost_report(const StmtPtr& s, const Context& ctx, const CostConstants& k) {
    CostReport rep;
    Walker w(k, &rep);
    Context c = ctx;
    rep.total_t = w.t_plain(expand_with(s), c);
    for (const auto& r : rep.records) {
        rep.total_mcx += r.mcx;
        rep.total_t_ctrl += r.t_ctrl;
    }
    uint64_t check_t = 0;
    for (const auto& r : rep.records) check_t += r.t;
    if (check_t != rep.total_t)
        throw InternalError("cost report records do not sum to the total");
    return rep;
}

CostReport analyze_program(const FrontendResult& fe, const LoweringOptions& opt) {
    CostConstants k(opt);
    StmtPtr whole = fe.prologue ? Stmt::seq(fe.prologue, fe.body) : fe.body;
    return cost_report(whole, fe.input_context, k);
}

std::string report_text(const CostReport& r) {
    std::ostringstream os;
    os << "span            mcx          t     t_ctrl\n";
    for (const auto& rec : r.records) {
        std::string sp = rec.span.str();
        os << sp << std::string(sp.size() < 12 ? 12 - sp.size() : 1, ' ');
        std::string m = std::to_string(rec.mcx), t = std::to_string(rec.t),
                    c = std::to_string(rec.t_ctrl);
        os << std::string(m.size() < 5 ? 5 - m.size() : 0, ' ') << m;
        os << std::string(t.size() < 11 ? 11 - t.size() : 1, ' ') << t;
        os << std::string(c.size() < 11 ? 11 - c.size() : 1, ' ') << c << "\n";
    }
    os << "total: mcx=" << r.total_mcx << " t=" << r.total_t
       << " t_ctrl=" << r.total_t_ctrl << "\n";
    return os.str();
}

std::string report_kv(const CostReport& r) {
    std::ostringstream os;
    for (const auto& rec : r.records)
        os << "record span=" << rec.span.str() << " mcx=" << rec.mcx << " t=" << rec.t
           << " t_ctrl=" << rec.t_ctrl << "\n";
    os << "total_mcx=" << r.total_mcx << "\n";
    os << "total_t=" << r.total_t << "\n";
    os << "total_t_ctrl=" << r.total_t_ctrl << "\n";
    return os.str();
}

} // namespace twr
