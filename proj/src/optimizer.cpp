#include "twr/optimizer.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twr {

namespace {

// ---- conditional flattening and narrowing -----------------------------------

struct Optimizer {
    OptimizerConfig cfg;
    OptStats* stats;
    int fresh = 0;

    std::string fresh_guard() { return "__z" + std::to_string(fresh++); }

    StmtPtr optimize(const StmtPtr& s) { return seq_of(optimize_list(s)); }

    // The rewrite engine works on statement lists: a conditional distributes
    // over the items of its body, and each item picks one of three cases.
    std::vector<StmtPtr> optimize_list(const StmtPtr& s) {
        switch (s->kind) {
            case Stmt::Kind::Skip:
            case Stmt::Kind::Bind:
            case Stmt::Kind::Unbind:
            case Stmt::Kind::Had:
            case Stmt::Kind::Swap:
            case Stmt::Kind::MemSwap: return {s};
            case Stmt::Kind::Seq: {
                std::vector<StmtPtr> out = optimize_list(s->a);
                for (auto& t : optimize_list(s->b)) out.push_back(t);
                return out;
            }
            case Stmt::Kind::WithDo:
                return {Stmt::with_do(optimize(s->a), optimize(s->b), s->span)};
            case Stmt::Kind::If: {
                std::vector<StmtPtr> out;
                std::vector<StmtPtr> run;  // consecutive items with no rewrite of their own
                auto flush_run = [&]() {
                    if (run.empty()) return;
                    StmtPtr body = run.front();
                    for (size_t i = 1; i < run.size(); i++) body = Stmt::seq(body, run[i]);
                    out.push_back(Stmt::if_(s->x, body, s->span));
                    run.clear();
                };
                for (auto& item : seq_items(s->a)) {
                    if (item->kind == Stmt::Kind::WithDo && cfg.narrow) {
                        // if x { with {a} do {b} }  ->  with {a} do {if x {b}}
                        flush_run();
                        if (stats) stats->narrow_count++;
                        out.push_back(Stmt::with_do(
                            optimize(item->a),
                            optimize(Stmt::if_(s->x, item->b, s->span)), item->span));
                        continue;
                    }
                    if (item->kind == Stmt::Kind::If && cfg.flatten) {
                        // if x { if y {s} }  ->  with {let z <- x && y} do {if z {s}}
                        flush_run();
                        if (stats) stats->flatten_count++;
                        std::string z = fresh_guard();
                        StmtPtr scaffold =
                            Stmt::bind(z, Expr::bin(BinOp::And, s->x, item->x), item->span);
                        out.push_back(Stmt::with_do(
                            scaffold, optimize(Stmt::if_(z, item->a, item->span)), item->span));
                        continue;
                    }
                    // Items with no rewrite stay under the guard.  Grouping a whole
                    // run under one conditional keeps temporaries that are created
                    // and consumed inside the run local to a single guarded block,
                    // so the result stays well-scoped; gate-for-gate it lowers the
                    // same as guarding each item separately.
                    run.push_back(optimize(item));
                }
                flush_run();
                return out;
            }
        }
        throw InternalError("unhandled statement kind in optimizer");
    }
};

// ---- with-do structure normalization ------------------------------------------

// Sequence constructor that drops skip sides, keeping merged shapes tidy.
StmtPtr seq2(const StmtPtr& a, const StmtPtr& b) {
    if (a->kind == Stmt::Kind::Skip) return b;
    if (b->kind == Stmt::Kind::Skip) return a;
    return Stmt::seq(a, b);
}

struct Footprint {
    std::set<std::string> writes;
    std::set<std::string> touch;
};

void collect_touch(const StmtPtr& s, std::set<std::string>& out) {
    switch (s->kind) {
        case Stmt::Kind::Skip: return;
        case Stmt::Kind::Seq:
        case Stmt::Kind::WithDo:
            collect_touch(s->a, out);
            collect_touch(s->b, out);
            return;
        case Stmt::Kind::If:
            out.insert(s->x);
            collect_touch(s->a, out);
            return;
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind: {
            out.insert(s->x);
            const Expr& e = s->e;
            switch (e.kind) {
                case Expr::Kind::Val:
                    if (e.val.kind == Value::Kind::Var) out.insert(e.val.x);
                    if (e.val.kind == Value::Kind::Pair) {
                        out.insert(e.val.x);
                        out.insert(e.val.x2);
                    }
                    break;
                case Expr::Kind::Proj1:
                case Expr::Kind::Proj2:
                case Expr::Kind::Not:
                case Expr::Kind::Test: out.insert(e.x); break;
                case Expr::Kind::Bin:
                    out.insert(e.x);
                    out.insert(e.y);
                    break;
            }
            return;
        }
        case Stmt::Kind::Had: out.insert(s->x); return;
        case Stmt::Kind::Swap:
            out.insert(s->x);
            out.insert(s->y);
            return;
        case Stmt::Kind::MemSwap:
            out.insert(s->x);
            out.insert(s->y);
            out.insert("__mem");
            return;
    }
}

bool contains_memswap(const StmtPtr& s) {
    switch (s->kind) {
        case Stmt::Kind::MemSwap: return true;
        case Stmt::Kind::Seq:
        case Stmt::Kind::WithDo: return contains_memswap(s->a) || contains_memswap(s->b);
        case Stmt::Kind::If: return contains_memswap(s->a);
        default: return false;
    }
}

Footprint footprint(const StmtPtr& s) {
    Footprint f;
    f.writes = modified_vars(s);
    collect_touch(s, f.touch);
    if (contains_memswap(s)) f.writes.insert("__mem");
    return f;
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (auto& x : a)
        if (b.count(x)) return false;
    return true;
}

// Two statements commute when neither writes anything the other touches.
bool commutes(const Footprint& a, const Footprint& b) {
    return disjoint(a.writes, b.touch) && disjoint(a.touch, b.writes);
}

void merge_into(Footprint& into, const Footprint& from) {
    into.writes.insert(from.writes.begin(), from.writes.end());
    into.touch.insert(from.touch.begin(), from.touch.end());
}

StmtPtr normalize(const StmtPtr& s) {
    switch (s->kind) {
        case Stmt::Kind::Skip:
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind:
        case Stmt::Kind::Had:
        case Stmt::Kind::Swap:
        case Stmt::Kind::MemSwap: return s;
        case Stmt::Kind::If: return Stmt::if_(s->x, normalize(s->a), s->span);
        case Stmt::Kind::WithDo: {
            StmtPtr block = normalize(s->a);
            StmtPtr body = normalize(s->b);
            // with {a} do { with {b} do {c} }  ->  with {a; b} do {c}.
            // The circuit expansions are gate-for-gate identical.
            while (body->kind == Stmt::Kind::WithDo) {
                block = seq2(block, body->a);
                body = body->b;
            }
            return Stmt::with_do(block, body, s->span);
        }
        case Stmt::Kind::Seq: {
            // Left-fold adjacent items into one with-do where sound: viewing
            // each item as with {a} do {b} (plain items as with {skip} do
            // {item}), with {A} do {B}; with {a} do {b} merges to
            // with {A; a} do {B; b} when a commutes with A and B, and A
            // commutes with b. Merging never reorders non-commuting work.
            std::vector<StmtPtr> out;
            std::optional<std::pair<StmtPtr, StmtPtr>> acc;
            Footprint fp_a, fp_b;
            auto flush = [&] {
                if (!acc) return;
                if (acc->first->kind == Stmt::Kind::Skip)
                    out.push_back(acc->second);
                else
                    out.push_back(Stmt::with_do(acc->first, acc->second));
                acc.reset();
            };
            for (auto& raw : seq_items(s)) {
                StmtPtr item = normalize(raw);
                StmtPtr a = item->kind == Stmt::Kind::WithDo ? item->a : Stmt::skip();
                StmtPtr b = item->kind == Stmt::Kind::WithDo ? item->b : item;
                Footprint fa = footprint(a), fb = footprint(b);
                if (acc && commutes(fa, fp_b) && commutes(fa, fp_a) && commutes(fp_a, fb)) {
                    acc->first = seq2(acc->first, a);
                    acc->second = seq2(acc->second, b);
                    merge_into(fp_a, fa);
                    merge_into(fp_b, fb);
                    continue;
                }
                flush();
                acc = {{a, b}};
                fp_a = fa;
                fp_b = fb;
            }
            flush();
            return seq_of(out);
        }
    }
    throw InternalError("unhandled statement kind in normalize");
}

} // namespace

StmtPtr optimize_stmt(const StmtPtr& s, const OptimizerConfig& cfg, OptStats* stats) {
    Optimizer o{cfg, stats};
    return o.optimize(s);
}

StmtPtr normalize_withs(const StmtPtr& s) { return normalize(s); }

} // namespace twr
