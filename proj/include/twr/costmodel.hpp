#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/check.hpp"
#include "twr/core_ir.hpp"
#include "twr/frontend.hpp"
#include "twr/lowering.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Static cost analysis. Two metrics over core statements:
//   mcx_complexity — number of MCX-level gates, transparent under if;
//   t_complexity   — T-gate count of the fully decomposed circuit,
//                    following the recursive equations:
//     t(skip) = 0                      t(s1; s2) = t(s1) + t(s2)
//     t(if x {s1; s2}) = t(if x {s1}) + t(if x {s2})
//     t(if x {had y}) = ch_t
//     t(if x {let y <-/-> literal}) = 0
//     t(if x {s}) = ctrl_t · mcx(s) + t(s)   for other s
//     t(primitive) = c^T of its emitted template
// The per-primitive constants are obtained by emitting that primitive's
// gate template in isolation and counting, so the analysis agrees with the
// compiled circuit exactly, by construction. with-do blocks are expanded to
// a; b; reverse(a) before analysis.
// -------------------------------------------------------------------------

class CostConstants {
  public:
    explicit CostConstants(LoweringOptions opt = {}) : opt_(opt) {}

    uint64_t ctrl_t() const { return 14; } // T gates per extra control bit
    uint64_t ch_t() const { return 8; }    // T gates of the controlled-H block

    struct Entry {
        uint64_t mcx = 0; // c^MCX: gates in the primitive's template
        uint64_t t = 0;   // c^T: T gates of the decomposed template
    };

    // Constants of one primitive statement with operand types from `ctx`.
    Entry primitive(const StmtPtr& prim, const Context& ctx) const;

    // Everything queried so far, keyed "opcode/width" (memswap includes its
    // cell geometry, constant stores their bit pattern).
    const std::map<std::string, Entry>& table() const { return cache_; }

    const LoweringOptions& options() const { return opt_; }

  private:
    LoweringOptions opt_;
    mutable std::map<std::string, Entry> cache_;
};

struct CostRecord {
    Span span;
    uint64_t mcx = 0;    // gates attributed to this record
    uint64_t t = 0;      // T gates attributed to this record
    uint64_t t_ctrl = 0; // portion of t that is ctrl_t · mcx lifting
};

struct CostReport {
    std::vector<CostRecord> records;
    uint64_t total_mcx = 0;
    uint64_t total_t = 0;
    uint64_t total_t_ctrl = 0;
};

// The two metrics. `ctx` types the statement's free variables (operand
// widths depend on it); both expand with-do blocks internally.
uint64_t mcx_complexity(const StmtPtr& s, const Context& ctx, const CostConstants& k);
uint64_t t_complexity(const StmtPtr& s, const Context& ctx, const CostConstants& k);

CostReport cost_report(const StmtPtr& s, const Context& ctx, const CostConstants& k);

// Cost of a full frontend result (allocator prologue followed by the body).
CostReport analyze_program(const FrontendResult& fe, const LoweringOptions& opt);

// Line-oriented human-readable rendering.
std::string report_text(const CostReport& r);
// Machine-readable key-value rendering, one record per line.
std::string report_kv(const CostReport& r);

} // namespace twr
