#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "twr/circuits.hpp"
#include "twr/costmodel.hpp"
#include "twr/frontend.hpp"
#include "twr/lowering.hpp"
#include "twr/optimizer.hpp"
#include "twr/surface.hpp"

namespace twr {

// -------------------------------------------------------------------------
// End-to-end driver: parse → frontend (inline + desugar) → check →
// optimize (optional) → re-check → lower → decompose to the target level.
// -------------------------------------------------------------------------

struct PipelineOptions {
    uint32_t word_width = 8;
    uint32_t cells = 16;
    bool optimize = true;        // run rewrites at all
    OptimizerConfig rewrites;    // which rewrites, when optimizing
    Level level = Level::CliffordT;
    uint64_t inline_budget = 1000000;
};

struct CompileResult {
    FrontendResult fe; // body already optimized when requested
    OptStats opt_stats;
    LoweredProgram lowered;  // the mcx-level compilation
    Circuit circuit;         // decomposed to the requested level
    GateCounts counts;       // tallied at the requested level
};

// Entry defaults to the last function of the file when `entry` is empty.
std::string default_entry(const SProgram& prog);

CompileResult compile_program(const SProgram& prog, const std::string& entry,
                              const std::map<std::string, int64_t>& params,
                              const PipelineOptions& po);

CompileResult compile_source(const std::string& source, const std::string& entry,
                             const std::map<std::string, int64_t>& params,
                             const PipelineOptions& po);

// Static analysis of the same frontend result the pipeline would lower.
CostReport analyze_source(const std::string& source, const std::string& entry,
                          const std::map<std::string, int64_t>& params,
                          const PipelineOptions& po);

} // namespace twr
