#pragma once

#include <cstdint>

#include "twr/core_ir.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Program-level rewrites on the core IR.
//
// optimize_stmt distributes conditionals over their bodies and applies two
// rewrites wherever they fire:
//   - flattening:  if x { if y {s} }  ->  with {let z <- x && y} do {if z {s}}
//   - narrowing:   if x { with {a} do {b} }  ->  with {a} do {if x {b}}
// normalize_withs then merges nested and adjacent with-do blocks where a
// read/write commutation check proves the reordering sound.
// -------------------------------------------------------------------------

struct OptimizerConfig {
    bool flatten = true;
    bool narrow = true;
};

struct OptStats {
    uint64_t flatten_count = 0; // fresh conjunction temporaries introduced
    uint64_t narrow_count = 0;  // with-do blocks hoisted out of conditionals
};

StmtPtr optimize_stmt(const StmtPtr& s, const OptimizerConfig& cfg = {},
                      OptStats* stats = nullptr);

StmtPtr normalize_withs(const StmtPtr& s);

} // namespace twr
