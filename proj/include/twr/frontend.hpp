#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/check.hpp"
#include "twr/core_ir.hpp"
#include "twr/surface.hpp"
#include "twr/types.hpp"

namespace twr {

// -------------------------------------------------------------------------
// Frontend: surface program -> core IR.
//   1. resolve named types (recursive through ptr),
//   2. inline every call under a static-parameter environment,
//   3. desugar if-else, nested expressions, ==/!= null, alloc/free.
// The result still contains with-do blocks; the optimizer and the circuit
// layers consume it from here.
// -------------------------------------------------------------------------

struct FrontendOptions {
    uint32_t word_width = 8;
    uint32_t cells = 16;
    uint64_t inline_budget = 1000000; // maximum number of call expansions
};

struct FrontendResult {
    StmtPtr body;       // desugared entry body
    StmtPtr prologue;   // free-list initialization; skip when memory is unused
    std::vector<std::pair<std::string, TypePtr>> inputs; // entry parameters
    std::string return_var; // "" when the entry function returns nothing
    TypePtr return_type;    // null when the entry function returns nothing
    bool uses_memory = false;
    TypePtr cell_type;      // the single allocated cell type; null if no memory
    Context input_context;  // parameters bound in declaration order
};

// Resolves every named type of the program. Recursive references are
// permitted only under ptr; the result contains cyclic nodes for them.
std::map<std::string, TypePtr> resolve_typedefs(const SProgram& prog);
TypePtr resolve_stype(const STypePtr& t, const std::map<std::string, TypePtr>& named, Span sp);

// Infers the surface type of a function's return variable by scanning its
// body for the first bind with a determinable type. Returns null for
// functions without a return variable; throws if the type is undeterminable.
STypePtr infer_return_type(const SProgram& prog, const std::string& fn);

// Expands every call reachable from the entry function, producing a
// call-free surface statement list. Enforces that recursive call depths
// strictly decrease and that total expansions stay within budget.
std::vector<SStmtPtr> instantiate_and_inline(const SProgram& prog, const std::string& entry,
                                             const std::map<std::string, int64_t>& env,
                                             uint64_t budget = 1000000);

// Reverse of a call-free surface statement list: executes the inverse
// program. Involutive.
std::vector<SStmtPtr> surface_reverse(const std::vector<SStmtPtr>& body);

// Full pipeline front half: parse result -> core IR plus interface data.
FrontendResult compile_frontend(const SProgram& prog, const std::string& entry,
                                const std::map<std::string, int64_t>& env,
                                const FrontendOptions& opt = {});

// Checks that a desugared statement uses only core constructs (no surface
// leftovers can exist by construction; this asserts the with-do/if/seq shape
// and flat operand discipline).
bool is_core_only(const StmtPtr& s);

// Distinguished registers of the memory subsystem.
inline const char* heap_head_var() { return "__hp"; }

} // namespace twr
