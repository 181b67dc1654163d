#include "twr/pipeline.hpp"

#include "twr/diag.hpp"

namespace twr {

std::string default_entry(const SProgram& prog) {
    if (prog.functions.empty())
        throw CompileError("program contains no functions");
    return prog.functions.back().name;
}

CompileResult compile_program(const SProgram& prog, const std::string& entry,
                              const std::map<std::string, int64_t>& params,
                              const PipelineOptions& po) {
    std::string fn = entry.empty() ? default_entry(prog) : entry;

    FrontendOptions fo;
    fo.word_width = po.word_width;
    fo.cells = po.cells;
    fo.inline_budget = po.inline_budget;

    CompileResult res;
    res.fe = compile_frontend(prog, fn, params, fo);

    CheckConfig ccfg{po.word_width, po.cells};
    Context after_prologue = check_stmt(res.fe.input_context, res.fe.prologue, ccfg);
    Context after_body = check_stmt(after_prologue, res.fe.body, ccfg);

    if (po.optimize) {
        StmtPtr rewritten = optimize_stmt(res.fe.body, po.rewrites, &res.opt_stats);
        rewritten = normalize_withs(rewritten);
        // Rewrites must preserve the typing interface of the body.
        Context after_rewritten = check_stmt(after_prologue, rewritten, ccfg);
        if (!(after_rewritten == after_body))
            throw InternalError("optimizer changed the typing interface of the program");
        res.fe.body = rewritten;
    }

    LoweringOptions lo;
    lo.word_width = po.word_width;
    lo.cells = po.cells;
    res.lowered = lower_program(res.fe, lo);

    res.circuit = res.lowered.circuit;
    if (po.level == Level::Toffoli || po.level == Level::CliffordT)
        res.circuit = decompose_mcx(res.circuit);
    if (po.level == Level::CliffordT)
        res.circuit = decompose_toffoli(res.circuit);
    res.counts = count_gates(res.circuit);
    return res;
}

CompileResult compile_source(const std::string& source, const std::string& entry,
                             const std::map<std::string, int64_t>& params,
                             const PipelineOptions& po) {
    SProgram prog = parse_program(source);
    return compile_program(prog, entry, params, po);
}

CostReport analyze_source(const std::string& source, const std::string& entry,
                          const std::map<std::string, int64_t>& params,
                          const PipelineOptions& po) {
    SProgram prog = parse_program(source);
    std::string fn = entry.empty() ? default_entry(prog) : entry;

    FrontendOptions fo;
    fo.word_width = po.word_width;
    fo.cells = po.cells;
    fo.inline_budget = po.inline_budget;
    FrontendResult fe = compile_frontend(prog, fn, params, fo);

    CheckConfig ccfg{po.word_width, po.cells};
    Context after_prologue = check_stmt(fe.input_context, fe.prologue, ccfg);
    check_stmt(after_prologue, fe.body, ccfg);

    if (po.optimize) {
        OptStats stats;
        fe.body = normalize_withs(optimize_stmt(fe.body, po.rewrites, &stats));
    }

    LoweringOptions lo;
    lo.word_width = po.word_width;
    lo.cells = po.cells;
    return analyze_program(fe, lo);
}

} // namespace twr
