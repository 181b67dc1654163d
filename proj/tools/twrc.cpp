// twrc — command-line driver for the reversible-language compiler.
//
// Subcommands:
//   check    parse, inline, and type-check a program
//   compile  emit a .qc circuit plus a flat key-value counts document
//   analyze  per-statement cost table with T / MCX totals
//   bench    sweep a static parameter, fit exact polynomials per metric
//   equiv    compare two compilations on basis inputs
//
// Exit codes: 0 success, 1 user error (diagnostics on stderr), 2 internal
// defect. `equiv` exits 1 when a counterexample is found.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twr/circuits.hpp"
#include "twr/costmodel.hpp"
#include "twr/diag.hpp"
#include "twr/frontend.hpp"
#include "twr/lowering.hpp"
#include "twr/pipeline.hpp"
#include "twr/polyfit.hpp"
#include "twr/sim.hpp"
#include "twr/types.hpp"

namespace {

using namespace twr;

struct CommonArgs {
    std::string file;
    std::string entry;
    std::vector<std::string> params;
    uint32_t width = 8;
    uint32_t cells = 16;
    std::string opt = "all";
    std::string level = "cliffordt";
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_level = true) {
    cmd->add_option("file", a.file, "source file")->required();
    cmd->add_option("--entry", a.entry, "entry function (default: last in file)");
    cmd->add_option("--param", a.params, "static parameter, name=value (repeatable)");
    cmd->add_option("--width", a.width, "word width in bits (default 8)");
    cmd->add_option("--cells", a.cells, "memory cells (default 16)");
    cmd->add_option("--opt", a.opt, "all|none|flatten|narrow (default all)")
        ->check(CLI::IsMember({"all", "none", "flatten", "narrow"}));
    if (with_level)
        cmd->add_option("--level", a.level, "mcx|toffoli|cliffordt (default cliffordt)")
            ->check(CLI::IsMember({"mcx", "toffoli", "cliffordt"}));
    cmd->add_option("--out", a.out, "output path");
}

std::map<std::string, int64_t> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, int64_t> env;
    for (const std::string& kv : kvs) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CompileError("--param expects name=value, got '" + kv + "'");
        std::string name = kv.substr(0, eq);
        try {
            size_t used = 0;
            int64_t v = std::stoll(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
            env[name] = v;
        } catch (const std::exception&) {
            throw CompileError("--param value for '" + name + "' is not an integer");
        }
    }
    return env;
}

PipelineOptions make_options(const CommonArgs& a) {
    PipelineOptions po;
    po.word_width = a.width;
    po.cells = a.cells;
    if (a.opt == "none") {
        po.optimize = false;
    } else {
        po.optimize = true;
        po.rewrites.flatten = a.opt != "narrow";
        po.rewrites.narrow = a.opt != "flatten";
    }
    if (a.level == "mcx")
        po.level = Level::Mcx;
    else if (a.level == "toffoli")
        po.level = Level::Toffoli;
    else
        po.level = Level::CliffordT;
    return po;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CompileError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CompileError("cannot write '" + path + "'");
    out << text;
    if (!out) throw CompileError("write failed for '" + path + "'");
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of('/');
    size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path;
    return path.substr(0, dot);
}

// ---- check ---------------------------------------------------------------

int cmd_check(const CommonArgs& a) {
    PipelineOptions po = make_options(a);
    SProgram prog = parse_program(slurp(a.file));
    std::string fn = a.entry.empty() ? default_entry(prog) : a.entry;

    FrontendOptions fo;
    fo.word_width = po.word_width;
    fo.cells = po.cells;
    FrontendResult fe = compile_frontend(prog, fn, parse_params(a.params), fo);

    CheckConfig ccfg{po.word_width, po.cells};
    Context after_prologue = check_stmt(fe.input_context, fe.prologue, ccfg);
    check_stmt(after_prologue, fe.body, ccfg);

    std::ostringstream os;
    os << "ok " << fn << "\n";
    for (const auto& [name, ty] : fe.inputs)
        os << "input " << name << " : " << type_str(ty) << "\n";
    if (!fe.return_var.empty())
        os << "output " << fe.return_var << " : " << type_str(fe.return_type) << "\n";
    os << "memory " << (fe.uses_memory ? "yes" : "no") << "\n";
    std::cout << os.str();
    return 0;
}

// ---- compile ---------------------------------------------------------------

std::string counts_doc(const CompileResult& res, const std::string& level) {
    GateCounts mcx_counts = count_gates(res.lowered.circuit);
    const GateCounts& k = res.counts;
    std::ostringstream os;
    os << "level " << level << "\n"
       << "qubits " << res.lowered.qubits << "\n"
       << "total_gates " << k.total_gates << "\n"
       << "t " << k.t << "\n"
       << "t_formula " << k.t_formula << "\n"
       << "toffoli " << k.toffoli << "\n"
       << "mcx_ge2 " << mcx_counts.mcx_ge2 << "\n"
       << "cnot " << k.cnot << "\n"
       << "x " << k.x << "\n"
       << "h " << k.h << "\n"
       << "s " << k.s << "\n"
       << "z " << k.z << "\n"
       << "ch " << k.ch << "\n"
       << "surplus_controls " << mcx_counts.surplus_controls << "\n"
       << "mcx_gates " << mcx_counts.total_gates << "\n"
       << "flatten_rewrites " << res.opt_stats.flatten_count << "\n"
       << "narrow_rewrites " << res.opt_stats.narrow_count << "\n";
    return os.str();
}

int cmd_compile(const CommonArgs& a) {
    PipelineOptions po = make_options(a);
    CompileResult res = compile_source(slurp(a.file), a.entry, parse_params(a.params), po);

    // Predicted costs for the program variant that was actually lowered.
    LoweringOptions lo;
    lo.word_width = po.word_width;
    lo.cells = po.cells;
    CostReport rep = analyze_program(res.fe, lo);

    std::vector<std::string> input_tokens;
    std::vector<std::string> tok = wire_tokens(res.circuit);
    for (const auto& [name, range] : res.lowered.inputs)
        for (uint32_t w = range.start; w < range.start + range.width; ++w)
            input_tokens.push_back(tok[w]);

    std::string qc_path = a.out.empty() ? stem_of(a.file) + ".qc" : a.out;
    std::string counts_path = qc_path.size() > 3 && qc_path.substr(qc_path.size() - 3) == ".qc"
                                  ? qc_path.substr(0, qc_path.size() - 3) + ".counts"
                                  : qc_path + ".counts";

    std::string doc = counts_doc(res, a.level);
    doc += "predicted_t " + std::to_string(rep.total_t) + "\n";
    doc += "predicted_mcx " + std::to_string(rep.total_mcx) + "\n";

    spill(qc_path, write_qc(res.circuit, input_tokens));
    spill(counts_path, doc);
    std::cout << qc_path << "\n" << counts_path << "\n";
    return 0;
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const CommonArgs& a) {
    PipelineOptions po = make_options(a);
    CostReport rep = analyze_source(slurp(a.file), a.entry, parse_params(a.params), po);
    std::string text = report_text(rep);
    if (a.out.empty())
        std::cout << text;
    else
        spill(a.out, text);
    return 0;
}

// ---- bench -----------------------------------------------------------------

struct SweepSpec {
    std::string var;
    int64_t lo = 0;
    int64_t hi = 0;
};

SweepSpec parse_sweep(const std::string& s) {
    size_t eq = s.find('=');
    size_t dots = s.find("..");
    if (eq == std::string::npos || dots == std::string::npos || dots < eq)
        throw CompileError("--sweep expects var=lo..hi, got '" + s + "'");
    SweepSpec sw;
    sw.var = s.substr(0, eq);
    try {
        sw.lo = std::stoll(s.substr(eq + 1, dots - eq - 1));
        sw.hi = std::stoll(s.substr(dots + 2));
    } catch (const std::exception&) {
        throw CompileError("--sweep bounds are not integers in '" + s + "'");
    }
    if (sw.var.empty() || sw.lo > sw.hi)
        throw CompileError("--sweep needs a variable and lo <= hi");
    return sw;
}

int cmd_bench(const CommonArgs& a, const std::string& sweep) {
    SweepSpec sw = parse_sweep(sweep);
    PipelineOptions po = make_options(a);
    po.level = Level::CliffordT; // T is counted decomposed; MCX metrics pre-decomposition
    std::map<std::string, int64_t> env = parse_params(a.params);
    std::string source = slurp(a.file);

    std::vector<long long> ts, mcxs, qubits;
    std::ostringstream os;
    os << "program " << a.file << "\n"
       << "sweep " << sw.var << "=" << sw.lo << ".." << sw.hi << "\n"
       << "width " << a.width << "\n"
       << "opt " << a.opt << "\n\n"
       << sw.var << " t mcx_ge2 qubits\n";
    for (int64_t v = sw.lo; v <= sw.hi; ++v) {
        env[sw.var] = v;
        CompileResult res = compile_source(source, a.entry, env, po);
        GateCounts mk = count_gates(res.lowered.circuit);
        ts.push_back(static_cast<long long>(res.counts.t));
        mcxs.push_back(static_cast<long long>(mk.mcx_ge2));
        qubits.push_back(static_cast<long long>(res.lowered.qubits));
        os << v << " " << res.counts.t << " " << mk.mcx_ge2 << " "
           << res.lowered.qubits << "\n";
    }

    os << "\n";
    auto fit_line = [&](const char* metric, const std::vector<long long>& ys) {
        PolyFit f = fit_polynomial(sw.lo, ys);
        os << "metric " << metric << " degree ";
        if (f.exact)
            os << f.degree << " poly " << f.str(sw.var);
        else
            os << ">=" << ys.size() << " poly none";
        os << "\n";
    };
    fit_line("t", ts);
    fit_line("mcx_ge2", mcxs);
    fit_line("qubits", qubits);

    if (a.out.empty())
        std::cout << os.str();
    else
        spill(a.out, os.str());
    return 0;
}

// ---- equiv -----------------------------------------------------------------

int cmd_equiv(const CommonArgs& a, const std::string& file_b, const std::string& opt_b,
              uint64_t budget) {
    CommonArgs b = a;
    b.file = file_b;
    b.opt = opt_b.empty() ? a.opt : opt_b;

    PipelineOptions pa = make_options(a);
    PipelineOptions pb = make_options(b);
    pa.level = pb.level = Level::Mcx; // basis behaviour is level-independent

    std::map<std::string, int64_t> env = parse_params(a.params);
    CompileResult ra = compile_source(slurp(a.file), a.entry, env, pa);
    CompileResult rb = compile_source(slurp(b.file), b.entry, env, pb);

    if (ra.lowered.inputs.size() != rb.lowered.inputs.size())
        throw CompileError("programs declare different input sets");
    for (size_t i = 0; i < ra.lowered.inputs.size(); ++i) {
        if (ra.lowered.inputs[i].first != rb.lowered.inputs[i].first ||
            ra.lowered.inputs[i].second.width != rb.lowered.inputs[i].second.width)
            throw CompileError("programs declare different input sets");
    }

    EquivOptions eo;
    eo.budget = budget;
    EquivResult er = check_equivalence(ra.lowered, rb.lowered, eo);

    std::cout << "equivalent " << (er.equivalent ? "true" : "false") << "\n"
              << "cases " << er.cases << "\n"
              << "exhaustive " << (er.exhaustive ? "true" : "false") << "\n";
    if (!er.equivalent) std::cout << "counterexample " << er.counterexample << "\n";
    return er.equivalent ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twrc - reversible-language compiler and T-cost analyzer"};
    app.require_subcommand(1);

    CommonArgs check_args, compile_args, analyze_args, bench_args, equiv_args;
    std::string sweep, equiv_file_b, equiv_opt_b;
    uint64_t budget = 1000;

    CLI::App* c_check = app.add_subcommand("check", "parse and type-check");
    add_common(c_check, check_args, false);

    CLI::App* c_compile = app.add_subcommand("compile", "emit .qc and counts");
    add_common(c_compile, compile_args);

    CLI::App* c_analyze = app.add_subcommand("analyze", "per-statement cost report");
    add_common(c_analyze, analyze_args, false);

    CLI::App* c_bench = app.add_subcommand("bench", "parameter sweep with exact fits");
    add_common(c_bench, bench_args, false);
    c_bench->add_option("--sweep", sweep, "sweep spec, var=lo..hi")->required();

    CLI::App* c_equiv = app.add_subcommand("equiv", "basis-state equivalence of two compilations");
    add_common(c_equiv, equiv_args, false);
    c_equiv->add_option("file_b", equiv_file_b, "second source file")->required();
    c_equiv->add_option("--opt-b", equiv_opt_b, "optimization mode for the second file")
        ->check(CLI::IsMember({"all", "none", "flatten", "narrow"}));
    c_equiv->add_option("--budget", budget, "sampled basis inputs when not exhaustive");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_check->parsed()) return cmd_check(check_args);
        if (c_compile->parsed()) return cmd_compile(compile_args);
        if (c_analyze->parsed()) return cmd_analyze(analyze_args);
        if (c_bench->parsed()) return cmd_bench(bench_args, sweep);
        if (c_equiv->parsed()) return cmd_equiv(equiv_args, equiv_file_b, equiv_opt_b, budget);
    } catch (const CompileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
