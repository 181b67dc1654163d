#include "twr/frontend.hpp"

#include <optional>
#include <set>

namespace twr {

// ---- named type resolution -------------------------------------------------

namespace {

struct TypeResolver {
    std::map<std::string, std::shared_ptr<Type>> nodes;
    std::set<std::string> defined;

    TypePtr resolve(const STypePtr& t, bool under_ptr) {
        switch (t->kind) {
            case SType::Kind::Unit: return Type::unit();
            case SType::Kind::Uint: return Type::uint_();
            case SType::Kind::Bool: return Type::bool_();
            case SType::Kind::Pair:
                return Type::pair(resolve(t->fst, under_ptr), resolve(t->snd, under_ptr));
            case SType::Kind::Ptr: return Type::ptr(resolve(t->fst, true));
            case SType::Kind::Named: {
                auto it = nodes.find(t->name);
                if (it == nodes.end())
                    throw CompileError(t->span, "unknown type '" + t->name + "'");
                if (!defined.count(t->name) && !under_ptr)
                    throw CompileError(t->span, "type '" + t->name +
                                                    "' is used before its definition; recursive "
                                                    "uses must sit under ptr<...>");
                return it->second;
            }
        }
        throw InternalError("unhandled surface type kind");
    }
};

} // namespace

std::map<std::string, TypePtr> resolve_typedefs(const SProgram& prog) {
    TypeResolver r;
    for (auto& [name, _] : prog.typedefs) r.nodes[name] = std::make_shared<Type>();
    for (auto& [name, rhs] : prog.typedefs) {
        TypePtr body = r.resolve(rhs, false);
        auto& node = r.nodes[name];
        if (body.get() == node.get())
            throw CompileError(rhs->span, "type '" + name + "' is defined as itself");
        *node = *body;
        node->name = name;
        r.defined.insert(name);
    }
    std::map<std::string, TypePtr> out;
    for (auto& [name, node] : r.nodes) out[name] = node;
    return out;
}

TypePtr resolve_stype(const STypePtr& t, const std::map<std::string, TypePtr>& named, Span sp) {
    switch (t->kind) {
        case SType::Kind::Unit: return Type::unit();
        case SType::Kind::Uint: return Type::uint_();
        case SType::Kind::Bool: return Type::bool_();
        case SType::Kind::Pair:
            return Type::pair(resolve_stype(t->fst, named, sp), resolve_stype(t->snd, named, sp));
        case SType::Kind::Ptr: return Type::ptr(resolve_stype(t->fst, named, sp));
        case SType::Kind::Named: {
            auto it = named.find(t->name);
            if (it == named.end())
                throw CompileError(t->span.synthetic() ? sp : t->span,
                                   "unknown type '" + t->name + "'");
            return it->second;
        }
    }
    throw InternalError("unhandled surface type kind");
}

// ---- return type inference ---------------------------------------------------

namespace {

struct ReturnInferer {
    const SProgram& prog;
    std::map<std::string, STypePtr> memo;
    std::set<std::string> in_progress;

    // Peels named-type aliases so projections can see the pair structure.
    STypePtr peel(STypePtr t) const {
        std::set<std::string> seen;
        while (t && t->kind == SType::Kind::Named) {
            if (!seen.insert(t->name).second) return nullptr;
            const STypePtr* rhs = nullptr;
            for (auto& [n, def] : prog.typedefs)
                if (n == t->name) rhs = &def;
            if (!rhs) return nullptr;
            t = *rhs;
        }
        return t;
    }

    STypePtr expr_type(const SExprPtr& e, const std::map<std::string, STypePtr>& env) {
        auto mk = [&](SType::Kind k) {
            SType t;
            t.kind = k;
            t.span = e->span;
            return std::make_shared<const SType>(std::move(t));
        };
        switch (e->kind) {
            case SExpr::Kind::Var: {
                auto it = env.find(e->name);
                return it == env.end() ? nullptr : it->second;
            }
            case SExpr::Kind::Number: return mk(SType::Kind::Uint);
            case SExpr::Kind::True:
            case SExpr::Kind::False: return mk(SType::Kind::Bool);
            case SExpr::Kind::Unit: return mk(SType::Kind::Unit);
            case SExpr::Kind::Null: {
                if (!e->type) return nullptr;
                SType t;
                t.kind = SType::Kind::Ptr;
                t.fst = e->type;
                t.span = e->span;
                return std::make_shared<const SType>(std::move(t));
            }
            case SExpr::Kind::Default: return e->type;
            case SExpr::Kind::Alloc: {
                SType t;
                t.kind = SType::Kind::Ptr;
                t.fst = e->type;
                t.span = e->span;
                return std::make_shared<const SType>(std::move(t));
            }
            case SExpr::Kind::Pair: {
                STypePtr a = expr_type(e->a, env), b = expr_type(e->b, env);
                if (!a || !b) return nullptr;
                SType t;
                t.kind = SType::Kind::Pair;
                t.fst = a;
                t.snd = b;
                t.span = e->span;
                return std::make_shared<const SType>(std::move(t));
            }
            case SExpr::Kind::Proj: {
                STypePtr a = peel(expr_type(e->a, env));
                if (!a || a->kind != SType::Kind::Pair) return nullptr;
                return e->proj == 1 ? a->fst : a->snd;
            }
            case SExpr::Kind::Not:
            case SExpr::Kind::Test: return mk(SType::Kind::Bool);
            case SExpr::Kind::Bin:
                switch (e->op) {
                    case BinOp::And:
                    case BinOp::Or:
                    case BinOp::Eq:
                    case BinOp::Neq:
                    case BinOp::Lt: return mk(SType::Kind::Bool);
                    case BinOp::Add:
                    case BinOp::Sub:
                    case BinOp::Mul: return mk(SType::Kind::Uint);
                }
                return nullptr;
            case SExpr::Kind::Call: return infer(e->name, e->span);
        }
        return nullptr;
    }

    // Scans statements in order; returns the first determinable type bound
    // to `target`, threading an environment of known local types.
    STypePtr scan(const std::vector<SStmtPtr>& body, const std::string& target,
                  std::map<std::string, STypePtr>& env) {
        for (auto& s : body) {
            switch (s->kind) {
                case SStmt::Kind::Let: {
                    STypePtr t = expr_type(s->e, env);
                    if (t) {
                        env[s->x] = t;
                        if (s->x == target) return t;
                    }
                    break;
                }
                case SStmt::Kind::If:
                case SStmt::Kind::With: {
                    if (STypePtr t = scan(s->body, target, env)) return t;
                    if (STypePtr t = scan(s->body2, target, env)) return t;
                    break;
                }
                default: break;
            }
        }
        return nullptr;
    }

    STypePtr infer(const std::string& fn, Span sp) {
        auto it = memo.find(fn);
        if (it != memo.end()) return it->second;
        if (in_progress.count(fn)) return nullptr; // recursive: resolved by another bind
        const SFun* f = prog.find(fn);
        if (!f) throw CompileError(sp, "call to unknown function '" + fn + "'");
        if (f->return_var.empty()) return nullptr;
        for (auto& [p, _] : f->params)
            if (p == f->return_var)
                throw CompileError(f->return_span,
                                   "return variable '" + f->return_var +
                                       "' of '" + fn + "' must not be a parameter");
        in_progress.insert(fn);
        std::map<std::string, STypePtr> env;
        for (auto& [p, t] : f->params) env[p] = t;
        STypePtr r = scan(f->body, f->return_var, env);
        in_progress.erase(fn);
        memo[fn] = r;
        return r;
    }
};

} // namespace

STypePtr infer_return_type(const SProgram& prog, const std::string& fn) {
    ReturnInferer inf{prog, {}, {}};
    const SFun* f = prog.find(fn);
    if (!f) throw CompileError("unknown function '" + fn + "'");
    if (f->return_var.empty()) return nullptr;
    STypePtr r = inf.infer(fn, f->span);
    if (!r)
        throw CompileError(f->return_span, "cannot infer the type of return variable '" +
                                               f->return_var + "' in '" + fn + "'");
    return r;
}

// ---- static expression evaluation -------------------------------------------

namespace {

int64_t eval_static(const StaticExprPtr& e, const std::map<std::string, int64_t>& env) {
    switch (e->kind) {
        case StaticExpr::Kind::Num: return e->n;
        case StaticExpr::Kind::Var: {
            auto it = env.find(e->name);
            if (it == env.end())
                throw CompileError(e->span, "unbound static parameter '" + e->name + "'");
            return it->second;
        }
        case StaticExpr::Kind::Bin: {
            int64_t a = eval_static(e->lhs, env), b = eval_static(e->rhs, env);
            switch (e->op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
            }
            throw InternalError("unhandled static operator");
        }
    }
    throw InternalError("unhandled static expression kind");
}

// ---- inlining -----------------------------------------------------------------

SStmtPtr mk(SStmt s) { return std::make_shared<const SStmt>(std::move(s)); }
SExprPtr mk_e(SExpr e) { return std::make_shared<const SExpr>(std::move(e)); }

struct Inliner {
    const SProgram& prog;
    uint64_t budget;
    uint64_t used = 0;
    int instance = 0;
    ReturnInferer inferer;
    // Function name -> depth value of the innermost in-progress expansion;
    // recursion must present a strictly smaller depth.
    std::map<std::string, std::vector<int64_t>> depth_stack;

    explicit Inliner(const SProgram& p, uint64_t b) : prog(p), budget(b), inferer{p, {}, {}} {}

    using Subst = std::map<std::string, std::string>;

    // Renames an identifier: parameters map to argument names, everything
    // else becomes a per-instance fresh local. The entry instance (0) keeps
    // its source names.
    std::string rename(const std::string& x, Subst& subst, int inst) {
        auto it = subst.find(x);
        if (it != subst.end()) return it->second;
        std::string fresh = inst == 0 ? x : "__c" + std::to_string(inst) + "_" + x;
        subst.emplace(x, fresh);
        return fresh;
    }

    SExprPtr rename_expr(const SExprPtr& e, Subst& subst, int inst) {
        SExpr out = *e;
        switch (e->kind) {
            case SExpr::Kind::Var:
                out.name = rename(e->name, subst, inst);
                break;
            case SExpr::Kind::Pair:
            case SExpr::Kind::Bin:
                out.a = rename_expr(e->a, subst, inst);
                out.b = rename_expr(e->b, subst, inst);
                break;
            case SExpr::Kind::Proj:
            case SExpr::Kind::Not:
            case SExpr::Kind::Test:
                out.a = rename_expr(e->a, subst, inst);
                break;
            default: break; // literals carry no identifiers; calls handled upstream
        }
        return mk_e(std::move(out));
    }

    bool has_call(const SExprPtr& e) const {
        switch (e->kind) {
            case SExpr::Kind::Call: return true;
            case SExpr::Kind::Pair:
            case SExpr::Kind::Bin: return has_call(e->a) || has_call(e->b);
            case SExpr::Kind::Proj:
            case SExpr::Kind::Not:
            case SExpr::Kind::Test: return has_call(e->a);
            default: return false;
        }
    }

    std::vector<SStmtPtr> expand_call(const SExprPtr& call, const std::string& target,
                                      const std::map<std::string, int64_t>& env, Subst& subst,
                                      int inst) {
        const SFun* callee = prog.find(call->name);
        if (!callee) throw CompileError(call->span, "call to unknown function '" + call->name + "'");
        if (call->static_args.size() != callee->static_params.size())
            throw CompileError(call->span, "'" + call->name + "' takes " +
                                               std::to_string(callee->static_params.size()) +
                                               " static arguments, got " +
                                               std::to_string(call->static_args.size()));
        if (call->args.size() != callee->params.size())
            throw CompileError(call->span, "'" + call->name + "' takes " +
                                               std::to_string(callee->params.size()) +
                                               " arguments, got " +
                                               std::to_string(call->args.size()));
        if (!target.empty() && callee->return_var.empty())
            throw CompileError(call->span,
                               "'" + call->name + "' has no return variable to bind");

        std::vector<int64_t> statics;
        for (auto& se : call->static_args) {
            int64_t v = eval_static(se, env);
            if (v < 0)
                throw CompileError(call->span, "static argument of '" + call->name +
                                                   "' is negative (" + std::to_string(v) + ")");
            statics.push_back(v);
        }

        // Arguments pass by reference: they must be plain variables.
        std::vector<std::string> arg_names;
        for (auto& a : call->args) {
            if (a->kind != SExpr::Kind::Var)
                throw CompileError(a->span, "call arguments must be plain variables");
            arg_names.push_back(rename(a->name, subst, inst));
        }

        // Base case: depth zero expands to binding the return variable to
        // the all-zero default of its type.
        if (!statics.empty() && statics[0] == 0) {
            if (target.empty()) return {};
            STypePtr rt = infer_return_type(prog, call->name);
            SExpr dflt;
            dflt.kind = SExpr::Kind::Default;
            dflt.type = rt;
            dflt.span = call->span;
            SStmt bindv;
            bindv.kind = SStmt::Kind::Let;
            bindv.x = target;
            bindv.e = mk_e(std::move(dflt));
            bindv.span = call->span;
            return {mk(std::move(bindv))};
        }

        auto& stack = depth_stack[call->name];
        if (!stack.empty()) {
            if (statics.empty())
                throw CompileError(call->span, "recursive call to '" + call->name +
                                                   "' without a static depth cannot terminate");
            if (statics[0] >= stack.back())
                throw CompileError(call->span,
                                   "recursion depth of '" + call->name +
                                       "' does not strictly decrease (" +
                                       std::to_string(statics[0]) + " after " +
                                       std::to_string(stack.back()) + ")");
        }
        if (++used > budget)
            throw CompileError(call->span, "inlining budget exceeded; recursion too deep");

        std::map<std::string, int64_t> callee_env;
        for (size_t i = 0; i < statics.size(); i++)
            callee_env[callee->static_params[i]] = statics[i];

        Subst callee_subst;
        for (size_t i = 0; i < arg_names.size(); i++)
            callee_subst[callee->params[i].first] = arg_names[i];
        if (!target.empty()) callee_subst[callee->return_var] = target;

        stack.push_back(statics.empty() ? 0 : statics[0]);
        int my_inst = ++instance;
        std::vector<SStmtPtr> body = expand(callee->body, callee_env, callee_subst, my_inst);
        depth_stack[call->name].pop_back();
        return body;
    }

    std::vector<SStmtPtr> expand(const std::vector<SStmtPtr>& body,
                                 const std::map<std::string, int64_t>& env, Subst& subst,
                                 int inst) {
        std::vector<SStmtPtr> out;
        for (auto& s : body) {
            switch (s->kind) {
                case SStmt::Kind::Let:
                case SStmt::Kind::Unlet: {
                    if (s->e->kind == SExpr::Kind::Call) {
                        std::string target = rename(s->x, subst, inst);
                        auto stmts = expand_call(s->e, target, env, subst, inst);
                        if (s->kind == SStmt::Kind::Unlet) stmts = surface_reverse(stmts);
                        for (auto& t : stmts) out.push_back(t);
                        break;
                    }
                    if (has_call(s->e))
                        throw CompileError(s->e->span,
                                           "a call must be the entire right-hand side");
                    SStmt ns = *s;
                    ns.x = rename(s->x, subst, inst);
                    ns.e = rename_expr(s->e, subst, inst);
                    out.push_back(mk(std::move(ns)));
                    break;
                }
                case SStmt::Kind::Call: {
                    auto stmts = expand_call(s->e, "", env, subst, inst);
                    for (auto& t : stmts) out.push_back(t);
                    break;
                }
                case SStmt::Kind::If: {
                    if (has_call(s->e))
                        throw CompileError(s->e->span, "calls cannot appear in a guard");
                    SStmt ns = *s;
                    ns.e = rename_expr(s->e, subst, inst);
                    ns.body = expand(s->body, env, subst, inst);
                    ns.body2 = expand(s->body2, env, subst, inst);
                    out.push_back(mk(std::move(ns)));
                    break;
                }
                case SStmt::Kind::With: {
                    SStmt ns = *s;
                    ns.body = expand(s->body, env, subst, inst);
                    ns.body2 = expand(s->body2, env, subst, inst);
                    out.push_back(mk(std::move(ns)));
                    break;
                }
                case SStmt::Kind::Swap:
                case SStmt::Kind::MemSwap: {
                    SStmt ns = *s;
                    ns.x = rename(s->x, subst, inst);
                    ns.y = rename(s->y, subst, inst);
                    out.push_back(mk(std::move(ns)));
                    break;
                }
                case SStmt::Kind::Had:
                case SStmt::Kind::Free: {
                    SStmt ns = *s;
                    ns.x = rename(s->x, subst, inst);
                    out.push_back(mk(std::move(ns)));
                    break;
                }
                case SStmt::Kind::Skip: out.push_back(s); break;
            }
        }
        return out;
    }
};

SExprPtr alloc_expr_of(const SStmtPtr& s) {
    return s->e && s->e->kind == SExpr::Kind::Alloc ? s->e : nullptr;
}

} // namespace

std::vector<SStmtPtr> instantiate_and_inline(const SProgram& prog, const std::string& entry,
                                             const std::map<std::string, int64_t>& env,
                                             uint64_t budget) {
    const SFun* f = prog.find(entry);
    if (!f) throw CompileError("unknown entry function '" + entry + "'");
    std::map<std::string, int64_t> fenv;
    for (auto& p : f->static_params) {
        auto it = env.find(p);
        if (it == env.end())
            throw CompileError(f->span, "static parameter '" + p + "' of '" + entry +
                                            "' is not bound; pass --param " + p + "=<n>");
        if (it->second < 0)
            throw CompileError(f->span, "static parameter '" + p + "' is negative");
        fenv[p] = it->second;
    }
    Inliner inl(prog, budget);
    // The entry instance keeps its own names: identity substitution.
    Inliner::Subst subst;
    for (auto& [p, _] : f->params) subst[p] = p;
    if (!f->return_var.empty()) subst[f->return_var] = f->return_var;
    if (!f->static_params.empty()) inl.depth_stack[entry].push_back(fenv[f->static_params[0]]);
    std::vector<SStmtPtr> body = inl.expand(f->body, fenv, subst, 0);
    return body;
}

std::vector<SStmtPtr> surface_reverse(const std::vector<SStmtPtr>& body) {
    std::vector<SStmtPtr> out;
    for (auto it = body.rbegin(); it != body.rend(); ++it) {
        const SStmtPtr& s = *it;
        SStmt ns = *s;
        switch (s->kind) {
            case SStmt::Kind::Let: ns.kind = SStmt::Kind::Unlet; break;
            case SStmt::Kind::Unlet: ns.kind = SStmt::Kind::Let; break;
            case SStmt::Kind::If:
                ns.body = surface_reverse(s->body);
                ns.body2 = surface_reverse(s->body2);
                break;
            case SStmt::Kind::With:
                ns.body2 = surface_reverse(s->body2);
                break;
            case SStmt::Kind::Free: {
                // free pops p back onto the free list, so its reverse is an
                // allocation into p; the cell type is the program's one slab type.
                ns.kind = SStmt::Kind::Let;
                SExpr al;
                al.kind = SExpr::Kind::Alloc;
                al.span = s->span;
                ns.e = mk_e(std::move(al));
                break;
            }
            case SStmt::Kind::Call:
                throw InternalError("surface_reverse on a body that still contains calls");
            default: break; // swap, memswap, had, skip are self-inverse
        }
        out.push_back(mk(std::move(ns)));
    }
    return out;
}

// ---- desugaring ---------------------------------------------------------------

namespace {

struct Desugarer {
    const std::map<std::string, TypePtr>& named;
    uint32_t word_width;
    uint32_t cells;
    int fresh = 0;
    bool uses_memory = false;
    TypePtr slab; // unified allocated cell type

    std::string fresh_name(const char* tag) {
        return std::string("__") + tag + std::to_string(fresh++);
    }

    void unify_slab(TypePtr t, Span sp) {
        if (!slab) {
            slab = t;
            return;
        }
        if (!type_equal(slab, t))
            throw CompileError(sp, "all allocations must use one cell type; saw " +
                                       type_str(slab) + " and " + type_str(t));
    }

    // Scans for allocation types ahead of desugaring so `free` and bare
    // `alloc` know the cell type.
    void prescan(const std::vector<SStmtPtr>& body) {
        for (auto& s : body) {
            switch (s->kind) {
                case SStmt::Kind::Let:
                case SStmt::Kind::Unlet:
                    if (s->e->kind == SExpr::Kind::Alloc) {
                        uses_memory = true;
                        if (s->e->type) unify_slab(resolve_stype(s->e->type, named, s->span), s->span);
                    }
                    break;
                case SStmt::Kind::Free: uses_memory = true; break;
                case SStmt::Kind::MemSwap: uses_memory = true; break;
                case SStmt::Kind::If:
                case SStmt::Kind::With:
                    prescan(s->body);
                    prescan(s->body2);
                    break;
                default: break;
            }
        }
    }

    // ---- expression flattening ----

    // Emits `pre` statements computing temporaries, returns the final core
    // expression. Temporaries leak: the enclosing with-block uncomputes them.
    Expr flatten(const SExprPtr& e, std::vector<StmtPtr>& pre) {
        switch (e->kind) {
            case SExpr::Kind::Var: return Expr::value(Value::var(e->name));
            case SExpr::Kind::Number: return Expr::value(Value::number(e->n));
            case SExpr::Kind::True: return Expr::value(Value::boolean(true));
            case SExpr::Kind::False: return Expr::value(Value::boolean(false));
            case SExpr::Kind::Unit: return Expr::value(Value::unit());
            case SExpr::Kind::Null:
                if (!e->type)
                    throw CompileError(e->span,
                                       "null needs a type annotation here (null<T>); bare null "
                                       "is only allowed in == / != comparisons");
                return Expr::value(Value::null(resolve_stype(e->type, named, e->span)));
            case SExpr::Kind::Default:
                return Expr::value(Value::zero(resolve_stype(e->type, named, e->span)));
            case SExpr::Kind::Alloc:
                throw CompileError(e->span, "alloc must be the entire right-hand side of a let");
            case SExpr::Kind::Pair: {
                std::string a = operand(e->a, pre);
                std::string b = operand(e->b, pre);
                return Expr::value(Value::pair(a, b));
            }
            case SExpr::Kind::Proj: return Expr::proj(e->proj, operand(e->a, pre));
            case SExpr::Kind::Not: return Expr::not_(operand(e->a, pre));
            case SExpr::Kind::Test: return Expr::test(operand(e->a, pre));
            case SExpr::Kind::Bin: {
                bool null_l = e->a->kind == SExpr::Kind::Null && !e->a->type;
                bool null_r = e->b->kind == SExpr::Kind::Null && !e->b->type;
                if ((e->op == BinOp::Eq || e->op == BinOp::Neq) && (null_l || null_r)) {
                    if (null_l && null_r)
                        throw CompileError(e->span, "cannot compare null with null");
                    std::string p = operand(null_l ? e->b : e->a, pre);
                    if (e->op == BinOp::Neq) return Expr::test(p);
                    std::string t = fresh_name("t");
                    pre.push_back(Stmt::bind(t, Expr::test(p), e->span));
                    return Expr::not_(t);
                }
                std::string a = operand(e->a, pre);
                std::string b = operand(e->b, pre);
                return Expr::bin(e->op, a, b);
            }
            case SExpr::Kind::Call: throw InternalError("desugar saw a call; inline first");
        }
        throw InternalError("unhandled expression kind");
    }

    std::string operand(const SExprPtr& e, std::vector<StmtPtr>& pre) {
        if (e->kind == SExpr::Kind::Var) return e->name;
        Expr ce = flatten(e, pre);
        std::string t = fresh_name("t");
        pre.push_back(Stmt::bind(t, ce, e->span));
        return t;
    }

    // Variables a surface expression reads.
    void expr_vars(const SExprPtr& e, std::set<std::string>& out) const {
        switch (e->kind) {
            case SExpr::Kind::Var: out.insert(e->name); break;
            case SExpr::Kind::Pair:
            case SExpr::Kind::Bin:
                expr_vars(e->a, out);
                expr_vars(e->b, out);
                break;
            case SExpr::Kind::Proj:
            case SExpr::Kind::Not:
            case SExpr::Kind::Test: expr_vars(e->a, out); break;
            default: break;
        }
    }

    // ---- allocator ----

    // Component layout of the cell type: the free-list next pointer is the
    // second (preferred) or first component.
    bool next_is_snd(Span sp) const {
        if (!slab) throw CompileError(sp, "allocation size unknown: no alloc<T> in the program");
        if (slab->kind == Type::Kind::Pair) {
            if (slab->snd->kind == Type::Kind::Ptr && type_equal(slab->snd->fst, slab))
                return true;
            if (slab->fst->kind == Type::Kind::Ptr && type_equal(slab->fst->fst, slab))
                return false;
        }
        throw CompileError(sp, "allocated type " + type_str(slab) +
                                   " must be a pair with a ptr<" + type_str(slab) +
                                   "> component for the free list");
    }

    // Allocates into fresh name p: pops the free-list head, leaving the
    // zeroed cell at *p. Exact reverse is deallocation.
    StmtPtr alloc_block(const std::string& p, Span sp) {
        bool snd = next_is_snd(sp);
        TypePtr sigma = snd ? slab->fst : slab->snd;
        std::string tmp = fresh_name("a"), nf = fresh_name("a"), z = fresh_name("a");
        std::vector<StmtPtr> ss;
        ss.push_back(Stmt::bind(p, Expr::value(Value::null(slab)), sp));
        ss.push_back(Stmt::swap(p, heap_head_var(), sp));
        ss.push_back(Stmt::bind(tmp, Expr::value(Value::zero(slab)), sp));
        ss.push_back(Stmt::memswap(p, tmp, sp));
        ss.push_back(Stmt::bind(nf, Expr::proj(snd ? 2 : 1, tmp), sp));
        ss.push_back(Stmt::bind(z, Expr::value(Value::zero(sigma)), sp));
        Value packed = snd ? Value::pair(z, nf) : Value::pair(nf, z);
        ss.push_back(Stmt::unbind(tmp, Expr::value(packed), sp));
        ss.push_back(Stmt::swap(nf, heap_head_var(), sp));
        ss.push_back(Stmt::unbind(nf, Expr::value(Value::null(slab)), sp));
        ss.push_back(Stmt::unbind(z, Expr::value(Value::zero(sigma)), sp));
        return seq_of(ss);
    }

    // Free-list initialization: cell i holds (0, addr(i+1)) — the last cell
    // holds null — and the head register starts at cell 1. Cell 0 backs the
    // null pointer and is never linked.
    StmtPtr prologue() {
        if (!uses_memory) return Stmt::skip();
        Span sp{}; // synthetic
        bool snd = next_is_snd(sp);
        TypePtr sigma = snd ? slab->fst : slab->snd;
        if (cells < 2) throw CompileError("memory needs at least 2 cells");
        if (word_width < 64 && (uint64_t{1} << word_width) < cells)
            throw CompileError("cell count " + std::to_string(cells) +
                               " does not fit in " + std::to_string(word_width) + "-bit pointers");
        std::vector<StmtPtr> ss;
        std::string p = "__mp", n = "__mn", z = "__mz", v = "__mv";
        for (uint32_t i = 1; i < cells; i++) {
            Value next = i + 1 < cells ? Value::addr(slab, i + 1) : Value::null(slab);
            ss.push_back(Stmt::bind(p, Expr::value(Value::addr(slab, i)), sp));
            ss.push_back(Stmt::bind(n, Expr::value(next), sp));
            ss.push_back(Stmt::bind(z, Expr::value(Value::zero(sigma)), sp));
            Value packed = snd ? Value::pair(z, n) : Value::pair(n, z);
            ss.push_back(Stmt::bind(v, Expr::value(packed), sp));
            ss.push_back(Stmt::memswap(p, v, sp));
            ss.push_back(Stmt::unbind(v, Expr::value(Value::zero(slab)), sp));
            ss.push_back(Stmt::unbind(n, Expr::value(next), sp));
            ss.push_back(Stmt::unbind(z, Expr::value(Value::zero(sigma)), sp));
            ss.push_back(Stmt::unbind(p, Expr::value(Value::addr(slab, i)), sp));
        }
        ss.push_back(Stmt::bind(heap_head_var(), Expr::value(Value::addr(slab, 1)), sp));
        return seq_of(ss);
    }

    // ---- statements ----

    StmtPtr desugar(const std::vector<SStmtPtr>& body) {
        std::vector<StmtPtr> out;
        for (auto& s : body) out.push_back(desugar_one(s));
        return seq_of(out);
    }

    StmtPtr desugar_one(const SStmtPtr& s) {
        switch (s->kind) {
            case SStmt::Kind::Skip: return Stmt::skip(s->span);
            case SStmt::Kind::Had: return Stmt::had(s->x, s->span);
            case SStmt::Kind::Swap: return Stmt::swap(s->x, s->y, s->span);
            case SStmt::Kind::MemSwap: return Stmt::memswap(s->x, s->y, s->span);
            case SStmt::Kind::Free: return reverse_stmt(alloc_block(s->x, s->span));
            case SStmt::Kind::Let: {
                if (s->e->kind == SExpr::Kind::Alloc) return alloc_block(s->x, s->span);
                std::vector<StmtPtr> pre;
                Expr ce = flatten(s->e, pre);
                pre.push_back(Stmt::bind(s->x, ce, s->span));
                return seq_of(pre);
            }
            case SStmt::Kind::Unlet: {
                if (s->e->kind == SExpr::Kind::Alloc)
                    return reverse_stmt(alloc_block(s->x, s->span));
                // Self-contained: recompute temporaries, consume, uncompute.
                std::vector<StmtPtr> pre;
                Expr ce = flatten(s->e, pre);
                std::vector<StmtPtr> all = pre;
                all.push_back(Stmt::unbind(s->x, ce, s->span));
                all.push_back(reverse_stmt(seq_of(pre)));
                return seq_of(all);
            }
            case SStmt::Kind::If: {
                StmtPtr then_body = desugar(s->body);
                StmtPtr else_body = s->has_else ? desugar(s->body2) : nullptr;

                // The guard must stay intact across the branch bodies, both
                // for S-If and so the scaffold uncomputes cleanly.
                std::set<std::string> gv;
                expr_vars(s->e, gv);
                std::set<std::string> mod = modified_vars(then_body);
                if (else_body)
                    for (auto& m : modified_vars(else_body)) mod.insert(m);
                for (auto& g : gv)
                    if (mod.count(g))
                        throw CompileError(s->span,
                                           "conditional body may modify its own guard ('" + g + "')");

                if (!s->has_else && s->e->kind == SExpr::Kind::Var)
                    return Stmt::if_(s->e->name, then_body, s->span);

                std::vector<StmtPtr> scaffold;
                Expr ge = flatten(s->e, scaffold);
                std::string g;
                if (ge.kind == Expr::Kind::Val && ge.val.kind == Value::Kind::Var) {
                    g = ge.val.x;
                } else {
                    g = fresh_name("g");
                    scaffold.push_back(Stmt::bind(g, ge, s->span));
                }
                if (!s->has_else)
                    return Stmt::with_do(seq_of(scaffold), Stmt::if_(g, then_body, s->span),
                                         s->span);
                std::string ng = fresh_name("g");
                scaffold.push_back(Stmt::bind(ng, Expr::not_(g), s->span));
                StmtPtr both = Stmt::seq(Stmt::if_(g, then_body, s->span),
                                         Stmt::if_(ng, else_body, s->span));
                return Stmt::with_do(seq_of(scaffold), both, s->span);
            }
            case SStmt::Kind::With:
                return Stmt::with_do(desugar(s->body), desugar(s->body2), s->span);
            case SStmt::Kind::Call: throw InternalError("desugar saw a call; inline first");
        }
        throw InternalError("unhandled surface statement kind");
    }
};

// Walks a with-free core statement mirroring the checker's context updates,
// unifying the pointee type of every memory swap into the slab type. Catches
// programs that touch memory only through *p <-> v, with no alloc<T> to name
// the cell type.
void unify_memswap_types(const StmtPtr& s, Context& ctx, const CheckConfig& cfg, Desugarer& d) {
    switch (s->kind) {
        case Stmt::Kind::Skip:
        case Stmt::Kind::Had:
        case Stmt::Kind::Swap: return;
        case Stmt::Kind::Seq:
            unify_memswap_types(s->a, ctx, cfg, d);
            unify_memswap_types(s->b, ctx, cfg, d);
            return;
        case Stmt::Kind::If: unify_memswap_types(s->a, ctx, cfg, d); return;
        case Stmt::Kind::WithDo: throw InternalError("unify_memswap_types on unexpanded with");
        case Stmt::Kind::Bind: ctx.bind(s->x, check_expr(ctx, s->e, cfg, s->span)); return;
        case Stmt::Kind::Unbind: ctx.unbind(s->x, s->span); return;
        case Stmt::Kind::MemSwap: {
            auto t = ctx.lookup(s->x);
            if (t && (*t)->kind == Type::Kind::Ptr) d.unify_slab((*t)->fst, s->span);
            return;
        }
    }
}

} // namespace

bool is_core_only(const StmtPtr& s) {
    if (!s) return false;
    switch (s->kind) {
        case Stmt::Kind::Skip:
        case Stmt::Kind::Had:
        case Stmt::Kind::Swap:
        case Stmt::Kind::MemSwap:
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind: return true;
        case Stmt::Kind::Seq: return is_core_only(s->a) && is_core_only(s->b);
        case Stmt::Kind::If: return !s->x.empty() && is_core_only(s->a);
        case Stmt::Kind::WithDo: return is_core_only(s->a) && is_core_only(s->b);
    }
    return false;
}

FrontendResult compile_frontend(const SProgram& prog, const std::string& entry,
                                const std::map<std::string, int64_t>& env,
                                const FrontendOptions& opt) {
    const SFun* f = prog.find(entry);
    if (!f) throw CompileError("unknown entry function '" + entry + "'");

    FrontendResult res;
    auto named = resolve_typedefs(prog);

    std::vector<SStmtPtr> inlined = instantiate_and_inline(prog, entry, env, opt.inline_budget);

    Desugarer d{named, opt.word_width, opt.cells};
    d.prescan(inlined);
    res.body = d.desugar(inlined);
    if (d.uses_memory) {
        CheckConfig cfg{opt.word_width, opt.cells};
        Context ctx;
        for (auto& [p, st] : f->params) ctx.bind(p, resolve_stype(st, named, f->span));
        unify_memswap_types(expand_with(res.body), ctx, cfg, d);
    }
    res.prologue = d.prologue();
    res.uses_memory = d.uses_memory;
    res.cell_type = d.slab;

    for (auto& [p, st] : f->params) {
        TypePtr t = resolve_stype(st, named, f->span);
        res.inputs.emplace_back(p, t);
        res.input_context.bind(p, t);
    }
    res.return_var = f->return_var;
    if (!f->return_var.empty())
        res.return_type = resolve_stype(infer_return_type(prog, entry), named, f->return_span);

    require(is_core_only(res.body), "desugared body contains non-core constructs");
    return res;
}

} // namespace twr
