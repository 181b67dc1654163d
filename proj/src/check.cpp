#include "twr/check.hpp"

#include <algorithm>

namespace twr {

void Context::bind(const std::string& x, TypePtr t) { entries_.emplace_back(x, std::move(t)); }

void Context::unbind(const std::string& x, Span sp) {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->first == x) {
            entries_.erase(std::next(it).base());
            return;
        }
    }
    throw CompileError(sp, "cannot unbind '" + x + "': not bound");
}

std::optional<TypePtr> Context::lookup(const std::string& x) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->first == x) return it->second;
    return std::nullopt;
}

std::set<std::string> Context::domain() const {
    std::set<std::string> out;
    for (auto& [name, _] : entries_) out.insert(name);
    return out;
}

bool Context::operator==(const Context& o) const {
    if (entries_.size() != o.entries_.size()) return false;
    for (size_t i = 0; i < entries_.size(); i++) {
        if (entries_[i].first != o.entries_[i].first) return false;
        if (!type_equal(entries_[i].second, o.entries_[i].second)) return false;
    }
    return true;
}

// ---- expressions -----------------------------------------------------------

static TypePtr lookup_or_fail(const Context& ctx, const std::string& x, Span sp) {
    auto t = ctx.lookup(x);
    if (!t) throw CompileError(sp, "unbound variable '" + x + "'");
    return *t;
}

static TypePtr check_value(const Context& ctx, const Value& v, const CheckConfig& cfg, Span sp) {
    switch (v.kind) {
        case Value::Kind::Var: return lookup_or_fail(ctx, v.x, sp);
        case Value::Kind::Unit: return Type::unit();
        case Value::Kind::Pair:
            return Type::pair(lookup_or_fail(ctx, v.x, sp), lookup_or_fail(ctx, v.x2, sp));
        case Value::Kind::Number:
            if (cfg.word_width < 64 && v.n >= (uint64_t{1} << cfg.word_width))
                throw CompileError(sp, "literal " + std::to_string(v.n) + " does not fit in " +
                                           std::to_string(cfg.word_width) + "-bit words");
            return Type::uint_();
        case Value::Kind::True:
        case Value::Kind::False: return Type::bool_();
        case Value::Kind::Null: return Type::ptr(v.type);
        case Value::Kind::Addr:
            if (v.n >= cfg.cells)
                throw CompileError(sp, "address " + std::to_string(v.n) + " out of range (cells=" +
                                           std::to_string(cfg.cells) + ")");
            return Type::ptr(v.type);
        case Value::Kind::Default: return v.type;
    }
    throw InternalError("check_value: bad kind");
}

TypePtr check_expr(const Context& ctx, const Expr& e, const CheckConfig& cfg, Span sp) {
    switch (e.kind) {
        case Expr::Kind::Val: return check_value(ctx, e.val, cfg, sp);
        case Expr::Kind::Proj1:
        case Expr::Kind::Proj2: {
            TypePtr t = lookup_or_fail(ctx, e.x, sp);
            if (t->kind != Type::Kind::Pair)
                throw CompileError(sp, "projection on non-pair '" + e.x + "' of type " + type_str(t));
            return e.kind == Expr::Kind::Proj1 ? t->fst : t->snd;
        }
        case Expr::Kind::Not: {
            TypePtr t = lookup_or_fail(ctx, e.x, sp);
            if (t->kind != Type::Kind::Bool)
                throw CompileError(sp, "'not' needs a bool, got " + type_str(t));
            return Type::bool_();
        }
        case Expr::Kind::Test: {
            TypePtr t = lookup_or_fail(ctx, e.x, sp);
            if (t->kind != Type::Kind::Uint && t->kind != Type::Kind::Ptr)
                throw CompileError(sp, "'test' needs a uint or pointer, got " + type_str(t));
            return Type::bool_();
        }
        case Expr::Kind::Bin: {
            TypePtr tx = lookup_or_fail(ctx, e.x, sp);
            TypePtr ty = lookup_or_fail(ctx, e.y, sp);
            switch (e.op) {
                case BinOp::And:
                case BinOp::Or:
                    if (tx->kind != Type::Kind::Bool || ty->kind != Type::Kind::Bool)
                        throw CompileError(sp, "logical operator needs bool operands");
                    return Type::bool_();
                case BinOp::Add:
                case BinOp::Sub:
                case BinOp::Mul:
                    if (tx->kind != Type::Kind::Uint || ty->kind != Type::Kind::Uint)
                        throw CompileError(sp, "arithmetic operator needs uint operands");
                    return Type::uint_();
                case BinOp::Eq:
                case BinOp::Neq:
                case BinOp::Lt:
                    if (tx->kind != Type::Kind::Uint || ty->kind != Type::Kind::Uint)
                        throw CompileError(sp, "comparison needs uint operands");
                    return Type::bool_();
            }
        }
    }
    throw InternalError("check_expr: bad kind");
}

// ---- statements ------------------------------------------------------------

Context check_stmt(const Context& ctx, const StmtPtr& s, const CheckConfig& cfg) {
    switch (s->kind) {
        case Stmt::Kind::Skip: return ctx;
        case Stmt::Kind::Seq: return check_stmt(check_stmt(ctx, s->a, cfg), s->b, cfg);
        case Stmt::Kind::If: {
            TypePtr tg = lookup_or_fail(ctx, s->x, s->span);
            if (tg->kind != Type::Kind::Bool)
                throw CompileError(s->span, "if-guard '" + s->x + "' must be bool, got " + type_str(tg));
            auto mods = modified_vars(s->a);
            if (mods.count(s->x))
                throw CompileError(s->span, "if-body modifies its own guard '" + s->x + "'");
            Context out = check_stmt(ctx, s->a, cfg);
            auto dom_in = ctx.domain();
            auto dom_out = out.domain();
            for (auto& name : dom_in)
                if (!dom_out.count(name))
                    throw CompileError(s->span,
                                       "if-body unbinds '" + name + "' from the surrounding context");
            return out;
        }
        case Stmt::Kind::Bind: {
            TypePtr t = check_expr(ctx, s->e, cfg, s->span);
            Context out = ctx;
            if (auto prior = ctx.lookup(s->x); prior && !type_equal(*prior, t))
                throw CompileError(s->span, "re-declaration of '" + s->x + "' changes its type from " +
                                                type_str(*prior) + " to " + type_str(t));
            out.bind(s->x, t);
            return out;
        }
        case Stmt::Kind::Unbind: {
            TypePtr tx = lookup_or_fail(ctx, s->x, s->span);
            TypePtr te = check_expr(ctx, s->e, cfg, s->span);
            if (!type_equal(tx, te))
                throw CompileError(s->span, "unbinding '" + s->x + "' of type " + type_str(tx) +
                                                " against expression of type " + type_str(te));
            Context out = ctx;
            out.unbind(s->x, s->span);
            return out;
        }
        case Stmt::Kind::Had: {
            TypePtr t = lookup_or_fail(ctx, s->x, s->span);
            if (t->kind != Type::Kind::Bool)
                throw CompileError(s->span, "had needs a bool, got " + type_str(t));
            return ctx;
        }
        case Stmt::Kind::Swap: {
            TypePtr tx = lookup_or_fail(ctx, s->x, s->span);
            TypePtr ty = lookup_or_fail(ctx, s->y, s->span);
            if (!type_equal(tx, ty))
                throw CompileError(s->span, "swap between different types " + type_str(tx) + " and " +
                                                type_str(ty));
            return ctx;
        }
        case Stmt::Kind::MemSwap: {
            TypePtr tp = lookup_or_fail(ctx, s->x, s->span);
            TypePtr tv = lookup_or_fail(ctx, s->y, s->span);
            if (tp->kind != Type::Kind::Ptr)
                throw CompileError(s->span, "memory swap needs a pointer on the left, got " + type_str(tp));
            if (!type_equal(tp->fst, tv))
                throw CompileError(s->span, "memory swap between cell of type " + type_str(tp->fst) +
                                                " and value of type " + type_str(tv));
            return ctx;
        }
        case Stmt::Kind::WithDo: {
            // with { a } do { b } checks as a; b; reverse(a).
            Context mid = check_stmt(ctx, s->a, cfg);
            Context after = check_stmt(mid, s->b, cfg);
            return check_stmt(after, reverse_stmt(s->a), cfg);
        }
    }
    throw InternalError("check_stmt: bad kind");
}

} // namespace twr
