#include <sstream>

#include "twr/lexer.hpp"
#include "twr/surface.hpp"

namespace twr {

namespace {

STypePtr mk_stype(SType t) { return std::make_shared<const SType>(std::move(t)); }
SExprPtr mk_sexpr(SExpr e) { return std::make_shared<const SExpr>(std::move(e)); }
SStmtPtr mk_sstmt(SStmt s) { return std::make_shared<const SStmt>(std::move(s)); }
StaticExprPtr mk_static(StaticExpr e) { return std::make_shared<const StaticExpr>(std::move(e)); }

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    SProgram program() {
        SProgram prog;
        while (!at(Tok::End)) {
            if (at(Tok::KwType)) {
                Span sp = cur().span;
                next();
                std::string name = expect_ident("type name");
                expect(Tok::Assign, "'='");
                STypePtr t = type();
                expect(Tok::Semi, "';'");
                for (auto& [n, _] : prog.typedefs)
                    if (n == name) throw CompileError(sp, "duplicate type '" + name + "'");
                prog.typedefs.emplace_back(name, t);
            } else if (at(Tok::KwFun)) {
                prog.functions.push_back(function());
            } else {
                throw CompileError(cur().span, "expected 'type' or 'fun' at top level");
            }
        }
        if (prog.functions.empty()) throw CompileError(Span{1, 1}, "no functions in program");
        return prog;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t off = 1) const {
        return toks_[std::min(pos_ + off, toks_.size() - 1)];
    }
    bool at(Tok k) const { return cur().kind == k; }
    void next() { if (pos_ + 1 < toks_.size()) pos_++; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    void expect(Tok k, const std::string& what) {
        if (!at(k))
            throw CompileError(cur().span, "expected " + what + ", got '" + cur().text + "'");
        next();
    }
    std::string expect_ident(const std::string& what) {
        if (!at(Tok::Ident))
            throw CompileError(cur().span, "expected " + what + ", got '" + cur().text + "'");
        std::string s = cur().text;
        next();
        return s;
    }

    STypePtr type() {
        Span sp = cur().span;
        if (accept(Tok::KwUint)) return mk_stype({SType::Kind::Uint, nullptr, nullptr, "", sp});
        if (accept(Tok::KwBool)) return mk_stype({SType::Kind::Bool, nullptr, nullptr, "", sp});
        if (accept(Tok::KwPtr)) {
            expect(Tok::Less, "'<'");
            STypePtr inner = type();
            expect(Tok::Greater, "'>'");
            return mk_stype({SType::Kind::Ptr, inner, nullptr, "", sp});
        }
        if (accept(Tok::LParen)) {
            if (accept(Tok::RParen)) return mk_stype({SType::Kind::Unit, nullptr, nullptr, "", sp});
            STypePtr a = type();
            expect(Tok::Comma, "',' in pair type");
            STypePtr b = type();
            expect(Tok::RParen, "')'");
            return mk_stype({SType::Kind::Pair, a, b, "", sp});
        }
        if (at(Tok::Ident)) {
            std::string name = cur().text;
            next();
            return mk_stype({SType::Kind::Named, nullptr, nullptr, name, sp});
        }
        throw CompileError(sp, "expected a type");
    }

    SFun function() {
        Span sp = cur().span;
        expect(Tok::KwFun, "'fun'");
        SFun f;
        f.span = sp;
        f.name = expect_ident("function name");
        if (accept(Tok::LBracket)) {
            do {
                f.static_params.push_back(expect_ident("static parameter"));
            } while (accept(Tok::Comma));
            expect(Tok::RBracket, "']'");
        }
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            // A type annotation covers every name since the previous one:
            // "(xs, acc: uint, b: bool)" declares xs and acc as uint.
            std::vector<std::string> pending;
            do {
                pending.push_back(expect_ident("parameter name"));
                if (accept(Tok::Colon)) {
                    STypePtr t = type();
                    for (auto& pname : pending) f.params.emplace_back(pname, t);
                    pending.clear();
                }
            } while (accept(Tok::Comma));
            if (!pending.empty())
                throw CompileError(cur().span, "parameter '" + pending.back() + "' lacks a type annotation");
        }
        expect(Tok::RParen, "')'");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::KwReturn)) f.body.push_back(stmt());
        if (at(Tok::KwReturn)) {
            f.return_span = cur().span;
            next();
            f.return_var = expect_ident("return variable");
            expect(Tok::Semi, "';'");
        }
        expect(Tok::RBrace, "'}'");
        return f;
    }

    std::vector<SStmtPtr> block() {
        std::vector<SStmtPtr> out;
        if (accept(Tok::LBrace)) {
            while (!at(Tok::RBrace)) out.push_back(stmt());
            expect(Tok::RBrace, "'}'");
        } else {
            out.push_back(stmt()); // single-statement block
        }
        return out;
    }

    SStmtPtr stmt() {
        Span sp = cur().span;
        if (accept(Tok::KwSkip)) {
            expect(Tok::Semi, "';'");
            SStmt s;
            s.kind = SStmt::Kind::Skip;
            s.span = sp;
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::KwHad)) {
            SStmt s;
            s.kind = SStmt::Kind::Had;
            s.x = expect_ident("variable");
            s.span = sp;
            expect(Tok::Semi, "';'");
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::KwFree)) {
            SStmt s;
            s.kind = SStmt::Kind::Free;
            s.x = expect_ident("variable");
            s.span = sp;
            expect(Tok::Semi, "';'");
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::KwLet)) {
            SStmt s;
            s.x = expect_ident("variable");
            if (accept(Tok::BindArrow)) {
                s.kind = SStmt::Kind::Let;
            } else if (accept(Tok::UnbindArrow)) {
                s.kind = SStmt::Kind::Unlet;
            } else {
                throw CompileError(cur().span, "expected '<-' or '->' after let variable");
            }
            s.e = expr();
            s.span = sp;
            expect(Tok::Semi, "';'");
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::KwIf)) {
            SStmt s;
            s.kind = SStmt::Kind::If;
            s.e = expr();
            s.span = sp;
            s.body = block();
            if (accept(Tok::KwElse)) {
                s.has_else = true;
                s.body2 = block();
            }
            accept(Tok::Semi);
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::KwWith)) {
            SStmt s;
            s.kind = SStmt::Kind::With;
            s.span = sp;
            s.body = block();
            expect(Tok::KwDo, "'do'");
            s.body2 = block();
            accept(Tok::Semi);
            return mk_sstmt(std::move(s));
        }
        if (accept(Tok::Star)) {
            SStmt s;
            s.kind = SStmt::Kind::MemSwap;
            s.x = expect_ident("pointer variable");
            expect(Tok::SwapArrow, "'<->'");
            s.y = expect_ident("variable");
            s.span = sp;
            expect(Tok::Semi, "';'");
            return mk_sstmt(std::move(s));
        }
        if (at(Tok::Ident)) {
            // Either a swap "x <-> y;" or a bare call statement "f[k](args);".
            if (peek(1).kind == Tok::LBracket || peek(1).kind == Tok::LParen) {
                SStmt s;
                s.kind = SStmt::Kind::Call;
                s.e = expr();
                if (s.e->kind != SExpr::Kind::Call)
                    throw CompileError(sp, "expected a call statement");
                s.span = sp;
                expect(Tok::Semi, "';'");
                return mk_sstmt(std::move(s));
            }
            SStmt s;
            s.kind = SStmt::Kind::Swap;
            s.x = expect_ident("variable");
            expect(Tok::SwapArrow, "'<->'");
            s.y = expect_ident("variable");
            s.span = sp;
            expect(Tok::Semi, "';'");
            return mk_sstmt(std::move(s));
        }
        throw CompileError(sp, "expected a statement, got '" + cur().text + "'");
    }

    // ---- expressions, precedence climbing ----

    SExprPtr expr() { return or_expr(); }

    SExprPtr or_expr() {
        SExprPtr e = and_expr();
        while (at(Tok::OrOr)) {
            Span sp = cur().span;
            next();
            SExpr out;
            out.kind = SExpr::Kind::Bin;
            out.op = BinOp::Or;
            out.a = e;
            out.b = and_expr();
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    SExprPtr and_expr() {
        SExprPtr e = cmp_expr();
        while (at(Tok::AndAnd)) {
            Span sp = cur().span;
            next();
            SExpr out;
            out.kind = SExpr::Kind::Bin;
            out.op = BinOp::And;
            out.a = e;
            out.b = cmp_expr();
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    SExprPtr cmp_expr() {
        SExprPtr e = add_expr();
        if (at(Tok::EqEq) || at(Tok::NotEq) || at(Tok::Less)) {
            BinOp op = at(Tok::EqEq) ? BinOp::Eq : at(Tok::NotEq) ? BinOp::Neq : BinOp::Lt;
            Span sp = cur().span;
            next();
            SExpr out;
            out.kind = SExpr::Kind::Bin;
            out.op = op;
            out.a = e;
            out.b = add_expr();
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    SExprPtr add_expr() {
        SExprPtr e = mul_expr();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
            Span sp = cur().span;
            next();
            SExpr out;
            out.kind = SExpr::Kind::Bin;
            out.op = op;
            out.a = e;
            out.b = mul_expr();
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    SExprPtr mul_expr() {
        SExprPtr e = unary_expr();
        while (at(Tok::Star)) {
            Span sp = cur().span;
            next();
            SExpr out;
            out.kind = SExpr::Kind::Bin;
            out.op = BinOp::Mul;
            out.a = e;
            out.b = unary_expr();
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    SExprPtr unary_expr() {
        Span sp = cur().span;
        if (accept(Tok::KwNot)) {
            SExpr out;
            out.kind = SExpr::Kind::Not;
            out.a = unary_expr();
            out.span = sp;
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwTest)) {
            SExpr out;
            out.kind = SExpr::Kind::Test;
            out.a = unary_expr();
            out.span = sp;
            return mk_sexpr(std::move(out));
        }
        return postfix_expr();
    }

    SExprPtr postfix_expr() {
        SExprPtr e = primary_expr();
        while (at(Tok::Dot)) {
            Span sp = cur().span;
            next();
            if (!at(Tok::Number) || (cur().number != 1 && cur().number != 2))
                throw CompileError(cur().span, "projection must be .1 or .2");
            int which = static_cast<int>(cur().number);
            next();
            SExpr out;
            out.kind = SExpr::Kind::Proj;
            out.proj = which;
            out.a = e;
            out.span = sp;
            e = mk_sexpr(std::move(out));
        }
        return e;
    }

    StaticExprPtr static_expr() { return static_add(); }
    StaticExprPtr static_add() {
        StaticExprPtr e = static_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            char op = at(Tok::Plus) ? '+' : '-';
            Span sp = cur().span;
            next();
            StaticExpr out;
            out.kind = StaticExpr::Kind::Bin;
            out.op = op;
            out.lhs = e;
            out.rhs = static_mul();
            out.span = sp;
            e = mk_static(std::move(out));
        }
        return e;
    }
    StaticExprPtr static_mul() {
        StaticExprPtr e = static_prim();
        while (at(Tok::Star)) {
            Span sp = cur().span;
            next();
            StaticExpr out;
            out.kind = StaticExpr::Kind::Bin;
            out.op = '*';
            out.lhs = e;
            out.rhs = static_prim();
            out.span = sp;
            e = mk_static(std::move(out));
        }
        return e;
    }
    StaticExprPtr static_prim() {
        Span sp = cur().span;
        if (at(Tok::Number)) {
            StaticExpr out;
            out.kind = StaticExpr::Kind::Num;
            out.n = static_cast<int64_t>(cur().number);
            out.span = sp;
            next();
            return mk_static(std::move(out));
        }
        if (at(Tok::Ident)) {
            StaticExpr out;
            out.kind = StaticExpr::Kind::Var;
            out.name = cur().text;
            out.span = sp;
            next();
            return mk_static(std::move(out));
        }
        if (accept(Tok::LParen)) {
            StaticExprPtr e = static_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw CompileError(sp, "expected a static expression");
    }

    SExprPtr primary_expr() {
        Span sp = cur().span;
        if (at(Tok::Number)) {
            SExpr out;
            out.kind = SExpr::Kind::Number;
            out.n = cur().number;
            out.span = sp;
            next();
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwTrue)) {
            SExpr out;
            out.kind = SExpr::Kind::True;
            out.span = sp;
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwFalse)) {
            SExpr out;
            out.kind = SExpr::Kind::False;
            out.span = sp;
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwNull)) {
            SExpr out;
            out.kind = SExpr::Kind::Null;
            out.span = sp;
            if (accept(Tok::Less)) {
                out.type = type();
                expect(Tok::Greater, "'>'");
            }
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwDefault)) {
            SExpr out;
            out.kind = SExpr::Kind::Default;
            out.span = sp;
            expect(Tok::Less, "'<'");
            out.type = type();
            expect(Tok::Greater, "'>'");
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::KwAlloc)) {
            SExpr out;
            out.kind = SExpr::Kind::Alloc;
            out.span = sp;
            expect(Tok::Less, "'<'");
            out.type = type();
            expect(Tok::Greater, "'>'");
            return mk_sexpr(std::move(out));
        }
        if (accept(Tok::LParen)) {
            if (accept(Tok::RParen)) {
                SExpr out;
                out.kind = SExpr::Kind::Unit;
                out.span = sp;
                return mk_sexpr(std::move(out));
            }
            SExprPtr a = expr();
            if (accept(Tok::Comma)) {
                SExpr out;
                out.kind = SExpr::Kind::Pair;
                out.a = a;
                out.b = expr();
                out.span = sp;
                expect(Tok::RParen, "')'");
                return mk_sexpr(std::move(out));
            }
            expect(Tok::RParen, "')'");
            return a;
        }
        if (at(Tok::Ident)) {
            std::string name = cur().text;
            next();
            if (at(Tok::LBracket) || at(Tok::LParen)) {
                // f[k1, k2](args) or f(args): a call, with optional
                // compile-time bracket expressions.
                SExpr out;
                out.kind = SExpr::Kind::Call;
                out.name = name;
                out.span = sp;
                if (accept(Tok::LBracket)) {
                    do {
                        out.static_args.push_back(static_expr());
                    } while (accept(Tok::Comma));
                    expect(Tok::RBracket, "']'");
                }
                expect(Tok::LParen, "'('");
                if (!at(Tok::RParen)) {
                    do {
                        out.args.push_back(expr());
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                return mk_sexpr(std::move(out));
            }
            SExpr out;
            out.kind = SExpr::Kind::Var;
            out.name = name;
            out.span = sp;
            return mk_sexpr(std::move(out));
        }
        throw CompileError(sp, "expected an expression, got '" + cur().text + "'");
    }
};

// ---- printer ----------------------------------------------------------------

std::string stype_str(const STypePtr& t) {
    switch (t->kind) {
        case SType::Kind::Unit: return "()";
        case SType::Kind::Uint: return "uint";
        case SType::Kind::Bool: return "bool";
        case SType::Kind::Pair: return "(" + stype_str(t->fst) + ", " + stype_str(t->snd) + ")";
        case SType::Kind::Ptr: return "ptr<" + stype_str(t->fst) + ">";
        case SType::Kind::Named: return t->name;
    }
    return "<?>";
}

std::string static_str(const StaticExprPtr& e) {
    switch (e->kind) {
        case StaticExpr::Kind::Num: return std::to_string(e->n);
        case StaticExpr::Kind::Var: return e->name;
        case StaticExpr::Kind::Bin:
            return "(" + static_str(e->lhs) + " " + std::string(1, e->op) + " " + static_str(e->rhs) + ")";
    }
    return "<?>";
}

std::string sexpr_str(const SExprPtr& e) {
    switch (e->kind) {
        case SExpr::Kind::Var: return e->name;
        case SExpr::Kind::Number: return std::to_string(e->n);
        case SExpr::Kind::True: return "true";
        case SExpr::Kind::False: return "false";
        case SExpr::Kind::Unit: return "()";
        case SExpr::Kind::Null: return e->type ? "null<" + stype_str(e->type) + ">" : "null";
        case SExpr::Kind::Default: return "default<" + stype_str(e->type) + ">";
        case SExpr::Kind::Alloc: return "alloc<" + stype_str(e->type) + ">";
        case SExpr::Kind::Pair: return "(" + sexpr_str(e->a) + ", " + sexpr_str(e->b) + ")";
        case SExpr::Kind::Proj: return sexpr_str(e->a) + "." + std::to_string(e->proj);
        case SExpr::Kind::Not: return "not (" + sexpr_str(e->a) + ")";
        case SExpr::Kind::Test: return "test (" + sexpr_str(e->a) + ")";
        case SExpr::Kind::Bin: {
            const char* op = "?";
            switch (e->op) {
                case BinOp::And: op = "&&"; break;
                case BinOp::Or: op = "||"; break;
                case BinOp::Add: op = "+"; break;
                case BinOp::Sub: op = "-"; break;
                case BinOp::Mul: op = "*"; break;
                case BinOp::Eq: op = "=="; break;
                case BinOp::Neq: op = "!="; break;
                case BinOp::Lt: op = "<"; break;
            }
            return "(" + sexpr_str(e->a) + " " + op + " " + sexpr_str(e->b) + ")";
        }
        case SExpr::Kind::Call: {
            std::string out = e->name;
            if (!e->static_args.empty()) {
                out += "[";
                for (size_t i = 0; i < e->static_args.size(); i++) {
                    if (i) out += ", ";
                    out += static_str(e->static_args[i]);
                }
                out += "]";
            }
            out += "(";
            for (size_t i = 0; i < e->args.size(); i++) {
                if (i) out += ", ";
                out += sexpr_str(e->args[i]);
            }
            return out + ")";
        }
    }
    return "<?>";
}

void print_sstmts(const std::vector<SStmtPtr>& body, int indent, std::ostringstream& out);

void print_sstmt(const SStmtPtr& s, int indent, std::ostringstream& out) {
    auto pad = [&] { for (int i = 0; i < indent; i++) out << "  "; };
    switch (s->kind) {
        case SStmt::Kind::Let:
            pad();
            out << "let " << s->x << " <- " << sexpr_str(s->e) << ";\n";
            return;
        case SStmt::Kind::Unlet:
            pad();
            out << "let " << s->x << " -> " << sexpr_str(s->e) << ";\n";
            return;
        case SStmt::Kind::If:
            pad();
            out << "if " << sexpr_str(s->e) << " {\n";
            print_sstmts(s->body, indent + 1, out);
            pad();
            if (s->has_else) {
                out << "} else {\n";
                print_sstmts(s->body2, indent + 1, out);
                pad();
            }
            out << "}\n";
            return;
        case SStmt::Kind::With:
            pad();
            out << "with {\n";
            print_sstmts(s->body, indent + 1, out);
            pad();
            out << "} do {\n";
            print_sstmts(s->body2, indent + 1, out);
            pad();
            out << "}\n";
            return;
        case SStmt::Kind::Swap:
            pad();
            out << s->x << " <-> " << s->y << ";\n";
            return;
        case SStmt::Kind::MemSwap:
            pad();
            out << "*" << s->x << " <-> " << s->y << ";\n";
            return;
        case SStmt::Kind::Had:
            pad();
            out << "had " << s->x << ";\n";
            return;
        case SStmt::Kind::Skip:
            pad();
            out << "skip;\n";
            return;
        case SStmt::Kind::Free:
            pad();
            out << "free " << s->x << ";\n";
            return;
        case SStmt::Kind::Call:
            pad();
            out << sexpr_str(s->e) << ";\n";
            return;
    }
}

void print_sstmts(const std::vector<SStmtPtr>& body, int indent, std::ostringstream& out) {
    for (auto& s : body) print_sstmt(s, indent, out);
}

} // namespace

SProgram parse_program(const std::string& source) {
    Parser p(tokenize(source));
    return p.program();
}

std::string program_str(const SProgram& prog) {
    std::ostringstream out;
    for (auto& [name, t] : prog.typedefs) out << "type " << name << " = " << stype_str(t) << ";\n";
    if (!prog.typedefs.empty()) out << "\n";
    for (auto& f : prog.functions) {
        out << "fun " << f.name;
        if (!f.static_params.empty()) {
            out << "[";
            for (size_t i = 0; i < f.static_params.size(); i++) {
                if (i) out << ", ";
                out << f.static_params[i];
            }
            out << "]";
        }
        out << "(";
        for (size_t i = 0; i < f.params.size(); i++) {
            if (i) out << ", ";
            out << f.params[i].first << ": " << stype_str(f.params[i].second);
        }
        out << ") {\n";
        print_sstmts(f.body, 1, out);
        if (!f.return_var.empty()) out << "  return " << f.return_var << ";\n";
        out << "}\n\n";
    }
    return out.str();
}

} // namespace twr
