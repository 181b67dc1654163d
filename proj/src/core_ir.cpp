#include "twr/core_ir.hpp"

#include "twr/diag.hpp"

#include <sstream>

namespace twr {

// ---- constructors ----------------------------------------------------------

Value Value::var(std::string name) {
    Value v;
    v.kind = Kind::Var;
    v.x = std::move(name);
    return v;
}
Value Value::unit() { return Value{}; }
Value Value::pair(std::string a, std::string b) {
    Value v;
    v.kind = Kind::Pair;
    v.x = std::move(a);
    v.x2 = std::move(b);
    return v;
}
Value Value::number(uint64_t n) {
    Value v;
    v.kind = Kind::Number;
    v.n = n;
    return v;
}
Value Value::boolean(bool b) {
    Value v;
    v.kind = b ? Kind::True : Kind::False;
    return v;
}
Value Value::null(TypePtr pointee) {
    Value v;
    v.kind = Kind::Null;
    v.type = std::move(pointee);
    return v;
}
Value Value::addr(TypePtr pointee, uint64_t a) {
    Value v;
    v.kind = Kind::Addr;
    v.type = std::move(pointee);
    v.n = a;
    return v;
}
Value Value::zero(TypePtr t) {
    Value v;
    v.kind = Kind::Default;
    v.type = std::move(t);
    return v;
}

Expr Expr::value(Value v) {
    Expr e;
    e.kind = Kind::Val;
    e.val = std::move(v);
    return e;
}
Expr Expr::proj(int which, std::string x) {
    Expr e;
    e.kind = which == 1 ? Kind::Proj1 : Kind::Proj2;
    e.x = std::move(x);
    return e;
}
Expr Expr::not_(std::string x) {
    Expr e;
    e.kind = Kind::Not;
    e.x = std::move(x);
    return e;
}
Expr Expr::test(std::string x) {
    Expr e;
    e.kind = Kind::Test;
    e.x = std::move(x);
    return e;
}
Expr Expr::bin(BinOp op, std::string x, std::string y) {
    Expr e;
    e.kind = Kind::Bin;
    e.op = op;
    e.x = std::move(x);
    e.y = std::move(y);
    return e;
}

static StmtPtr mk(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }

StmtPtr Stmt::skip(Span sp) {
    Stmt s;
    s.kind = Kind::Skip;
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::seq(StmtPtr a, StmtPtr b) {
    Stmt s;
    s.kind = Kind::Seq;
    s.span = a->span;
    s.a = std::move(a);
    s.b = std::move(b);
    return mk(std::move(s));
}
StmtPtr Stmt::if_(std::string guard, StmtPtr body, Span sp) {
    Stmt s;
    s.kind = Kind::If;
    s.x = std::move(guard);
    s.a = std::move(body);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::bind(std::string x, Expr e, Span sp) {
    Stmt s;
    s.kind = Kind::Bind;
    s.x = std::move(x);
    s.e = std::move(e);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::unbind(std::string x, Expr e, Span sp) {
    Stmt s;
    s.kind = Kind::Unbind;
    s.x = std::move(x);
    s.e = std::move(e);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::had(std::string x, Span sp) {
    Stmt s;
    s.kind = Kind::Had;
    s.x = std::move(x);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::swap(std::string x, std::string y, Span sp) {
    Stmt s;
    s.kind = Kind::Swap;
    s.x = std::move(x);
    s.y = std::move(y);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::memswap(std::string ptr, std::string val, Span sp) {
    Stmt s;
    s.kind = Kind::MemSwap;
    s.x = std::move(ptr);
    s.y = std::move(val);
    s.span = sp;
    return mk(std::move(s));
}
StmtPtr Stmt::with_do(StmtPtr a, StmtPtr b, Span sp) {
    Stmt s;
    s.kind = Kind::WithDo;
    s.a = std::move(a);
    s.b = std::move(b);
    s.span = sp;
    return mk(std::move(s));
}

// ---- equality --------------------------------------------------------------

bool value_equal(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Value::Kind::Var: return a.x == b.x;
        case Value::Kind::Unit: return true;
        case Value::Kind::Pair: return a.x == b.x && a.x2 == b.x2;
        case Value::Kind::Number: return a.n == b.n;
        case Value::Kind::True:
        case Value::Kind::False: return true;
        case Value::Kind::Null: return type_equal(a.type, b.type);
        case Value::Kind::Addr: return a.n == b.n && type_equal(a.type, b.type);
        case Value::Kind::Default: return type_equal(a.type, b.type);
    }
    return false;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Val: return value_equal(a.val, b.val);
        case Expr::Kind::Proj1:
        case Expr::Kind::Proj2:
        case Expr::Kind::Not:
        case Expr::Kind::Test: return a.x == b.x;
        case Expr::Kind::Bin: return a.op == b.op && a.x == b.x && a.y == b.y;
    }
    return false;
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Stmt::Kind::Skip: return true;
        case Stmt::Kind::Seq:
        case Stmt::Kind::WithDo: return stmt_equal(a->a, b->a) && stmt_equal(a->b, b->b);
        case Stmt::Kind::If: return a->x == b->x && stmt_equal(a->a, b->a);
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind: return a->x == b->x && expr_equal(a->e, b->e);
        case Stmt::Kind::Had: return a->x == b->x;
        case Stmt::Kind::Swap:
        case Stmt::Kind::MemSwap: return a->x == b->x && a->y == b->y;
    }
    return false;
}

// ---- sequences -------------------------------------------------------------

StmtPtr seq_of(const std::vector<StmtPtr>& items) {
    StmtPtr acc;
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
        if ((*it)->kind == Stmt::Kind::Skip) continue;
        acc = acc ? Stmt::seq(*it, acc) : *it;
    }
    return acc ? acc : Stmt::skip();
}

static void collect_items(const StmtPtr& s, std::vector<StmtPtr>& out) {
    if (s->kind == Stmt::Kind::Seq) {
        collect_items(s->a, out);
        collect_items(s->b, out);
    } else if (s->kind != Stmt::Kind::Skip) {
        out.push_back(s);
    }
}

std::vector<StmtPtr> seq_items(const StmtPtr& s) {
    std::vector<StmtPtr> out;
    collect_items(s, out);
    return out;
}

// ---- reversal --------------------------------------------------------------

StmtPtr reverse_stmt(const StmtPtr& s) {
    switch (s->kind) {
        case Stmt::Kind::Skip:
        case Stmt::Kind::Had:
        case Stmt::Kind::Swap:
        case Stmt::Kind::MemSwap: return s;
        case Stmt::Kind::Seq: return Stmt::seq(reverse_stmt(s->b), reverse_stmt(s->a));
        case Stmt::Kind::If: return Stmt::if_(s->x, reverse_stmt(s->a), s->span);
        case Stmt::Kind::Bind: return Stmt::unbind(s->x, s->e, s->span);
        case Stmt::Kind::Unbind: return Stmt::bind(s->x, s->e, s->span);
        case Stmt::Kind::WithDo: return Stmt::with_do(s->a, reverse_stmt(s->b), s->span);
    }
    throw InternalError("reverse_stmt: bad kind");
}

// ---- modified variables ----------------------------------------------------

static void modified_into(const StmtPtr& s, std::set<std::string>& out) {
    switch (s->kind) {
        case Stmt::Kind::Skip: return;
        case Stmt::Kind::Seq:
            modified_into(s->a, out);
            modified_into(s->b, out);
            return;
        case Stmt::Kind::If: modified_into(s->a, out); return;
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind:
        case Stmt::Kind::Had: out.insert(s->x); return;
        case Stmt::Kind::Swap:
            out.insert(s->x);
            out.insert(s->y);
            return;
        case Stmt::Kind::MemSwap: out.insert(s->y); return; // the pointer is only read
        case Stmt::Kind::WithDo:
            modified_into(s->a, out);
            modified_into(s->b, out);
            return;
    }
}

std::set<std::string> modified_vars(const StmtPtr& s) {
    std::set<std::string> out;
    modified_into(s, out);
    return out;
}

std::set<std::string> expr_vars(const Expr& e) {
    std::set<std::string> out;
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
    return out;
}

static void touched_into(const StmtPtr& s, std::set<std::string>& out) {
    switch (s->kind) {
        case Stmt::Kind::Skip: return;
        case Stmt::Kind::Seq:
        case Stmt::Kind::WithDo:
            touched_into(s->a, out);
            touched_into(s->b, out);
            return;
        case Stmt::Kind::If:
            out.insert(s->x);
            touched_into(s->a, out);
            return;
        case Stmt::Kind::Bind:
        case Stmt::Kind::Unbind: {
            out.insert(s->x);
            for (const auto& v : expr_vars(s->e)) out.insert(v);
            return;
        }
        case Stmt::Kind::Had: out.insert(s->x); return;
        case Stmt::Kind::Swap:
        case Stmt::Kind::MemSwap:
            out.insert(s->x);
            out.insert(s->y);
            return;
    }
}

std::set<std::string> touched_vars(const StmtPtr& s) {
    std::set<std::string> out;
    touched_into(s, out);
    return out;
}

// ---- with-do expansion -----------------------------------------------------

StmtPtr expand_with(const StmtPtr& s) {
    switch (s->kind) {
        case Stmt::Kind::Seq: return Stmt::seq(expand_with(s->a), expand_with(s->b));
        case Stmt::Kind::If: return Stmt::if_(s->x, expand_with(s->a), s->span);
        case Stmt::Kind::WithDo: {
            StmtPtr a = expand_with(s->a);
            StmtPtr b = expand_with(s->b);
            return Stmt::seq(a, Stmt::seq(b, reverse_stmt(a)));
        }
        default: return s;
    }
}

// ---- printing --------------------------------------------------------------

std::string value_str(const Value& v) {
    switch (v.kind) {
        case Value::Kind::Var: return v.x;
        case Value::Kind::Unit: return "()";
        case Value::Kind::Pair: return "(" + v.x + ", " + v.x2 + ")";
        case Value::Kind::Number: return std::to_string(v.n);
        case Value::Kind::True: return "true";
        case Value::Kind::False: return "false";
        case Value::Kind::Null: return "null<" + type_str(v.type) + ">";
        case Value::Kind::Addr: return "addr<" + type_str(v.type) + ">(" + std::to_string(v.n) + ")";
        case Value::Kind::Default: return "default<" + type_str(v.type) + ">";
    }
    return "<?>";
}

static const char* binop_str(BinOp op) {
    switch (op) {
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Eq: return "==";
        case BinOp::Neq: return "!=";
        case BinOp::Lt: return "<";
    }
    return "?";
}

std::string expr_str(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Val: return value_str(e.val);
        case Expr::Kind::Proj1: return e.x + ".1";
        case Expr::Kind::Proj2: return e.x + ".2";
        case Expr::Kind::Not: return "not " + e.x;
        case Expr::Kind::Test: return "test " + e.x;
        case Expr::Kind::Bin: return e.x + " " + binop_str(e.op) + " " + e.y;
    }
    return "<?>";
}

static void print_stmt(const StmtPtr& s, int indent, std::ostringstream& out) {
    auto pad = [&] { for (int i = 0; i < indent; i++) out << "  "; };
    switch (s->kind) {
        case Stmt::Kind::Skip:
            pad();
            out << "skip\n";
            return;
        case Stmt::Kind::Seq:
            print_stmt(s->a, indent, out);
            print_stmt(s->b, indent, out);
            return;
        case Stmt::Kind::If:
            pad();
            out << "if " << s->x << " {\n";
            print_stmt(s->a, indent + 1, out);
            pad();
            out << "}\n";
            return;
        case Stmt::Kind::Bind:
            pad();
            out << "let " << s->x << " <- " << expr_str(s->e) << "\n";
            return;
        case Stmt::Kind::Unbind:
            pad();
            out << "let " << s->x << " -> " << expr_str(s->e) << "\n";
            return;
        case Stmt::Kind::Had:
            pad();
            out << "had " << s->x << "\n";
            return;
        case Stmt::Kind::Swap:
            pad();
            out << s->x << " <-> " << s->y << "\n";
            return;
        case Stmt::Kind::MemSwap:
            pad();
            out << "*" << s->x << " <-> " << s->y << "\n";
            return;
        case Stmt::Kind::WithDo:
            pad();
            out << "with {\n";
            print_stmt(s->a, indent + 1, out);
            pad();
            out << "} do {\n";
            print_stmt(s->b, indent + 1, out);
            pad();
            out << "}\n";
            return;
    }
}

std::string stmt_str(const StmtPtr& s) {
    std::ostringstream out;
    print_stmt(s, 0, out);
    return out.str();
}

uint64_t literal_bits(const Value& v, uint32_t word_width) {
    uint64_t mask = word_width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << word_width) - 1);
    switch (v.kind) {
        case Value::Kind::Unit:
        case Value::Kind::Null:
        case Value::Kind::False:
        case Value::Kind::Default: return 0;
        case Value::Kind::True: return 1;
        case Value::Kind::Number:
        case Value::Kind::Addr: return v.n & mask;
        case Value::Kind::Var:
        case Value::Kind::Pair:
            throw InternalError("literal_bits called on a non-literal value");
    }
    return 0;
}

} // namespace twr
