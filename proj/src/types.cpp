#include "twr/types.hpp"

#include <set>
#include <utility>

namespace twr {

namespace {

// Structural equality, coinductive over cycles introduced by recursive named
// types: a pair of nodes already under comparison is assumed equal.
bool equal_rec(const TypePtr& a, const TypePtr& b,
               std::set<std::pair<const Type*, const Type*>>& seen) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Type::Kind::Unit:
        case Type::Kind::Uint:
        case Type::Kind::Bool: return true;
        case Type::Kind::Pair:
        case Type::Kind::Ptr: break;
    }
    auto key = std::make_pair(a.get(), b.get());
    if (!seen.insert(key).second) return true;
    if (a->kind == Type::Kind::Ptr) return equal_rec(a->fst, b->fst, seen);
    return equal_rec(a->fst, b->fst, seen) && equal_rec(a->snd, b->snd, seen);
}

} // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
    std::set<std::pair<const Type*, const Type*>> seen;
    return equal_rec(a, b, seen);
}

std::string type_str(const TypePtr& t) {
    if (!t) return "<none>";
    if (!t->name.empty()) return t->name;
    switch (t->kind) {
        case Type::Kind::Unit: return "()";
        case Type::Kind::Uint: return "uint";
        case Type::Kind::Bool: return "bool";
        case Type::Kind::Pair: return "(" + type_str(t->fst) + ", " + type_str(t->snd) + ")";
        case Type::Kind::Ptr: return "ptr<" + type_str(t->fst) + ">";
    }
    return "<?>";
}

uint32_t type_bits(const TypePtr& t, uint32_t word_width) {
    require(t != nullptr, "type_bits on null type");
    switch (t->kind) {
        case Type::Kind::Unit: return 0;
        case Type::Kind::Uint: return word_width;
        case Type::Kind::Bool: return 1;
        case Type::Kind::Pair: return type_bits(t->fst, word_width) + type_bits(t->snd, word_width);
        case Type::Kind::Ptr: return word_width;
    }
    return 0;
}

} // namespace twr
