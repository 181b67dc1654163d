#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "twr/diag.hpp"

namespace twr {

// Core types: () | uint | bool | (t1, t2) | ptr<t>.
// Immutable shared nodes; values compare structurally.
struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    enum class Kind { Unit, Uint, Bool, Pair, Ptr };
    Kind kind;
    TypePtr fst, snd; // Pair: both; Ptr: fst is the pointee

    // Display name for types introduced by a named definition. Ignored by
    // structural equality; used by the printer so that recursive types
    // (cyclic through ptr) render finitely.
    std::string name;

    static TypePtr unit();
    static TypePtr uint_();
    static TypePtr bool_();
    static TypePtr pair(TypePtr a, TypePtr b);
    static TypePtr ptr(TypePtr pointee);
};

inline TypePtr Type::unit() {
    static TypePtr t = std::make_shared<Type>(Type{Kind::Unit, nullptr, nullptr, {}});
    return t;
}
inline TypePtr Type::uint_() {
    static TypePtr t = std::make_shared<Type>(Type{Kind::Uint, nullptr, nullptr, {}});
    return t;
}
inline TypePtr Type::bool_() {
    static TypePtr t = std::make_shared<Type>(Type{Kind::Bool, nullptr, nullptr, {}});
    return t;
}
inline TypePtr Type::pair(TypePtr a, TypePtr b) {
    return std::make_shared<Type>(Type{Kind::Pair, std::move(a), std::move(b), {}});
}
inline TypePtr Type::ptr(TypePtr pointee) {
    return std::make_shared<Type>(Type{Kind::Ptr, std::move(pointee), nullptr, {}});
}

bool type_equal(const TypePtr& a, const TypePtr& b);
std::string type_str(const TypePtr& t);

// Bit width of a value of type t at word width k. Pointers and uints are one
// word; bool is a single bit; pairs concatenate.
uint32_t type_bits(const TypePtr& t, uint32_t word_width);

} // namespace twr
