#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twr/diag.hpp"

namespace twr {

enum class Tok {
    Ident, Number,
    KwFun, KwType, KwLet, KwIf, KwElse, KwWith, KwDo, KwHad, KwSkip, KwReturn,
    KwFree, KwNot, KwTest, KwTrue, KwFalse, KwNull, KwDefault, KwAlloc,
    KwPtr, KwUint, KwBool,
    BindArrow,   // <-
    UnbindArrow, // ->
    SwapArrow,   // <->
    EqEq, NotEq, AndAnd, OrOr, Less, Greater,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Semi, Colon, Star, Plus, Minus, Assign, Dot, Amp,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    uint64_t number = 0;
    Span span;
};

std::vector<Token> tokenize(const std::string& src);

} // namespace twr
