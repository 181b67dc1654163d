#include "twr/lexer.hpp"

#include <cctype>

namespace twr {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::map<std::string, Tok>& keywords() {
    static const std::map<std::string, Tok> kws = {
        {"fun", Tok::KwFun},       {"type", Tok::KwType},   {"let", Tok::KwLet},
        {"if", Tok::KwIf},         {"else", Tok::KwElse},   {"with", Tok::KwWith},
        {"do", Tok::KwDo},         {"had", Tok::KwHad},     {"skip", Tok::KwSkip},
        {"return", Tok::KwReturn}, {"free", Tok::KwFree},   {"not", Tok::KwNot},
        {"test", Tok::KwTest},     {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
        {"null", Tok::KwNull},     {"default", Tok::KwDefault}, {"alloc", Tok::KwAlloc},
        {"ptr", Tok::KwPtr},       {"uint", Tok::KwUint},   {"bool", Tok::KwBool},
    };
    return kws;
}

} // namespace

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    uint32_t line = 1, col = 1;
    size_t i = 0;
    const size_t n = src.size();

    auto peek = [&](size_t off = 0) -> char { return i + off < n ? src[i + off] : '\0'; };
    auto advance = [&]() {
        if (src[i] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
        i++;
    };
    auto push = [&](Tok kind, std::string text, Span sp) {
        out.push_back(Token{kind, std::move(text), 0, sp});
    };

    while (i < n) {
        char c = peek();
        Span sp{line, col};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < n && peek() != '\n') advance();
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            advance();
            advance();
            while (i < n && !(peek() == '*' && peek(1) == '/')) advance();
            if (i >= n) throw CompileError(sp, "unterminated block comment");
            advance();
            advance();
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (i < n && std::isdigit(static_cast<unsigned char>(peek()))) {
                text += peek();
                advance();
            }
            Token t{Tok::Number, text, 0, sp};
            t.number = std::stoull(text);
            out.push_back(t);
            continue;
        }
        if (ident_start(c)) {
            std::string text;
            while (i < n && ident_char(peek())) {
                text += peek();
                advance();
            }
            auto kw = keywords().find(text);
            if (kw != keywords().end()) {
                push(kw->second, text, sp);
            } else {
                if (text.size() >= 2 && text[0] == '_' && text[1] == '_')
                    throw CompileError(sp, "identifiers starting with '__' are reserved");
                push(Tok::Ident, text, sp);
            }
            continue;
        }
        // Multi-character operators, longest match first.
        auto try_op = [&](const char* text, Tok kind) -> bool {
            size_t len = std::string(text).size();
            for (size_t j = 0; j < len; j++)
                if (peek(j) != text[j]) return false;
            for (size_t j = 0; j < len; j++) advance();
            push(kind, text, sp);
            return true;
        };
        if (try_op("<->", Tok::SwapArrow)) continue;
        if (try_op("<-", Tok::BindArrow)) continue;
        if (try_op("->", Tok::UnbindArrow)) continue;
        if (try_op("==", Tok::EqEq)) continue;
        if (try_op("!=", Tok::NotEq)) continue;
        if (try_op("&&", Tok::AndAnd)) continue;
        if (try_op("||", Tok::OrOr)) continue;
        switch (c) {
            case '&': advance(); push(Tok::Amp, "&", sp); continue;
            case '<': advance(); push(Tok::Less, "<", sp); continue;
            case '>': advance(); push(Tok::Greater, ">", sp); continue;
            case '(': advance(); push(Tok::LParen, "(", sp); continue;
            case ')': advance(); push(Tok::RParen, ")", sp); continue;
            case '{': advance(); push(Tok::LBrace, "{", sp); continue;
            case '}': advance(); push(Tok::RBrace, "}", sp); continue;
            case '[': advance(); push(Tok::LBracket, "[", sp); continue;
            case ']': advance(); push(Tok::RBracket, "]", sp); continue;
            case ',': advance(); push(Tok::Comma, ",", sp); continue;
            case ';': advance(); push(Tok::Semi, ";", sp); continue;
            case ':': advance(); push(Tok::Colon, ":", sp); continue;
            case '*': advance(); push(Tok::Star, "*", sp); continue;
            case '+': advance(); push(Tok::Plus, "+", sp); continue;
            case '-': advance(); push(Tok::Minus, "-", sp); continue;
            case '=': advance(); push(Tok::Assign, "=", sp); continue;
            case '.': advance(); push(Tok::Dot, ".", sp); continue;
            default: throw CompileError(sp, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::End, "", 0, Span{line, col}});
    return out;
}

} // namespace twr
