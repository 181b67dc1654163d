#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace twr {

// Source location. line == 0 marks compiler-synthesized constructs
// (allocator prologue, desugaring temporaries) that have no source span.
struct Span {
    uint32_t line = 0;
    uint32_t col = 0;

    bool synthetic() const { return line == 0; }
    bool operator==(const Span&) const = default;
    std::string str() const {
        if (synthetic()) return "<internal>";
        return std::to_string(line) + ":" + std::to_string(col);
    }
};

// A diagnosable error in user input (parse error, type error, bad flag...).
// The CLI maps these to exit code 1.
struct CompileError : std::runtime_error {
    Span span;
    CompileError(Span s, const std::string& msg)
        : std::runtime_error(s.synthetic() ? msg : s.str() + ": " + msg), span(s) {}
    explicit CompileError(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant (a bug in this compiler, not in user input).
// The CLI maps these to exit code 2.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error("internal error: " + msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

} // namespace twr
