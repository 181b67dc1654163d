#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twr/core_ir.hpp"

namespace twr {

// Ordered typing context. Bindings append on the right; a name may appear
// several times, and the most recent binding shadows the earlier ones.
// Unbinding removes the most recent binding of the name.
class Context {
  public:
    void bind(const std::string& x, TypePtr t);
    // Removes the most recent binding of x. Throws CompileError if absent.
    void unbind(const std::string& x, Span sp);
    // Most recent binding, or nullopt.
    std::optional<TypePtr> lookup(const std::string& x) const;
    bool contains(const std::string& x) const { return lookup(x).has_value(); }

    // Domain as a name set (used for the if-rule's domain-preservation check).
    std::set<std::string> domain() const;

    const std::vector<std::pair<std::string, TypePtr>>& entries() const { return entries_; }
    bool operator==(const Context& o) const;

  private:
    std::vector<std::pair<std::string, TypePtr>> entries_;
};

// Word width / memory cell count the checker validates literals against.
struct CheckConfig {
    uint32_t word_width = 8;
    uint32_t cells = 16;
};

// Expression typing. Throws CompileError on ill-typed input.
TypePtr check_expr(const Context& ctx, const Expr& e, const CheckConfig& cfg, Span sp);

// Statement checking: returns the output context. Enforces, per construct:
// bind appends, unbind removes the most recent matching binding, if-guards
// are bools not modified by their body, if-bodies preserve the context
// domain, had needs a bool, memswap needs ptr<t> against t, and with-do
// checks as a; b; reverse(a).
Context check_stmt(const Context& ctx, const StmtPtr& s, const CheckConfig& cfg);

} // namespace twr
