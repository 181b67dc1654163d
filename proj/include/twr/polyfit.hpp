#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twr {

// -------------------------------------------------------------------------
// Exact polynomial fitting over integer samples at consecutive arguments,
// via Newton forward differences. A degree-d fit exists exactly when the
// (d+1)-th differences all vanish within the sweep.
// -------------------------------------------------------------------------

struct PolyFit {
    bool exact = false; // false: no vanishing difference level inside the sweep
    int degree = -1;    // lowest exact degree; == #samples when !exact
    int64_t n0 = 0;
    std::vector<long long> diffs; // leading differences Δ^k f(n0), k = 0..degree

    // Exact value of the fitted polynomial at x (binomial-basis Newton form).
    long long eval(int64_t x) const;
    // Human-readable monomial rendering with rational coefficients.
    std::string str(const std::string& var = "n") const;
};

// Samples are f(n0), f(n0+1), ...; at least one sample.
PolyFit fit_polynomial(int64_t n0, const std::vector<long long>& samples);

// Convenience: lowest exact degree, or (int)samples.size() when none fits.
int exact_degree(const std::vector<long long>& samples);

// Exact bilinear interpolation f(k,n) = (a + b·k + c·n + d·k·n) / den over
// a full grid ks × ns; nullopt when the grid is not bilinear.
struct Bilinear {
    long long a = 0, b = 0, c = 0, d = 0, den = 1;
    long long eval_num(int64_t k, int64_t n) const; // f(k,n) · den
};
std::optional<Bilinear> fit_bilinear(const std::vector<int64_t>& ks,
                                     const std::vector<int64_t>& ns,
                                     const std::vector<std::vector<long long>>& samples);

} // namespace twr
