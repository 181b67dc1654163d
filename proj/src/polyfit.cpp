#include "twr/polyfit.hpp"

#include "twr/diag.hpp"

#include <numeric>
#include <sstream>

namespace twr {

namespace {

using i128 = __int128;

long long to_ll(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw InternalError("polynomial value overflows 64 bits");
    return (long long)v;
}

// C(m, k) for any integer m, exact stepwise evaluation.
i128 binom(int64_t m, size_t k) {
    i128 r = 1;
    for (size_t j = 0; j < k; ++j) r = r * (m - (int64_t)j) / (i128)(j + 1);
    return r;
}

} // namespace

long long PolyFit::eval(int64_t x) const {
    i128 total = 0;
    for (size_t k = 0; k < diffs.size(); ++k) total += i128(diffs[k]) * binom(x - n0, k);
    return to_ll(total);
}

std::string PolyFit::str(const std::string& var) const {
    if (!exact) return "no exact fit within sweep (degree >= " + std::to_string(degree) + ")";
    // Convert Σ d_k·C(n−n0, k) to monomials in n over a common denominator.
    size_t deg = diffs.size();
    i128 den = 1;
    for (size_t k = 2; k < deg; ++k) den *= (i128)k; // lcm(0!..(deg−1)!) = (deg−1)!
    std::vector<i128> t_coef(deg, 0); // coefficients in t = n − n0, scaled by den
    for (size_t k = 0; k < deg; ++k) {
        // C(t, k)·den = den/k! · t(t−1)…(t−k+1)
        std::vector<i128> poly{1};
        for (size_t j = 0; j < k; ++j) {
            std::vector<i128> next(poly.size() + 1, 0);
            for (size_t m = 0; m < poly.size(); ++m) {
                next[m + 1] += poly[m];
                next[m] -= poly[m] * (i128)j;
            }
            poly = std::move(next);
        }
        i128 fact = 1;
        for (size_t j = 2; j <= k; ++j) fact *= (i128)j;
        for (size_t m = 0; m < poly.size(); ++m)
            t_coef[m] += i128(diffs[k]) * poly[m] * (den / fact);
    }
    // Shift t = n − n0.
    std::vector<i128> n_coef(deg, 0);
    for (size_t p = 0; p < deg; ++p) {
        i128 pw = 1;
        for (size_t m = p + 1; m-- > 0;) {
            n_coef[m] += t_coef[p] * binom((int64_t)p, p - m) * pw;
            pw *= i128(-n0);
        }
    }
    std::ostringstream os;
    bool first = true;
    for (size_t m = deg; m-- > 0;) {
        if (n_coef[m] == 0) continue;
        i128 num = n_coef[m], d = den;
        bool negative = num < 0;
        if (negative) num = -num;
        i128 a = num, b = d; // reduce num/d by their gcd
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        num /= a;
        d /= a;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        bool unit = num == 1 && d == 1 && m > 0;
        if (!unit) {
            os << (long long)num;
            if (d != 1) os << "/" << (long long)d;
        }
        if (m >= 1) os << var;
        if (m >= 2) os << "^" << m;
    }
    if (first) os << "0";
    return os.str();
}

PolyFit fit_polynomial(int64_t n0, const std::vector<long long>& samples) {
    if (samples.empty()) throw InternalError("polynomial fit over zero samples");
    PolyFit fit;
    fit.n0 = n0;
    std::vector<i128> row(samples.begin(), samples.end());
    std::vector<long long> leading;
    for (size_t level = 0; level < samples.size(); ++level) {
        bool all_zero = true;
        for (i128 v : row)
            if (v != 0) all_zero = false;
        if (all_zero) {
            fit.exact = true;
            fit.degree = level == 0 ? 0 : (int)level - 1;
            if (level == 0) leading.push_back(0);
            fit.diffs = std::move(leading);
            return fit;
        }
        leading.push_back(to_ll(row.front()));
        std::vector<i128> next(row.size() - 1);
        for (size_t i = 0; i + 1 < row.size(); ++i) next[i] = row[i + 1] - row[i];
        row = std::move(next);
    }
    // No difference level vanished inside the sweep.
    fit.exact = false;
    fit.degree = (int)samples.size();
    fit.diffs = std::move(leading);
    return fit;
}

int exact_degree(const std::vector<long long>& samples) {
    return fit_polynomial(0, samples).degree;
}

long long Bilinear::eval_num(int64_t k, int64_t n) const {
    return to_ll(i128(a) + i128(b) * k + i128(c) * n + i128(d) * k * n);
}

std::optional<Bilinear> fit_bilinear(const std::vector<int64_t>& ks,
                                     const std::vector<int64_t>& ns,
                                     const std::vector<std::vector<long long>>& samples) {
    if (ks.size() < 2 || ns.size() < 2 || samples.size() != ks.size()) return std::nullopt;
    for (const auto& rowv : samples)
        if (rowv.size() != ns.size()) return std::nullopt;

    int64_t k0 = ks[0], k1 = ks[1], n0 = ns[0], n1 = ns[1];
    i128 den = i128(k1 - k0) * (n1 - n0);
    if (den == 0) return std::nullopt;
    auto f = [&](size_t i, size_t j) { return i128(samples[i][j]); };

    i128 d_num = f(1, 1) - f(1, 0) - f(0, 1) + f(0, 0);
    i128 b_num = (f(1, 0) - f(0, 0)) * (n1 - n0) - d_num * n0;
    i128 c_num = (f(0, 1) - f(0, 0)) * (k1 - k0) - d_num * k0;
    i128 a_num = f(0, 0) * den - b_num * k0 - c_num * n0 - d_num * k0 * n0;

    for (size_t i = 0; i < ks.size(); ++i)
        for (size_t j = 0; j < ns.size(); ++j) {
            i128 want = f(i, j) * den;
            i128 got = a_num + b_num * ks[i] + c_num * ns[j] + d_num * ks[i] * ns[j];
            if (want != got) return std::nullopt;
        }

    // Normalize sign and reduce by the common gcd.
    if (den < 0) {
        den = -den;
        a_num = -a_num;
        b_num = -b_num;
        c_num = -c_num;
        d_num = -d_num;
    }
    auto g128 = [](i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    };
    i128 g = g128(g128(g128(a_num, b_num), g128(c_num, d_num)), den);
    if (g > 1) {
        a_num /= g;
        b_num /= g;
        c_num /= g;
        d_num /= g;
        den /= g;
    }
    Bilinear out;
    out.a = to_ll(a_num);
    out.b = to_ll(b_num);
    out.c = to_ll(c_num);
    out.d = to_ll(d_num);
    out.den = to_ll(den);
    return out;
}

} // namespace twr
