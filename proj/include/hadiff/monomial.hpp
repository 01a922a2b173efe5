#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hadiff/rational.hpp"

namespace hadiff {

// Exponent vector of a monomial x^a (or a derivative multi-index for d^a).
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

// Graded reverse lexicographic: higher total degree wins; on ties the
// monomial with the smaller exponent at the last differing position wins.
inline bool grevlex_less(const Monomial& a, const Monomial& b) {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

struct GrevlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return grevlex_less(a, b);
    }
};

inline Monomial unit_monomial(int n, int i) {
    Monomial m(n, 0);
    m[i] = 1;
    return m;
}

inline Monomial mono_add(const Monomial& a, const Monomial& b) {
    Monomial c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
    // a | b, i.e. a <= b componentwise
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial mono_sub(const Monomial& a, const Monomial& b) {
    Monomial c(a);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] -= b[i];
        if (c[i] < 0) throw std::domain_error("monomial subtraction went negative");
    }
    return c;
}

inline Int mono_factorial(const Monomial& a) {
    Int f(1);
    for (int e : a) f *= factorial(e);
    return f;
}

// prod_i binom(b_i, g_i)
inline Int mono_binomial(const Monomial& b, const Monomial& g) {
    Int r(1);
    for (std::size_t i = 0; i < b.size(); ++i) r *= binomial(b[i], g[i]);
    return r;
}

// All monomials of total degree exactly d in nvars variables,
// listed in descending grevlex order (x1^d first, xn^d last).
inline std::vector<Monomial> monomials_of_degree(int nvars, int d) {
    std::vector<Monomial> out;
    Monomial cur(nvars, 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == nvars - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[pos] = e;
            self(self, pos + 1, rem - e);
        }
        cur[pos] = 0;
    };
    if (d < 0) return out;
    rec(rec, 0, d);
    std::sort(out.begin(), out.end(),
              [](const Monomial& a, const Monomial& b) { return grevlex_less(b, a); });
    return out;
}

// All monomials of total degree <= d, ascending by degree, grevlex-descending
// within each degree.
inline std::vector<Monomial> monomials_up_to_degree(int nvars, int d) {
    std::vector<Monomial> out;
    for (int k = 0; k <= d; ++k) {
        auto level = monomials_of_degree(nvars, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

inline long count_monomials_of_degree(int nvars, int d) {
    if (d < 0) return 0;
    return binomial(d + nvars - 1, nvars - 1).get_si();
}

}  // namespace hadiff
