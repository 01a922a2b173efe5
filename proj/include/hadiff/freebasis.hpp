#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hadiff/arrangement.hpp"
#include "hadiff/saito.hpp"
#include "hadiff/weyl.hpp"

namespace hadiff {

enum class FreenessCase { Free_n2, Free_eq, Free_gt, NonFree };

inline const char* freeness_case_name(FreenessCase c) {
    switch (c) {
        case FreenessCase::Free_n2: return "free_n2";
        case FreenessCase::Free_eq: return "free_eq";
        case FreenessCase::Free_gt: return "free_gt";
        default: return "nonfree";
    }
}

inline FreenessCase classify(int n, int r, int m) {
    if (n < 2 || r < n || m < 1) throw std::invalid_argument("classify needs r >= n >= 2, m >= 1");
    if (n == 2) return FreenessCase::Free_n2;
    if (m == r - n + 1) return FreenessCase::Free_eq;
    if (m > r - n + 1) return FreenessCase::Free_gt;
    return FreenessCase::NonFree;
}

struct BasisResult {
    FreenessCase kind;
    std::vector<DiffOp> ops;
    // Forms appended by the generic extension (Free_gt only).
    std::vector<std::vector<Rat>> extension_forms;
};

// n = 2: every central arrangement is generic and D^(m) is free.
//   m <= r-2 : { eps_m, P_1 d_1^m, ..., P_m d_m^m }
//   m = r-1  : { P_i d_i^m : i = 1..r }
//   m >= r   : { P_i d_i^m } plus Q eta_j, where the eta complete
//              { d_i^m } to a basis of the order-m constant operators.
inline BasisResult basis_n2(const Arrangement& arr, int m) {
    if (arr.n() != 2) throw std::invalid_argument("basis_n2 needs n = 2");
    const int r = arr.r();
    BasisResult res;
    res.kind = FreenessCase::Free_n2;
    auto p_delta = [&](int i) {
        return pH(arr, {i}) * delta_power(arr, {i}, m);
    };
    if (m <= r - 2) {
        res.ops.push_back(euler(2, m));
        for (int i = 0; i < m; ++i) res.ops.push_back(p_delta(i));
        return res;
    }
    for (int i = 0; i < r; ++i) res.ops.push_back(p_delta(i));
    if (m == r - 1) return res;
    // Completion: eta vectors span the orthogonal complement of the row
    // space of the d_i^m coefficient matrix, normalized as in the kernel
    // routine. Any completion is admissible; this one is reproducible.
    const auto alphas = monomials_of_degree(2, m);
    QMatrix rows(r, static_cast<int>(alphas.size()));
    for (int i = 0; i < r; ++i) {
        const DiffOp dm = delta_power(arr, {i}, m);
        for (std::size_t j = 0; j < alphas.size(); ++j)
            rows.at(i, static_cast<int>(j)) = dm.coeff(alphas[j]).coeff(Monomial(2, 0));
    }
    const Polynomial q = defining_poly(arr);
    for (const auto& eta : rows.nullspace()) {
        Polynomial dual(2);
        for (std::size_t j = 0; j < alphas.size(); ++j) dual.add_term(alphas[j], eta[j]);
        res.ops.push_back(q * DiffOp::from_dual_poly(dual));
    }
    return res;
}

// m = r-n+1: basis { P_H d_H^m : H in A^(n-1) }.
inline BasisResult basis_eq(const Arrangement& arr, int m) {
    if (m != arr.r() - arr.n() + 1) throw std::invalid_argument("basis_eq needs m = r-n+1");
    BasisResult res;
    res.kind = FreenessCase::Free_eq;
    for (const auto& h : k_subsets(arr.r(), arr.n() - 1))
        res.ops.push_back(pH(arr, h) * delta_power(arr, h, m));
    return res;
}

// m > r-n+1: extend to n+m-1 hyperplanes, then { P'_H d_H^m } over the
// (n-1)-subsets of the extension, with P'_H the product of the *original*
// forms outside H.
inline BasisResult basis_gt(const Arrangement& arr, int m, std::uint64_t seed) {
    if (m < arr.r() - arr.n() + 1) throw std::invalid_argument("basis_gt needs m >= r-n+1");
    const int r = arr.r();
    const int target = arr.n() + m - 1;
    const Arrangement ext = generic_extension(arr, target, seed);
    BasisResult res;
    res.kind = FreenessCase::Free_gt;
    for (int i = r; i < ext.r(); ++i) res.extension_forms.push_back(ext.form(i));
    for (const auto& h : k_subsets(ext.r(), ext.n() - 1)) {
        Polynomial p = Polynomial::constant(arr.n(), Rat(1));
        std::size_t cursor = 0;
        for (int i = 0; i < r; ++i) {
            while (cursor < h.size() && h[cursor] < i) ++cursor;
            if (cursor < h.size() && h[cursor] == i) continue;
            p = p * arr.form_poly(i);
        }
        res.ops.push_back(p * delta_power(ext, h, m));
    }
    return res;
}

// Case dispatcher used by the CLI and the grid runner.
inline BasisResult construct_basis(const Arrangement& arr, int m, std::uint64_t seed) {
    switch (classify(arr.n(), arr.r(), m)) {
        case FreenessCase::Free_n2: return basis_n2(arr, m);
        case FreenessCase::Free_eq: return basis_eq(arr, m);
        case FreenessCase::Free_gt: return basis_gt(arr, m, seed);
        default:
            throw std::domain_error("construct_basis: D^(m) is not free for this (n, r, m)");
    }
}

// Closed-form exponent multisets for the three free cases.
inline ExpMultiset expected_exponents(int n, int r, int m) {
    ExpMultiset e;
    switch (classify(n, r, m)) {
        case FreenessCase::Free_n2:
            if (m <= r - 2) {
                e[m] += 1;
                e[r - 1] += m;
            } else if (m == r - 1) {
                e[r - 1] += m + 1;
            } else {
                e[r - 1] += r;
                e[r] += m - r + 1;
            }
            return e;
        case FreenessCase::Free_eq:
            e[m] = binomial(r, n - 1).get_si();
            return e;
        case FreenessCase::Free_gt: {
            const int lo = r - n + 1;
            const int hi = std::min(r, m);
            for (int j = lo; j <= hi; ++j) {
                const Int mult = binomial(r, j) * binomial(m + n - r - 1, m - j);
                if (mult > 0) e[j] = mult.get_si();
            }
            return e;
        }
        default:
            throw std::domain_error("expected_exponents: not a free case");
    }
}

}  // namespace hadiff
