#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadiff/resolution.hpp"
#include "hadiff/weyl.hpp"

namespace hadiff {

// Element of the free module on { e_beta : |beta| <= m-1 }.
struct BetaVector {
    int nvars = 0;
    int m = 1;
    std::map<Monomial, Polynomial, GrevlexLess> comps;

    Polynomial comp(const Monomial& beta) const {
        auto it = comps.find(beta);
        return it == comps.end() ? Polynomial::zero(nvars) : it->second;
    }
};

// theta bullet Q: the vector with beta-component (-1)^{|beta|}
// ((ad x)^beta theta) * Q over |beta| <= m-1.
inline BetaVector bullet(const DiffOp& theta, const Polynomial& q, int m) {
    if (theta.order() < 1 || theta.order() > m)
        throw std::invalid_argument("bullet needs 1 <= order <= m");
    BetaVector v;
    v.nvars = theta.nvars();
    v.m = m;
    for (const auto& beta : monomials_up_to_degree(theta.nvars(), m - 1)) {
        const int sign = total_degree(beta) % 2 ? -1 : 1;
        Polynomial c = theta.adx_pow(beta).apply(q);
        if (sign < 0) c = -c;
        if (!c.is_zero()) v.comps.emplace(beta, std::move(c));
    }
    return v;
}

// Generators (1/alpha!) d^alpha bullet Q of J_m(A), over 1 <= |alpha| <= m.
inline std::vector<BetaVector> jm_generators(const Arrangement& arr, int m) {
    const Polynomial q = defining_poly(arr);
    std::vector<BetaVector> out;
    for (const auto& alpha : monomials_up_to_degree(arr.n(), m)) {
        if (total_degree(alpha) == 0) continue;
        const Rat c = Rat(1) / Rat(mono_factorial(alpha));
        out.push_back(bullet(DiffOp::term(alpha, Polynomial::constant(arr.n(), c)), q, m));
    }
    return out;
}

// Presentation matrix with multi-index row and column labels, written in the
// paper's (source row, target column) convention.
struct PresentationMatrix {
    std::vector<Monomial> row_index;
    std::vector<Monomial> col_index;
    PolyMatrix mat;
};

// Presentation of Coker(delta-bar_0) over S/SQ: rows are the generators
// (1/gamma!) d^gamma (1 <= |gamma| <= m), columns the e_beta (|beta| <= m-1);
// computed through the ad-x form of the bullet action.
inline PresentationMatrix coker_presentation(const Arrangement& arr, int m) {
    const int n = arr.n();
    const Polynomial q = defining_poly(arr);
    PresentationMatrix pm;
    for (const auto& g : monomials_up_to_degree(n, m))
        if (total_degree(g) >= 1) pm.row_index.push_back(g);
    pm.col_index = monomials_up_to_degree(n, m - 1);
    pm.mat = PolyMatrix(static_cast<int>(pm.row_index.size()),
                        static_cast<int>(pm.col_index.size()), n);
    for (std::size_t i = 0; i < pm.row_index.size(); ++i) {
        const Monomial& gamma = pm.row_index[i];
        const Rat c = Rat(1) / Rat(mono_factorial(gamma));
        const BetaVector bv =
            bullet(DiffOp::term(gamma, Polynomial::constant(n, c)), q, m);
        for (std::size_t j = 0; j < pm.col_index.size(); ++j)
            pm.mat.at(static_cast<int>(i), static_cast<int>(j)) = bv.comp(pm.col_index[j]);
    }
    return pm;
}

// Presentation of the jet module Omega^{[1,m]}(S/SQ): rows e_beta, columns
// (dx)^gamma; computed independently through the truncated Taylor expansion
// (dQ)(dx)^beta = sum_alpha (1/alpha!)(d^alpha * Q)(dx)^{alpha+beta}.
inline PresentationMatrix jet_presentation(const Arrangement& arr, int m) {
    const int n = arr.n();
    const Polynomial q = defining_poly(arr);
    PresentationMatrix pm;
    pm.row_index = monomials_up_to_degree(n, m - 1);
    for (const auto& g : monomials_up_to_degree(n, m))
        if (total_degree(g) >= 1) pm.col_index.push_back(g);
    std::map<Monomial, int, GrevlexLess> col_of;
    for (std::size_t j = 0; j < pm.col_index.size(); ++j)
        col_of.emplace(pm.col_index[j], static_cast<int>(j));
    pm.mat = PolyMatrix(static_cast<int>(pm.row_index.size()),
                        static_cast<int>(pm.col_index.size()), n);
    for (std::size_t i = 0; i < pm.row_index.size(); ++i) {
        const Monomial& beta = pm.row_index[i];
        for (const auto& alpha : monomials_up_to_degree(n, m)) {
            if (total_degree(alpha) == 0) continue;
            const Monomial gamma = mono_add(alpha, beta);
            if (total_degree(gamma) > m) continue;
            const Rat c = Rat(1) / Rat(mono_factorial(alpha));
            pm.mat.at(static_cast<int>(i), col_of.at(gamma)) += c * q.partial(alpha);
        }
    }
    return pm;
}

inline bool jet_transpose_equal(const PresentationMatrix& jet, const PresentationMatrix& coker) {
    if (jet.row_index != coker.col_index || jet.col_index != coker.row_index) return false;
    return jet.mat == coker.mat.transposed();
}

// Lemma 10.4 witness: Q e_0 = delta-bar_0(eps_1 / r), i.e. the e_0 component
// of (eps_1/r) bullet Q is Q and every other component is divisible by Q.
inline bool euler_hits_Qe0(const Arrangement& arr, int m) {
    const Polynomial q = defining_poly(arr);
    const DiffOp e1 = (Rat(1) / Rat(arr.r())) * euler(arr.n(), 1);
    const BetaVector bv = bullet(e1, q, m);
    if (bv.comp(Monomial(arr.n(), 0)) != q) return false;
    for (const auto& [beta, c] : bv.comps) {
        if (total_degree(beta) == 0) continue;
        if (!exact_divide(c, q)) return false;
    }
    return true;
}

// Lemma 10.5 witness for one operator: theta lies in Ker(delta-bar_0), i.e.
// theta * Q = 0 and all other bullet components are divisible by Q.
inline bool in_kernel_delta_bar0(const DiffOp& theta, const Polynomial& q, int m) {
    const BetaVector bv = bullet(theta, q, m);
    if (!bv.comp(Monomial(theta.nvars(), 0)).is_zero()) return false;
    for (const auto& [beta, c] : bv.comps) {
        if (total_degree(beta) == 0) continue;
        if (!exact_divide(c, q)) return false;
    }
    return true;
}

// The minimal free resolution of Coker(delta-bar_0) (complex (10.6)):
// 0 -> F~_{n-1} -> ... -> F~_1 -> F~_0 -> F~_{-1}, assembled from the
// per-order Xi^(k) resolutions with the gamma_k twist in degree one.
inline FreeComplex build_Jm_resolution(const Arrangement& arr, int m) {
    const int n = arr.n();
    const int r = arr.r();
    if (n < 3 || m >= r - n + 1)
        throw std::invalid_argument("build_Jm_resolution needs n >= 3 and m < r-n+1");
    const Polynomial q = defining_poly(arr);

    std::vector<FreeComplex> per_order;
    for (int k = 1; k <= m; ++k) per_order.push_back(build_F_resolution(arr, k));

    FreeComplex fc;
    fc.nvars = n;
    fc.augmentation_target =
        "Coker(delta-bar_0) = S^binom(n+m-1,m-1) / (J_m(A) + Q S^binom(n+m-1,m-1))";

    // F~_{-1}
    FreeModule fminus;
    const auto betas = monomials_up_to_degree(n, m - 1);
    for (const auto& b : betas)
        fminus.gens.push_back({-(r + total_degree(b)), "e_b" + mono_label(b)});
    fc.names.push_back("F~_{-1}");
    fc.modules.push_back(std::move(fminus));

    // F~_0 = D^[1,m](S) + e_beta (beta != 0) copies of S
    FreeModule f0;
    std::vector<Monomial> dalphas;
    for (int k = 1; k <= m; ++k)
        for (const auto& a : monomials_of_degree(n, k)) {
            dalphas.push_back(a);
            f0.gens.push_back({-k, "d" + mono_label(a) + "/a!"});
        }
    const int n_dalpha = static_cast<int>(dalphas.size());
    std::vector<Monomial> nonzero_betas;
    for (const auto& b : betas)
        if (total_degree(b) > 0) {
            nonzero_betas.push_back(b);
            f0.gens.push_back({-total_degree(b), "e_b" + mono_label(b)});
        }
    fc.names.push_back("F~_0");
    fc.modules.push_back(std::move(f0));

    // F~_j, j = 1..n-1 (F~_1 also carries the zeta block, see below)
    for (int j = 1; j <= n - 1; ++j) {
        FreeModule fj;
        for (int k = 1; k <= m; ++k) {
            const FreeModule& src = per_order[k - 1].modules[j - 1];
            for (const auto& g : src.gens)
                fj.gens.push_back({g.degree, "k=" + std::to_string(k) + " " + g.label});
        }
        if (j == 1)
            for (int k = 1; k <= m - 1; ++k)
                fj.gens.push_back({0, "zeta_" + std::to_string(k)});
        fc.names.push_back("F~_" + std::to_string(j));
        fc.modules.push_back(std::move(fj));
    }

    std::map<Monomial, int, GrevlexLess> beta_row;
    for (std::size_t i = 0; i < betas.size(); ++i) beta_row.emplace(betas[i], static_cast<int>(i));

    // delta~_0
    {
        PolyMatrix mat(static_cast<int>(betas.size()), fc.modules[1].rank(), n);
        for (int col = 0; col < n_dalpha; ++col) {
            const Monomial& a = dalphas[col];
            const Rat c = Rat(1) / Rat(mono_factorial(a));
            const BetaVector bv =
                bullet(DiffOp::term(a, Polynomial::constant(n, c)), q, m);
            for (const auto& [beta, val] : bv.comps) mat.at(beta_row.at(beta), col) = val;
        }
        for (std::size_t t = 0; t < nonzero_betas.size(); ++t)
            mat.at(beta_row.at(nonzero_betas[t]), n_dalpha + static_cast<int>(t)) = q;
        fc.maps.push_back(std::move(mat));
    }

    // delta~_1: per order k, per generator d_H^k e_H of F_1^(k):
    // (gamma_k(P_H d_H^k), -(1/Q) sum_{beta != 0} bullet components).
    //
    // For m >= 2 the kernel of delta-bar_0 is strictly larger than the
    // direct sum of the D^(k)(A)': it also contains the mixed Euler
    // elements zeta_k = eps_k/(r)_k - eps_{k+1}/(r)_{k+1} (k < m), whose
    // order components do not kill Q individually although the sum does.
    // An Euler-characteristic count shows the resolution cannot be exact
    // without them, so F~_1 carries an extra S(0)^{m-1} block whose columns
    // are the zeta_k together with their beta-components.
    {
        std::map<Monomial, int, GrevlexLess> dalpha_col;
        for (int t = 0; t < n_dalpha; ++t) dalpha_col.emplace(dalphas[t], t);
        std::map<Monomial, int, GrevlexLess> ebeta_col;
        for (std::size_t t = 0; t < nonzero_betas.size(); ++t)
            ebeta_col.emplace(nonzero_betas[t], n_dalpha + static_cast<int>(t));

        int total_cols = m - 1;
        for (int k = 1; k <= m; ++k) total_cols += per_order[k - 1].modules[0].rank();
        PolyMatrix mat(fc.modules[1].rank(), total_cols, n);
        int col = 0;
        auto fill_beta_rows = [&](const BetaVector& bv, int c) {
            if (!bv.comp(Monomial(n, 0)).is_zero())
                throw std::logic_error("Jm resolution: column does not kill Q");
            for (const auto& [beta, val] : bv.comps) {
                if (total_degree(beta) == 0) continue;
                auto quo = exact_divide(val, q);
                if (!quo)
                    throw std::logic_error("Jm resolution: bullet component not divisible by Q");
                mat.at(ebeta_col.at(beta), c) -= *quo;
            }
        };
        for (int k = 1; k <= m; ++k) {
            const XiGenerators gens = minimal_generators_Xi(arr, k);
            if (static_cast<int>(gens.ops.size()) != per_order[k - 1].modules[0].rank())
                throw std::logic_error("Jm resolution: F_1^(k) generator count mismatch");
            for (const auto& g0 : gens.ops) {
                const DiffOp g = gamma_k(g0, arr);
                for (const auto& [alpha, f] : g.coeffs())
                    mat.at(dalpha_col.at(alpha), col) = Rat(mono_factorial(alpha)) * f;
                fill_beta_rows(bullet(g, q, m), col);
                ++col;
            }
        }
        for (int k = 1; k <= m - 1; ++k) {
            Rat falling(1);
            for (int i = 0; i < k; ++i) falling *= Rat(r - i);
            const DiffOp lo = (Rat(1) / falling) * euler(n, k);
            falling *= Rat(r - k);
            const DiffOp hi = (Rat(1) / falling) * euler(n, k + 1);
            for (const auto& [alpha, f] : lo.coeffs())
                mat.at(dalpha_col.at(alpha), col) = Rat(mono_factorial(alpha)) * f;
            for (const auto& [alpha, f] : hi.coeffs())
                mat.at(dalpha_col.at(alpha), col) = Rat(-mono_factorial(alpha)) * f;
            BetaVector sum = bullet(lo, q, m);
            const BetaVector sub = bullet(hi, q, m);
            for (const auto& [beta, val] : sub.comps) {
                auto it = sum.comps.find(beta);
                if (it == sum.comps.end()) sum.comps.emplace(beta, -val);
                else {
                    it->second -= val;
                    if (it->second.is_zero()) sum.comps.erase(it);
                }
            }
            fill_beta_rows(sum, col);
            ++col;
        }
        fc.maps.push_back(std::move(mat));
    }

    // delta~_j = block diagonal of the d_j^(k), j >= 2.
    for (int j = 2; j <= n - 1; ++j) {
        PolyMatrix mat(fc.modules[j].rank(), fc.modules[j + 1].rank(), n);
        int row0 = 0, col0 = 0;
        for (int k = 1; k <= m; ++k) {
            const PolyMatrix& blk = per_order[k - 1].maps[j - 2];
            for (int i = 0; i < blk.rows(); ++i)
                for (int jj = 0; jj < blk.cols(); ++jj)
                    if (!blk.at(i, jj).is_zero()) mat.at(row0 + i, col0 + jj) = blk.at(i, jj);
            row0 += blk.rows();
            col0 += blk.cols();
        }
        fc.maps.push_back(std::move(mat));
    }
    return fc;
}

// Verification of the Coker(delta-bar_0) resolution against Thm 10.8 /
// Cors 10.9-10.10.
inline VerifyReport verify_Jm_resolution(const FreeComplex& fc, const Arrangement& arr, int m,
                                         const VerifyOptions& opts_in = {}) {
    const int n = arr.n();
    const int r = arr.r();
    VerifyOptions opts = opts_in;
    if (opts.degree_bound < 0) opts.degree_bound = r + m + n;

    std::vector<long> expected_ranks;
    std::vector<std::multiset<int>> expected_degrees;
    {
        // F~_{-1} = sum_{k=0}^{m-1} S(r+k)^{s_k}
        long rk = 0;
        std::multiset<int> degs;
        for (int k = 0; k <= m - 1; ++k) {
            const long sk = count_monomials_of_degree(n, k);
            rk += sk;
            for (long t = 0; t < sk; ++t) degs.insert(-(r + k));
        }
        expected_ranks.push_back(rk);
        expected_degrees.push_back(std::move(degs));
    }
    {
        // F~_0 = sum_{k=1}^m S(k)^{s_k} + sum_{k=1}^{m-1} S(k)^{s_k}
        long rk = 0;
        std::multiset<int> degs;
        for (int k = 1; k <= m; ++k) {
            const long sk = count_monomials_of_degree(n, k);
            rk += sk;
            for (long t = 0; t < sk; ++t) degs.insert(-k);
        }
        for (int k = 1; k <= m - 1; ++k) {
            const long sk = count_monomials_of_degree(n, k);
            rk += sk;
            for (long t = 0; t < sk; ++t) degs.insert(-k);
        }
        expected_ranks.push_back(rk);
        expected_degrees.push_back(std::move(degs));
    }
    for (int j = 1; j <= n - 1; ++j) {
        // F~_j = sum_k S(k+n-j-r)^{w_j^(k)}, plus S(0)^{m-1} at j = 1 for
        // the mixed Euler kernel elements.
        long rk = 0;
        std::multiset<int> degs;
        for (int k = 1; k <= m; ++k) {
            const long w = w_formula(n, r, k, j);
            rk += w;
            for (long t = 0; t < w; ++t) degs.insert(r - k - n + j);
        }
        if (j == 1) {
            rk += m - 1;
            for (int t = 0; t < m - 1; ++t) degs.insert(0);
        }
        expected_ranks.push_back(rk);
        expected_degrees.push_back(std::move(degs));
    }

    return verify_free_complex(fc, expected_ranks, expected_degrees,
                               /*reg*/ r - n - 2, /*pd*/ n, nullptr, opts);
}

}  // namespace hadiff
