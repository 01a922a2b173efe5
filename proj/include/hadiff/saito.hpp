#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadiff/arrangement.hpp"
#include "hadiff/polymatrix.hpp"
#include "hadiff/weyl.hpp"

namespace hadiff {

// Multiset of polynomial degrees of a basis, degree -> multiplicity.
using ExpMultiset = std::map<int, long>;

struct SmTm {
    long s_m;
    long t_m;
};

inline SmTm sm_tm(int n, int m) {
    if (n < 2 || m < 1) throw std::invalid_argument("sm_tm needs n >= 2, m >= 1");
    return {binomial(n + m - 1, m).get_si(), binomial(n + m - 2, m - 1).get_si()};
}

// The s_m x s_m matrix with (i,j) entry theta_j * x^{alpha_i}/alpha_i!,
// rows running over the degree-m monomials in descending grevlex order.
inline PolyMatrix coefficient_matrix(const std::vector<DiffOp>& thetas) {
    if (thetas.empty()) throw std::invalid_argument("coefficient_matrix: no operators");
    const int n = thetas[0].nvars();
    const int m = thetas[0].order();
    const long s = sm_tm(n, m).s_m;
    if (static_cast<long>(thetas.size()) != s)
        throw std::invalid_argument("coefficient_matrix: expected s_m operators");
    for (const auto& th : thetas)
        if (th.order() != m || th.nvars() != n)
            throw std::invalid_argument("coefficient_matrix: mixed orders");
    const auto alphas = monomials_of_degree(n, m);
    PolyMatrix mm(static_cast<int>(s), static_cast<int>(s), n);
    for (long i = 0; i < s; ++i) {
        const Rat inv_fact = Rat(1) / Rat(mono_factorial(alphas[i]));
        const Polynomial xa = Polynomial::monomial(n, alphas[i], inv_fact);
        for (long j = 0; j < s; ++j)
            mm.at(static_cast<int>(i), static_cast<int>(j)) = thetas[j].apply(xa);
    }
    return mm;
}

struct SaitoResult {
    bool basis = false;
    Rat c = Rat(0);        // det M_m = c Q^{t_m}; 0 when not a basis
    long det_degree = -1;  // total degree of det (or -1 when det == 0)
    bool members_ok = true;
    int failed_member = -1;  // first operator failing the D^(m)(A) test
    std::string method;      // bareiss | interpolation | certificate | rejected
};

struct SaitoOptions {
    // auto policy: Bareiss below the first bound, interpolation while the
    // grid stays below max_interp_points, degree certificate beyond.
    int bareiss_limit = 15;
    long max_interp_points = 200000;
    std::string force_method;  // "", "bareiss", "interpolation", "certificate"
};

namespace detail {

inline std::vector<Rat> nonvanishing_point(const Polynomial& q, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 1024; ++attempt) {
        std::vector<Rat> pt(q.nvars());
        for (auto& c : pt) c = Rat(rng.uniform(1, 1000003));
        if (!is_zero(q.evaluate(pt))) return pt;
    }
    throw std::runtime_error("could not find a point off Q = 0");
}

}  // namespace detail

// Saito-Holm criterion. Membership in D^(m)(A) is checked first; a failing
// operator rejects the input (method = "rejected"). Otherwise det M_m is
// certified equal to c Q^{t_m}:
//   - bareiss / interpolation: the determinant is expanded symbolically and
//     divided exactly by the t_m * r linear factors of Q^{t_m};
//   - certificate: all operators lie in D^(m)(A), so Q^{t_m} | det M_m; the
//     determinant is homogeneous of degree sum(pdeg) by column homogeneity,
//     so once sum(pdeg) = r t_m the quotient is the constant
//     det(z)/Q(z)^{t_m} at any point z with Q(z) != 0. Both routes are exact.
inline SaitoResult saito_holm_check(const std::vector<DiffOp>& thetas, const Arrangement& arr,
                                    const SaitoOptions& opts = {}) {
    SaitoResult res;
    const int n = arr.n();
    const int m = thetas.empty() ? 1 : thetas[0].order();
    const auto st = sm_tm(n, m);
    const Polynomial q = defining_poly(arr);
    std::vector<Polynomial> factors;
    for (int i = 0; i < arr.r(); ++i) factors.push_back(arr.form_poly(i));

    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!in_DmA(thetas[i], q, &factors)) {
            res.members_ok = false;
            res.failed_member = static_cast<int>(i);
            res.method = "rejected";
            return res;
        }
    }

    std::vector<int> pdegs;
    bool all_pdeg = true;
    long pdeg_sum = 0;
    for (const auto& th : thetas) {
        auto d = th.pdeg();
        if (!d) {
            all_pdeg = false;
            break;
        }
        pdegs.push_back(*d);
        pdeg_sum += *d;
    }

    std::string method = opts.force_method;
    if (method.empty()) {
        if (static_cast<long>(thetas.size()) <= opts.bareiss_limit) {
            method = "bareiss";
        } else {
            // dehomogenized simplex grid size for the interpolation route
            const long degree = all_pdeg ? pdeg_sum : static_cast<long>(thetas.size()) * m;
            const Int points = binomial(degree + n - 1, n - 1);
            method = (points.fits_slong_p() && points.get_si() <= opts.max_interp_points)
                         ? "interpolation"
                         : "certificate";
        }
    }
    if (method == "certificate" && !all_pdeg) method = "interpolation";
    res.method = method;

    if (method == "certificate") {
        if (pdeg_sum != static_cast<long>(arr.r()) * st.t_m) {
            // det is either 0 or homogeneous of degree != r t_m; in both
            // cases it cannot be a nonzero constant times Q^{t_m}.
            res.basis = false;
            return res;
        }
        const auto mm = coefficient_matrix(thetas);
        const auto pt = detail::nonvanishing_point(q, 0x5ad0u);
        Rat qv(1);
        const Rat q_at = q.evaluate(pt);
        for (long k = 0; k < st.t_m; ++k) qv *= q_at;
        res.c = mm.evaluate(pt).det() / qv;
        res.c.canonicalize();
        res.basis = !is_zero(res.c);
        res.det_degree = res.basis ? pdeg_sum : -1;
        return res;
    }

    const auto mm = coefficient_matrix(thetas);
    const Polynomial det =
        (method == "bareiss") ? detail::polymat_det_bareiss(mm)
                              : detail::polymat_det_interpolate(mm);
    res.det_degree = det.degree();
    if (det.is_zero()) {
        res.basis = false;
        return res;
    }
    auto quot = exact_divide_by_forms(det, factors, static_cast<int>(st.t_m));
    if (quot && quot->is_constant() && !quot->is_zero()) {
        res.basis = true;
        res.c = quot->coeff(Monomial(n, 0));
    }
    return res;
}

// Degree-sum criterion (valid for operators already known S-independent):
// sum of pdeg equals r t_m.
inline bool degree_sum_check(const std::vector<DiffOp>& thetas, const Arrangement& arr) {
    if (thetas.empty()) return false;
    const auto st = sm_tm(arr.n(), thetas[0].order());
    long sum = 0;
    for (const auto& th : thetas) {
        auto d = th.pdeg();
        if (!d) throw std::invalid_argument("degree_sum_check: operator not pdeg-homogeneous");
        sum += *d;
    }
    return sum == static_cast<long>(arr.r()) * st.t_m;
}

inline ExpMultiset observed_exponents(const std::vector<DiffOp>& thetas) {
    ExpMultiset e;
    for (const auto& th : thetas) {
        auto d = th.pdeg();
        if (!d) throw std::invalid_argument("observed_exponents: operator not pdeg-homogeneous");
        ++e[*d];
    }
    return e;
}

// sum e_k = s_m and sum k e_k = r t_m.
inline bool exponents_satisfy_sums(const ExpMultiset& e, int n, int r, int m) {
    const auto st = sm_tm(n, m);
    long cnt = 0, wsum = 0;
    for (const auto& [k, mult] : e) {
        cnt += mult;
        wsum += static_cast<long>(k) * mult;
    }
    return cnt == st.s_m && wsum == static_cast<long>(r) * st.t_m;
}

}  // namespace hadiff
