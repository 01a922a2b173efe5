#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hadiff/arrangement.hpp"
#include "hadiff/monomial.hpp"
#include "hadiff/polynomial.hpp"

namespace hadiff {

// Homogeneous differential operator of a fixed order m: a finite sum
// sum_alpha f_alpha(x) d^alpha with |alpha| = m. The zero operator of any
// order has an empty coefficient map.
class DiffOp {
  public:
    using CoeffMap = std::map<Monomial, Polynomial, GrevlexLess>;

    DiffOp() : nvars_(0), order_(0) {}
    DiffOp(int nvars, int order) : nvars_(nvars), order_(order) {}

    static DiffOp zero(int nvars, int order) { return DiffOp(nvars, order); }

    // A single term f * d^alpha.
    static DiffOp term(const Monomial& alpha, const Polynomial& f) {
        DiffOp op(f.nvars(), total_degree(alpha));
        op.add_term(alpha, f);
        return op;
    }

    // Constant-coefficient operator from a polynomial in the dual variables
    // (each monomial in "d" becomes a d^alpha term). Must be homogeneous.
    static DiffOp from_dual_poly(const Polynomial& dual) {
        if (!dual.is_homogeneous())
            throw std::invalid_argument("dual polynomial must be homogeneous");
        DiffOp op(dual.nvars(), dual.is_zero() ? 0 : dual.degree());
        for (const auto& [m, c] : dual.terms())
            op.add_term(m, Polynomial::constant(dual.nvars(), c));
        return op;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    bool is_zero() const { return coeffs_.empty(); }
    const CoeffMap& coeffs() const { return coeffs_; }

    void add_term(const Monomial& alpha, const Polynomial& f) {
        if (static_cast<int>(alpha.size()) != nvars_ || total_degree(alpha) != order_)
            throw std::invalid_argument("diffop term has wrong derivative order");
        if (f.is_zero()) return;
        auto it = coeffs_.find(alpha);
        if (it == coeffs_.end()) {
            coeffs_.emplace(alpha, f);
        } else {
            it->second += f;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    Polynomial coeff(const Monomial& alpha) const {
        auto it = coeffs_.find(alpha);
        return it == coeffs_.end() ? Polynomial::zero(nvars_) : it->second;
    }

    DiffOp operator-() const {
        DiffOp r(nvars_, order_);
        for (const auto& [a, f] : coeffs_) r.coeffs_.emplace(a, -f);
        return r;
    }

    DiffOp& operator+=(const DiffOp& o) {
        check_compatible(o);
        for (const auto& [a, f] : o.coeffs_) add_term(a, f);
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) {
        check_compatible(o);
        for (const auto& [a, f] : o.coeffs_) add_term(a, -f);
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }

    friend DiffOp operator*(const Polynomial& g, const DiffOp& op) {
        DiffOp r(op.nvars_, op.order_);
        if (g.is_zero()) return r;
        for (const auto& [a, f] : op.coeffs_) {
            Polynomial p = g * f;
            if (!p.is_zero()) r.coeffs_.emplace(a, std::move(p));
        }
        return r;
    }

    friend DiffOp operator*(const Rat& c, const DiffOp& op) {
        DiffOp r(op.nvars_, op.order_);
        if (hadiff::is_zero(c)) return r;
        for (const auto& [a, f] : op.coeffs_) r.coeffs_.emplace(a, c * f);
        return r;
    }

    bool operator==(const DiffOp& o) const {
        return nvars_ == o.nvars_ && order_ == o.order_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    // theta * f
    Polynomial apply(const Polynomial& f) const {
        Polynomial r(nvars_);
        for (const auto& [a, g] : coeffs_) r += g * f.partial(a);
        return r;
    }

    // Common total degree of the coefficients; nullopt when mixed.
    std::optional<int> pdeg() const {
        std::optional<int> d;
        for (const auto& [a, f] : coeffs_) {
            if (!f.is_homogeneous()) return std::nullopt;
            if (!d) d = f.degree();
            else if (*d != f.degree()) return std::nullopt;
        }
        return d.value_or(0);
    }

    // [x_i, -]: drops the order by one. S-linear in the coefficients.
    DiffOp adx(int i) const {
        DiffOp r(nvars_, order_ > 0 ? order_ - 1 : 0);
        if (order_ == 0) return r;
        for (const auto& [a, f] : coeffs_) {
            if (a[i] == 0) continue;
            Monomial b(a);
            b[i] -= 1;
            r.add_term(b, Rat(-a[i]) * f);
        }
        return r;
    }

    // (ad x)^beta, applied per variable; zero operator when |beta| > order.
    DiffOp adx_pow(const Monomial& beta) const {
        DiffOp r(*this);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < beta[i]; ++k) r = r.adx(i);
        return r;
    }

    // Coefficient polynomials in a fixed order-m monomial enumeration.
    std::vector<Polynomial> coefficient_column(const std::vector<Monomial>& alphas) const {
        std::vector<Polynomial> col;
        col.reserve(alphas.size());
        for (const auto& a : alphas) col.push_back(coeff(a));
        return col;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << "(" << it->second.str(names) << ")";
            for (int i = 0; i < nvars_; ++i) {
                if (it->first[i] == 0) continue;
                os << "*d" << (i + 1);
                if (it->first[i] > 1) os << "^" << it->first[i];
            }
        }
        return os.str();
    }

  private:
    void check_compatible(const DiffOp& o) const {
        if (nvars_ != o.nvars_ || order_ != o.order_)
            throw std::invalid_argument("diffop order/arity mismatch");
    }

    int nvars_;
    int order_;
    CoeffMap coeffs_;
};

inline Polynomial apply(const DiffOp& theta, const Polynomial& f) {
    return theta.apply(f);
}

// delta_H as a constant-coefficient order-1 operator.
inline DiffOp delta_op(const Arrangement& arr, const SubsetH& h) {
    return DiffOp::from_dual_poly(Polynomial::linear_form(delta_H(arr, h)));
}

// delta_{H_1} ... delta_{H_k} expanded to the d^alpha basis (constant
// coefficients commute, so this is plain multiplication of dual forms).
inline DiffOp delta_product(const Arrangement& arr, const std::vector<SubsetH>& hs) {
    Polynomial dual = Polynomial::constant(arr.n(), Rat(1));
    for (const auto& h : hs) dual = dual * Polynomial::linear_form(delta_H(arr, h));
    return DiffOp::from_dual_poly(dual);
}

inline DiffOp delta_power(const Arrangement& arr, const SubsetH& h, int m) {
    return delta_product(arr, std::vector<SubsetH>(m, h));
}

// The Euler operator of order m: sum_{|alpha|=m} (m!/alpha!) x^alpha d^alpha.
inline DiffOp euler(int nvars, int m) {
    if (m < 1) throw std::invalid_argument("euler operator needs m >= 1");
    DiffOp op(nvars, m);
    const Int mfact = factorial(m);
    for (const auto& a : monomials_of_degree(nvars, m)) {
        Rat c(mfact / mono_factorial(a));
        op.add_term(a, Polynomial::monomial(nvars, a, c));
    }
    return op;
}

// Membership in D^(m)(<Q>) for a homogeneous operator of order m: Q divides
// theta * (x^beta Q) for every |beta| <= m-1. When the linear factors of Q
// are supplied, divisibility is tested factor by factor.
inline bool in_DmA(const DiffOp& theta, const Polynomial& q,
                   const std::vector<Polynomial>* factors = nullptr) {
    if (q.is_zero()) throw std::domain_error("membership test against the zero ideal");
    const int m = theta.order();
    for (const auto& beta : monomials_up_to_degree(theta.nvars(), std::max(0, m - 1))) {
        const Polynomial xbq = Polynomial::monomial(theta.nvars(), beta, Rat(1)) * q;
        const Polynomial im = theta.apply(xbq);
        if (im.is_zero()) continue;
        if (factors) {
            if (!exact_divide_by_forms(im, *factors)) return false;
        } else if (!exact_divide(im, q)) {
            return false;
        }
    }
    return true;
}

inline bool in_DmA(const DiffOp& theta, const Arrangement& arr) {
    std::vector<Polynomial> factors;
    factors.reserve(arr.r());
    for (int i = 0; i < arr.r(); ++i) factors.push_back(arr.form_poly(i));
    return in_DmA(theta, defining_poly(arr), &factors);
}

// gamma_k: theta |-> theta - (theta*Q)/Q * eps_k / (r(r-1)...(r-k+1)).
// Sends Xi^(k) into D^(k)(A)' = { theta : theta * Q = 0 }.
inline DiffOp gamma_k(const DiffOp& theta, const Arrangement& arr) {
    const int k = theta.order();
    if (k > arr.r()) throw std::invalid_argument("gamma_k needs k <= r");
    const Polynomial q = defining_poly(arr);
    const Polynomial tq = theta.apply(q);
    if (tq.is_zero()) return theta;
    auto h = exact_divide(tq, q);
    if (!h) throw std::domain_error("gamma_k: theta * Q is not divisible by Q");
    Rat falling(1);
    for (int i = 0; i < k; ++i) falling *= Rat(arr.r() - i);
    return theta - (Rat(1) / falling) * (*h * euler(arr.n(), k));
}

// Inverse of gamma_k: theta |-> theta - theta*(p_1...p_k)/(p_1...p_k) * eps_k/k!.
inline DiffOp gamma_k_inverse(const DiffOp& theta, const Arrangement& arr) {
    const int k = theta.order();
    Polynomial pi = Polynomial::constant(arr.n(), Rat(1));
    for (int i = 0; i < k; ++i) pi = pi * arr.form_poly(i);
    const Polynomial tp = theta.apply(pi);
    if (tp.is_zero()) return theta;
    auto h = exact_divide(tp, pi);
    if (!h) throw std::domain_error("gamma_k_inverse: action not divisible by p_1...p_k");
    return theta - (Rat(1) / Rat(factorial(k))) * (*h * euler(arr.n(), k));
}

// Holm generator P_{H_1,...,H_k} delta_{H_1} ... delta_{H_k}.
inline DiffOp holm_generator(const Arrangement& arr, const std::vector<SubsetH>& hs) {
    return pH_product(arr, hs) * delta_product(arr, hs);
}

}  // namespace hadiff
