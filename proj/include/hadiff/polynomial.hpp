#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hadiff/monomial.hpp"
#include "hadiff/rational.hpp"

namespace hadiff {

// Exact multivariate polynomial over Q. Terms are kept in a map ordered
// ascending by grevlex; serialization walks it in reverse so the leading
// term comes first. No zero coefficient is ever stored.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rat, GrevlexLess>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial zero(int nvars) { return Polynomial(nvars); }

    static Polynomial constant(int nvars, const Rat& c) {
        Polynomial p(nvars);
        if (!hadiff::is_zero(c)) p.terms_.emplace(Monomial(nvars, 0), c);
        return p;
    }

    static Polynomial monomial(int nvars, const Monomial& m, const Rat& c) {
        if (static_cast<int>(m.size()) != nvars)
            throw std::invalid_argument("monomial arity mismatch");
        Polynomial p(nvars);
        if (!hadiff::is_zero(c)) p.terms_.emplace(m, c);
        return p;
    }

    static Polynomial variable(int nvars, int i, const Rat& c = Rat(1)) {
        Monomial m(nvars, 0);
        m[i] = 1;
        return monomial(nvars, m, c);
    }

    // Linear form c . x from a coefficient vector.
    static Polynomial linear_form(const std::vector<Rat>& coeffs) {
        Polynomial p(static_cast<int>(coeffs.size()));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (!hadiff::is_zero(coeffs[i]))
                p.add_term(Polynomial::unit(coeffs.size(), i), coeffs[i]);
        }
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rat& c) {
        if (hadiff::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (hadiff::is_zero(it->second)) terms_.erase(it);
        }
    }

    Rat coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    int degree() const {  // -1 for the zero polynomial
        if (terms_.empty()) return -1;
        return total_degree(terms_.rbegin()->first);
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const int d = total_degree(terms_.begin()->first);
        for (const auto& [m, c] : terms_)
            if (total_degree(m) != d) return false;
        return true;
    }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    // Leading term under grevlex.
    const std::pair<const Monomial, Rat>& leading() const {
        if (terms_.empty()) throw std::domain_error("leading term of zero");
        return *terms_.rbegin();
    }

    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_arity(b);
        Polynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                r.add_term(mono_add(ma, mb), ca * cb);
            }
        }
        return r;
    }

    friend Polynomial operator*(const Rat& c, const Polynomial& p) {
        Polynomial r(p.nvars_);
        if (hadiff::is_zero(c)) return r;
        for (const auto& [m, q] : p.terms_) r.terms_.emplace(m, c * q);
        return r;
    }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // d^alpha * f, the derivative action.
    Polynomial partial(const Monomial& alpha) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (!mono_divides(alpha, m)) continue;
            Rat factor(c);
            Monomial t(m);
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                for (int k = 0; k < alpha[i]; ++k) factor *= Rat(t[i] - k);
                t[i] -= alpha[i];
            }
            r.add_term(t, factor);
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("evaluation point arity mismatch");
        // Powers are cached per variable; exponents stay small.
        std::vector<std::vector<Rat>> pow(nvars_);
        Rat acc(0);
        for (const auto& [m, c] : terms_) {
            Rat t(c);
            for (int i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                auto& pw = pow[i];
                if (pw.empty()) pw.push_back(Rat(1));
                while (static_cast<int>(pw.size()) <= m[i]) pw.push_back(pw.back() * point[i]);
                t *= pw[m[i]];
            }
            acc += t;
        }
        return acc;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Rat& c = it->second;
            if (!first) os << (sgn(c) < 0 ? " - " : " + ");
            else if (sgn(c) < 0) os << "-";
            first = false;
            Rat a = abs(c);
            bool has_var = total_degree(it->first) > 0;
            if (a != 1 || !has_var) {
                os << a.get_num().get_str();
                if (a.get_den() != 1) os << "/" << a.get_den().get_str();
                if (has_var) os << "*";
            }
            bool started = false;
            for (int i = 0; i < nvars_; ++i) {
                const int e = it->first[i];
                if (e == 0) continue;
                if (started) os << "*";
                started = true;
                if (static_cast<int>(names.size()) > i) os << names[i];
                else os << "x" << (i + 1);
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

  private:
    static Monomial unit(std::size_t n, std::size_t i) {
        Monomial m(n, 0);
        m[i] = 1;
        return m;
    }
    void check_arity(const Polynomial& o) const {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("polynomial variable count mismatch");
    }

    int nvars_;
    TermMap terms_;
};

// d^alpha * f as a free function, matching the action notation.
inline Polynomial partial_apply(const Monomial& alpha, const Polynomial& f) {
    return f.partial(alpha);
}

// Exact division: returns q with f = q*g, or nullopt when g does not divide
// f. Single-divisor reduction under grevlex; the first stuck leading term
// proves non-divisibility.
inline std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    if (f.nvars() != g.nvars())
        throw std::invalid_argument("polynomial variable count mismatch");
    Polynomial q(f.nvars());
    Polynomial rem(f);
    const auto& gl = g.leading();
    while (!rem.is_zero()) {
        const auto& rl = rem.leading();
        if (!mono_divides(gl.first, rl.first)) return std::nullopt;
        const Monomial m = mono_sub(rl.first, gl.first);
        const Rat c = rl.second / gl.second;
        q.add_term(m, c);
        rem -= Polynomial::monomial(f.nvars(), m, c) * g;
    }
    return q;
}

inline bool divides(const Polynomial& g, const Polynomial& f) {
    return exact_divide(f, g).has_value();
}

// Canonical remainder of single-divisor division under grevlex: no term of
// the result is divisible by the leading term of g. Linear in f, so it can
// express "g divides f" as linear conditions on the coefficients of f.
inline Polynomial division_remainder(const Polynomial& f, const Polynomial& g) {
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    Polynomial rem(f.nvars());
    Polynomial cur(f);
    const auto& gl = g.leading();
    while (!cur.is_zero()) {
        const auto lead = cur.leading();
        if (mono_divides(gl.first, lead.first)) {
            const Monomial m = mono_sub(lead.first, gl.first);
            const Rat c = lead.second / gl.second;
            cur -= Polynomial::monomial(f.nvars(), m, c) * g;
        } else {
            rem.add_term(lead.first, lead.second);
            cur -= Polynomial::monomial(f.nvars(), lead.first, lead.second);
        }
    }
    return rem;
}

// Quotient by a product of linear forms, factor by factor. Used for
// membership tests against Q^k where the factorization is known.
inline std::optional<Polynomial> exact_divide_by_forms(
    Polynomial f, const std::vector<Polynomial>& forms, int power = 1) {
    for (int k = 0; k < power; ++k) {
        for (const auto& ell : forms) {
            auto q = exact_divide(f, ell);
            if (!q) return std::nullopt;
            f = std::move(*q);
        }
    }
    return f;
}

}  // namespace hadiff
