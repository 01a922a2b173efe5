#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hadiff/polynomial.hpp"
#include "hadiff/qmatrix.hpp"
#include "hadiff/rational.hpp"

namespace hadiff {

// Subset of hyperplanes, stored as sorted 0-based indices.
using SubsetH = std::vector<int>;

struct GenericityViolation : std::runtime_error {
    explicit GenericityViolation(const std::string& what) : std::runtime_error(what) {}
};

// All k-subsets of {0,...,n-1} in lexicographic order.
inline std::vector<SubsetH> k_subsets(int n, int k) {
    std::vector<SubsetH> out;
    if (k < 0 || k > n) return out;
    SubsetH cur(k);
    auto rec = [&](auto&& self, int start, int pos) -> void {
        if (pos == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - pos); ++i) {
            cur[pos] = i;
            self(self, i + 1, pos + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

inline SubsetH subset_intersection(const SubsetH& a, const SubsetH& b) {
    SubsetH r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline bool subsets_intersect(const SubsetH& a, const SubsetH& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) return true;
        if (*ia < *ib) ++ia;
        else ++ib;
    }
    return false;
}

// Central arrangement of r linear forms in n variables. Forms are stored as
// primitive integer coefficient vectors; the sign is the caller's choice of
// defining form and is preserved.
class Arrangement {
  public:
    Arrangement(int n, std::vector<std::vector<Rat>> forms) : n_(n), forms_(std::move(forms)) {
        if (n_ < 2) throw std::invalid_argument("arrangement needs n >= 2");
        if (static_cast<int>(forms_.size()) < n_)
            throw std::invalid_argument("arrangement needs r >= n");
        for (auto& f : forms_) {
            if (static_cast<int>(f.size()) != n_)
                throw std::invalid_argument("form length != n");
            bool nonzero = false;
            for (const auto& c : f) nonzero = nonzero || !is_zero(c);
            if (!nonzero) throw std::invalid_argument("zero form in arrangement");
            normalize_form(f);
        }
    }

    int n() const { return n_; }
    int r() const { return static_cast<int>(forms_.size()); }
    const std::vector<std::vector<Rat>>& forms() const { return forms_; }
    const std::vector<Rat>& form(int i) const { return forms_.at(i); }

    Polynomial form_poly(int i) const { return Polynomial::linear_form(forms_.at(i)); }

  private:
    static void normalize_form(std::vector<Rat>& f) {
        // primitive integer vector, sign preserved
        int lead = 0;
        for (const auto& c : f)
            if (!is_zero(c)) {
                lead = sgn(c);
                break;
            }
        normalize_primitive(f);
        if (lead < 0)
            for (auto& c : f) c = -c;
    }

    int n_;
    std::vector<std::vector<Rat>> forms_;
};

// true, or a violating n-subset whose forms are linearly dependent.
inline std::variant<bool, SubsetH> check_generic(const Arrangement& arr) {
    const int n = arr.n();
    for (const auto& idx : k_subsets(arr.r(), n)) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = arr.form(idx[i])[j];
        if (is_zero(m.det())) return idx;
    }
    return true;
}

inline bool is_generic(const Arrangement& arr) {
    return std::holds_alternative<bool>(check_generic(arr));
}

// Q = product of all defining forms.
inline Polynomial defining_poly(const Arrangement& arr) {
    Polynomial q = Polynomial::constant(arr.n(), Rat(1));
    for (int i = 0; i < arr.r(); ++i) q = q * arr.form_poly(i);
    return q;
}

// The one-dimensional common kernel of the n-1 forms in H, as a primitive
// integer direction vector (the constant-coefficient derivation delta_H).
inline std::vector<Rat> delta_H(const Arrangement& arr, const SubsetH& h) {
    if (static_cast<int>(h.size()) != arr.n() - 1)
        throw std::invalid_argument("delta_H needs |H| = n-1");
    QMatrix m(arr.n() - 1, arr.n());
    for (int i = 0; i < arr.n() - 1; ++i)
        for (int j = 0; j < arr.n(); ++j) m.at(i, j) = arr.form(h[i])[j];
    auto ns = m.nullspace();
    if (ns.size() != 1)
        throw GenericityViolation("delta_H: kernel is not one-dimensional");
    return ns[0];
}

// P_{H_1,...,H_k} = product of p_H over H outside the intersection of the
// given subsets; P_H for a single subset.
inline Polynomial pH_product(const Arrangement& arr, const std::vector<SubsetH>& hs) {
    if (hs.empty()) throw std::invalid_argument("pH_product needs at least one subset");
    SubsetH inter = hs[0];
    for (std::size_t i = 1; i < hs.size(); ++i) inter = subset_intersection(inter, hs[i]);
    std::set<int> in(inter.begin(), inter.end());
    Polynomial p = Polynomial::constant(arr.n(), Rat(1));
    for (int i = 0; i < arr.r(); ++i)
        if (!in.count(i)) p = p * arr.form_poly(i);
    return p;
}

inline Polynomial pH(const Arrangement& arr, const SubsetH& h) {
    return pH_product(arr, {h});
}

// Extends arr to target_r forms, keeping it generic. Candidates are integer
// vectors from [-B, B]^n with B = 10, doubled after each rejection; the
// result is a deterministic function of (arr, target_r, seed).
inline Arrangement generic_extension(const Arrangement& arr, int target_r,
                                     std::uint64_t seed) {
    if (target_r < arr.r())
        throw std::invalid_argument("generic_extension cannot shrink an arrangement");
    std::vector<std::vector<Rat>> forms = arr.forms();
    const int n = arr.n();
    Rng rng(seed);
    long bound = 10;
    const int max_attempts = 4096;
    int attempts = 0;
    while (static_cast<int>(forms.size()) < target_r) {
        if (++attempts > max_attempts)
            throw std::runtime_error("generic_extension exhausted retries");
        std::vector<Rat> cand(n);
        bool nonzero = false;
        for (int j = 0; j < n; ++j) {
            cand[j] = Rat(rng.uniform(-bound, bound));
            nonzero = nonzero || !is_zero(cand[j]);
        }
        if (!nonzero) {
            bound *= 2;
            continue;
        }
        // Only subsets involving the candidate need checking.
        bool ok = true;
        const int cur = static_cast<int>(forms.size());
        for (const auto& rest : k_subsets(cur, n - 1)) {
            QMatrix m(n, n);
            for (int i = 0; i < n - 1; ++i)
                for (int j = 0; j < n; ++j) m.at(i, j) = forms[rest[i]][j];
            for (int j = 0; j < n; ++j) m.at(n - 1, j) = cand[j];
            if (is_zero(m.det())) {
                ok = false;
                break;
            }
        }
        if (ok) {
            forms.push_back(std::move(cand));
            bound = 10;
        } else {
            bound *= 2;
        }
    }
    return Arrangement(n, std::move(forms));
}

}  // namespace hadiff
