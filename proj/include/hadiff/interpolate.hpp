#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "hadiff/monomial.hpp"
#include "hadiff/polynomial.hpp"

namespace hadiff {

// Dense Newton interpolation on the integer simplex grid
// { (i_1,...,i_k) : i_a >= 0, sum i_a <= bound }, which is exactly enough
// data for a polynomial of total degree <= bound. Returns the polynomial in
// k variables. The evaluator receives integer grid coordinates.
inline Polynomial newton_interpolate_simplex(
    int k, int bound, const std::function<Rat(const std::vector<int>&)>& eval) {
    if (k == 0) {
        return Polynomial::constant(0, eval({}));
    }
    std::map<Monomial, Rat> val;
    for (const auto& q : monomials_up_to_degree(k, bound)) val[q] = eval(q);

    // Divided differences along each axis, nodes 0,1,...,bound. Points are
    // processed with descending coordinate so the neighbour still holds the
    // previous level's value.
    for (int axis = 0; axis < k; ++axis) {
        for (int s = 1; s <= bound; ++s) {
            for (auto it = val.rbegin(); it != val.rend(); ++it) {
                const Monomial& q = it->first;
                if (q[axis] < s) continue;
                Monomial prev(q);
                prev[axis] -= 1;
                it->second = (it->second - val.at(prev)) / Rat(s);
            }
        }
    }

    // Horner conversion from the falling-factorial Newton basis.
    std::vector<std::pair<Monomial, Rat>> items(val.begin(), val.end());
    auto rec = [&](auto&& self, int axis,
                   const std::vector<std::pair<Monomial, Rat>>& part) -> Polynomial {
        if (part.empty()) return Polynomial::zero(k);
        if (axis == k) return Polynomial::constant(k, part.front().second);
        int top = 0;
        for (const auto& [q, c] : part) top = std::max(top, q[axis]);
        std::vector<std::vector<std::pair<Monomial, Rat>>> groups(top + 1);
        for (const auto& item : part) groups[item.first[axis]].push_back(item);
        Polynomial r = self(self, axis + 1, groups[top]);
        for (int j = top - 1; j >= 0; --j) {
            Polynomial binom = Polynomial::variable(k, axis);
            binom += Polynomial::constant(k, Rat(-j));
            r = binom * r + self(self, axis + 1, groups[j]);
        }
        return r;
    };
    return rec(rec, 0, items);
}

// Re-embeds a polynomial in k variables as a homogeneous polynomial of the
// stated degree in k+1 variables (inverse of substituting x_{k+1} = 1).
inline Polynomial homogenize_last(const Polynomial& g, int degree) {
    const int n = g.nvars() + 1;
    Polynomial f(n);
    for (const auto& [m, c] : g.terms()) {
        Monomial e(m);
        const int missing = degree - total_degree(m);
        if (missing < 0) throw std::domain_error("homogenize: degree bound violated");
        e.push_back(missing);
        f.add_term(e, c);
    }
    return f;
}

}  // namespace hadiff
