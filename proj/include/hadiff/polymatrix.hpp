#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hadiff/interpolate.hpp"
#include "hadiff/polynomial.hpp"
#include "hadiff/qmatrix.hpp"

namespace hadiff {

// Dense matrix over the polynomial ring.
class PolyMatrix {
  public:
    PolyMatrix() : rows_(0), cols_(0), nvars_(0) {}
    PolyMatrix(int rows, int cols, int nvars)
        : rows_(rows), cols_(cols), nvars_(nvars),
          e_(static_cast<std::size_t>(rows) * cols, Polynomial::zero(nvars)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return nvars_; }

    Polynomial& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Polynomial& at(int i, int j) const {
        return e_[static_cast<std::size_t>(i) * cols_ + j];
    }

    bool is_zero() const {
        for (const auto& p : e_)
            if (!p.is_zero()) return false;
        return true;
    }

    PolyMatrix transposed() const {
        PolyMatrix t(cols_, rows_, nvars_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul shape mismatch");
        PolyMatrix c(a.rows_, b.cols_, a.nvars_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    if (!b.at(k, j).is_zero()) c.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return c;
    }

    QMatrix evaluate(const std::vector<Rat>& point) const {
        QMatrix m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).evaluate(point);
        return m;
    }

    bool operator==(const PolyMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

  private:
    int rows_, cols_, nvars_;
    std::vector<Polynomial> e_;
};

namespace detail {

// Fraction-free Bareiss elimination over the polynomial ring. Every division
// is exact by the Sylvester identity.
inline Polynomial polymat_det_bareiss(PolyMatrix a) {
    const int n = a.rows();
    if (n == 0) return Polynomial::constant(a.nvars(), Rat(1));
    Polynomial prev = Polynomial::constant(a.nvars(), Rat(1));
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k).is_zero()) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (!a.at(i, k).is_zero()) {
                    p = i;
                    break;
                }
            if (p < 0) return Polynomial::zero(a.nvars());
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Polynomial t = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                auto q = exact_divide(t, prev);
                if (!q) throw std::logic_error("Bareiss division failed");
                a.at(i, j) = std::move(*q);
            }
            a.at(i, k) = Polynomial::zero(a.nvars());
        }
        prev = a.at(k, k);
    }
    Polynomial d = a.at(n - 1, n - 1);
    return sign > 0 ? d : -d;
}

// True when every nonzero entry of column j has the same total degree,
// reported through `degree` (-1 for an all-zero column).
inline bool column_homogeneous(const PolyMatrix& m, int j, int* degree) {
    int d = -1;
    for (int i = 0; i < m.rows(); ++i) {
        const Polynomial& p = m.at(i, j);
        if (p.is_zero()) continue;
        if (!p.is_homogeneous()) return false;
        if (d < 0) d = p.degree();
        else if (p.degree() != d) return false;
    }
    *degree = d;
    return true;
}

inline Polynomial polymat_det_interpolate(const PolyMatrix& m) {
    const int n = m.rows();
    const int nv = m.nvars();
    int bound = 0;
    bool homogeneous = true;
    int hom_degree = 0;
    for (int j = 0; j < n; ++j) {
        int colmax = -1, cold = -1;
        if (!column_homogeneous(m, j, &cold)) homogeneous = false;
        for (int i = 0; i < n; ++i) colmax = std::max(colmax, m.at(i, j).degree());
        if (colmax < 0) return Polynomial::zero(nv);  // zero column
        bound += colmax;
        hom_degree += cold;
    }

    if (homogeneous && nv >= 1) {
        // det is homogeneous of degree hom_degree (or zero); interpolate the
        // dehomogenization in nv-1 variables and restore the last variable.
        const int k = nv - 1;
        auto eval = [&](const std::vector<int>& grid) -> Rat {
            std::vector<Rat> pt(nv);
            for (int a = 0; a < k; ++a) pt[a] = Rat(grid[a]);
            pt[k] = Rat(1);
            return m.evaluate(pt).det();
        };
        Polynomial g = newton_interpolate_simplex(k, hom_degree, eval);
        return homogenize_last(g, hom_degree);
    }

    auto eval = [&](const std::vector<int>& grid) -> Rat {
        std::vector<Rat> pt(nv);
        for (int a = 0; a < nv; ++a) pt[a] = Rat(grid[a]);
        return m.evaluate(pt).det();
    };
    return newton_interpolate_simplex(nv, bound, eval);
}

}  // namespace detail

// Exact determinant over the polynomial ring: fraction-free elimination up
// to `bareiss_limit`, dense evaluation-interpolation beyond (total degree is
// bounded a priori by the column degrees).
inline Polynomial polymat_det(const PolyMatrix& m, int bareiss_limit = 20) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    if (m.rows() <= bareiss_limit) return detail::polymat_det_bareiss(m);
    return detail::polymat_det_interpolate(m);
}

inline int polymat_rank_at_point(const PolyMatrix& m, const std::vector<Rat>& point) {
    return m.evaluate(point).rank();
}

}  // namespace hadiff
