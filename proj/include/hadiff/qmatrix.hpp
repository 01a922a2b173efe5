#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hadiff/rational.hpp"

namespace hadiff {

// Dense matrix over Q with exact elimination. All mutating algorithms work
// on copies; a QMatrix value never changes behind the caller's back.
class QMatrix {
  public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, Rat(0)) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Rat(1);
        return m;
    }

    static QMatrix from_rows(const std::vector<std::vector<Rat>>& rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
        QMatrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c)
                throw std::invalid_argument("ragged rows");
            for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    static QMatrix from_columns(const std::vector<std::vector<Rat>>& cols) {
        const int c = static_cast<int>(cols.size());
        const int r = c == 0 ? 0 : static_cast<int>(cols[0].size());
        QMatrix m(r, c);
        for (int j = 0; j < c; ++j) {
            if (static_cast<int>(cols[j].size()) != r)
                throw std::invalid_argument("ragged columns");
            for (int i = 0; i < r; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<Rat> row(int i) const {
        std::vector<Rat> r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }

    std::vector<Rat> column(int j) const {
        std::vector<Rat> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    QMatrix transposed() const {
        QMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul shape mismatch");
        QMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                const Rat& aik = a.at(i, k);
                if (is_zero(aik)) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const Rat& bkj = b.at(k, j);
                    if (!is_zero(bkj)) c.at(i, j) += aik * bkj;
                }
            }
        }
        return c;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw std::invalid_argument("matvec shape mismatch");
        std::vector<Rat> r(rows_, Rat(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!is_zero(at(i, j))) r[i] += at(i, j) * v[j];
        return r;
    }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    // Reduced row echelon form in place; returns pivot column indices.
    std::vector<int> rref_in_place() {
        std::vector<int> pivots;
        int row = 0;
        for (int col = 0; col < cols_ && row < rows_; ++col) {
            int p = -1;
            for (int i = row; i < rows_; ++i) {
                if (!is_zero(at(i, col))) {
                    p = i;
                    break;
                }
            }
            if (p < 0) continue;
            if (p != row)
                for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(row, j));
            const Rat inv = Rat(1) / at(row, col);
            for (int j = col; j < cols_; ++j) at(row, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == row || is_zero(at(i, col))) continue;
                const Rat f = at(i, col);
                for (int j = col; j < cols_; ++j) at(i, j) -= f * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    int rank() const {
        QMatrix tmp(*this);
        return static_cast<int>(tmp.rref_in_place().size());
    }

    // Kernel basis; each vector is a primitive integer vector with positive
    // first nonzero entry, listed by ascending free column.
    std::vector<std::vector<Rat>> nullspace() const {
        QMatrix tmp(*this);
        const std::vector<int> pivots = tmp.rref_in_place();
        std::vector<bool> is_pivot(cols_, false);
        for (int c : pivots) is_pivot[c] = true;
        std::vector<std::vector<Rat>> basis;
        for (int free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Rat> v(cols_, Rat(0));
            v[free] = Rat(1);
            for (std::size_t k = 0; k < pivots.size(); ++k) {
                v[pivots[k]] = -tmp.at(static_cast<int>(k), free);
            }
            normalize_primitive(v);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Exact determinant via fraction-free (Bareiss) elimination on the
    // denominator-cleared integer matrix.
    Rat det() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        const int n = rows_;
        if (n == 0) return Rat(1);
        std::vector<Int> a(static_cast<std::size_t>(n) * n);
        Rat scale(1);
        for (int i = 0; i < n; ++i) {
            Int l(1);
            for (int j = 0; j < n; ++j)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), at(i, j).get_den().get_mpz_t());
            scale /= Rat(l);
            for (int j = 0; j < n; ++j) {
                Rat v = at(i, j) * Rat(l);
                v.canonicalize();
                a[static_cast<std::size_t>(i) * n + j] = v.get_num();
            }
        }
        auto el = [&](int i, int j) -> Int& { return a[static_cast<std::size_t>(i) * n + j]; };
        Int prev(1);
        int sign = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (el(k, k) == 0) {
                int p = -1;
                for (int i = k + 1; i < n; ++i)
                    if (el(i, k) != 0) {
                        p = i;
                        break;
                    }
                if (p < 0) return Rat(0);
                for (int j = 0; j < n; ++j) std::swap(el(k, j), el(p, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j) {
                    Int t = el(i, j) * el(k, k) - el(i, k) * el(k, j);
                    mpz_divexact(el(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                }
                el(i, k) = 0;
            }
            prev = el(k, k);
        }
        Rat d = Rat(el(n - 1, n - 1)) * scale;
        d.canonicalize();
        return sign > 0 ? d : Rat(-d);
    }

  private:
    int rows_, cols_;
    std::vector<Rat> e_;
};

struct RankNullspace {
    int rank = 0;
    std::vector<std::vector<Rat>> nullspace_basis;
};

inline RankNullspace qmat_rank_nullspace(const QMatrix& m) {
    RankNullspace rn;
    rn.rank = m.rank();
    rn.nullspace_basis = m.nullspace();
    return rn;
}

// Coefficients c with basis * c = target, when target lies in the column
// span. Assumes the columns of `basis` are linearly independent.
inline std::optional<std::vector<Rat>> solve_in_span(const QMatrix& basis,
                                                     const std::vector<Rat>& target) {
    if (static_cast<int>(target.size()) != basis.rows())
        throw std::invalid_argument("solve_in_span shape mismatch");
    const int k = basis.cols();
    QMatrix aug(basis.rows(), k + 1);
    for (int i = 0; i < basis.rows(); ++i) {
        for (int j = 0; j < k; ++j) aug.at(i, j) = basis.at(i, j);
        aug.at(i, k) = target[i];
    }
    const std::vector<int> pivots = aug.rref_in_place();
    std::vector<Rat> c(k, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == k) return std::nullopt;  // inconsistent system
        c[pivots[r]] = aug.at(static_cast<int>(r), k);
    }
    return c;
}

}  // namespace hadiff
