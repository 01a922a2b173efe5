#pragma once

#include <cstdint>
#include <vector>

#include "hadiff/qmatrix.hpp"
#include "hadiff/rational.hpp"

namespace hadiff {

// Rank computations over F_p used as one-sided certificates: for any prime
// p, rank_p(A) <= rank_Q(A). Combined with d.d = 0 over Q this turns a
// mod-p rank additivity check into an exact proof of graded exactness.
namespace modp {

constexpr std::uint64_t kPrime = 2147483647ull;         // 2^31 - 1
constexpr std::uint64_t kFallbackPrime = 2147483629ull;  // next prime down

inline std::uint64_t reduce_rat(const Rat& q, std::uint64_t p) {
    const std::uint64_t num = mpz_fdiv_ui(q.get_num().get_mpz_t(), p);
    const std::uint64_t den = mpz_fdiv_ui(q.get_den().get_mpz_t(), p);
    if (den == 0) return UINT64_MAX;  // caller must pick another prime
    // den^(p-2) mod p
    std::uint64_t base = den, e = p - 2, inv = 1;
    while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return num % p * inv % p;
}

// Dense matrix over F_p, row-major.
class Matrix {
  public:
    Matrix(int rows, int cols, std::uint64_t p = kPrime)
        : rows_(rows), cols_(cols), p_(p), e_(static_cast<std::size_t>(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t prime() const { return p_; }

    std::uint64_t& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::uint64_t at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    void set_rat(int i, int j, const Rat& q, bool* bad_denominator = nullptr) {
        const std::uint64_t v = reduce_rat(q, p_);
        if (v == UINT64_MAX) {
            if (bad_denominator) *bad_denominator = true;
            return;
        }
        at(i, j) = v;
    }

    int rank() const {
        Matrix a(*this);
        const std::uint64_t p = p_;
        int rank = 0;
        for (int col = 0; col < a.cols_ && rank < a.rows_; ++col) {
            int piv = -1;
            for (int i = rank; i < a.rows_; ++i) {
                if (a.at(i, col) != 0) {
                    piv = i;
                    break;
                }
            }
            if (piv < 0) continue;
            if (piv != rank) {
                std::uint64_t* r0 = &a.e_[static_cast<std::size_t>(piv) * a.cols_];
                std::uint64_t* r1 = &a.e_[static_cast<std::size_t>(rank) * a.cols_];
                for (int j = 0; j < a.cols_; ++j) std::swap(r0[j], r1[j]);
            }
            // scale pivot row to 1
            std::uint64_t inv = 1, base = a.at(rank, col), e = p - 2;
            while (e) {
                if (e & 1) inv = inv * base % p;
                base = base * base % p;
                e >>= 1;
            }
            std::uint64_t* pr = &a.e_[static_cast<std::size_t>(rank) * a.cols_];
            for (int j = col; j < a.cols_; ++j) pr[j] = pr[j] * inv % p;
            for (int i = rank + 1; i < a.rows_; ++i) {
                const std::uint64_t f = a.at(i, col);
                if (f == 0) continue;
                std::uint64_t* ri = &a.e_[static_cast<std::size_t>(i) * a.cols_];
                const std::uint64_t fneg = p - f;
                for (int j = col; j < a.cols_; ++j)
                    ri[j] = (ri[j] + fneg * pr[j]) % p;
            }
            ++rank;
        }
        return rank;
    }

  private:
    int rows_, cols_;
    std::uint64_t p_;
    std::vector<std::uint64_t> e_;
};

}  // namespace modp
}  // namespace hadiff
