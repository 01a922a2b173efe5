#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadiff {

// Exact rational scalar. mpq_class keeps gcd(|num|, den) = 1 and den >= 1
// after canonicalize(), which all entry points below guarantee.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

// Serialized form is always "num/den" with den >= 1 and gcd 1.
inline std::string rat_to_string(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline Int binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return b;
}

inline Int factorial(long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
    return f;
}

// Scales a rational vector to a primitive integer vector whose first nonzero
// entry is positive. Identically zero vectors are returned unchanged.
inline void normalize_primitive(std::vector<Rat>& v) {
    Int den_lcm(1);
    bool any = false;
    for (const auto& q : v) {
        if (is_zero(q)) continue;
        any = true;
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    }
    if (!any) return;
    Int g(0);
    for (auto& q : v) {
        q *= Rat(den_lcm);
        q.canonicalize();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num().get_mpz_t());
    }
    int lead = 0;
    for (const auto& q : v) {
        if (!is_zero(q)) {
            lead = sgn(q);
            break;
        }
    }
    if (lead < 0) g = -g;
    for (auto& q : v) {
        q /= Rat(g);
        q.canonicalize();
    }
}

// Deterministic RNG used everywhere a seed appears in an interface.
// mt19937_64 output is fixed by the standard, so results are portable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        // xorshift* keeps the implementation self-contained and stable.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    // Uniform in [lo, hi] via rejection; exact and portable.
    long uniform(long lo, long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return lo + static_cast<long>(x % span);
    }

  private:
    std::uint64_t state_;
};

}  // namespace hadiff
