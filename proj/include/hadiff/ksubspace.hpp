#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadiff/arrangement.hpp"
#include "hadiff/qmatrix.hpp"
#include "hadiff/weyl.hpp"

namespace hadiff {

// Finite-dimensional rational subspace of a labelled coordinate space.
struct KSubspace {
    std::vector<std::string> ambient_labels;
    std::vector<std::vector<Rat>> basis;  // vectors in ambient coordinates

    int ambient_dim() const { return static_cast<int>(ambient_labels.size()); }
    int dim() const { return static_cast<int>(basis.size()); }

    QMatrix basis_matrix() const {  // ambient_dim x dim
        QMatrix m(ambient_dim(), dim());
        for (int j = 0; j < dim(); ++j)
            for (int i = 0; i < ambient_dim(); ++i) m.at(i, j) = basis[j][i];
        return m;
    }
};

inline std::string subset_label(const SubsetH& h) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << (h[i] + 1);
    os << "}";
    return os.str();
}

inline std::string mono_label(const Monomial& a) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ")";
    return os.str();
}

// Position of an element inside a sorted subset: the sign exponent l_H(h).
inline int position_in(const SubsetH& h, int elem) {
    return static_cast<int>(std::lower_bound(h.begin(), h.end(), elem) - h.begin());
}

inline SubsetH subset_insert(SubsetH h, int elem) {
    h.insert(h.begin() + position_in(h, elem), elem);
    return h;
}

inline SubsetH subset_erase(SubsetH h, int elem) {
    h.erase(h.begin() + position_in(h, elem));
    return h;
}

// Shared per-(arrangement, m) scratch: delta_G^m coefficient vectors in the
// degree-m dual monomial coordinates, cached per (n-1)-subset G.
class DeltaCache {
  public:
    DeltaCache(const Arrangement& arr, int m)
        : arr_(arr), m_(m), alphas_(monomials_of_degree(arr.n(), m)) {}

    const Arrangement& arr() const { return arr_; }
    int m() const { return m_; }
    const std::vector<Monomial>& alphas() const { return alphas_; }
    int sm() const { return static_cast<int>(alphas_.size()); }

    const std::vector<Rat>& delta_power_vec(const SubsetH& g) {
        auto it = cache_.find(g);
        if (it != cache_.end()) return it->second;
        Polynomial dual = Polynomial::constant(arr_.n(), Rat(1));
        const Polynomial d = Polynomial::linear_form(delta_H(arr_, g));
        for (int k = 0; k < m_; ++k) dual = dual * d;
        std::vector<Rat> v(alphas_.size());
        for (std::size_t i = 0; i < alphas_.size(); ++i) v[i] = dual.coeff(alphas_[i]);
        return cache_.emplace(g, std::move(v)).first->second;
    }

  private:
    const Arrangement& arr_;
    int m_;
    std::vector<Monomial> alphas_;
    std::map<SubsetH, std::vector<Rat>> cache_;
};

// Delta_H = sum of K d^m_{H u H'} over (j-1)-subsets H' of A \ H, presented
// in the degree-m dual coordinates. The basis follows the first m+n-1
// hyperplanes containing H; its size is binom(m+j-1, j-1).
inline KSubspace delta_space(DeltaCache& cache, const SubsetH& h) {
    const Arrangement& arr = cache.arr();
    const int n = arr.n();
    const int m = cache.m();
    const int j = n - static_cast<int>(h.size());
    if (j < 1 || j > n) throw std::invalid_argument("delta_space needs 0 <= |H| <= n-1");
    if (arr.r() < m + n - 1)
        throw std::invalid_argument("delta_space needs r >= m+n-1 (i.e. m <= r-n+1)");

    // A' = H plus the smallest other indices, up to m+n-1 hyperplanes.
    std::vector<bool> in_h(arr.r(), false);
    for (int i : h) in_h[i] = true;
    SubsetH aprime_rest;
    for (int i = 0; i < arr.r() && static_cast<int>(h.size() + aprime_rest.size()) < m + n - 1; ++i)
        if (!in_h[i]) aprime_rest.push_back(i);

    KSubspace ks;
    for (const auto& a : cache.alphas()) ks.ambient_labels.push_back("d" + mono_label(a));
    for (const auto& pick : k_subsets(static_cast<int>(aprime_rest.size()), j - 1)) {
        SubsetH g = h;
        for (int t : pick) g = subset_insert(g, aprime_rest[t]);
        std::vector<Rat> v = cache.delta_power_vec(g);
        normalize_primitive(v);
        ks.basis.push_back(std::move(v));
    }
    const long expect = binomial(m + j - 1, j - 1).get_si();
    if (static_cast<long>(ks.basis.size()) != expect ||
        ks.basis_matrix().rank() != static_cast<int>(expect))
        throw std::logic_error("delta_space: basis rank differs from binom(m+j-1, j-1)");
    return ks;
}

// E_[H], the kernel defining the resolution building blocks. Ambient
// coordinates are one per (j-1)-subset H' of A \ H: the coefficient of
// d^m_{H u H'} e_{/\H'} e_H (those components are forced to be multiples of
// d^m_{H u H'}, so a single coordinate per block is the whole story).
struct EBracket {
    SubsetH h;
    std::vector<SubsetH> hprimes;            // relative to the full index set
    std::map<SubsetH, int> hprime_index;
    KSubspace space;
};

inline EBracket e_bracket(DeltaCache& cache, const SubsetH& h) {
    const Arrangement& arr = cache.arr();
    const int n = arr.n();
    const int m = cache.m();
    const int r = arr.r();
    const int j = n - static_cast<int>(h.size());
    if (j < 1) throw std::invalid_argument("e_bracket needs |H| <= n-1");

    EBracket eb;
    eb.h = h;
    std::vector<bool> in_h(r, false);
    for (int i : h) in_h[i] = true;
    SubsetH others;
    for (int i = 0; i < r; ++i)
        if (!in_h[i]) others.push_back(i);
    for (const auto& pick : k_subsets(static_cast<int>(others.size()), j - 1)) {
        SubsetH hp;
        for (int t : pick) hp.push_back(others[t]);
        eb.hprime_index[hp] = static_cast<int>(eb.hprimes.size());
        eb.hprimes.push_back(std::move(hp));
    }
    for (const auto& hp : eb.hprimes)
        eb.space.ambient_labels.push_back("d^m_" + subset_label(h) + "u" + subset_label(hp) +
                                          " e^" + subset_label(hp) + " e_" + subset_label(h));

    if (j == 1) {
        eb.space.basis.push_back({Rat(1)});
    } else {
        // Kernel of the restricted differential into
        // C^[H]_{j-2} = sum over (j-2)-subsets H'' of Delta_{H u H''},
        // written out in the dual monomial coordinates.
        const auto hpp_list = k_subsets(static_cast<int>(others.size()), j - 2);
        std::map<SubsetH, int> hpp_index;
        for (const auto& pick : hpp_list) {
            SubsetH hpp;
            for (int t : pick) hpp.push_back(others[t]);
            const int idx = static_cast<int>(hpp_index.size());
            hpp_index[hpp] = idx;
        }
        const int sm = cache.sm();
        QMatrix mat(static_cast<int>(hpp_index.size()) * sm,
                    static_cast<int>(eb.hprimes.size()));
        for (std::size_t col = 0; col < eb.hprimes.size(); ++col) {
            const SubsetH& hp = eb.hprimes[col];
            SubsetH g = h;
            for (int e : hp) g = subset_insert(g, e);
            const auto& dv = cache.delta_power_vec(g);
            for (int e : hp) {
                const int sign = position_in(hp, e) % 2 ? -1 : 1;
                const SubsetH hpp = subset_erase(hp, e);
                const int block = hpp_index.at(hpp);
                for (int t = 0; t < sm; ++t) {
                    if (is_zero(dv[t])) continue;
                    mat.at(block * sm + t, static_cast<int>(col)) +=
                        sign > 0 ? dv[t] : -dv[t];
                }
            }
        }
        eb.space.basis = mat.nullspace();
    }

    const long expect = binomial(r - m - n + j - 1, j - 1).get_si();
    if (static_cast<long>(eb.space.basis.size()) != expect)
        throw std::logic_error("e_bracket: dim E_[H] differs from binom(r-m-n+j-1, j-1)");
    return eb;
}

// A finite chain of rational spaces with maps written in the chosen bases:
// maps[i] sends spaces[i] into spaces[i+1].
struct GradedKComplex {
    std::vector<std::string> names;
    std::vector<KSubspace> spaces;
    std::vector<QMatrix> maps;

    bool dd_zero() const {
        for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
            const QMatrix prod = maps[i + 1] * maps[i];
            for (int a = 0; a < prod.rows(); ++a)
                for (int b = 0; b < prod.cols(); ++b)
                    if (!is_zero(prod.at(a, b))) return false;
        }
        return true;
    }

    struct Exactness {
        bool exact = true;
        std::vector<int> failed_positions;
    };

    // Rank-nullity bookkeeping; assumes dd_zero.
    Exactness check_exact() const {
        Exactness ex;
        const int L = static_cast<int>(spaces.size()) - 1;
        std::vector<int> rk(maps.size());
        for (std::size_t i = 0; i < maps.size(); ++i) rk[i] = maps[i].rank();
        for (int i = 0; i <= L; ++i) {
            const int incoming = i > 0 ? rk[i - 1] : 0;
            const int outgoing = i < L ? rk[i] : 0;
            if (incoming + outgoing != spaces[i].dim()) {
                ex.exact = false;
                ex.failed_positions.push_back(i);
            }
        }
        return ex;
    }
};

namespace detail {

// Basis of the span of the given dual vectors, via RREF rows, normalized.
inline KSubspace span_space(const std::vector<std::vector<Rat>>& vectors,
                            const std::vector<std::string>& labels) {
    KSubspace ks;
    ks.ambient_labels = labels;
    if (vectors.empty()) return ks;
    QMatrix m = QMatrix::from_rows(vectors);
    m.rref_in_place();
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<Rat> row = m.row(i);
        bool nonzero = false;
        for (const auto& c : row) nonzero = nonzero || !is_zero(c);
        if (!nonzero) break;
        normalize_primitive(row);
        ks.basis.push_back(std::move(row));
    }
    return ks;
}

}  // namespace detail

// The complex C_*: C_k = sum over k-subsets H of Delta_H e_{/\H} for
// k = n-1,...,0, topped by C_n := Ker d_{n-1}. Spaces are listed from C_n
// down to C_0.
inline GradedKComplex build_C_complex(DeltaCache& cache) {
    const Arrangement& arr = cache.arr();
    const int n = arr.n();
    const int r = arr.r();
    const int sm = cache.sm();

    struct Level {
        std::vector<SubsetH> blocks;
        std::vector<KSubspace> delta;  // Delta_H basis per block
        KSubspace space;
    };
    std::vector<Level> levels(n);  // levels[k] = C_k for k = 0..n-1
    for (int k = 0; k < n; ++k) {
        Level& lv = levels[k];
        lv.blocks = k_subsets(r, k);
        for (const auto& h : lv.blocks) {
            KSubspace ds = delta_space(cache, h);
            for (const auto& v : ds.basis) {
                std::vector<Rat> amb(lv.blocks.size() * sm, Rat(0));
                const std::size_t base =
                    static_cast<std::size_t>(&h - lv.blocks.data()) * sm;
                for (int t = 0; t < sm; ++t) amb[base + t] = v[t];
                lv.space.basis.push_back(std::move(amb));
            }
            lv.delta.push_back(std::move(ds));
        }
        for (const auto& h : lv.blocks)
            for (int t = 0; t < sm; ++t)
                lv.space.ambient_labels.push_back("e^" + subset_label(h) + " d" +
                                                  mono_label(cache.alphas()[t]));
    }

    // Differential C_k -> C_{k-1} in basis coordinates.
    std::vector<QMatrix> diff(n);  // diff[k]: C_k -> C_{k-1}, k >= 1
    for (int k = 1; k < n; ++k) {
        const Level& src = levels[k];
        const Level& dst = levels[k - 1];
        std::map<SubsetH, int> dst_index;
        for (std::size_t b = 0; b < dst.blocks.size(); ++b)
            dst_index[dst.blocks[b]] = static_cast<int>(b);
        int dst_dim = 0;
        std::vector<int> dst_offset(dst.blocks.size());
        for (std::size_t b = 0; b < dst.blocks.size(); ++b) {
            dst_offset[b] = dst_dim;
            dst_dim += dst.delta[b].dim();
        }
        int src_dim = 0;
        for (const auto& ds : src.delta) src_dim += ds.dim();
        QMatrix mat(dst_dim, src_dim);
        int col = 0;
        for (std::size_t b = 0; b < src.blocks.size(); ++b) {
            const SubsetH& h = src.blocks[b];
            for (int v = 0; v < src.delta[b].dim(); ++v, ++col) {
                const auto& vec = src.delta[b].basis[v];  // dual coordinates
                for (int e : h) {
                    const int sign = position_in(h, e) % 2 ? -1 : 1;
                    const SubsetH tgt = subset_erase(h, e);
                    const int tb = dst_index.at(tgt);
                    auto coeffs = solve_in_span(dst.delta[tb].basis_matrix(), vec);
                    if (!coeffs)
                        throw std::logic_error("C complex: Delta_H not inside Delta_{H\\{e}}");
                    for (std::size_t t = 0; t < coeffs->size(); ++t) {
                        if (is_zero((*coeffs)[t])) continue;
                        Rat add = sign > 0 ? (*coeffs)[t] : -(*coeffs)[t];
                        mat.at(dst_offset[tb] + static_cast<int>(t), col) += add;
                    }
                }
            }
        }
        diff[k] = std::move(mat);
    }

    GradedKComplex cc;
    // C_n = Ker d_{n-1}, included into C_{n-1}.
    const auto kernel = n >= 2 ? diff[n - 1].nullspace() : std::vector<std::vector<Rat>>{};
    KSubspace top;
    top.ambient_labels = levels[n - 1].space.ambient_labels;
    QMatrix incl(levels[n - 1].space.dim(), static_cast<int>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        std::vector<Rat> amb(top.ambient_labels.size(), Rat(0));
        for (std::size_t i = 0; i < kernel[j].size(); ++i) {
            incl.at(static_cast<int>(i), static_cast<int>(j)) = kernel[j][i];
            if (is_zero(kernel[j][i])) continue;
            for (std::size_t t = 0; t < amb.size(); ++t)
                amb[t] += kernel[j][i] * levels[n - 1].space.basis[i][t];
        }
        top.basis.push_back(std::move(amb));
    }
    cc.names.push_back("C_" + std::to_string(n));
    cc.spaces.push_back(std::move(top));
    cc.maps.push_back(std::move(incl));
    for (int k = n - 1; k >= 0; --k) {
        cc.names.push_back("C_" + std::to_string(k));
        cc.spaces.push_back(std::move(levels[k].space));
        if (k >= 1) cc.maps.push_back(std::move(diff[k]));
    }
    return cc;
}

// E_[H] blocks per level of the E complex (shared by the sigma variant and
// the free resolution construction).
struct ELevel {
    std::vector<EBracket> blocks;
    std::vector<int> offsets;
    int dim = 0;
};

inline ELevel build_e_level(DeltaCache& cache, int j, const SubsetH* sigma) {
    const Arrangement& arr = cache.arr();
    ELevel lv;
    for (const auto& h : k_subsets(arr.r(), arr.n() - j)) {
        if (sigma && !subsets_intersect(h, *sigma)) continue;
        EBracket eb = e_bracket(cache, h);
        lv.offsets.push_back(lv.dim);
        lv.dim += eb.space.dim();
        lv.blocks.push_back(std::move(eb));
    }
    return lv;
}

// psi_j: E_j -> E_{j-1} in basis coordinates (j >= 2). In the block
// coordinates the transport is pure index bookkeeping: the coefficient of
// d^m_{H u H'} e_{/\H'} e_H moves to (G, H' \ {e}) with G = H u {e}.
inline QMatrix e_psi_matrix(const ELevel& src, const ELevel& dst) {
    std::map<SubsetH, int> dst_block;
    for (std::size_t b = 0; b < dst.blocks.size(); ++b) dst_block[dst.blocks[b].h] = static_cast<int>(b);
    int src_dim = src.dim;
    QMatrix mat(dst.dim, src_dim);
    int col = 0;
    for (const auto& eb : src.blocks) {
        for (const auto& vec : eb.space.basis) {
            // ambient image per destination block
            std::map<int, std::vector<Rat>> images;  // dst block -> ambient vec
            for (std::size_t c = 0; c < eb.hprimes.size(); ++c) {
                if (is_zero(vec[c])) continue;
                const SubsetH& hp = eb.hprimes[c];
                for (int e : hp) {
                    const int sign = position_in(hp, e) % 2 ? -1 : 1;
                    const SubsetH g = subset_insert(eb.h, e);
                    auto itb = dst_block.find(g);
                    if (itb == dst_block.end())
                        throw std::logic_error("E complex: target block missing");
                    const EBracket& tgt = dst.blocks[itb->second];
                    auto& img = images[itb->second];
                    if (img.empty()) img.assign(tgt.hprimes.size(), Rat(0));
                    const SubsetH hpp = subset_erase(hp, e);
                    img[tgt.hprime_index.at(hpp)] += sign > 0 ? vec[c] : -vec[c];
                }
            }
            for (const auto& [tb, img] : images) {
                auto coeffs = solve_in_span(dst.blocks[tb].space.basis_matrix(), img);
                if (!coeffs) throw std::logic_error("E complex: psi image escapes E_[G]");
                for (std::size_t t = 0; t < coeffs->size(); ++t)
                    if (!is_zero((*coeffs)[t]))
                        mat.at(dst.offsets[tb] + static_cast<int>(t), col) = (*coeffs)[t];
            }
            ++col;
        }
    }
    return mat;
}

// The E complex: full version (sigma == nullptr) is
//   0 -> E_n -> ... -> E_1 -> E_0 = Delta_empty -> 0;
// the sigma version restricts blocks to subsets meeting sigma (so E_n[s]=0)
// and ends in E_0[s] = span of the d_H^m it contains.
inline GradedKComplex build_E_complex(DeltaCache& cache, const SubsetH* sigma = nullptr) {
    const Arrangement& arr = cache.arr();
    const int n = arr.n();
    const int sm = cache.sm();

    std::vector<ELevel> levels;  // index 0 <-> E_n, ..., E_1
    for (int j = n; j >= 1; --j) levels.push_back(build_e_level(cache, j, sigma));

    GradedKComplex ec;
    for (int j = n; j >= 1; --j) {
        const ELevel& lv = levels[n - j];
        KSubspace ks;
        for (const auto& eb : lv.blocks)
            ks.ambient_labels.insert(ks.ambient_labels.end(), eb.space.ambient_labels.begin(),
                                     eb.space.ambient_labels.end());
        for (std::size_t b = 0; b < lv.blocks.size(); ++b) {
            for (const auto& vec : lv.blocks[b].space.basis) {
                std::vector<Rat> amb(ks.ambient_labels.size(), Rat(0));
                int off = 0;
                for (std::size_t bb = 0; bb < b; ++bb)
                    off += static_cast<int>(lv.blocks[bb].hprimes.size());
                for (std::size_t t = 0; t < vec.size(); ++t) amb[off + t] = vec[t];
                ks.basis.push_back(std::move(amb));
            }
        }
        ec.names.push_back("E_" + std::to_string(j));
        ec.spaces.push_back(std::move(ks));
    }

    // E_0 and psi_1.
    std::vector<std::string> dual_labels;
    for (const auto& a : cache.alphas()) dual_labels.push_back("d" + mono_label(a));
    const ELevel& e1 = levels[n - 1];
    std::vector<std::vector<Rat>> spanning;
    for (const auto& eb : e1.blocks) spanning.push_back(cache.delta_power_vec(eb.h));
    KSubspace e0 = detail::span_space(spanning, dual_labels);
    QMatrix psi1(e0.dim(), e1.dim);
    const QMatrix e0basis = e0.basis_matrix();
    for (std::size_t b = 0; b < e1.blocks.size(); ++b) {
        auto coeffs = solve_in_span(e0basis, spanning[b]);
        if (!coeffs) throw std::logic_error("E complex: delta_H^m escapes E_0");
        for (std::size_t t = 0; t < coeffs->size(); ++t)
            psi1.at(static_cast<int>(t), e1.offsets[b]) = (*coeffs)[t];
    }

    for (int j = n; j >= 2; --j)
        ec.maps.push_back(e_psi_matrix(levels[n - j], levels[n - j + 1]));
    ec.maps.push_back(std::move(psi1));
    ec.names.push_back("E_0");
    ec.spaces.push_back(std::move(e0));
    return ec;
}

inline GradedKComplex build_E_sigma_complex(DeltaCache& cache, const SubsetH& sigma) {
    return build_E_complex(cache, &sigma);
}

}  // namespace hadiff
