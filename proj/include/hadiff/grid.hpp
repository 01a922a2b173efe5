#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hadiff/freebasis.hpp"
#include "hadiff/io.hpp"
#include "hadiff/jet.hpp"
#include "hadiff/resolution.hpp"

namespace hadiff {

struct PointOptions {
    std::uint64_t seed = 20240801;
    int degree_bound = -1;  // -1: r+m+n
    int sigma_samples = 20;
    int calculus_instances = 100;
    bool with_saito = true;
    bool with_resolution = true;
    bool with_jet = true;
    bool with_dimension_lemmas = true;
    bool with_complex_exactness = true;
    bool with_calculus = true;
};

struct PointRecord {
    int n = 0, r = 0, m = 0;
    std::uint64_t seed = 0;
    std::string classification;
    bool generic_ok = false;
    bool pass = false;
    std::vector<std::string> failures;

    // free cases
    bool free_case = false;
    int basis_count = 0;
    ExpMultiset exp_observed, exp_expected;
    bool exp_ok = false;
    bool sums_ok = false;
    bool saito_ran = false;
    SaitoResult saito;
    std::vector<std::vector<Rat>> extension_forms;

    // non-free cases
    bool nonfree_case = false;
    long gen_count = 0, gen_count_expected = 0;
    bool gen_rank_ok = false;
    bool gen_members_ok = false;
    bool inequality_ok = false;
    bool res_ran = false;
    VerifyReport res_report;
    bool jet_ran = false;
    VerifyReport jet_report;
    bool transpose_ok = false;
    bool euler_witness_ok = false;
    bool kernel_witness_ok = false;
    bool dims_ok = false;
    bool complexes_ok = false;
    bool calculus_ok = false;

    std::vector<long> hilbert;  // dim D^(m)(A)_p by pdeg
};

// Deterministic arrangement for a grid point: the coordinate hyperplanes
// extended generically from the seed.
inline Arrangement grid_arrangement(int n, int r, std::uint64_t seed) {
    std::vector<std::vector<Rat>> forms;
    for (int i = 0; i < n; ++i) {
        std::vector<Rat> f(n, Rat(0));
        f[i] = Rat(1);
        forms.push_back(std::move(f));
    }
    return generic_extension(Arrangement(n, std::move(forms)), r, seed);
}

namespace detail {

inline void record_fail(PointRecord& rec, const std::string& what) {
    rec.failures.push_back(what);
}

// K-linear independence of the Xi generators: flatten each operator into
// coefficients over (d^alpha, coefficient monomial) and rank-check.
inline bool generators_k_independent(const std::vector<DiffOp>& ops, int n, int m, int pdeg) {
    const auto alphas = monomials_of_degree(n, m);
    const auto mus = monomials_of_degree(n, pdeg);
    QMatrix mat(static_cast<int>(ops.size()), static_cast<int>(alphas.size() * mus.size()));
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            const Polynomial f = ops[i].coeff(alphas[a]);
            for (std::size_t u = 0; u < mus.size(); ++u)
                mat.at(static_cast<int>(i), static_cast<int>(a * mus.size() + u)) =
                    f.coeff(mus[u]);
        }
    return mat.rank() == static_cast<int>(ops.size());
}

inline DiffOp random_diffop(int n, int order, int pdeg, Rng& rng) {
    DiffOp op(n, order);
    for (const auto& a : monomials_of_degree(n, order)) {
        Polynomial f(n);
        for (const auto& mu : monomials_of_degree(n, pdeg))
            if (rng.uniform(0, 2) == 0) f.add_term(mu, Rat(rng.uniform(-4, 4)));
        op.add_term(a, f);
    }
    return op;
}

// Lemma 10.2 instance: d^{a-b}/(a-b)! = (-1)^{|b|} (ad x)^b (d^a / a!).
inline bool check_partial_ad_identity(int n, const Monomial& alpha, const Monomial& beta) {
    const Rat inv_fact = Rat(1) / Rat(mono_factorial(alpha));
    DiffOp rhs = DiffOp::term(alpha, Polynomial::constant(n, inv_fact)).adx_pow(beta);
    if (total_degree(beta) % 2) rhs = Rat(-1) * rhs;
    if (!mono_divides(beta, alpha)) return rhs.is_zero();
    const Monomial diff = mono_sub(alpha, beta);
    const DiffOp lhs =
        DiffOp::term(diff, Polynomial::constant(n, Rat(1) / Rat(mono_factorial(diff))));
    return lhs == rhs;
}

// Lemma 10.3 instance: theta x^b = sum_{g <= b} (-1)^{|g|} C(b,g) x^{b-g}
// (ad x)^g(theta), compared as actions on monomials up to max_degree.
inline bool check_theta_xbeta_identity(const DiffOp& theta, const Monomial& beta,
                                       int max_degree) {
    const int n = theta.nvars();
    const Polynomial xb = Polynomial::monomial(n, beta, Rat(1));
    std::vector<std::pair<Monomial, DiffOp>> rhs_terms;
    auto collect = [&](auto&& self, Monomial gamma, int pos) -> void {
        if (pos == n) {
            const int sign = total_degree(gamma) % 2 ? -1 : 1;
            const Rat c = Rat(sign) * Rat(mono_binomial(beta, gamma));
            rhs_terms.emplace_back(mono_sub(beta, gamma), c * theta.adx_pow(gamma));
            return;
        }
        for (int g = 0; g <= beta[pos]; ++g) {
            gamma[pos] = g;
            self(self, gamma, pos + 1);
        }
    };
    collect(collect, Monomial(n, 0), 0);
    for (int d = 0; d <= max_degree; ++d) {
        for (const auto& f : monomials_of_degree(n, d)) {
            const Polynomial fm = Polynomial::monomial(n, f, Rat(1));
            const Polynomial lhs = theta.apply(xb * fm);
            Polynomial rhs(n);
            for (const auto& [xpow, op] : rhs_terms)
                rhs += Polynomial::monomial(n, xpow, Rat(1)) * op.apply(fm);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

// eps_m acts as eps_1(eps_1 - 1)...(eps_1 - m + 1) on low degrees.
inline bool check_euler_product(int n, int m, int max_degree) {
    const DiffOp em = euler(n, m);
    const DiffOp e1 = euler(n, 1);
    for (int d = 0; d <= max_degree; ++d) {
        for (const auto& f : monomials_of_degree(n, d)) {
            const Polynomial fm = Polynomial::monomial(n, f, Rat(1));
            Polynomial iter = fm;
            for (int k = 0; k < m; ++k) iter = e1.apply(iter) - Rat(k) * iter;
            if (em.apply(fm) != iter) return false;
        }
    }
    return true;
}

}  // namespace detail

// A grid point: either generated from the seed (forms empty) or evaluated
// on the supplied arrangement.
struct GridPointSpec {
    int n = 0, r = 0, m = 0;
    std::vector<std::vector<Rat>> forms;
};

inline PointRecord evaluate_point(const GridPointSpec& spec, const PointOptions& opts) {
    PointRecord rec;
    const int n = spec.n, r = spec.r, m = spec.m;
    rec.n = n;
    rec.r = r;
    rec.m = m;
    rec.seed = opts.seed;
    const int bound = opts.degree_bound < 0 ? r + m + n : opts.degree_bound;

    Arrangement arr = spec.forms.empty() ? grid_arrangement(n, r, opts.seed)
                                         : Arrangement(n, spec.forms);
    const auto generic = check_generic(arr);
    rec.generic_ok = std::holds_alternative<bool>(generic);
    if (!rec.generic_ok) {
        detail::record_fail(rec, "arrangement not generic, witness " +
                                     subset_label(std::get<SubsetH>(generic)));
        rec.pass = false;
        rec.classification = freeness_case_name(classify(n, r, m));
        return rec;
    }
    const FreenessCase fcase = classify(n, r, m);
    rec.classification = freeness_case_name(fcase);

    try {
        if (fcase != FreenessCase::NonFree) {
            rec.free_case = true;
            BasisResult basis = construct_basis(arr, m, opts.seed + 1);
            rec.basis_count = static_cast<int>(basis.ops.size());
            rec.extension_forms = basis.extension_forms;
            Arrangement full = arr;
            if (!basis.extension_forms.empty()) {
                auto forms = arr.forms();
                for (const auto& f : basis.extension_forms) forms.push_back(f);
                full = Arrangement(n, std::move(forms));
            }
            rec.exp_observed = observed_exponents(basis.ops);
            rec.exp_expected = expected_exponents(n, r, m);
            rec.exp_ok = rec.exp_observed == rec.exp_expected;
            if (!rec.exp_ok) detail::record_fail(rec, "exponent multiset mismatch");
            rec.sums_ok = exponents_satisfy_sums(rec.exp_observed, n, r, m);
            if (!rec.sums_ok) detail::record_fail(rec, "exponent sum identities fail");
            if (opts.with_saito) {
                rec.saito_ran = true;
                rec.saito = saito_holm_check(basis.ops, arr);
                if (!rec.saito.basis || is_zero(rec.saito.c))
                    detail::record_fail(rec, "Saito-Holm certification failed");
            }
            rec.hilbert = hilbert_from_exponents(rec.exp_observed, n, r + m);
        } else {
            rec.nonfree_case = true;
            const XiGenerators gens = minimal_generators_Xi(arr, m);
            rec.gen_count = static_cast<long>(gens.ops.size());
            rec.gen_count_expected =
                Int(binomial(r, n - 1) - binomial(r - m, n - 1)).get_si();
            if (rec.gen_count != rec.gen_count_expected)
                detail::record_fail(rec, "generator count differs from the closed form");
            rec.gen_rank_ok = detail::generators_k_independent(gens.ops, n, m, r - n + 1);
            if (!rec.gen_rank_ok) detail::record_fail(rec, "generators not K-independent");
            rec.gen_members_ok = true;
            Polynomial pi = Polynomial::constant(n, Rat(1));
            for (int i = 0; i < m; ++i) pi = pi * arr.form_poly(i);
            for (const auto& op : gens.ops)
                if (!in_DmA(op, arr) || !op.apply(pi).is_zero()) rec.gen_members_ok = false;
            if (!rec.gen_members_ok) detail::record_fail(rec, "generator membership fails");
            rec.inequality_ok = rec.gen_count + 1 > sm_tm(n, m).s_m;
            if (!rec.inequality_ok) detail::record_fail(rec, "non-freeness inequality fails");

            if (opts.with_resolution) {
                rec.res_ran = true;
                FreeComplex fres = build_F_resolution(arr, m);
                VerifyOptions vo;
                vo.degree_bound = bound;
                vo.seed = opts.seed + 2;
                rec.res_report = verify_resolution(fres, arr, m, vo);
                if (!rec.res_report.passed())
                    detail::record_fail(rec, "resolution verification failed");
                rec.hilbert = hilbert_from_resolution(fres, n, m, r + m);
            }
            if (opts.with_jet) {
                rec.jet_ran = true;
                const PresentationMatrix jp = jet_presentation(arr, m);
                const PresentationMatrix cp = coker_presentation(arr, m);
                rec.transpose_ok = jet_transpose_equal(jp, cp);
                if (!rec.transpose_ok) detail::record_fail(rec, "transpose equality fails");
                rec.euler_witness_ok = euler_hits_Qe0(arr, m);
                if (!rec.euler_witness_ok) detail::record_fail(rec, "Q e_0 witness fails");
                const Polynomial q = defining_poly(arr);
                rec.kernel_witness_ok = true;
                for (int k = 1; k <= m; ++k)
                    for (const auto& g : minimal_generators_Xi(arr, k).ops)
                        if (!in_kernel_delta_bar0(gamma_k(g, arr), q, m))
                            rec.kernel_witness_ok = false;
                if (!rec.kernel_witness_ok)
                    detail::record_fail(rec, "gamma_k kernel witness fails");
                FreeComplex jm = build_Jm_resolution(arr, m);
                VerifyOptions vo;
                vo.degree_bound = bound;
                vo.seed = opts.seed + 3;
                rec.jet_report = verify_Jm_resolution(jm, arr, m, vo);
                if (!rec.jet_report.passed())
                    detail::record_fail(rec, "jet resolution verification failed");
            }
            if (opts.with_dimension_lemmas) {
                rec.dims_ok = true;
                DeltaCache cache(arr, m);
                for (int j = 1; j <= n; ++j) {
                    for (const auto& h : k_subsets(r, n - j)) {
                        try {
                            delta_space(cache, h);   // throws unless dim = C(m+j-1, j-1)
                            e_bracket(cache, h);     // throws unless dim = C(r-m-n+j-1, j-1)
                        } catch (const std::exception& e) {
                            rec.dims_ok = false;
                            detail::record_fail(rec, std::string("dimension lemma: ") + e.what());
                        }
                    }
                }
            }
            if (opts.with_complex_exactness) {
                rec.complexes_ok = true;
                DeltaCache cache(arr, m);
                GradedKComplex cc = build_C_complex(cache);
                if (!cc.dd_zero() || !cc.check_exact().exact) {
                    rec.complexes_ok = false;
                    detail::record_fail(rec, "C complex not exact");
                }
                GradedKComplex ec = build_E_complex(cache);
                if (!ec.dd_zero() || !ec.check_exact().exact) {
                    rec.complexes_ok = false;
                    detail::record_fail(rec, "E complex not exact");
                }
                Rng rng(opts.seed + 4);
                for (int t = 0; t < opts.sigma_samples; ++t) {
                    const int size = static_cast<int>(rng.uniform(1, n + m - 1));
                    SubsetH sigma;
                    while (static_cast<int>(sigma.size()) < size) {
                        const int e = static_cast<int>(rng.uniform(0, r - 1));
                        if (position_in(sigma, e) == static_cast<int>(sigma.size()) ||
                            sigma[position_in(sigma, e)] != e)
                            sigma = subset_insert(sigma, e);
                    }
                    GradedKComplex es = build_E_sigma_complex(cache, sigma);
                    if (!es.dd_zero() || !es.check_exact().exact) {
                        rec.complexes_ok = false;
                        detail::record_fail(rec, "E_sigma complex not exact for sigma " +
                                                     subset_label(sigma));
                    }
                }
            }
            if (opts.with_calculus) {
                rec.calculus_ok = true;
                Rng rng(opts.seed + 5);
                for (int t = 0; t < opts.calculus_instances && rec.calculus_ok; ++t) {
                    Monomial alpha(n, 0), beta(n, 0);
                    for (int tot = static_cast<int>(rng.uniform(1, m + 2)); tot > 0; --tot)
                        alpha[rng.uniform(0, n - 1)] += 1;
                    for (int tot = static_cast<int>(rng.uniform(0, 3)); tot > 0; --tot)
                        beta[rng.uniform(0, n - 1)] += 1;
                    if (!detail::check_partial_ad_identity(n, alpha, beta))
                        rec.calculus_ok = false;
                }
                for (int t = 0; t < std::max(1, opts.calculus_instances / 10) && rec.calculus_ok;
                     ++t) {
                    const int order = static_cast<int>(rng.uniform(1, m + 1));
                    const int pdeg = static_cast<int>(rng.uniform(0, 2));
                    const DiffOp theta = detail::random_diffop(n, order, pdeg, rng);
                    Monomial beta(n, 0);
                    for (int tot = static_cast<int>(rng.uniform(1, 3)); tot > 0; --tot)
                        beta[rng.uniform(0, n - 1)] += 1;
                    if (!detail::check_theta_xbeta_identity(theta, beta, m + 5))
                        rec.calculus_ok = false;
                }
                if (!detail::check_euler_product(n, m, m + 3)) rec.calculus_ok = false;
                if (!rec.calculus_ok)
                    detail::record_fail(rec, "operator calculus identities fail");
            }
        }
    } catch (const std::exception& e) {
        detail::record_fail(rec, std::string("exception: ") + e.what());
    }
    rec.pass = rec.failures.empty();
    return rec;
}

struct GridConfig {
    std::vector<GridPointSpec> triples;
    PointOptions options;
};

// The default grid covers the acceptance ranges: every free point of the
// Saito sweep plus the four non-free resolution points.
inline GridConfig default_grid() {
    GridConfig cfg;
    auto add = [&cfg](int n, int r, int m) { cfg.triples.push_back({n, r, m, {}}); };
    for (int rr = 2; rr <= 6; ++rr)
        for (int mm = 1; mm <= 4; ++mm) add(2, rr, mm);
    for (int rr = 3; rr <= 7; ++rr) add(3, rr, rr - 2);
    for (int rr = 4; rr <= 7; ++rr) add(4, rr, rr - 3);
    for (int rr : {4, 5})
        for (int mm = rr - 2 + 1; mm <= rr; ++mm) add(3, rr, mm);
    add(3, 5, 1);
    add(3, 6, 1);
    add(3, 6, 2);
    add(4, 6, 1);
    return cfg;
}

struct GridReport {
    GridConfig config;
    std::vector<PointRecord> points;
    bool all_pass = false;
};

inline int hadiff_thread_count() {
    const char* env = std::getenv("HADIFF_THREADS");
    if (env) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Points run in a small worker pool; records land in input order so the
// report is deterministic regardless of scheduling.
inline GridReport run_grid(const GridConfig& cfg) {
    GridReport report;
    report.config = cfg;
    report.points.resize(cfg.triples.size());
    std::atomic<std::size_t> next{0};
    const int nthreads =
        std::max(1, std::min<int>(hadiff_thread_count(), static_cast<int>(cfg.triples.size())));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.triples.size()) return;
            report.points[i] = evaluate_point(cfg.triples[i], cfg.options);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    report.all_pass = true;
    for (const auto& p : report.points) report.all_pass = report.all_pass && p.pass;
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json point_record_to_json(const PointRecord& rec) {
    Json j;
    j["n"] = rec.n;
    j["r"] = rec.r;
    j["m"] = rec.m;
    j["seed"] = rec.seed;
    j["classification"] = rec.classification;
    j["generic_ok"] = rec.generic_ok;
    j["pass"] = rec.pass;
    if (rec.free_case) {
        Json f;
        f["basis_count"] = rec.basis_count;
        f["exp_observed"] = exp_multiset_to_json(rec.exp_observed);
        f["exp_expected"] = exp_multiset_to_json(rec.exp_expected);
        f["exp_ok"] = rec.exp_ok;
        f["sum_identities_ok"] = rec.sums_ok;
        if (rec.saito_ran) f["saito"] = saito_result_to_json(rec.saito);
        if (!rec.extension_forms.empty()) {
            Json ext = Json::array();
            for (const auto& v : rec.extension_forms) ext.push_back(rat_vector_to_json(v));
            f["extension_forms"] = std::move(ext);
        }
        j["free"] = std::move(f);
    }
    if (rec.nonfree_case) {
        Json nf;
        nf["generator_count"] = rec.gen_count;
        nf["generator_count_expected"] = rec.gen_count_expected;
        nf["generators_independent"] = rec.gen_rank_ok;
        nf["generators_member_ok"] = rec.gen_members_ok;
        nf["nonfreeness_inequality_ok"] = rec.inequality_ok;
        if (rec.res_ran) nf["resolution"] = verify_report_to_json(rec.res_report);
        if (rec.jet_ran) {
            nf["jet"] = verify_report_to_json(rec.jet_report);
            nf["transpose_ok"] = rec.transpose_ok;
            nf["euler_witness_ok"] = rec.euler_witness_ok;
            nf["kernel_witness_ok"] = rec.kernel_witness_ok;
        }
        nf["dimension_lemmas_ok"] = rec.dims_ok;
        nf["complex_exactness_ok"] = rec.complexes_ok;
        nf["operator_calculus_ok"] = rec.calculus_ok;
        j["nonfree"] = std::move(nf);
    }
    if (!rec.hilbert.empty()) j["hilbert"] = rec.hilbert;
    if (!rec.failures.empty()) j["failures"] = rec.failures;
    return j;
}

inline Json grid_report_to_json(const GridReport& rep) {
    Json j;
    Json cfg;
    Json triples = Json::array();
    for (const auto& t : rep.config.triples) {
        Json tj = Json::array({t.n, t.r, t.m});
        triples.push_back(std::move(tj));
    }
    cfg["triples"] = std::move(triples);
    cfg["seed"] = rep.config.options.seed;
    cfg["degree_bound"] = rep.config.options.degree_bound;
    cfg["sigma_samples"] = rep.config.options.sigma_samples;
    cfg["calculus_instances"] = rep.config.options.calculus_instances;
    j["config"] = std::move(cfg);
    Json pts = Json::array();
    for (const auto& p : rep.points) pts.push_back(point_record_to_json(p));
    j["points"] = std::move(pts);
    j["all_pass"] = rep.all_pass;
    return j;
}

inline std::string grid_summary_table(const GridReport& rep) {
    std::ostringstream os;
    os << "  n  r  m  case      check                       result\n";
    for (const auto& p : rep.points) {
        std::ostringstream head;
        head << "  " << p.n << "  " << p.r << "  " << p.m << "  ";
        std::string pad = p.classification;
        pad.resize(8, ' ');
        head << pad << "  ";
        std::string detail;
        if (!p.free_case && !p.nonfree_case) {
            detail = "not evaluated";
        } else if (p.free_case) {
            detail = "basis " + std::to_string(p.basis_count) + " ops";
            if (p.saito_ran)
                detail += ", saito " + std::string(p.saito.basis ? "ok" : "FAIL") + " (" +
                          p.saito.method + ")";
        } else {
            detail = "gens " + std::to_string(p.gen_count);
            if (p.res_ran) detail += ", res " + std::string(p.res_report.passed() ? "ok" : "FAIL");
            if (p.jet_ran) detail += ", jet " + std::string(p.jet_report.passed() ? "ok" : "FAIL");
        }
        detail.resize(std::max<std::size_t>(detail.size(), 26), ' ');
        os << head.str() << detail << "  " << (p.pass ? "pass" : "FAIL") << "\n";
        for (const auto& f : p.failures) os << "        ! " << f << "\n";
    }
    os << (rep.all_pass ? "all points pass\n" : "FAILURES present\n");
    return os.str();
}

}  // namespace hadiff
