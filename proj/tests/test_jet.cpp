#include <catch2/catch_amalgamated.hpp>

#include "hadiff/grid.hpp"
#include "hadiff/jet.hpp"

using namespace hadiff;

TEST_CASE("bullet action") {
    const Arrangement a = grid_arrangement(3, 3, 1);  // xyz
    const Polynomial q = defining_poly(a);
    const Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1),
                     z = Polynomial::variable(3, 2);

    SECTION("m = 1 recovers the Jacobian generators") {
        const auto gens = jm_generators(a, 1);
        REQUIRE(gens.size() == 3);
        CHECK(gens[0].comp(Monomial(3, 0)) == y * z);
        CHECK(gens[1].comp(Monomial(3, 0)) == x * z);
        CHECK(gens[2].comp(Monomial(3, 0)) == x * y);
    }

    SECTION("the e_0 component is always theta * Q") {
        const DiffOp theta = DiffOp::term({1, 1, 0}, Polynomial::constant(3, rat(1, 2)));
        const BetaVector bv = bullet(theta, q, 2);
        CHECK(bv.comp(Monomial(3, 0)) == theta.apply(q));
    }

    SECTION("ad-x route equals the Taylor route") {
        // (1/a!) d^a bullet Q has beta-component (1/(a-b)!) d^{a-b} * Q
        const Arrangement b = grid_arrangement(3, 6, 2);
        const Polynomial qb = defining_poly(b);
        const int m = 2;
        for (const auto& alpha : monomials_up_to_degree(3, m)) {
            if (total_degree(alpha) == 0) continue;
            const Rat c = Rat(1) / Rat(mono_factorial(alpha));
            const BetaVector bv =
                bullet(DiffOp::term(alpha, Polynomial::constant(3, c)), qb, m);
            for (const auto& beta : monomials_up_to_degree(3, m - 1)) {
                Polynomial expect(3);
                if (mono_divides(beta, alpha)) {
                    const Monomial d = mono_sub(alpha, beta);
                    expect = (Rat(1) / Rat(mono_factorial(d))) * qb.partial(d);
                }
                CHECK(bv.comp(beta) == expect);
            }
        }
    }
}

TEST_CASE("J_m generators") {
    const Arrangement a = grid_arrangement(3, 6, 2);
    const auto gens = jm_generators(a, 2);
    CHECK(gens.size() == 9);  // binom(n+m, m) - 1 = binom(5,2) - 1
    const Polynomial q = defining_poly(a);
    std::size_t i = 0;
    for (const auto& alpha : monomials_up_to_degree(3, 2)) {
        if (total_degree(alpha) == 0) continue;
        const Rat c = Rat(1) / Rat(mono_factorial(alpha));
        CHECK(gens[i].comp(Monomial(3, 0)) == c * q.partial(alpha));
        ++i;
    }
}

TEST_CASE("presentation matrices") {
    const Arrangement a = grid_arrangement(3, 5, 5);

    SECTION("m = 1 is the Jacobian column and row") {
        const PresentationMatrix cp = coker_presentation(a, 1);
        REQUIRE(cp.mat.cols() == 1);
        REQUIRE(cp.mat.rows() == 3);
        const Polynomial q = defining_poly(a);
        for (int i = 0; i < 3; ++i)
            CHECK(cp.mat.at(i, 0) == q.partial(unit_monomial(3, i)));

        const PresentationMatrix jp = jet_presentation(a, 1);
        REQUIRE(jp.mat.rows() == 1);
        REQUIRE(jp.mat.cols() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(jp.mat.at(0, i) == q.partial(unit_monomial(3, i)));
            CHECK(jp.mat.at(0, i).degree() == a.r() - 1);
        }
    }

    SECTION("entries vanish when beta is not below gamma") {
        const Arrangement b = grid_arrangement(3, 6, 2);
        const PresentationMatrix cp = coker_presentation(b, 2);
        for (std::size_t i = 0; i < cp.row_index.size(); ++i)
            for (std::size_t j = 0; j < cp.col_index.size(); ++j)
                if (!mono_divides(cp.col_index[j], cp.row_index[i]))
                    CHECK(cp.mat.at(static_cast<int>(i), static_cast<int>(j)).is_zero());
    }

    SECTION("transpose equality") {
        for (auto [n, r, m] : std::vector<std::array<int, 3>>{{3, 5, 1}, {3, 6, 2}, {4, 6, 1}}) {
            const Arrangement b = grid_arrangement(n, r, 80 + r);
            CHECK(jet_transpose_equal(jet_presentation(b, m), coker_presentation(b, m)));
        }
    }
}

TEST_CASE("Q e_0 witness and kernel witnesses") {
    const Arrangement a = grid_arrangement(3, 6, 6);
    for (int m = 1; m <= 2; ++m) CHECK(euler_hits_Qe0(a, m));
    const Polynomial q = defining_poly(a);
    for (int k = 1; k <= 2; ++k)
        for (const auto& g : minimal_generators_Xi(a, k).ops)
            CHECK(in_kernel_delta_bar0(gamma_k(g, a), q, 2));
    // an operator with theta * Q != 0 is not in the kernel
    CHECK_FALSE(in_kernel_delta_bar0(euler(3, 1), q, 2));
}

TEST_CASE("Jm resolution") {
    SECTION("shape and verification at (3,5,1)") {
        const Arrangement a = grid_arrangement(3, 5, 5);
        const FreeComplex fc = build_Jm_resolution(a, 1);
        REQUIRE(fc.modules.size() == 4);
        CHECK(fc.modules[0].rank() == 1);
        CHECK(fc.modules[1].rank() == 3);
        CHECK(fc.modules[2].rank() == 4);
        CHECK(fc.modules[3].rank() == 2);
        VerifyOptions vo;
        vo.seed = 11;
        const VerifyReport rep = verify_Jm_resolution(fc, a, 1, vo);
        for (const auto& f : rep.failures) INFO(f);
        CHECK(rep.passed());
        CHECK(rep.projective_dimension == 3);               // n
        CHECK(rep.regularity == a.r() - 3 - 2);             // r-n-2
    }

    SECTION("m = 2 carries the zeta block") {
        const Arrangement a = grid_arrangement(3, 6, 6);
        const FreeComplex fc = build_Jm_resolution(a, 2);
        REQUIRE(fc.modules.size() == 4);
        CHECK(fc.modules[0].rank() == 4);               // s_0 + s_1
        CHECK(fc.modules[1].rank() == 12);              // (s_1+s_2) + s_1
        CHECK(fc.modules[2].rank() == 5 + 9 + 1);       // w_1^(1) + w_1^(2) + zeta
        CHECK(fc.modules[3].rank() == 3 + 4);           // w_2^(1) + w_2^(2)
        CHECK(fc.modules[2].gens.back().label == "zeta_1");
        CHECK(fc.modules[2].gens.back().degree == 0);
        VerifyOptions vo;
        vo.seed = 11;
        const VerifyReport rep = verify_Jm_resolution(fc, a, 2, vo);
        for (const auto& f : rep.failures) INFO(f);
        CHECK(rep.passed());
        CHECK(rep.projective_dimension == 3);
        CHECK(rep.regularity == 1);
    }

    SECTION("dropping the gamma twist is caught") {
        const Arrangement a = grid_arrangement(3, 5, 5);
        FreeComplex fc = build_Jm_resolution(a, 1);
        // replace the first delta~_1 column by the untwisted generator
        const DiffOp raw = minimal_generators_Xi(a, 1).ops[0];
        const auto alphas = monomials_of_degree(3, 1);
        PolyMatrix& d1 = fc.maps[1];
        for (int i = 0; i < d1.rows(); ++i) d1.at(i, 0) = Polynomial::zero(3);
        for (std::size_t t = 0; t < alphas.size(); ++t)
            d1.at(static_cast<int>(t), 0) =
                Rat(mono_factorial(alphas[t])) * raw.coeff(alphas[t]);
        VerifyOptions vo;
        vo.degree_bound = 4;
        const VerifyReport rep = verify_Jm_resolution(fc, a, 1, vo);
        CHECK_FALSE(rep.dd_zero);
        CHECK_FALSE(rep.passed());
    }
}
