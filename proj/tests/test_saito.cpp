#include <catch2/catch_amalgamated.hpp>

#include "hadiff/freebasis.hpp"
#include "hadiff/grid.hpp"
#include "hadiff/saito.hpp"

using namespace hadiff;

namespace {

const Arrangement& cross2() {
    static Arrangement a(2, {{rat(1), rat(0)}, {rat(0), rat(1)}});
    return a;
}

}  // namespace

TEST_CASE("s_m and t_m") {
    for (int m = 1; m <= 5; ++m) {
        CHECK(sm_tm(2, m).s_m == m + 1);
        CHECK(sm_tm(2, m).t_m == m);
    }
    CHECK(sm_tm(3, 2).s_m == 6);
    CHECK(sm_tm(3, 2).t_m == 3);
    CHECK(sm_tm(3, 1).s_m == 3);
    CHECK(sm_tm(3, 1).t_m == 1);
    CHECK_THROWS(sm_tm(1, 1));
    CHECK_THROWS(sm_tm(2, 0));
}

TEST_CASE("coefficient matrix") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const DiffOp xd1 = DiffOp::term({1, 0}, x);
    const DiffOp yd2 = DiffOp::term({0, 1}, y);
    const PolyMatrix mm = coefficient_matrix({xd1, yd2});
    REQUIRE(mm.rows() == 2);
    CHECK(mm.at(0, 0) == x);
    CHECK(mm.at(0, 1).is_zero());
    CHECK(mm.at(1, 0).is_zero());
    CHECK(mm.at(1, 1) == y);

    const PolyMatrix me = coefficient_matrix({euler(2, 1), yd2});
    CHECK(me.at(0, 0) == x);  // eps_1 column is (x, y)
    CHECK(me.at(1, 0) == y);

    const PolyMatrix mz = coefficient_matrix({DiffOp::zero(2, 1), yd2});
    CHECK(mz.at(0, 0).is_zero());
    CHECK(mz.at(1, 0).is_zero());

    CHECK_THROWS(coefficient_matrix({xd1}));  // wrong count for s_1 = 2
}

TEST_CASE("Saito-Holm certification") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const DiffOp xd1 = DiffOp::term({1, 0}, x);
    const DiffOp yd2 = DiffOp::term({0, 1}, y);

    SECTION("diagonal basis of the cross") {
        const SaitoResult res = saito_holm_check({xd1, yd2}, cross2());
        CHECK(res.basis);
        CHECK(res.c == rat(1));
        CHECK(res.det_degree == 2);
        CHECK(res.members_ok);
    }

    SECTION("membership precheck rejects x d_2") {
        const DiffOp xd2 = DiffOp::term({0, 1}, x);
        const SaitoResult res = saito_holm_check({xd1, xd2}, cross2());
        CHECK_FALSE(res.basis);
        CHECK_FALSE(res.members_ok);
        CHECK(res.failed_member == 1);
        CHECK(res.method == "rejected");
    }

    SECTION("repeated column fails") {
        const SaitoResult res = saito_holm_check({xd1, xd1}, cross2());
        CHECK(res.members_ok);
        CHECK_FALSE(res.basis);
        CHECK(is_zero(res.c));
    }

    SECTION("all methods agree") {
        const Arrangement a = grid_arrangement(3, 4, 3);
        const BasisResult basis = basis_eq(a, 2);
        SaitoResult expected;
        for (const std::string method : {"bareiss", "interpolation", "certificate"}) {
            SaitoOptions opts;
            opts.force_method = method;
            const SaitoResult res = saito_holm_check(basis.ops, a, opts);
            CHECK(res.basis);
            CHECK(res.method == method);
            if (method == "bareiss") expected = res;
            else CHECK(res.c == expected.c);
        }
    }

    SECTION("random members of D^(m) have det in <Q^{t_m}>") {
        // Divisibility holds for any member tuple, basis or not.
        const Arrangement a = grid_arrangement(3, 4, 3);
        Rng rng(8);
        const auto subsets = k_subsets(a.r(), 2);
        const int m = 2;
        std::vector<DiffOp> ops;
        for (long i = 0; i < sm_tm(3, m).s_m; ++i) {
            if (rng.uniform(0, 3) == 0) {
                ops.push_back(euler(3, m));
            } else {
                std::vector<SubsetH> tuple;
                for (int t = 0; t < m; ++t)
                    tuple.push_back(
                        subsets[rng.uniform(0, static_cast<long>(subsets.size()) - 1)]);
                ops.push_back(holm_generator(a, tuple));
            }
        }
        const Polynomial det = polymat_det(coefficient_matrix(ops));
        if (!det.is_zero()) {
            std::vector<Polynomial> factors;
            for (int i = 0; i < a.r(); ++i) factors.push_back(a.form_poly(i));
            CHECK(exact_divide_by_forms(det, factors, static_cast<int>(sm_tm(3, m).t_m))
                      .has_value());
        }
    }
}

TEST_CASE("degree sum criterion") {
    const Arrangement a = grid_arrangement(3, 4, 3);
    const BasisResult basis = basis_eq(a, 2);
    CHECK(degree_sum_check(basis.ops, a));

    // one wrong-degree operator flips the result
    std::vector<DiffOp> tampered = basis.ops;
    tampered[0] = Polynomial::variable(3, 0) * tampered[0];
    CHECK_FALSE(degree_sum_check(tampered, a));

    SECTION("m = r-n+1 bases hit r t_m on the nose") {
        for (int r = 4; r <= 6; ++r) {
            const Arrangement b = grid_arrangement(3, r, 21);
            const int m = r - 2;
            CHECK(degree_sum_check(basis_eq(b, m).ops, b));
        }
    }
}

TEST_CASE("exponent multisets") {
    const Arrangement a = grid_arrangement(3, 4, 3);
    const ExpMultiset e = observed_exponents(basis_eq(a, 2).ops);
    CHECK(e == ExpMultiset{{2, 6}});
    CHECK(exponents_satisfy_sums(e, 3, 4, 2));
    CHECK_FALSE(exponents_satisfy_sums(ExpMultiset{{2, 5}}, 3, 4, 2));
}
