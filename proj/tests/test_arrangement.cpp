#include <catch2/catch_amalgamated.hpp>

#include "hadiff/arrangement.hpp"
#include "hadiff/io.hpp"

using namespace hadiff;

namespace {

std::vector<Rat> rv(std::initializer_list<long> xs) {
    std::vector<Rat> v;
    for (long x : xs) v.push_back(Rat(x));
    return v;
}

Arrangement coords_plus(int n, std::vector<std::vector<Rat>> extra) {
    std::vector<std::vector<Rat>> forms;
    for (int i = 0; i < n; ++i) {
        std::vector<Rat> f(n, Rat(0));
        f[i] = Rat(1);
        forms.push_back(f);
    }
    for (auto& f : extra) forms.push_back(std::move(f));
    return Arrangement(n, std::move(forms));
}

}  // namespace

TEST_CASE("arrangement construction") {
    CHECK_THROWS(Arrangement(2, {rv({1, 0})}));                 // r < n
    CHECK_THROWS(Arrangement(2, {rv({1, 0}), rv({0, 0})}));     // zero form
    CHECK_THROWS(Arrangement(2, {rv({1, 0}), rv({0, 1, 2})}));  // arity
    // forms become primitive with the input sign preserved
    const Arrangement a(2, {{rat(2), rat(4)}, {rat(0), rat(-3)}});
    CHECK(a.form(0) == rv({1, 2}));
    CHECK(a.form(1) == rv({0, -1}));
}

TEST_CASE("genericity") {
    const Arrangement a = coords_plus(3, {rv({1, 1, 1})});
    CHECK(std::holds_alternative<bool>(check_generic(a)));

    const Arrangement dup(2, {rv({1, 0}), rv({0, 1}), rv({1, 0})});
    const auto res = check_generic(dup);
    REQUIRE(std::holds_alternative<SubsetH>(res));
    CHECK(std::get<SubsetH>(res) == SubsetH{0, 2});

    CHECK(is_generic(Arrangement(2, {rv({1, 0}), rv({0, 1})})));
}

TEST_CASE("defining polynomial") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    CHECK(defining_poly(Arrangement(2, {rv({1, 0}), rv({0, 1})})) == x * y);
    const Polynomial x3 = Polynomial::variable(3, 0), y3 = Polynomial::variable(3, 1),
                     z3 = Polynomial::variable(3, 2);
    CHECK(defining_poly(Arrangement(3, {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})})) ==
          x3 * y3 * z3);
    CHECK(defining_poly(Arrangement(2, {rv({1, 0}), rv({0, 1}), rv({1, 1})})) ==
          x * x * y + x * y * y);
}

TEST_CASE("delta_H") {
    const Arrangement a = coords_plus(3, {rv({1, 1, 1})});
    CHECK(delta_H(a, {0, 1}) == rv({0, 0, 1}));
    CHECK(delta_H(a, {0, 3}) == rv({0, 1, -1}));
    const Arrangement line(2, {rv({1, -1}), rv({0, 1})});
    CHECK(delta_H(line, {0}) == rv({1, 1}));
    const Arrangement degenerate(3, {rv({1, 0, 0}), rv({2, 0, 0}), rv({0, 0, 1})});
    CHECK_THROWS_AS(delta_H(degenerate, {0, 1}), GenericityViolation);

    SECTION("delta_H kills exactly the forms of H") {
        const Arrangement b = coords_plus(3, {rv({1, 1, 1}), rv({1, 2, 3})});
        for (const auto& h : k_subsets(b.r(), 2)) {
            const auto d = delta_H(b, h);
            for (int i = 0; i < b.r(); ++i) {
                Rat dot(0);
                for (int j = 0; j < 3; ++j) dot += d[j] * b.form(i)[j];
                const bool in_h = std::find(h.begin(), h.end(), i) != h.end();
                CHECK(is_zero(dot) == in_h);
            }
        }
    }
}

TEST_CASE("pH products") {
    const Arrangement a = coords_plus(3, {rv({1, 1, 1})});
    const Polynomial z = Polynomial::variable(3, 2);
    const Polynomial w = Polynomial::linear_form(rv({1, 1, 1}));
    CHECK(pH_product(a, {{0, 1}}) == z * w);
    CHECK(pH_product(a, {{0, 1}, {0, 1}}) == z * w);
    const Arrangement b(2, {rv({1, 0}), rv({0, 1})});
    CHECK(pH_product(b, {{0}}) == Polynomial::variable(2, 1));

    SECTION("deg P_H = r - n + 1") {
        const Arrangement c = coords_plus(3, {rv({1, 1, 1}), rv({1, -2, 5})});
        for (const auto& h : k_subsets(c.r(), 2)) CHECK(pH(c, h).degree() == c.r() - 3 + 1);
    }
}

TEST_CASE("generic extension") {
    const Arrangement base(3, {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})});
    const Arrangement same = generic_extension(base, 3, 5);
    CHECK(same.r() == 3);
    CHECK(same.forms() == base.forms());

    const Arrangement ext = generic_extension(base, 4, 5);
    CHECK(ext.r() == 4);
    CHECK(is_generic(ext));
    for (int i = 0; i < 3; ++i) CHECK(ext.form(i) == base.form(i));

    const Arrangement two(2, {rv({1, 0}), rv({0, 1})});
    const Arrangement five = generic_extension(two, 5, 9);
    CHECK(five.r() == 5);
    CHECK(is_generic(five));

    SECTION("deterministic in the seed") {
        const Arrangement e1 = generic_extension(base, 6, 31415);
        const Arrangement e2 = generic_extension(base, 6, 31415);
        const Arrangement e3 = generic_extension(base, 6, 31416);
        CHECK(e1.forms() == e2.forms());
        CHECK(e1.forms() != e3.forms());
    }
}

TEST_CASE("dual basis law") {
    // delta_H^{r-n+1} * P_{H'} vanishes iff H' != H, and the P_H span S_{r-n+1}
    const Arrangement a = coords_plus(3, {rv({1, 1, 1}), rv({1, 2, 4})});
    const int m = a.r() - a.n() + 1;
    const auto subsets = k_subsets(a.r(), a.n() - 1);
    const auto monos = monomials_of_degree(3, m);
    QMatrix coeffs(static_cast<int>(subsets.size()), static_cast<int>(monos.size()));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const Polynomial tower = pH(a, subsets[i]);
        for (std::size_t t = 0; t < monos.size(); ++t)
            coeffs.at(static_cast<int>(i), static_cast<int>(t)) = tower.coeff(monos[t]);
        Polynomial dual = Polynomial::constant(3, Rat(1));
        const Polynomial d = Polynomial::linear_form(delta_H(a, subsets[i]));
        for (int k = 0; k < m; ++k) dual = dual * d;
        for (std::size_t j = 0; j < subsets.size(); ++j) {
            Polynomial acted(3);
            for (const auto& [mono, c] : dual.terms())
                acted += c * pH(a, subsets[j]).partial(mono);
            CHECK(acted.is_zero() == (i != j));
        }
    }
    CHECK(coeffs.rank() == static_cast<int>(subsets.size()));
    CHECK(static_cast<long>(subsets.size()) == binomial(a.r(), a.n() - 1).get_si());
}

TEST_CASE("arrangement JSON round trip") {
    const Arrangement a = coords_plus(3, {rv({1, -2, 3})});
    const Json j = arrangement_to_json(a);
    CHECK(j["n"] == 3);
    const Arrangement b = arrangement_from_json(j);
    CHECK(b.forms() == a.forms());
}
