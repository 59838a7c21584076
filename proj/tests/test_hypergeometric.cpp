#include <catch2/catch_amalgamated.hpp>

#include "ahg/hypergeometric.hpp"

using namespace ahg;

namespace {

IntVec iv(std::initializer_list<long> xs) {
    IntVec out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

PointConfiguration dwork(size_t n) {
    PointConfiguration c;
    c.n = n;
    c.points.push_back(IntVec(n, 1));
    for (size_t i = 0; i < n; ++i) {
        IntVec a(n, 0);
        a[i] = static_cast<long>(n);
        c.points.push_back(a);
    }
    return c;
}

PointConfiguration hexagon() {
    PointConfiguration c;
    c.n = 2;
    c.points.push_back(iv({0, 0}));
    c.points.push_back(iv({1, 0}));
    c.points.push_back(iv({0, 1}));
    c.points.push_back(iv({-1, 1}));
    c.points.push_back(iv({-1, 0}));
    c.points.push_back(iv({0, -1}));
    c.points.push_back(iv({1, -1}));
    return c;
}

mpz_class central_binomial(unsigned long l) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), 2 * l, l);
    return out;
}

}  // namespace

TEST_CASE("L_+ enumeration") {
    auto d = enumerate_Lplus(dwork(2), 4);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == LplusElement{0, 0, 0});
    CHECK(d[1] == LplusElement{-2, 1, 1});
    CHECK(d[2] == LplusElement{-4, 2, 2});

    CHECK(enumerate_Lplus(hexagon(), 0) == std::vector<LplusElement>{LplusElement{0, 0, 0, 0, 0, 0, 0}});

    auto h = enumerate_Lplus(hexagon(), 2);
    REQUIRE(h.size() == 4);
    CHECK(h[0] == LplusElement{0, 0, 0, 0, 0, 0, 0});
    // the three opposite-pair solutions, each with l_0 = -2
    CHECK(h[1] == LplusElement{-2, 0, 0, 1, 0, 0, 1});
    CHECK(h[2] == LplusElement{-2, 0, 1, 0, 0, 1, 0});
    CHECK(h[3] == LplusElement{-2, 1, 0, 0, 1, 0, 0});
}

TEST_CASE("Phi for the Dwork family gives central binomial coefficients") {
    auto phi = phi_series(dwork(2), 8);
    for (int l = 0; l <= 4; ++l) CHECK(phi.get({l, l}) == central_binomial(static_cast<unsigned long>(l)));
    CHECK(phi.get({1, 0}) == 0);
    // constant term of any Phi is 1
    CHECK(phi.get({0, 0}) == 1);
    CHECK(phi_series(hexagon(), 5).get({0, 0, 0, 0, 0, 0}) == 1);
}

TEST_CASE("Phi for the hexagon: degree-2 coefficients") {
    auto phi = phi_series(hexagon(), 2);
    CHECK(phi.get({1, 0, 0, 1, 0, 0}) == 2);
    CHECK(phi.get({0, 1, 0, 0, 1, 0}) == 2);
    CHECK(phi.get({0, 0, 1, 0, 0, 1}) == 2);
    CHECK(phi.get({1, 1, 0, 0, 0, 0}) == 0);
    CHECK(phi.terms().size() == 4);  // constant + three pairs
}

TEST_CASE("coefficient-extraction identity against the Laurent-power oracle") {
    for (const auto& cfg : {dwork(2), hexagon()}) {
        auto phi = phi_series(cfg, 6);
        for (int k = 0; k <= 6; ++k) {
            auto layer = phi_layer_by_laurent_power(cfg, k);
            for (const auto& [e, c] : layer.terms()) CHECK(phi.get(e) == c);
            // and the layer accounts for every degree-k term of Phi
            size_t phiCount = 0;
            for (const auto& [e, c] : phi.terms())
                if (total_degree(e) == k) ++phiCount;
            CHECK(phiCount == layer.terms().size());
        }
    }
}

TEST_CASE("Phi has Gauss norm exactly 1") {
    for (const auto& cfg : {dwork(2), dwork(3), hexagon()}) {
        auto phi = phi_series(cfg, 6);
        CHECK(phi.get(Exponent(cfg.N(), 0)) == 1);
        for (unsigned p : {3u, 5u}) CHECK(min_valuation(phi, p) == Valuation(0, 1));
    }
}

TEST_CASE("Phi_1 is the low-degree sub-sum of Phi") {
    auto cfg = dwork(2);
    auto p3 = phi1_series(cfg, 3, 9);
    CHECK(p3.get({0, 0}) == 1);
    CHECK(p3.get({1, 1}) == 2);
    CHECK(p3.terms().size() == 2);  // 1 + 2u

    auto p5 = phi1_series(cfg, 5, 9);
    CHECK(p5.get({2, 2}) == 6);
    CHECK(p5.terms().size() == 3);  // 1 + 2u + 6u^2

    // structural identity against the full series
    auto phi = phi_series(cfg, 9);
    for (const auto& [e, c] : p5.terms()) CHECK(phi.get(e) == c);
    for (const auto& [e, c] : phi.terms())
        if (total_degree(e) <= 4) CHECK(p5.get(e) == c);

    auto hex1 = phi1_series(hexagon(), 3, 6);
    CHECK(hex1.get({0, 0, 0, 0, 0, 0}) == 1);
}

TEST_CASE("Euler operators annihilate lambda_0^(-1) Phi termwise") {
    for (const auto& cfg : {dwork(2), dwork(3), hexagon()}) {
        for (size_t i = 0; i <= cfg.n; ++i) {
            auto res = apply_operator(HypergeometricOperator::euler(cfg, i), cfg, 6);
            CHECK(res.identically_zero());
        }
    }
}

TEST_CASE("box operators vanish on the reliable window") {
    auto cfg = dwork(2);
    auto op = HypergeometricOperator::box(cfg, iv({-2, 1, 1}));
    auto res = apply_operator(op, cfg, 9);
    CHECK(res.reliable_part_is_zero());
    // truncation does leave unreliable boundary terms
    bool sawUnreliable = false;
    for (const auto& [e, cb] : res.terms)
        if (!cb.second && cb.first != 0) sawUnreliable = true;
    CHECK(sawUnreliable);

    auto hex = hexagon();
    for (const auto& l : relation_lattice_basis(hex)) {
        auto r = apply_operator(HypergeometricOperator::box(hex, l), hex, 6);
        CHECK(r.reliable_part_is_zero());
    }

    // the zero relation gives the zero operator
    auto zero = apply_operator(HypergeometricOperator::box(cfg, iv({0, 0, 0})), cfg, 6);
    CHECK(zero.identically_zero());

    // non-relations are rejected
    CHECK_THROWS_AS(HypergeometricOperator::box(cfg, iv({1, 0, 0})), std::invalid_argument);
}
