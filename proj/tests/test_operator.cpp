#include <catch2/catch_amalgamated.hpp>

#include "ahg/dwork.hpp"
#include "ahg/verify.hpp"

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

mpz_class fact(unsigned long k) { return factorial_mpz(k); }

}  // namespace

TEST_CASE("alpha* of zero is zero") {
    auto ctx = make_dwork_context(dwork(2), 3, 2, 4);
    SElement zero;
    zero.p = 3;
    zero.dx = 2;
    zero.dlambda = 4;
    auto out = alpha_star(ctx, zero);
    CHECK(out.eta.comp.empty());
    CHECK(out.eta.norm_valuation().is_infinite());
}

TEST_CASE("alpha* on the seed exposes the kernel polynomials") {
    auto ctx = make_dwork_context(dwork(2), 3, 2, 4);
    auto alpha = alpha_star(ctx, seed_element(ctx));
    // eta_rho = pi^(rho0 - 1) B_(p a0 - rho)(1,.) for the single-slot seed
    for (const auto& rho : ctx.interior) {
        IntVec mu = vec_sub(vec_scale(3, ctx.a0_lift()), rho.mu);
        auto it = alpha.eta.comp.find(rho.mu);
        if (!ctx.in_M(mu)) {
            CHECK(it == alpha.eta.comp.end());
            continue;
        }
        REQUIRE(it != alpha.eta.comp.end());
        auto expected =
            bmu_polynomial(ctx.config, mu, ctx.theta, ctx.dlambda).poly.scaled(PiAdic::pi_power(3, rho.weight() - 1));
        CHECK(it->second == expected);
    }
    // in particular the a0 slot carries B_((p-1)a0)
    auto a0term = alpha.eta.comp.at(ctx.a0_lift());
    auto b2 = bmu_polynomial(ctx.config, iv({2, 2, 2}), ctx.theta, ctx.dlambda);
    CHECK(a0term == b2.poly);
}

TEST_CASE("alpha* norm bound and its strict form") {
    auto cfg = dwork(2);
    auto ctx = make_dwork_context(cfg, 3, 3, 5);
    auto res = check_alpha_norm_bound(ctx, 40, 0xA5A5A5A5ull);
    CHECK(res.pass);
}

TEST_CASE("explicit eigenvector: a0 component is Phi") {
    auto ctx = make_dwork_context(dwork(2), 3, 3, 8);
    XiExplicit xi = build_xi_explicit(ctx);
    auto phi = phi_series(ctx.config, 8);
    REQUIRE(xi.comp.count(ctx.a0_lift()) == 1);
    CHECK(xi.comp.at(ctx.a0_lift()) == phi);
}

TEST_CASE("explicit eigenvector: the rho = 2 a0hat series") {
    auto ctx = make_dwork_context(dwork(2), 3, 2, 6);
    XiExplicit xi = build_xi_explicit(ctx);
    const auto& s = xi.comp.at(iv({2, 2, 2}));
    // xi_rho = -sum_l (2l+1)!/(l!)^2 u^l = -(1 + 6u + 30u^2 + ...)
    for (unsigned long l = 0; l <= 3; ++l) {
        mpz_class expected = -fact(2 * l + 1) / (fact(l) * fact(l));
        CHECK(s.get({static_cast<int>(l), static_cast<int>(l)}) == expected);
    }
}

TEST_CASE("explicit eigenvector: constant terms sit on the a0 ray only") {
    auto ctx = make_dwork_context(dwork(2), 3, 4, 6);
    XiExplicit xi = build_xi_explicit(ctx);
    Exponent origin(2, 0);
    for (const auto& [rho, s] : xi.comp) {
        long rho0 = static_cast<long>(rho[0].get_si());
        bool onRay = (rho == vec_scale(rho0, ctx.a0_lift()));
        mpz_class c = s.get(origin);
        if (onRay) {
            mpz_class expected = fact(static_cast<unsigned long>(rho0 - 1));
            if ((rho0 - 1) % 2 != 0) expected = -expected;
            CHECK(c == expected);
        } else {
            CHECK(c == 0);
        }
    }
}

TEST_CASE("eigenvector identity alpha*(xi) = p xi within tolerance") {
    // the pinned desk run: p=3, dx=4, dlambda=9, K=3; the achieved margin
    // must reach the hard floor 2 as well as the reported tolerance
    auto ctx = make_dwork_context(dwork(2), 3, 4, 9);
    auto res = check_eigen_identity(ctx, mpq_class(3), mpq_class(2));
    CHECK(res.pass);
}

TEST_CASE("beta normalizes the a0 slot to 1") {
    auto ctx = make_dwork_context(dwork(2), 3, 3, 6);
    SElement next = beta_step(ctx, seed_element(ctx));
    Exponent origin(2, 0);
    auto a0 = next.comp.at(ctx.a0_lift());
    CHECK(a0.get(origin) == PiAdic::one(3));
    // and the whole slot is exactly 1
    CHECK(a0.terms().size() == 1);
}

TEST_CASE("beta rejects inputs outside the T model") {
    auto ctx = make_dwork_context(dwork(2), 3, 2, 4);
    SElement bad;
    bad.p = 3;
    bad.dx = 2;
    bad.dlambda = 4;
    CHECK_THROWS_AS(beta_step(ctx, bad), std::domain_error);  // empty a0 slot

    SElement nonUnit = seed_element(ctx);
    nonUnit.comp.at(ctx.a0_lift()).set(Exponent(2, 0), PiAdic(3, 3));
    CHECK_THROWS_AS(beta_step(ctx, nonUnit), std::domain_error);
}

TEST_CASE("beta iteration contracts to the normalized eigenvector") {
    auto ctx = make_dwork_context(dwork(2), 3, 4, 9);
    const mpq_class K(4);
    IterationResult iter = iterate_to_fixed_point(ctx, seed_element(ctx, K), 32, K);
    CHECK(iter.converged);
    // strictly improving decay log
    for (size_t i = 1; i < iter.decay.size(); ++i) CHECK(iter.decay[i] > iter.decay[i - 1]);
    REQUIRE(iter.min_step_gain.has_value());
    CHECK(*iter.min_step_gain > 0);

    // the fixed point matches xi_explicit normalized by Phi
    auto phi = phi_series(ctx.config, 9);
    XiExplicit xi = build_xi_explicit(ctx);
    SElement target;
    target.p = 3;
    target.dx = 4;
    target.dlambda = 9;
    for (const auto& [mu, s] : xi.comp)
        target.set_component(mu, divide_by_unit(s, phi).map_coeffs(
                                     [&](const mpz_class& c) { return PiAdic(3, mpq_class(c)); }, PiAdic::zero(3)));
    target = target.truncated(K);
    CHECK((iter.fixed - target).norm_valuation() >= Valuation(mpq_class(2)));
}

TEST_CASE("a fixed point converges in one step") {
    auto ctx = make_dwork_context(dwork(2), 3, 3, 6);
    const mpq_class K(3);
    IterationResult first = iterate_to_fixed_point(ctx, seed_element(ctx, K), 32, K);
    REQUIRE(first.converged);
    IterationResult again = iterate_to_fixed_point(ctx, first.fixed, 32, K);
    CHECK(again.converged);
    CHECK(again.decay.size() == 1);
    CHECK(again.decay[0] >= Valuation(K));
}

TEST_CASE("iteration refuses targets beyond the precision cap") {
    auto ctx = make_dwork_context(dwork(2), 3, 2, 4);
    CHECK_THROWS_AS(iterate_to_fixed_point(ctx, seed_element(ctx, mpq_class(2)), 16, mpq_class(5)), precision_error);
}

TEST_CASE("G/H identity coefficients") {
    // l = 0: the coefficient of (pi u)^(-1) equals p within precision
    GIdentityReport rep = g_identity_check(3, 8, mpq_class(4));
    REQUIRE(rep.coefficients.size() == 9);
    for (const auto& c : rep.coefficients) CHECK(c.margin >= Valuation(mpq_class(4)));
    CHECK(rep.all_within());

    // sharper request still verifiable
    GIdentityReport deep = g_identity_check(3, 2, mpq_class(6));
    CHECK(deep.all_within());

    // p = 5 spot check
    CHECK(g_identity_check(5, 4, mpq_class(3)).all_within());
}

TEST_CASE("Boyarsky partial sums converge to (-1)^(p+1) p!") {
    BoyarskyReport rep = boyarsky_check(3, 12, mpq_class(3));
    CHECK(rep.target == 6);
    // hand-computed small partial sums: S_0 = -3, margin ord(-9) = 2;
    // S_1 = -15/2, margin ord(-27/2) = 3
    CHECK(rep.margins[0] == Valuation(mpq_class(2)));
    CHECK(rep.margins[1] == Valuation(mpq_class(3)));
    CHECK(rep.margins.back() >= Valuation(mpq_class(3)));

    // margin at M = 0: ord_p(-p - p!) >= 1 for every p
    for (unsigned p : {5u, 7u}) {
        BoyarskyReport r = boyarsky_check(p, 6, mpq_class(1));
        CHECK(r.margins[0] >= Valuation(mpq_class(1)));
    }
    CHECK_THROWS_AS(boyarsky_check(3, 1, mpq_class(9)), precision_error);
}
