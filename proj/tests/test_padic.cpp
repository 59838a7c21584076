#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ahg/padic.hpp"

using namespace ahg;

namespace {

// deterministic random element: integer pi-combinations with occasional
// p-power denominators, exercising negative valuations too
PiAdic random_element(std::mt19937_64& rng, unsigned p, bool allow_denominator = true) {
    PiAdic out(p);
    for (unsigned m = 0; m + 1 < p; ++m) {
        if (rng() % 3 == 0) continue;
        long num = static_cast<long>(rng() % 41) - 20;
        mpq_class q(num);
        if (allow_denominator && rng() % 4 == 0) q /= static_cast<long>(p);
        if (rng() % 5 == 0) q *= static_cast<long>(p);
        out += PiAdic::pi_power(p, static_cast<long>(m)) * q;
    }
    return out;
}

}  // namespace

TEST_CASE("pi powers reduce to normal form") {
    CHECK(PiAdic::pi_power(3, 2) == PiAdic(3, -3));
    CHECK(PiAdic::pi_power(5, 0) == PiAdic::one(5));

    // pi^-1 = -pi^(p-2)/p, valuation -1/(p-1)
    PiAdic inv = PiAdic::pi_power(3, -1);
    PiAdic expected = PiAdic::pi_power(3, 1) * mpq_class(-1, 3);
    CHECK(inv == expected);
    CHECK(inv.valuation() == Valuation(-1, 2));

    CHECK(PiAdic::pi_power(3, 1) * PiAdic::pi_power(3, 1) == PiAdic(3, -3));
    CHECK_THROWS_AS(PiAdic::pi_power(2, 1), std::invalid_argument);
}

TEST_CASE("pi^(p-1) + p = 0 for every supported prime") {
    for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
        PiAdic x = PiAdic::pi_power(p, static_cast<long>(p) - 1) + PiAdic(p, static_cast<long>(p));
        CHECK(x.is_zero());
    }
}

TEST_CASE("valuation basics") {
    CHECK(PiAdic::zero(3).valuation().is_infinite());
    CHECK(PiAdic(3, 9).valuation() == Valuation(2, 1));
    CHECK(PiAdic::pi_power(3, 3).valuation() == Valuation(3, 2));
    CHECK(PiAdic(5, mpq_class(1, 5)).valuation() == Valuation(-1, 1));
}

TEST_CASE("rational inversion embeds") {
    PiAdic x(3, mpq_class(-3, 2));
    PiAdic inv = x.invert_unit();
    CHECK(x * inv == PiAdic::one(3));
    CHECK(inv == PiAdic(3, mpq_class(-2, 3)));
}

TEST_CASE("inversion of random nonzero elements") {
    std::mt19937_64 rng(20260810);
    for (unsigned p : {3u, 5u, 7u}) {
        for (int trial = 0; trial < 40; ++trial) {
            PiAdic x = random_element(rng, p);
            if (x.is_zero()) continue;
            CHECK(x * x.invert_unit() == PiAdic::one(p));
        }
    }
    CHECK_THROWS_AS(PiAdic::zero(3).invert_unit(), std::domain_error);
}

TEST_CASE("ultrametric and multiplicativity properties") {
    std::mt19937_64 rng(424242);
    for (unsigned p : {3u, 5u, 7u}) {
        for (int trial = 0; trial < 60; ++trial) {
            PiAdic x = random_element(rng, p);
            PiAdic y = random_element(rng, p);
            Valuation vx = x.valuation(), vy = y.valuation(), vs = (x + y).valuation();
            CHECK(vs >= min(vx, vy));
            if (!(vx == vy)) CHECK(vs == min(vx, vy));
            Valuation vp = (x * y).valuation();
            CHECK(vp == vx + vy);
        }
    }
}

TEST_CASE("truncation to a precision cap") {
    // pi^2 at p=3 is -3; modulo valuation >= 2 the canonical residue is 6
    PiAdic x = PiAdic::pi_power(3, 2);
    PiAdic t = x.truncate(2);
    CHECK(t.coeffs()[0] == 6);
    CHECK((t - x).valuation() >= Valuation(2, 1));
    CHECK(t.precision_cap().has_value());
    CHECK(*t.precision_cap() == mpq_class(2));
    // idempotent
    CHECK(t.truncate(2) == t);

    // integral elements truncate to zero at K = 0
    CHECK(PiAdic(3, 7).truncate(0).is_zero());
    std::mt19937_64 rng(7);
    CHECK(random_element(rng, 5, false).truncate(0).is_zero());

    // threshold: valuation exactly K collapses to zero
    PiAdic pu = PiAdic(3, 3) * mpq_class(2);  // valuation 1
    CHECK(pu.truncate(1).is_zero());
}

TEST_CASE("precision caps propagate by the ultrametric rules") {
    PiAdic x = PiAdic(3, 5).with_cap(3);
    PiAdic y = PiAdic(3, 7).with_cap(2);
    CHECK(*(x + y).precision_cap() == mpq_class(2));

    // product error: min(Kx + val y, Ky + val x, Kx + Ky)
    PiAdic a = (PiAdic(3, 9)).with_cap(4);  // val 2
    PiAdic b = (PiAdic(3, 3)).with_cap(3);  // val 1
    CHECK(*(a * b).precision_cap() == mpq_class(5));  // min(4+1, 3+2, 7)

    // inversion needs usable digits and degrades as cap - 2 val
    PiAdic u = PiAdic(3, 3).with_cap(4);
    CHECK(*u.invert_unit().precision_cap() == mpq_class(2));
    CHECK_THROWS_AS(PiAdic(3, 9).with_cap(2).invert_unit(), precision_error);
}

TEST_CASE("print/parse round trip is the identity") {
    std::mt19937_64 rng(777);
    for (unsigned p : {3u, 5u, 7u}) {
        for (int trial = 0; trial < 40; ++trial) {
            PiAdic x = random_element(rng, p);
            if (rng() % 2 == 0) x = x.with_cap(mpq_class(static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3)));
            PiAdic back = PiAdic::parse(p, x.str());
            CHECK(back == x);
            CHECK(back.str() == x.str());
            bool capsEqual = back.precision_cap() == x.precision_cap();
            CHECK(capsEqual);
        }
    }
    CHECK(PiAdic::parse(3, "0").is_zero());
    CHECK(PiAdic::parse(3, "-3/2 + 5*pi (mod >= 7/2)").str() == "-3/2 + 5*pi (mod >= 7/2)");
}
