#include <catch2/catch_amalgamated.hpp>

#include "ahg/geometry.hpp"
#include "ahg/lattice.hpp"

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
    c.points.push_back(IntVec(n, 1));  // a_0 = (1,..,1)
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

PointConfiguration unit_segment() {
    PointConfiguration c;
    c.n = 1;
    c.points.push_back(iv({0}));  // a_0
    c.points.push_back(iv({0}));
    c.points.push_back(iv({1}));
    return c;
}

// independent rank oracle: rational Gaussian elimination, written separately
// from the Hermite-form path it cross-checks
size_t rank_oracle(const IntMat& rows) {
    std::vector<std::vector<mpq_class>> m;
    for (const auto& r : rows) {
        std::vector<mpq_class> q;
        for (const auto& x : r) q.emplace_back(x);
        m.push_back(std::move(q));
    }
    size_t rank = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    for (size_t c = 0; c < cols; ++c) {
        size_t sel = m.size();
        for (size_t i = rank; i < m.size(); ++i)
            if (m[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[rank], m[sel]);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == rank || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[rank][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
        if (rank == m.size()) break;
    }
    return rank;
}

}  // namespace

TEST_CASE("hermite rows give a canonical lattice basis") {
    HermiteBasis h = hermite_rows({iv({2, 0}), iv({0, 3}), iv({2, 3})});
    REQUIRE(h.rank() == 2);
    CHECK(h.contains(iv({2, 3})));
    CHECK(h.contains(iv({4, 0})));
    CHECK_FALSE(h.contains(iv({1, 0})));
    CHECK(h.spans(iv({1, 0})));

    // basis is reduced: recomputing from it is a fixed point
    HermiteBasis again = hermite_rows(h.rows);
    CHECK(again.rows == h.rows);
}

TEST_CASE("span dimensions match the rank oracle") {
    auto d2 = dwork(2);
    CHECK(rank_oracle(d2.lifts()) == 2);
    CHECK(lift_and_span(d2).dimension() == 2);

    PointConfiguration single;
    single.n = 1;
    single.points.push_back(iv({0}));
    CHECK(lift_and_span(single).dimension() == 1);

    auto hex = hexagon();
    CHECK(rank_oracle(hex.lifts()) == 3);
    CHECK(lift_and_span(hex).dimension() == 3);

    CHECK(lift_and_span(dwork(3)).dimension() == 3);
}

TEST_CASE("ZA can be a proper sublattice") {
    auto span = lift_and_span(dwork(2));
    CHECK(span.in_lattice(iv({1, 2, 0})));
    CHECK(span.in_lattice(iv({2, 2, 2})));
    // (1,1,0) lies in the rational span only when w1+w2 = 2w0; it does not
    CHECK_FALSE(span.in_span(iv({1, 1, 0})));
    // in the span but with the right parity structure: membership is exact
    CHECK(span.in_lattice(iv({0, 1, -1})));
}

TEST_CASE("cone facets: Dwork n=2 sector") {
    auto cfg = dwork(2);
    auto span = lift_and_span(cfg);
    auto fs = cone_facets(cfg, span);
    REQUIRE(fs.normals.size() == 2);
    // facets are the rays through (1,2,0) and (1,0,2): each normal is tight
    // on exactly one of them and positive elsewhere
    IntVec r1 = iv({1, 2, 0}), r2 = iv({1, 0, 2}), mid = iv({1, 1, 1});
    int tightOnR1 = 0, tightOnR2 = 0;
    for (const auto& h : fs.normals) {
        CHECK(dot(h, mid) > 0);
        if (dot(h, r1) == 0) {
            ++tightOnR1;
            CHECK(dot(h, r2) > 0);
        }
        if (dot(h, r2) == 0) {
            ++tightOnR2;
            CHECK(dot(h, r1) > 0);
        }
    }
    CHECK(tightOnR1 == 1);
    CHECK(tightOnR2 == 1);
    // deterministic order
    auto fs2 = cone_facets(cfg, span);
    CHECK(fs2.normals == fs.normals);
}

TEST_CASE("cone facets: one-dimensional example") {
    PointConfiguration cfg;
    cfg.n = 1;
    cfg.points.push_back(iv({1}));  // a_0 = 1
    cfg.points.push_back(iv({0}));
    cfg.points.push_back(iv({2}));
    auto fs = cone_facets(cfg, lift_and_span(cfg));
    REQUIRE(fs.normals.size() == 2);
    IntVec r1 = iv({1, 0}), r2 = iv({1, 2});
    for (const auto& h : fs.normals) CHECK((dot(h, r1) == 0) != (dot(h, r2) == 0));
}

TEST_CASE("cone facets: a ray has no codimension-1 facets") {
    PointConfiguration cfg;
    cfg.n = 1;
    cfg.points.push_back(iv({0}));  // only a_0; degenerate at the type level
    auto fs = cone_facets(cfg, lift_and_span(cfg));
    CHECK(fs.normals.empty());
}

TEST_CASE("unique interior gate") {
    auto g2 = unique_interior_gate(dwork(2));
    CHECK(g2.pass);
    REQUIRE(g2.interior_points.size() == 1);
    CHECK(g2.interior_points[0] == iv({1, 1}));

    auto g3 = unique_interior_gate(dwork(3));
    CHECK(g3.pass);
    REQUIRE(g3.interior_points.size() == 1);
    CHECK(g3.interior_points[0] == iv({1, 1, 1}));

    // hexagon oracle: |x| < 1, |y| < 1, |x+y| < 1 leaves only the origin
    auto gh = unique_interior_gate(hexagon());
    CHECK(gh.pass);
    REQUIRE(gh.interior_points.size() == 1);
    CHECK(gh.interior_points[0] == iv({0, 0}));

    auto gs = unique_interior_gate(unit_segment());
    CHECK_FALSE(gs.pass);
    CHECK(gs.interior_points.empty());

    // segment [0,2] has midpoint 1 interior; a_0 = 0 mismatches
    PointConfiguration seg2;
    seg2.n = 1;
    seg2.points.push_back(iv({0}));
    seg2.points.push_back(iv({0}));
    seg2.points.push_back(iv({2}));
    auto gg = unique_interior_gate(seg2);
    CHECK_FALSE(gg.pass);
    REQUIRE(gg.interior_points.size() == 1);
    CHECK(gg.interior_points[0] == iv({1}));
}

TEST_CASE("enumerate_M lists cone lattice points by weight") {
    auto cfg = dwork(2);
    auto span = lift_and_span(cfg);
    auto fs = cone_facets(cfg, span);

    auto m0 = enumerate_M(cfg, span, fs, 0, false);
    REQUIRE(m0.size() == 1);
    CHECK(m0[0].mu == iv({0, 0, 0}));
    CHECK_FALSE(m0[0].interior);
    CHECK(enumerate_M(cfg, span, fs, 0, true).empty());

    auto i1 = enumerate_M(cfg, span, fs, 1, true);
    REQUIRE(i1.size() == 1);
    CHECK(i1[0].mu == iv({1, 1, 1}));

    auto i2 = enumerate_M(cfg, span, fs, 2, true);
    REQUIRE(i2.size() == 4);
    CHECK(i2[0].mu == iv({1, 1, 1}));
    CHECK(i2[1].mu == iv({2, 1, 3}));
    CHECK(i2[2].mu == iv({2, 2, 2}));
    CHECK(i2[3].mu == iv({2, 3, 1}));
}

TEST_CASE("M is additively closed and absorbs interior points") {
    for (auto cfg : {dwork(2), hexagon()}) {
        auto span = lift_and_span(cfg);
        auto fs = cone_facets(cfg, span);
        const long bound = 3;
        auto all = enumerate_M(cfg, span, fs, bound, false);
        auto interior = enumerate_M(cfg, span, fs, bound, true);
        auto find = [&](const IntVec& v) {
            for (const auto& cp : all)
                if (cp.mu == v) return true;
            return false;
        };
        auto findInterior = [&](const IntVec& v) {
            for (const auto& cp : interior)
                if (cp.mu == v) return true;
            return false;
        };
        for (const auto& x : all)
            for (const auto& y : all) {
                if (x.mu[0] + y.mu[0] > bound) continue;
                CHECK(find(vec_add(x.mu, y.mu)));
            }
        for (const auto& x : all)
            for (const auto& y : interior) {
                if (x.mu[0] + y.mu[0] > bound) continue;
                CHECK(findInterior(vec_add(x.mu, y.mu)));
            }
        // integer strictness of interior pairings
        for (const auto& y : interior)
            for (const auto& h : fs.normals) CHECK(dot(h, y.mu) >= 1);
    }
}

TEST_CASE("hull cone facets give the affine inequalities of the polytope") {
    // hexagon: slicing the cone over (1,a_1)..(1,a_6) at height 1 gives the
    // six edge inequalities |x| <= 1, |y| <= 1, |x+y| <= 1
    auto hex = hexagon();
    auto fs = hull_cone_facets(hex);
    REQUIRE(fs.normals.size() == 6);
    auto pairing = [&](long x, long y) {
        IntVec lifted = iv({1, x, y});
        size_t tight = 0;
        bool nonneg = true;
        for (const auto& h : fs.normals) {
            mpz_class s = dot(h, lifted);
            if (s == 0) ++tight;
            if (s < 0) nonneg = false;
        }
        return std::make_pair(nonneg, tight);
    };
    // vertices lie on two edges, edge midpoints integrally on one, the
    // center on none, and outside points violate some inequality
    CHECK(pairing(1, 0) == std::make_pair(true, size_t(2)));
    CHECK(pairing(0, 0) == std::make_pair(true, size_t(0)));
    CHECK(pairing(2, 0).first == false);

    // Dwork n=2 hull is a segment: two affine facet inequalities
    CHECK(hull_cone_facets(dwork(2)).normals.size() == 2);
}

TEST_CASE("relation lattice basis") {
    auto rel = relation_lattice_basis(dwork(2));
    REQUIRE(rel.size() == 1);
    CHECK(rel[0] == iv({-2, 1, 1}));

    // affinely independent lifts have no relations
    PointConfiguration indep;
    indep.n = 2;
    indep.points.push_back(iv({0, 0}));
    indep.points.push_back(iv({1, 0}));
    indep.points.push_back(iv({0, 1}));
    CHECK(relation_lattice_basis(indep).empty());

    auto hex = hexagon();
    auto relHex = relation_lattice_basis(hex);
    REQUIRE(relHex.size() == 4);
    auto lifts = hex.lifts();
    for (const auto& l : relHex) {
        IntVec s(hex.n + 1, 0);
        mpz_class coordSum = 0;
        for (size_t j = 0; j < l.size(); ++j) {
            s = vec_add(s, vec_scale(l[j], lifts[j]));
            coordSum += l[j];
        }
        CHECK(is_zero_vec(s));
        CHECK(coordSum == 0);
    }
}
