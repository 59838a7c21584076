#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/lattice.hpp"

namespace ahg {

/// Input points a_0..a_N in Z^n together with their lifts (1, a_j) in
/// Z^(n+1).  a_0 is the distinguished point; a_1..a_N span the polytope.
struct PointConfiguration {
    size_t n = 0;          // ambient dimension of the points
    std::vector<IntVec> points;  // points[0] = a_0, then a_1..a_N

    size_t N() const { return points.empty() ? 0 : points.size() - 1; }

    IntVec lift(size_t j) const {
        IntVec out(n + 1);
        out[0] = 1;
        for (size_t i = 0; i < n; ++i) out[i + 1] = points[j][i];
        return out;
    }

    IntMat lifts() const {
        IntMat out;
        for (size_t j = 0; j < points.size(); ++j) out.push_back(lift(j));
        return out;
    }

    IntMat hull_lifts() const {  // lifts of a_1..a_N only
        IntMat out;
        for (size_t j = 1; j < points.size(); ++j) out.push_back(lift(j));
        return out;
    }

    /// All structural violations (empty when well-formed).  Distinctness is
    /// required among the hull points a_1..a_N; a_0 may coincide with one of
    /// them (it typically lies inside the hull they span).
    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        if (points.empty()) {
            bad.push_back("no points given");
            return bad;
        }
        if (N() < 1) bad.push_back("need at least one hull point a_1");
        for (size_t j = 0; j < points.size(); ++j)
            if (points[j].size() != n) {
                std::ostringstream os;
                os << "point a_" << j << " has " << points[j].size() << " coordinates, expected " << n;
                bad.push_back(os.str());
            }
        for (size_t i = 1; i < points.size(); ++i)
            for (size_t j = i + 1; j < points.size(); ++j)
                if (points[i] == points[j]) {
                    std::ostringstream os;
                    os << "duplicate hull points a_" << i << " and a_" << j;
                    bad.push_back(os.str());
                }
        return bad;
    }
};

/// Linear span and lattice data of the lifted configuration: the dimension d
/// and a Hermite-reduced integer basis of ZA (the lattice generated by the
/// lifts).  The same rows, read rationally, are a basis of the span.
struct SpanBasis {
    HermiteBasis za;

    size_t dimension() const { return za.rank(); }
    bool in_lattice(const IntVec& v) const { return za.contains(v); }
    bool in_span(const IntVec& v) const { return za.spans(v); }
};

inline SpanBasis lift_and_span(const PointConfiguration& config) {
    return SpanBasis{hermite_rows(config.lifts())};
}

/// Facet description of a pointed rational cone relative to its linear
/// span: primitive integer normals in the ambient space, nonnegative on
/// every generator, each tight on a codimension-1 face.  Normals are sorted
/// lexicographically, so downstream enumerations are deterministic.
struct FacetSystem {
    IntMat normals;

    bool on_boundary(const IntVec& v) const {
        for (const auto& h : normals)
            if (dot(h, v) == 0) return true;
        return false;
    }
    bool inside(const IntVec& v) const {
        for (const auto& h : normals)
            if (dot(h, v) < 0) return false;
        return true;
    }
};

namespace detail {

/// Facets of cone(generators) inside span(generators), by exact brute force
/// over (d-1)-subsets of generators.  Each facet is reported once, by the
/// canonical normal lying in the span itself (so normals are unique, not
/// merely unique up to an off-span component).  Desk scale: N <= ~12.
inline FacetSystem cone_facets_of(const IntMat& generators) {
    FacetSystem out;
    if (generators.empty()) return out;

    // distinct nonzero generators, fixed order
    IntMat gens;
    for (const auto& g : generators)
        if (!is_zero_vec(g) && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    if (gens.empty()) throw std::invalid_argument("cone_facets: degenerate cone (no nonzero generators)");

    const HermiteBasis span = hermite_rows(gens);
    const size_t d = span.rank();
    if (d == 1) return out;  // a ray: no codimension-1 faces besides the origin

    std::set<IntVec> found;
    std::vector<size_t> comb(d - 1);
    for (size_t i = 0; i < comb.size(); ++i) comb[i] = i;
    while (true) {
        // Normal within the span orthogonal to the chosen subset: solve
        // G x = 0 where G[k][i] = <basis_i, subset_k>; a unique line iff the
        // subset has rank d-1.
        IntMat gram(comb.size(), IntVec(d));
        for (size_t k = 0; k < comb.size(); ++k)
            for (size_t i = 0; i < d; ++i) gram[k][i] = dot(span.rows[i], gens[comb[k]]);
        auto null = rational_nullspace(gram, d);
        if (null.size() == 1) {
            RatVec hq(gens[0].size(), 0);
            for (size_t i = 0; i < d; ++i)
                for (size_t c = 0; c < hq.size(); ++c) hq[c] += null[0][i] * mpq_class(span.rows[i][c]);
            IntVec h = primitive_from_rational(hq);
            int sign = 0;
            bool mixed = false;
            for (const auto& g : gens) {
                mpz_class s = dot(h, g);
                if (s > 0) {
                    if (sign < 0) mixed = true;
                    sign = 1;
                } else if (s < 0) {
                    if (sign > 0) mixed = true;
                    sign = -1;
                }
                if (mixed) break;
            }
            if (!mixed && sign != 0) {
                if (sign < 0) h = vec_scale(-1, h);
                found.insert(std::move(h));
            }
        }
        // next (d-1)-combination of gens
        size_t i = comb.size();
        bool advanced = false;
        while (i > 0) {
            --i;
            if (comb[i] != i + gens.size() - comb.size()) {
                ++comb[i];
                for (size_t j = i + 1; j < comb.size(); ++j) comb[j] = comb[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }

    // Structural check: a facet normal must be tight on d-1 independent
    // generators (true by construction; guards malformed input).
    for (const auto& h : found) {
        IntMat tight;
        for (const auto& g : gens)
            if (dot(h, g) == 0) tight.push_back(g);
        if (rational_rank(tight) == d - 1) out.normals.push_back(h);
    }
    std::sort(out.normals.begin(), out.normals.end());
    if (out.normals.empty()) throw std::invalid_argument("cone_facets: degenerate cone (no supporting facets found)");
    return out;
}

}  // namespace detail

/// Facets of the cone generated by all lifts (the cone C).
inline FacetSystem cone_facets(const PointConfiguration& config, const SpanBasis& /*span*/) {
    return detail::cone_facets_of(config.lifts());
}

/// Facets of the cone over the hull lifts (1,a_1)..(1,a_N); slicing at
/// height 1 gives the affine facet inequalities of the polytope.
inline FacetSystem hull_cone_facets(const PointConfiguration& config) {
    return detail::cone_facets_of(config.hull_lifts());
}

/// Lattice point of the cone C with its weight (first lifted coordinate)
/// and relative-interior flag.
struct ConePoint {
    IntVec mu;      // in Z^(n+1)
    bool interior;  // off every proper face of C

    long weight() const { return static_cast<long>(mu[0].get_si()); }

    bool operator==(const ConePoint& o) const { return mu == o.mu; }
};

/// Result of the unique-interior-point gate over the hull of a_1..a_N.
struct GateResult {
    bool pass = false;
    std::vector<IntVec> interior_points;  // points found in the relative interior
};

/// Enumerates the lattice points in the relative interior of the hull of
/// a_1..a_N and succeeds iff that set is exactly {a_0}.
inline GateResult unique_interior_gate(const PointConfiguration& config) {
    GateResult out;
    if (config.N() < 1) return out;
    HermiteBasis hullSpan = hermite_rows(config.hull_lifts());
    FacetSystem facets = detail::cone_facets_of(config.hull_lifts());

    // bounding box of the hull points
    std::vector<mpz_class> lo(config.n), hi(config.n);
    for (size_t i = 0; i < config.n; ++i) {
        lo[i] = hi[i] = config.points[1][i];
        for (size_t j = 2; j < config.points.size(); ++j) {
            lo[i] = std::min(lo[i], config.points[j][i]);
            hi[i] = std::max(hi[i], config.points[j][i]);
        }
    }
    IntVec z(config.n);
    std::vector<mpz_class> cur = lo;
    while (true) {
        IntVec lifted(config.n + 1);
        lifted[0] = 1;
        for (size_t i = 0; i < config.n; ++i) lifted[i + 1] = cur[i];
        // relative interior: in the span of the hull cone and strictly
        // positive on every facet (vacuous for a single-point hull).
        if (hullSpan.spans(lifted)) {
            bool strict = true;
            for (const auto& h : facets.normals)
                if (dot(h, lifted) <= 0) {
                    strict = false;
                    break;
                }
            if (strict) out.interior_points.push_back(IntVec(cur.begin(), cur.end()));
        }
        size_t i = 0;
        for (; i < config.n; ++i) {
            if (cur[i] < hi[i]) {
                ++cur[i];
                for (size_t j = 0; j < i; ++j) cur[j] = lo[j];
                break;
            }
        }
        if (i == config.n) break;
        if (config.n == 0) break;
    }
    out.pass = out.interior_points.size() == 1 && out.interior_points[0] == config.points[0];
    return out;
}

/// All mu in M (or M° when interior_only) with weight <= weight_bound,
/// sorted by (weight, lex).  Scans the box weight*[min_j a_ji, max_j a_ji]
/// and filters by ZA membership and the facet inequalities; the origin is
/// never interior (it lies on every face).
inline std::vector<ConePoint> enumerate_M(const PointConfiguration& config, const SpanBasis& span,
                                          const FacetSystem& facets, long weight_bound, bool interior_only) {
    std::vector<ConePoint> out;
    if (weight_bound < 0) throw std::invalid_argument("enumerate_M: negative weight bound");
    for (long w = 0; w <= weight_bound; ++w) {
        if (w == 0) {
            if (!interior_only) out.push_back(ConePoint{IntVec(config.n + 1, 0), false});
            continue;
        }
        std::vector<mpz_class> lo(config.n), hi(config.n);
        for (size_t i = 0; i < config.n; ++i) {
            lo[i] = hi[i] = config.points[0][i];
            for (size_t j = 1; j < config.points.size(); ++j) {
                lo[i] = std::min(lo[i], config.points[j][i]);
                hi[i] = std::max(hi[i], config.points[j][i]);
            }
            lo[i] *= w;
            hi[i] *= w;
        }
        std::vector<mpz_class> cur = lo;
        while (true) {
            IntVec mu(config.n + 1);
            mu[0] = w;
            for (size_t i = 0; i < config.n; ++i) mu[i + 1] = cur[i];
            if (span.in_lattice(mu)) {
                bool in = true, strict = true;
                for (const auto& h : facets.normals) {
                    mpz_class s = dot(h, mu);
                    if (s < 0) {
                        in = false;
                        break;
                    }
                    if (s == 0) strict = false;
                }
                if (in) {
                    ConePoint cp{mu, strict};  // w >= 1 here, so no origin guard needed
                    if (!interior_only || cp.interior) out.push_back(std::move(cp));
                }
            }
            size_t i = config.n;
            while (i > 0) {
                --i;
                if (cur[i] < hi[i]) {
                    ++cur[i];
                    for (size_t j = i + 1; j < config.n; ++j) cur[j] = lo[j];
                    i = config.n + 1;
                    break;
                }
            }
            if (i != config.n + 1) break;
        }
    }
    return out;
}

/// Hermite-reduced basis of the relation lattice
/// L = {l in Z^(N+1) : sum_j l_j (1,a_j) = 0}, rows sign-normalized so the
/// leading entry is negative (the positive support then sits on a_1..a_N,
/// matching the orientation of the series exponents).
inline IntMat relation_lattice_basis(const PointConfiguration& config) {
    IntMat kernel = kernel_rows(config.lifts());
    if (kernel.empty()) return kernel;
    HermiteBasis h = hermite_rows(kernel);
    IntMat out = h.rows;
    for (auto& row : out) row = vec_scale(-1, row);
    return out;
}

}  // namespace ahg
