#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/geometry.hpp"
#include "ahg/hypergeometric.hpp"
#include "ahg/series.hpp"
#include "ahg/theta.hpp"

namespace ahg {

/// Kernel coefficient B_mu dehomogenized at lambda_0 = 1: a polynomial in
/// t_1..t_N whose term for each expansion sum_i w_i (1,a_i) = mu is
/// prod_i b_{w_i}.  Homogeneity of degree mu_0 holds by construction (the
/// first lifted coordinate forces sum_i w_i = mu_0).
struct BmuPolynomial {
    IntVec mu;
    TruncatedSeries<PiAdic> poly;
    bool empty_expansion = false;  // no solutions: mu outside M (warning flag)

    long weight() const { return static_cast<long>(mu[0].get_si()); }
};

inline BmuPolynomial bmu_polynomial(const PointConfiguration& config, const IntVec& mu, const ThetaTable& theta,
                                    int degree_bound) {
    if (mu[0] < 0) throw std::invalid_argument("bmu_polynomial: negative weight");
    size_t mu0 = static_cast<size_t>(mu[0].get_ui());
    if (theta.max_index() < mu0)
        throw precision_error("bmu_polynomial: theta table too small for weight " + std::to_string(mu0));
    BmuPolynomial out{mu, TruncatedSeries<PiAdic>(config.N(), degree_bound, PiAdic::zero(theta.p)), false};
    bool any = false;
    for_each_expansion(config.lifts(), mu, [&](const std::vector<int>& w) {
        any = true;
        int deg = 0;
        for (size_t i = 1; i < w.size(); ++i) deg += w[i];
        if (deg > degree_bound) return;
        PiAdic c = PiAdic::one(theta.p);
        for (int wi : w) c *= theta.at(static_cast<size_t>(wi));
        out.poly.add_to(Exponent(w.begin() + 1, w.end()), c);
    });
    out.empty_expansion = !any;
    return out;
}

/// Write-once cache of B_mu polynomials for one (configuration, p, bounds)
/// context.  A second insert of the same key must agree exactly; a mismatch
/// is a fatal integrity error.
class BmuTable {
  public:
    BmuTable() = default;
    BmuTable(const PointConfiguration& config, const ThetaTable& theta, int degree_bound)
        : config_(&config), theta_(&theta), bound_(degree_bound) {}

    const TruncatedSeries<PiAdic>& get(const IntVec& mu) {
        auto it = table_.find(mu);
        if (it != table_.end()) return it->second;
        auto built = bmu_polynomial(*config_, mu, *theta_, bound_);
        return table_.emplace(mu, std::move(built.poly)).first->second;
    }

    /// Preload an entry (from the cache file); enforces write-once agreement.
    void insert_checked(const IntVec& mu, const TruncatedSeries<PiAdic>& poly) {
        auto it = table_.find(mu);
        if (it != table_.end()) {
            if (!(it->second == poly)) throw integrity_error("BmuTable: conflicting values for a cached B_mu entry");
            return;
        }
        table_.emplace(mu, poly);
    }

    const std::map<IntVec, TruncatedSeries<PiAdic>>& entries() const { return table_; }

  private:
    const PointConfiguration* config_ = nullptr;
    const ThetaTable* theta_ = nullptr;
    int bound_ = 0;
    std::map<IntVec, TruncatedSeries<PiAdic>> table_;
};

/// Truncated model of the space S: finitely many interior cone points mu
/// (weight <= dx) carrying series in t_1..t_N (degree <= dlambda) over the
/// pi-adic ring, representing sum_mu xi_mu(lambda) (pi lambda_0)^(-mu_0) x^(-mu).
struct SElement {
    unsigned p = 3;
    int dx = 0;
    int dlambda = 0;
    std::optional<mpq_class> precision;  // K: coefficients known modulo valuation >= K
    std::map<IntVec, TruncatedSeries<PiAdic>> comp;

    TruncatedSeries<PiAdic> component(const IntVec& mu, size_t vars) const {
        auto it = comp.find(mu);
        if (it != comp.end()) return it->second;
        return TruncatedSeries<PiAdic>(vars, dlambda, PiAdic::zero(p));
    }

    void set_component(const IntVec& mu, TruncatedSeries<PiAdic> s) {
        if (s.is_zero())
            comp.erase(mu);
        else
            comp[mu] = std::move(s);
    }

    /// Gauss-norm valuation over all components (+inf for zero).
    Valuation norm_valuation() const {
        Valuation best = Valuation::infinity();
        for (const auto& [mu, s] : comp) {
            Valuation v = min_valuation(s);
            if (v < best) best = v;
        }
        return best;
    }

    SElement operator-(const SElement& o) const {
        SElement out = *this;
        if (o.precision) out.precision = out.precision ? std::min(*out.precision, *o.precision) : *o.precision;
        for (const auto& [mu, s] : o.comp) {
            auto it = out.comp.find(mu);
            if (it == out.comp.end()) {
                out.comp.emplace(mu, -s);
            } else {
                it->second = it->second - s;
                if (it->second.is_zero()) out.comp.erase(it);
            }
        }
        return out;
    }

    SElement scaled(const PiAdic& c) const {
        SElement out = *this;
        for (auto it = out.comp.begin(); it != out.comp.end();) {
            it->second = it->second.scaled(c);
            it = it->second.is_zero() ? out.comp.erase(it) : std::next(it);
        }
        return out;
    }

    SElement truncated(const mpq_class& K) const {
        SElement out = *this;
        out.precision = K;
        for (auto it = out.comp.begin(); it != out.comp.end();) {
            it->second = it->second.map_coeffs([&](const PiAdic& c) { return c.truncate(K); }, PiAdic::zero(p));
            it = it->second.is_zero() ? out.comp.erase(it) : std::next(it);
        }
        return out;
    }
};

/// Everything alpha* needs for one run: geometry, interior support, theta
/// table and the B_mu cache, for a fixed prime and bounds.
struct DworkContext {
    PointConfiguration config;
    unsigned p = 3;
    int dx = 1;
    int dlambda = 0;
    SpanBasis span;
    FacetSystem facets;
    std::vector<ConePoint> interior;  // M° up to weight dx, (weight, lex) order
    ThetaTable theta;
    BmuTable bmu;
    bool a0_unique_weight1 = false;

    IntVec a0_lift() const { return config.lift(0); }

    bool in_M(const IntVec& v) const {
        if (v[0] < 0) return false;
        return span.in_lattice(v) && facets.inside(v);
    }
};

inline DworkContext make_dwork_context(const PointConfiguration& config, unsigned p, int dx, int dlambda) {
    if (dx < 1) throw std::invalid_argument("make_dwork_context: dx must be >= 1");
    DworkContext ctx;
    ctx.config = config;
    ctx.p = p;
    ctx.dx = dx;
    ctx.dlambda = dlambda;
    ctx.span = lift_and_span(config);
    ctx.facets = cone_facets(config, ctx.span);
    ctx.interior = enumerate_M(config, ctx.span, ctx.facets, dx, /*interior_only=*/true);
    ctx.theta = theta_coeffs(p, static_cast<size_t>(p) * static_cast<size_t>(dx));
    ctx.bmu = BmuTable(ctx.config, ctx.theta, dlambda);
    size_t weight1 = 0;
    bool a0_found = false;
    for (const auto& cp : ctx.interior)
        if (cp.weight() == 1) {
            ++weight1;
            if (cp.mu == ctx.a0_lift()) a0_found = true;
        }
    ctx.a0_unique_weight1 = (weight1 == 1 && a0_found);
    return ctx;
}

/// Guaranteed valuation of what the weight-truncation of alpha* discards in
/// the component at rho: the first omitted term has nu_0 = dx+1, and the
/// classical estimate gives
///     (dx+1)((p-1)/p - 1/(p-1)) - rho_0 (p-1)/p^2
/// plus the minimum coefficient valuation of the input.
inline mpq_class alpha_tail_exponent(unsigned p, int dx, long rho0) {
    mpq_class pm1(static_cast<long>(p) - 1);
    mpq_class pq(static_cast<long>(p));
    mpq_class a = pm1 / pq - 1 / pm1;
    mpq_class b = pm1 / (pq * pq);
    return mpq_class(dx + 1) * a - mpq_class(rho0) * b;
}

struct AlphaResult {
    SElement eta;
    std::map<IntVec, Valuation> tail;  // per-component guaranteed truncation error
};

/// The operator alpha* on the truncated model: for every interior rho with
/// rho_0 <= dx,
///   eta_rho = sum over interior nu (nu_0 <= dx) with mu = p nu - rho in M of
///             pi^(rho_0 - nu_0) B_mu(1,.) xi_nu(lambda^p),
/// truncated to degree dlambda (exact there) and to the support weight dx
/// (quantified by the reported tail valuations).
inline AlphaResult alpha_star(DworkContext& ctx, const SElement& xi) {
    AlphaResult out;
    out.eta.p = ctx.p;
    out.eta.dx = ctx.dx;
    out.eta.dlambda = ctx.dlambda;
    out.eta.precision = xi.precision;

    const size_t vars = ctx.config.N();
    Valuation xiFloor = xi.norm_valuation();

    // Frobenius images once per support point.
    std::map<IntVec, TruncatedSeries<PiAdic>> frob;
    for (const auto& [nu, s] : xi.comp) frob.emplace(nu, s.substitute_power(ctx.p));

    for (const auto& rho : ctx.interior) {
        TruncatedSeries<PiAdic> acc(vars, ctx.dlambda, PiAdic::zero(ctx.p));
        for (const auto& [nu, xiNuFrob] : frob) {
            IntVec mu = vec_sub(vec_scale(ctx.p, nu), rho.mu);
            if (!ctx.in_M(mu)) continue;
            long rho0 = rho.weight();
            long nu0 = static_cast<long>(nu[0].get_si());
            const auto& bpoly = ctx.bmu.get(mu);
            PiAdic piFactor = PiAdic::pi_power(ctx.p, rho0 - nu0);
            acc = acc + (bpoly * xiNuFrob).scaled(piFactor);
        }
        if (xi.precision) acc = acc.map_coeffs([&](const PiAdic& c) { return c.truncate(*xi.precision); },
                                               PiAdic::zero(ctx.p));
        Valuation tail = Valuation(alpha_tail_exponent(ctx.p, ctx.dx, rho.weight())) + xiFloor;
        out.tail.emplace(rho.mu, tail);
        out.eta.set_component(rho.mu, std::move(acc));
    }
    return out;
}

/// One application of the normalized operator beta = alpha*/eta_{a0}.
/// Requires the gate (a0 is the unique weight-1 interior point) and an input
/// in the T model: unit constant term in the a0 slot and norm <= 1.
/// eta_{a0} = p * unit, so the division is performed on eta/p entirely
/// inside the integral model.
inline SElement beta_step(DworkContext& ctx, const SElement& xi) {
    if (!ctx.a0_unique_weight1)
        throw std::domain_error("beta_step: gate violated (a0 is not the unique weight-1 interior point)");
    IntVec a0 = ctx.a0_lift();
    auto it = xi.comp.find(a0);
    if (it == xi.comp.end()) throw std::domain_error("beta_step: input has empty a0 slot");
    {
        Exponent origin(ctx.config.N(), 0);
        Valuation cv = it->second.get(origin).valuation();
        if (!(cv == Valuation(mpq_class(0))))
            throw std::domain_error("beta_step: a0 component must have unit constant term");
        if (xi.norm_valuation() < Valuation(mpq_class(0)))
            throw std::domain_error("beta_step: input norm exceeds 1");
    }

    AlphaResult alpha = alpha_star(ctx, xi);
    auto etaIt = alpha.eta.comp.find(a0);
    if (etaIt == alpha.eta.comp.end()) throw std::domain_error("beta_step: eta_{a0} vanished (insufficient precision)");

    mpq_class invp(1, static_cast<long>(ctx.p));
    PiAdic scale = PiAdic(ctx.p, invp);
    TruncatedSeries<PiAdic> unit = etaIt->second.scaled(scale);  // eta_{a0} / p
    {
        Exponent origin(ctx.config.N(), 0);
        Valuation cv = unit.get(origin).valuation();
        if (!(cv == Valuation(mpq_class(0))))
            throw std::domain_error("beta_step: eta_{a0}/p is not a unit (gate violation or lost precision)");
    }

    SElement out;
    out.p = ctx.p;
    out.dx = ctx.dx;
    out.dlambda = ctx.dlambda;
    out.precision = xi.precision;
    for (const auto& [rho, etaRho] : alpha.eta.comp) {
        TruncatedSeries<PiAdic> q = divide_by_unit(etaRho.scaled(scale), unit);
        if (xi.precision) q = q.map_coeffs([&](const PiAdic& c) { return c.truncate(*xi.precision); },
                                           PiAdic::zero(ctx.p));
        out.set_component(rho, std::move(q));
    }
    return out;
}

/// Single-slot seed xi_{a0} = 1 (the canonical member of the T model).
inline SElement seed_element(const DworkContext& ctx, std::optional<mpq_class> precision = std::nullopt) {
    SElement out;
    out.p = ctx.p;
    out.dx = ctx.dx;
    out.dlambda = ctx.dlambda;
    out.precision = precision;
    TruncatedSeries<PiAdic> one(ctx.config.N(), ctx.dlambda, PiAdic::zero(ctx.p));
    one.set(Exponent(ctx.config.N(), 0), PiAdic::one(ctx.p));
    out.comp.emplace(ctx.a0_lift(), std::move(one));
    return out;
}

struct IterationResult {
    SElement fixed;
    std::vector<Valuation> decay;  // valuation of successive differences
    bool converged = false;
    std::optional<mpq_class> min_step_gain;  // min valuation gain per step (Chat = p^-gain)
};

/// Iterates beta from the seed until the successive-difference valuation
/// reaches the target (or max_iters).  The decay log must be strictly
/// improving after the first step; a stall raises the non-contraction alarm.
inline IterationResult iterate_to_fixed_point(DworkContext& ctx, const SElement& seed, int max_iters,
                                              const mpq_class& target_valuation) {
    if (seed.precision && *seed.precision < target_valuation)
        throw precision_error("iterate_to_fixed_point: target valuation exceeds the precision cap");
    IterationResult out;
    SElement cur = seed;
    for (int step = 0; step < max_iters; ++step) {
        SElement next = beta_step(ctx, cur);
        Valuation diff = (next - cur).norm_valuation();
        if (!out.decay.empty()) {
            const Valuation& prev = out.decay.back();
            if (!(diff > prev))
                throw std::runtime_error("iterate_to_fixed_point: non-contraction alarm at step " +
                                         std::to_string(step + 1) + " (" + diff.str() + " after " + prev.str() + ")");
            if (!prev.is_infinite() && !diff.is_infinite()) {
                mpq_class gain = diff.value() - prev.value();
                if (!out.min_step_gain || gain < *out.min_step_gain) out.min_step_gain = gain;
            }
        }
        out.decay.push_back(diff);
        cur = std::move(next);
        if (diff >= Valuation(target_valuation)) {
            out.converged = true;
            break;
        }
    }
    out.fixed = std::move(cur);
    return out;
}

/// The explicit eigenvector of Section-3 type: integer coefficient series
///   xi_rho = sum over l_1..l_N >= 0 with sum_i l_i (1,a_i) - (l_0+1)(1,a_0) = -rho
///            of (-1)^(rho_0-1+s) (rho_0-1+s)!/(l_1!..l_N!) t^l,  s = sum l_i,
/// whose a0 component is exactly Phi.
struct XiExplicit {
    std::map<IntVec, TruncatedSeries<mpz_class>> comp;

    SElement to_selement(unsigned p, int dx, int dlambda) const {
        SElement out;
        out.p = p;
        out.dx = dx;
        out.dlambda = dlambda;
        for (const auto& [mu, s] : comp)
            out.set_component(mu, s.map_coeffs([&](const mpz_class& c) { return PiAdic(p, mpq_class(c)); },
                                               PiAdic::zero(p)));
        return out;
    }
};

inline XiExplicit build_xi_explicit(const DworkContext& ctx) {
    XiExplicit out;
    const size_t vars = ctx.config.N();
    IntMat pts = ctx.config.hull_lifts();
    IntVec a0 = ctx.a0_lift();
    for (const auto& rho : ctx.interior) {
        long rho0 = rho.weight();
        TruncatedSeries<mpz_class> s(vars, ctx.dlambda, mpz_class(0));
        for (int deg = 0; deg <= ctx.dlambda; ++deg) {
            // l_0 = rho_0 - 1 + deg; target for (l_1..l_N): (l_0+1) a0hat - rho
            IntVec target = vec_sub(vec_scale(rho0 + deg, a0), rho.mu);
            for_each_expansion(pts, target, [&](const std::vector<int>& l) {
                long l0 = rho0 - 1 + deg;
                mpz_class c = factorial_mpz(static_cast<unsigned long>(l0));
                for (int li : l) c /= factorial_mpz(static_cast<unsigned long>(li));
                if (l0 % 2 != 0) c = -c;
                s.add_to(Exponent(l.begin(), l.end()), c);
            });
        }
        if (!s.is_zero()) out.comp.emplace(rho.mu, std::move(s));
    }
    return out;
}

/// One coefficient report from the classical single-variable identities.
struct CoefficientMargin {
    long index;
    Valuation margin;
};

/// Checks H = pG in the single variable u = lambda_0 x^(a0hat): the
/// coefficient of (pi u)^(-1-l) of gamma_-(theta(u) G(u^p)) is
///   H_l = sum_m (-1)^m m! pi^(l-m) b_{p(1+m)-(1+l)},
/// an infinite sum truncated once every remaining term is guaranteed
/// valuation >= K; it must match p (-1)^l l! to valuation >= K.
struct GIdentityReport {
    unsigned p;
    mpq_class K;
    std::vector<CoefficientMargin> coefficients;  // margin of H_l - p(-1)^l l!

    bool all_within() const {
        for (const auto& c : coefficients)
            if (c.margin < Valuation(K)) return false;
        return true;
    }
};

namespace detail {
// Guaranteed valuation of the m-th term of H_l: (l-m)/(p-1) from the pi
// power plus the classical floor for b_{p(1+m)-(1+l)}.  Increasing in m.
inline mpq_class g_term_floor(unsigned p, long l, long m) {
    mpq_class pm1(static_cast<long>(p) - 1);
    long idx = static_cast<long>(p) * (1 + m) - (1 + l);
    return mpq_class(l - m) / pm1 + mpq_class(idx * (static_cast<long>(p) - 1), static_cast<long>(p) * static_cast<long>(p));
}
}  // namespace detail

inline GIdentityReport g_identity_check(unsigned p, long max_l, const mpq_class& K) {
    GIdentityReport out{p, K, {}};
    // find the largest theta index needed across all l
    size_t need = static_cast<size_t>(p);
    std::vector<long> cutoffs;
    for (long l = 0; l <= max_l; ++l) {
        long m = 0;
        while (static_cast<long>(p) * (1 + m) - (1 + l) < 0) ++m;
        while (detail::g_term_floor(p, l, m) < K) ++m;
        cutoffs.push_back(m);
        long idx = static_cast<long>(p) * (1 + m) - (1 + l);
        if (idx > 0) need = std::max(need, static_cast<size_t>(idx));
    }
    ThetaTable theta = theta_coeffs(p, need);
    for (long l = 0; l <= max_l; ++l) {
        PiAdic sum = PiAdic::zero(p);
        long m = 0;
        while (static_cast<long>(p) * (1 + m) - (1 + l) < 0) ++m;
        for (; m < cutoffs[static_cast<size_t>(l)]; ++m) {
            long idx = static_cast<long>(p) * (1 + m) - (1 + l);
            PiAdic term = theta.at(static_cast<size_t>(idx)) * PiAdic::pi_power(p, l - m);
            term = term * mpq_class(factorial_mpz(static_cast<unsigned long>(m)));
            if (m % 2 != 0) term = -term;
            sum += term;
        }
        mpz_class targetInt = factorial_mpz(static_cast<unsigned long>(l)) * static_cast<long>(p);
        if (l % 2 != 0) targetInt = -targetInt;
        PiAdic diff = sum - PiAdic(p, mpq_class(targetInt));
        out.coefficients.push_back({l, diff.valuation()});
    }
    return out;
}

/// Partial sums of the Boyarsky-type evaluation
///   -p sum_l b_{pl} (-1)^l l! pi^(-l)  ->  -p Gamma_p(p) = (-1)^(p+1) p!,
/// reporting the valuation margin of each partial sum against the target.
struct BoyarskyReport {
    unsigned p;
    mpz_class target;                // (-1)^(p+1) p!
    std::vector<Valuation> margins;  // margin after including l = 0..M
};

inline BoyarskyReport boyarsky_check(unsigned p, long max_terms, const mpq_class& K) {
    ThetaTable theta = theta_coeffs(p, static_cast<size_t>(p) * static_cast<size_t>(max_terms));
    BoyarskyReport out;
    out.p = p;
    out.target = factorial_mpz(p);
    if (p % 2 == 0) out.target = -out.target;  // (-1)^(p+1)
    PiAdic sum = PiAdic::zero(p);
    PiAdic target(p, mpq_class(out.target));
    for (long l = 0; l <= max_terms; ++l) {
        PiAdic term = theta.at(static_cast<size_t>(p) * static_cast<size_t>(l)) * PiAdic::pi_power(p, -l);
        term = term * mpq_class(factorial_mpz(static_cast<unsigned long>(l)));
        if (l % 2 != 0) term = -term;
        sum += term;
        PiAdic partial = sum * mpq_class(-static_cast<long>(p));
        out.margins.push_back((partial - target).valuation());
    }
    if (out.margins.empty() || out.margins.back() < Valuation(K))
        throw precision_error("boyarsky_check: partial sums did not reach the requested valuation");
    return out;
}

}  // namespace ahg
