#pragma once

#include <gmpxx.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ahg/dwork.hpp"
#include "ahg/geometry.hpp"
#include "ahg/hypergeometric.hpp"
#include "ahg/series.hpp"

namespace ahg {

/// One named check with its claimed tolerance (a valuation the margin must
/// reach) and the achieved margin.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string tolerance;  // rendered exact rational, or a predicate note
    std::string margin;     // rendered exact rational or "inf"
    std::string detail;
};

struct CongruenceReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(CheckResult c) { checks.push_back(std::move(c)); }

    std::string render_text() const {
        size_t w = 4;
        for (const auto& c : checks) w = std::max(w, c.name.size());
        std::ostringstream os;
        for (const auto& c : checks) {
            os << (c.pass ? "PASS  " : "FAIL  ") << c.name;
            os << std::string(w - c.name.size() + 2, ' ');
            os << "tolerance=" << c.tolerance << "  margin=" << c.margin;
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            os << "\n";
        }
        os << (all_pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
        return os.str();
    }

    std::string render_structured() const {
        auto esc = [](const std::string& s) {
            std::string out;
            for (char c : s) {
                if (c == '"' || c == '\\') out.push_back('\\');
                out.push_back(c);
            }
            return out;
        };
        std::ostringstream os;
        os << "{\n  \"checks\": [\n";
        for (size_t i = 0; i < checks.size(); ++i) {
            const auto& c = checks[i];
            os << "    {\"check\": \"" << esc(c.name) << "\", \"tolerance\": \"" << esc(c.tolerance)
               << "\", \"margin\": \"" << esc(c.margin) << "\", \"pass\": " << (c.pass ? "true" : "false");
            if (!c.detail.empty()) os << ", \"detail\": \"" << esc(c.detail) << "\"";
            os << "}" << (i + 1 < checks.size() ? "," : "") << "\n";
        }
        os << "  ],\n  \"pass\": " << (all_pass() ? "true" : "false") << "\n}\n";
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

inline CheckResult check_gate(const PointConfiguration& config) {
    GateResult gate = unique_interior_gate(config);
    CheckResult out;
    out.name = "unique-interior-gate";
    out.pass = gate.pass;
    out.tolerance = "exact";
    out.margin = gate.pass ? "inf" : "0";
    std::ostringstream os;
    os << gate.interior_points.size() << " interior point(s)";
    if (!gate.interior_points.empty()) {
        os << ":";
        for (const auto& z : gate.interior_points) {
            os << " (";
            for (size_t i = 0; i < z.size(); ++i) os << z[i] << (i + 1 < z.size() ? "," : "");
            os << ")";
        }
    }
    out.detail = os.str();
    return out;
}

/// Classical valuation floor for the theta coefficients, checked exactly
/// over the whole table.
inline CheckResult check_theta_floor(unsigned p, size_t max_index) {
    ThetaTable t = theta_coeffs(p, max_index);
    CheckResult out;
    out.name = "theta-valuation-floor-p" + std::to_string(p);
    out.tolerance = "0";
    Valuation worst = Valuation::infinity();
    out.pass = true;
    for (size_t i = 0; i <= max_index; ++i) {
        Valuation v = t.at(i).valuation();
        Valuation floor{t.valuation_floor(i)};
        Valuation slack = v.is_infinite() ? Valuation::infinity() : Valuation(v.value() - floor.value());
        if (slack < worst) worst = slack;
        if (v < floor) out.pass = false;
    }
    out.margin = worst.str();
    out.detail = "b_0..b_" + std::to_string(max_index) + " vs i(p-1)/p^2";
    return out;
}

/// Exact polynomial congruence p^(-1) B_((p-1)a0)(1,.) == Phi_1 (mod p).
inline CheckResult check_kernel_truncation_congruence(const PointConfiguration& config, unsigned p) {
    CheckResult out;
    out.name = "kernel-vs-phi1-mod-p-p" + std::to_string(p);
    out.tolerance = "1";
    ThetaTable theta = theta_coeffs(p, p - 1);
    IntVec mu = vec_scale(static_cast<long>(p) - 1, config.lift(0));
    int bound = static_cast<int>(p) - 1;
    BmuPolynomial b = bmu_polynomial(config, mu, theta, bound);
    TruncatedSeries<mpz_class> phi1 = phi1_series(config, p, bound);

    // collect the union of supports; every coefficient of B is pi-free here
    Valuation worst = Valuation::infinity();
    bool ok = !b.empty_expansion;
    std::map<Exponent, mpq_class> scaled;
    for (const auto& [e, c] : b.poly.terms()) {
        const auto& q = c.coeffs();
        for (size_t m = 1; m < q.size(); ++m)
            if (q[m] != 0) ok = false;  // a pi-power survived: not the expected shape
        scaled[e] = q[0] / mpq_class(static_cast<long>(p));
    }
    for (const auto& [e, c] : phi1.terms()) scaled[e] -= mpq_class(c);
    for (const auto& [e, q] : scaled) {
        if (q == 0) continue;
        Valuation v{mpq_class(ord_p_mpq(q, p))};
        if (v < worst) worst = v;
    }
    if (worst < Valuation(mpq_class(1))) ok = false;
    out.pass = ok;
    out.margin = worst.str();
    out.detail = "p^-1 B_((p-1)a0) vs Phi_1 coefficientwise";
    return out;
}

/// Norm |B_((p-1)a0)(1,.)| = |p|: all coefficients valuation >= 1 and the
/// constant term exactly -p/(p-1)! (valuation exactly 1).
inline CheckResult check_kernel_truncation_norm(const PointConfiguration& config, unsigned p) {
    CheckResult out;
    out.name = "kernel-norm-p" + std::to_string(p);
    out.tolerance = "1";
    ThetaTable theta = theta_coeffs(p, p - 1);
    IntVec mu = vec_scale(static_cast<long>(p) - 1, config.lift(0));
    BmuPolynomial b = bmu_polynomial(config, mu, theta, static_cast<int>(p) - 1);
    Valuation worst = min_valuation(b.poly);
    PiAdic expected(p, mpq_class(mpz_class(-static_cast<long>(p)), factorial_mpz(p - 1)));
    PiAdic constant = b.poly.get(Exponent(config.N(), 0));
    bool constOk = (constant == expected) && constant.valuation() == Valuation(mpq_class(1));
    out.pass = constOk && !(worst < Valuation(mpq_class(1)));
    out.margin = worst.str();
    out.detail = constOk ? "constant term -p/(p-1)! exact" : "constant term mismatch";
    return out;
}

/// Mod-p ratio congruence Phi == Phi_1 * Phi^sigma (mod p, total degree D),
/// via the direct series pipeline only (no operator involvement).
inline CheckResult verify_mod_p_ratio(const PointConfiguration& config, unsigned p, int degree_bound) {
    CheckResult out;
    out.name = "mod-p-ratio-p" + std::to_string(p) + "-D" + std::to_string(degree_bound);
    out.tolerance = "1";
    TruncatedSeries<mpz_class> phi = phi_series(config, degree_bound);
    TruncatedSeries<mpz_class> phi1 = phi1_series(config, p, degree_bound);
    TruncatedSeries<mpz_class> prod = phi1 * phi.substitute_power(p);
    TruncatedSeries<mpz_class> diff = phi - prod;
    Valuation margin = min_valuation(diff, p);
    out.pass = !(margin < Valuation(mpq_class(1)));
    out.margin = margin.str();
    out.detail = std::to_string(phi.terms().size()) + " series terms compared";
    return out;
}

/// The two routes to Phi/Phi^sigma: operator-derived p^(-1) eta_{a0} from
/// alpha* on the normalized explicit eigenvector, against the direct series
/// division.  Both must agree within the reported truncation tail, and the
/// mod-p reduction of the operator route must equal Phi_1.
inline CheckResult verify_ratio_via_operator(DworkContext& ctx) {
    CheckResult out;
    out.name = "ratio-via-operator-p" + std::to_string(ctx.p);

    const size_t vars = ctx.config.N();
    TruncatedSeries<mpz_class> phi = phi_series(ctx.config, ctx.dlambda);
    XiExplicit xi = build_xi_explicit(ctx);

    // normalize: zeta_rho = xi_rho / Phi (integer series division, unit 1)
    XiExplicit zeta;
    for (const auto& [mu, s] : xi.comp) zeta.comp.emplace(mu, divide_by_unit(s, phi));
    SElement zetaS = zeta.to_selement(ctx.p, ctx.dx, ctx.dlambda);

    AlphaResult alpha = alpha_star(ctx, zetaS);
    auto it = alpha.eta.comp.find(ctx.a0_lift());
    if (it == alpha.eta.comp.end()) {
        out.pass = false;
        out.tolerance = "n/a";
        out.margin = "-inf";
        out.detail = "eta_{a0} missing";
        return out;
    }
    TruncatedSeries<PiAdic> ratioOp = it->second.scaled(PiAdic(ctx.p, mpq_class(1, static_cast<long>(ctx.p))));

    // route agreement: ratioOp * Phi^sigma vs Phi
    auto phiPi = phi.map_coeffs([&](const mpz_class& c) { return PiAdic(ctx.p, mpq_class(c)); }, PiAdic::zero(ctx.p));
    Valuation marginConsistency = min_valuation(ratioOp * phiPi.substitute_power(ctx.p) - phiPi);

    // direct route: q = Phi / Phi^sigma over Z (constant term of Phi^sigma is 1)
    TruncatedSeries<mpz_class> ratioDirect = divide_by_unit(phi, phi.substitute_power(ctx.p));
    auto ratioDirectPi =
        ratioDirect.map_coeffs([&](const mpz_class& c) { return PiAdic(ctx.p, mpq_class(c)); }, PiAdic::zero(ctx.p));
    Valuation marginRoutes = min_valuation(ratioOp - ratioDirectPi);

    // mod-p reduction equals Phi_1
    auto phi1Pi = phi1_series(ctx.config, ctx.p, ctx.dlambda)
                      .map_coeffs([&](const mpz_class& c) { return PiAdic(ctx.p, mpq_class(c)); }, PiAdic::zero(ctx.p));
    Valuation marginPhi1 = min_valuation(ratioOp - phi1Pi);

    Valuation tail = alpha.tail.at(ctx.a0_lift());
    // eta was divided by p, so the guaranteed tail shifts down by 1
    Valuation tol = tail.is_infinite() ? tail : Valuation(tail.value() - 1);
    Valuation margin = min(marginConsistency, marginRoutes);
    out.tolerance = tol.str();
    out.margin = margin.str();
    out.pass = margin >= tol && !(marginPhi1 < Valuation(mpq_class(1)));
    out.detail = "routes=" + marginRoutes.str() + " consistency=" + marginConsistency.str() +
                 " mod-p-vs-phi1=" + marginPhi1.str();
    return out;
}

/// Specialization at integer values of t_1..t_N, guarded by the D+ proxy
/// (Phi_1 at the values must be a unit mod p).
struct Specialization {
    unsigned p;
    std::vector<mpz_class> values;  // values of t_1..t_N
    unsigned modulus_power = 1;     // s in p^s
};

inline CheckResult specialize_and_check(const PointConfiguration& config, const Specialization& spec,
                                        int degree_bound) {
    CheckResult out;
    out.name = "specialize-p" + std::to_string(spec.p);
    out.tolerance = "1";
    mpz_class p(static_cast<long>(spec.p));
    mpz_class ps = pow_mpz(p, spec.modulus_power);

    TruncatedSeries<mpz_class> phi1 = phi1_series(config, spec.p, degree_bound);
    mpz_class proxy = evaluate_mod(phi1, spec.values, p);
    if (proxy == 0) {
        out.pass = false;
        out.margin = "0";
        out.detail = "rejected: outside the D+ proxy (Phi_1 value not a unit mod p)";
        return out;
    }

    std::vector<mpz_class> residues;
    bool stable = true;
    bool modpZero = true;
    for (int mult = 1; mult <= 3; ++mult) {
        int D = degree_bound * mult;
        TruncatedSeries<mpz_class> phi = phi_series(config, D);
        TruncatedSeries<mpz_class> prod = phi1_series(config, spec.p, D) * phi.substitute_power(spec.p);
        TruncatedSeries<mpz_class> diff = phi - prod;
        residues.push_back(evaluate_mod(diff, spec.values, ps));
        if (residues.back() % p != 0) modpZero = false;
        if (residues.back() != residues.front()) stable = false;
    }
    Valuation margin = Valuation::infinity();
    for (const auto& r : residues) {
        if (r == 0) continue;
        Valuation v{mpq_class(ord_p_mpz(r, spec.p))};
        if (v < margin) margin = v;
    }
    out.pass = modpZero;
    out.margin = margin.str();
    std::ostringstream os;
    os << "residues mod p^" << spec.modulus_power << " at D,2D,3D:";
    for (const auto& r : residues) os << " " << r.get_str();
    os << (stable ? " (stable)" : " (varying)");
    out.detail = os.str();
    return out;
}

/// Operator norm bound |alpha*(xi)| <= |p| |xi| on deterministic pseudo-random
/// elements, with the strict improvement when the a0 slot is zeroed.
inline CheckResult check_alpha_norm_bound(DworkContext& ctx, int samples, std::uint64_t rng_seed) {
    CheckResult out;
    out.name = "alpha-norm-bound-p" + std::to_string(ctx.p);
    out.tolerance = "1";
    std::mt19937_64 rng(rng_seed);
    auto randomCoeff = [&](unsigned p) {
        long mag = static_cast<long>(p) * static_cast<long>(p);
        long c = static_cast<long>(rng() % static_cast<unsigned long>(2 * mag + 1)) - mag;
        PiAdic x(p, c);
        unsigned shift = static_cast<unsigned>(rng() % static_cast<unsigned long>(p - 1));
        return x * PiAdic::pi_power(p, static_cast<long>(shift));
    };
    Valuation worstGap = Valuation::infinity();
    bool pass = true;
    int strictChecked = 0;
    for (int s = 0; s < samples; ++s) {
        SElement xi;
        xi.p = ctx.p;
        xi.dx = ctx.dx;
        xi.dlambda = ctx.dlambda;
        for (const auto& cp : ctx.interior) {
            if (rng() % 2 == 0 && !(cp.mu == ctx.a0_lift())) continue;
            TruncatedSeries<PiAdic> series(ctx.config.N(), ctx.dlambda, PiAdic::zero(ctx.p));
            int terms = 1 + static_cast<int>(rng() % 3);
            for (int t = 0; t < terms; ++t) {
                Exponent e(ctx.config.N(), 0);
                int budget = static_cast<int>(rng() % static_cast<unsigned long>(ctx.dlambda + 1));
                for (size_t i = 0; i < e.size() && budget > 0; ++i) {
                    e[i] = static_cast<int>(rng() % static_cast<unsigned long>(budget + 1));
                    budget -= e[i];
                }
                series.add_to(e, randomCoeff(ctx.p));
            }
            if (!series.is_zero()) xi.set_component(cp.mu, std::move(series));
        }
        if (xi.comp.empty()) continue;

        Valuation vin = xi.norm_valuation();
        Valuation vout = alpha_star(ctx, xi).eta.norm_valuation();
        Valuation bound = vin + Valuation(mpq_class(1));
        if (vout < bound) pass = false;
        Valuation gap = vout.is_infinite() ? Valuation::infinity() : Valuation(vout.value() - (vin.value() + 1));
        if (gap < worstGap) worstGap = gap;

        // strict part: zero the a0 slot
        SElement xi0 = xi;
        xi0.comp.erase(ctx.a0_lift());
        if (!xi0.comp.empty()) {
            ++strictChecked;
            Valuation v0 = xi0.norm_valuation();
            Valuation w0 = alpha_star(ctx, xi0).eta.norm_valuation();
            if (!(w0 > v0 + Valuation(mpq_class(1)))) pass = false;
        }
    }
    out.pass = pass && strictChecked > 0;
    out.margin = worstGap.str();
    out.detail = std::to_string(samples) + " samples, " + std::to_string(strictChecked) + " strict (zeroed a0 slot)";
    return out;
}

/// Eigenvector identity alpha*(xi) = p xi for the explicit eigenvector, to
/// the reported truncation tolerance, with the achieved margin also checked
/// against a hard floor.
inline CheckResult check_eigen_identity(DworkContext& ctx, const std::optional<mpq_class>& K,
                                        const mpq_class& hard_floor) {
    CheckResult out;
    out.name = "eigenvector-identity-p" + std::to_string(ctx.p);
    XiExplicit xi = build_xi_explicit(ctx);
    SElement xiS = xi.to_selement(ctx.p, ctx.dx, ctx.dlambda);
    xiS.precision = K;
    AlphaResult alpha = alpha_star(ctx, xiS);

    SElement pxi = xiS.scaled(PiAdic(ctx.p, static_cast<long>(ctx.p)));
    if (K) pxi = pxi.truncated(*K);
    SElement diff = alpha.eta - pxi;
    Valuation margin = diff.norm_valuation();

    // tolerance: min over support of min(K, tail)
    Valuation tol = Valuation::infinity();
    for (const auto& [mu, t] : alpha.tail) {
        Valuation cand = t;
        if (K && Valuation(*K) < cand) cand = Valuation(*K);
        if (cand < tol) tol = cand;
    }
    out.tolerance = tol.str();
    out.margin = margin.str();
    out.pass = margin >= tol && margin >= Valuation(hard_floor);
    out.detail = "hard floor " + hard_floor.get_str();
    return out;
}

/// Contraction of beta from the canonical seed: strictly improving decay
/// log, measured ratio < 1, and the fixed point must match the explicit
/// eigenvector normalized by Phi.
inline CheckResult check_contraction(DworkContext& ctx, const mpq_class& K, const mpq_class& target,
                                     const mpq_class& match_floor, int max_iters = 64) {
    CheckResult out;
    out.name = "beta-contraction-p" + std::to_string(ctx.p);
    out.tolerance = target.get_str();
    IterationResult iter = iterate_to_fixed_point(ctx, seed_element(ctx, K), max_iters, target);

    TruncatedSeries<mpz_class> phi = phi_series(ctx.config, ctx.dlambda);
    XiExplicit xi = build_xi_explicit(ctx);
    XiExplicit zeta;
    for (const auto& [mu, s] : xi.comp) zeta.comp.emplace(mu, divide_by_unit(s, phi));
    SElement zetaS = zeta.to_selement(ctx.p, ctx.dx, ctx.dlambda).truncated(K);
    Valuation matchMargin = (iter.fixed - zetaS).norm_valuation();

    bool ratioOk = iter.min_step_gain ? (*iter.min_step_gain > 0) : true;
    out.pass = iter.converged && ratioOk && matchMargin >= Valuation(match_floor);
    std::ostringstream os;
    os << "decay:";
    for (const auto& v : iter.decay) os << " " << v.str();
    os << "; Chat=p^-" << (iter.min_step_gain ? iter.min_step_gain->get_str() : std::string("inf"));
    os << "; fixed-vs-eigen margin " << matchMargin.str() << " (floor " << match_floor.get_str() << ")";
    out.margin = matchMargin.str();
    out.detail = os.str();
    return out;
}

/// Annihilation of lambda_0^(-1) Phi by the A-hypergeometric operators:
/// Euler residuals vanish termwise; box residuals vanish on the reliable
/// window for every relation-basis vector.
inline CheckResult check_annihilation(const PointConfiguration& config, int degree_bound) {
    CheckResult out;
    out.name = "annihilation";
    out.tolerance = "exact";
    bool pass = true;
    std::ostringstream os;
    for (size_t i = 0; i <= config.n; ++i) {
        auto res = apply_operator(HypergeometricOperator::euler(config, i), config, degree_bound);
        if (!res.identically_zero()) {
            pass = false;
            os << " Z_" << i << " nonzero;";
        }
    }
    IntMat rels = relation_lattice_basis(config);
    for (const auto& l : rels) {
        auto res = apply_operator(HypergeometricOperator::box(config, l), config, degree_bound);
        if (!res.reliable_part_is_zero()) {
            pass = false;
            os << " box residual nonzero;";
        }
    }
    out.pass = pass;
    out.margin = pass ? "inf" : "0";
    out.detail = std::to_string(config.n + 1) + " Euler + " + std::to_string(rels.size()) + " box operators" + os.str();
    return out;
}

inline CheckResult check_g_identity(unsigned p, long max_l, const mpq_class& K) {
    GIdentityReport rep = g_identity_check(p, max_l, K);
    CheckResult out;
    out.name = "g-identity-p" + std::to_string(p);
    out.tolerance = K.get_str();
    Valuation worst = Valuation::infinity();
    for (const auto& c : rep.coefficients)
        if (c.margin < worst) worst = c.margin;
    out.pass = rep.all_within();
    out.margin = worst.str();
    out.detail = "coefficients l <= " + std::to_string(max_l);
    return out;
}

inline CheckResult check_boyarsky(unsigned p, long max_terms, const mpq_class& K) {
    CheckResult out;
    out.name = "boyarsky-p" + std::to_string(p);
    out.tolerance = K.get_str();
    try {
        BoyarskyReport rep = boyarsky_check(p, max_terms, K);
        out.pass = true;
        out.margin = rep.margins.back().str();
        std::ostringstream os;
        os << "target " << rep.target.get_str() << "; margins:";
        for (const auto& m : rep.margins) os << " " << m.str();
        out.detail = os.str();
    } catch (const precision_error& e) {
        out.pass = false;
        out.margin = "0";
        out.detail = e.what();
    }
    return out;
}

}  // namespace ahg
