#pragma once

#include <gmpxx.h>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/util.hpp"
#include "ahg/valuation.hpp"

namespace ahg {

/// Exact element of the totally ramified ring Q[pi]/(pi^(p-1) + p), i.e. the
/// ring generated by a uniformizer pi with pi^(p-1) = -p, p an odd prime.
///
/// The stored form is a vector of exact rational coefficients q_0..q_{p-2}
/// for pi^0..pi^(p-2); powers outside that window are rewritten eagerly via
/// pi^(p-1) = -p and pi^(-1) = -pi^(p-2)/p.  Because the extension is totally
/// ramified, distinct monomials q_m pi^m carry distinct valuations, so
/// valuation(x) = min_m (ord_p(q_m) + m/(p-1)) holds exactly, not merely as a
/// lower bound.
///
/// An element may carry an optional precision cap K, meaning "this value is
/// known modulo elements of valuation >= K".  Arithmetic propagates caps by
/// the ultrametric rules; values without caps are exact.
class PiAdic {
  public:
    PiAdic() : p_(3), c_(2) {}

    explicit PiAdic(unsigned p) : p_(check_p(p)), c_(p - 1) {}

    PiAdic(unsigned p, const mpq_class& constant) : p_(check_p(p)), c_(p - 1) {
        c_[0] = constant;
        c_[0].canonicalize();
    }

    PiAdic(unsigned p, long constant) : PiAdic(p, mpq_class(constant)) {}

    static PiAdic zero(unsigned p) { return PiAdic(p); }
    static PiAdic one(unsigned p) { return PiAdic(p, 1); }

    /// Normal-form representative of pi^e; e may be negative
    /// (pi^(-1) = -pi^(p-2)/p).
    static PiAdic pi_power(unsigned p, long e) {
        PiAdic out{p};
        long step = static_cast<long>(p) - 1;
        long q = e >= 0 ? e / step : -((-e + step - 1) / step);
        long r = e - q * step;  // 0 <= r < p-1
        mpq_class factor;
        if (q >= 0) {
            factor = mpq_class(pow_mpz(mpz_class(-static_cast<long>(p)), static_cast<unsigned long>(q)));
        } else {
            factor = mpq_class(1) / mpq_class(pow_mpz(mpz_class(-static_cast<long>(p)), static_cast<unsigned long>(-q)));
        }
        out.c_[static_cast<size_t>(r)] = factor;
        return out;
    }

    unsigned prime() const { return p_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    const std::optional<mpq_class>& precision_cap() const { return cap_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }

    /// Exact valuation, normalized so ord(p) = 1; +inf for zero.
    Valuation valuation() const {
        Valuation best = Valuation::infinity();
        for (size_t m = 0; m < c_.size(); ++m) {
            if (c_[m] == 0) continue;
            mpq_class v = mpq_class(ord_p_mpq(c_[m], p_)) + mpq_class(static_cast<long>(m), static_cast<long>(p_) - 1);
            Valuation cand{v};
            if (cand < best) best = cand;
        }
        return best;
    }

    PiAdic operator-() const {
        PiAdic out = *this;
        for (auto& q : out.c_) q = -q;
        return out;
    }

    friend PiAdic operator+(const PiAdic& a, const PiAdic& b) {
        a.check_same(b);
        PiAdic out{a.p_};
        for (size_t m = 0; m < a.c_.size(); ++m) out.c_[m] = a.c_[m] + b.c_[m];
        out.cap_ = min_cap(a.cap_, b.cap_);
        return out;
    }

    friend PiAdic operator-(const PiAdic& a, const PiAdic& b) { return a + (-b); }

    friend PiAdic operator*(const PiAdic& a, const PiAdic& b) {
        a.check_same(b);
        PiAdic out{a.p_};
        const long step = static_cast<long>(a.p_) - 1;
        for (size_t m = 0; m < a.c_.size(); ++m) {
            if (a.c_[m] == 0) continue;
            for (size_t k = 0; k < b.c_.size(); ++k) {
                if (b.c_[k] == 0) continue;
                size_t e = m + k;
                mpq_class q = a.c_[m] * b.c_[k];
                if (e >= static_cast<size_t>(step)) {
                    e -= static_cast<size_t>(step);
                    q *= -static_cast<long>(a.p_);
                }
                out.c_[e] += q;
            }
        }
        out.cap_ = mul_cap(a, b);
        return out;
    }

    friend PiAdic operator*(const PiAdic& a, const mpq_class& s) {
        PiAdic out = a;
        for (auto& q : out.c_) q *= s;
        if (out.cap_ && s != 0) *out.cap_ += mpq_class(ord_p_mpq(s, a.p_));
        return out;
    }

    PiAdic& operator+=(const PiAdic& b) { return *this = *this + b; }
    PiAdic& operator-=(const PiAdic& b) { return *this = *this - b; }
    PiAdic& operator*=(const PiAdic& b) { return *this = *this * b; }

    /// Value equality of the stored representatives (caps are metadata).
    friend bool operator==(const PiAdic& a, const PiAdic& b) {
        a.check_same(b);
        return a.c_ == b.c_;
    }

    /// Multiplicative inverse in the fraction field Q(pi).  The name follows
    /// the intended use: inputs are typically units of the valuation ring,
    /// but any nonzero element inverts; a precision cap must leave usable
    /// digits (cap > valuation), and the result cap is cap - 2*valuation.
    PiAdic invert_unit() const {
        if (is_zero()) throw std::domain_error("PiAdic: inversion of zero");
        Valuation val = valuation();
        if (cap_ && Valuation(*cap_) <= val)
            throw precision_error("PiAdic: inversion with no usable digits under the precision cap");
        // Extended Euclid in Q[X] against X^(p-1) + p.
        std::vector<mpq_class> f(p_, 0);
        f[0] = static_cast<long>(p_);
        f[p_ - 1] = 1;
        std::vector<mpq_class> r0 = f, r1(c_.begin(), c_.end());
        trim(r1);
        std::vector<mpq_class> s0{}, s1{mpq_class(1)};
        while (!r1.empty()) {
            auto [q, rem] = divmod(r0, r1);
            r0 = r1;
            r1 = rem;
            auto s2 = sub(s0, mul(q, s1));
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (a nonzero constant, since f is irreducible), s0 * x = r0 mod f.
        if (r0.size() != 1) throw std::logic_error("PiAdic: modulus not irreducible?");
        PiAdic out{p_};
        for (size_t m = 0; m < s0.size() && m < out.c_.size(); ++m) out.c_[m] = s0[m] / r0[0];
        if (cap_) {
            mpq_class v = val.value();
            out.cap_ = *cap_ - 2 * v;
        }
        return out;
    }

    /// Canonical representative modulo {valuation >= K}: each coefficient
    /// q_m is reduced modulo p^ceil(K - m/(p-1)) into the least nonnegative
    /// residue of its p-free unit part.  Idempotent; sets the cap to K.
    PiAdic truncate(const mpq_class& K) const {
        PiAdic out{p_};
        for (size_t m = 0; m < c_.size(); ++m) {
            if (c_[m] == 0) continue;
            mpq_class target = mpq_class(K) - mpq_class(static_cast<long>(m), static_cast<long>(p_) - 1);
            long s = static_cast<long>(ceil_mpq(target).get_si());
            out.c_[m] = reduce_rational(c_[m], s);
        }
        mpq_class cap = K;
        if (cap_ && *cap_ < cap) cap = *cap_;
        out.cap_ = cap;
        return out;
    }

    PiAdic with_cap(const mpq_class& K) const {
        PiAdic out = *this;
        mpq_class k = K;
        k.canonicalize();
        out.cap_ = cap_ ? std::min(*cap_, k) : k;
        return out;
    }

    PiAdic without_cap() const {
        PiAdic out = *this;
        out.cap_.reset();
        return out;
    }

    /// Rendering "q0 + q1*pi + q2*pi^2 (mod >= K)"; parse() inverts exactly.
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t m = 0; m < c_.size(); ++m) {
            if (c_[m] == 0) continue;
            if (!first) os << " + ";
            os << c_[m].get_str();
            if (m == 1) os << "*pi";
            if (m >= 2) os << "*pi^" << m;
            first = false;
        }
        if (first) os << "0";
        if (cap_) os << " (mod >= " << cap_->get_str() << ")";
        return os.str();
    }

    static PiAdic parse(unsigned p, const std::string& text) {
        PiAdic out{p};
        std::string body = text;
        auto capPos = body.find(" (mod >= ");
        if (capPos != std::string::npos) {
            auto end = body.rfind(')');
            if (end == std::string::npos || end < capPos)
                throw std::invalid_argument("PiAdic::parse: malformed cap in '" + text + "'");
            mpq_class k;
            if (k.set_str(body.substr(capPos + 9, end - capPos - 9), 10) != 0)
                throw std::invalid_argument("PiAdic::parse: bad cap rational in '" + text + "'");
            k.canonicalize();
            out.cap_ = k;
            body = body.substr(0, capPos);
        }
        size_t pos = 0;
        while (pos < body.size()) {
            size_t next = body.find(" + ", pos);
            std::string term = body.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            pos = next == std::string::npos ? body.size() : next + 3;
            if (term.empty()) continue;
            size_t star = term.find("*pi");
            std::string coefStr = star == std::string::npos ? term : term.substr(0, star);
            size_t m = 0;
            if (star != std::string::npos) {
                std::string powStr = term.substr(star + 3);
                if (powStr.empty())
                    m = 1;
                else if (powStr[0] == '^')
                    m = static_cast<size_t>(std::stol(powStr.substr(1)));
                else
                    throw std::invalid_argument("PiAdic::parse: bad pi power in '" + term + "'");
            }
            if (m >= out.c_.size()) throw std::invalid_argument("PiAdic::parse: exponent out of range in '" + term + "'");
            mpq_class q;
            if (q.set_str(coefStr, 10) != 0)
                throw std::invalid_argument("PiAdic::parse: bad rational '" + coefStr + "'");
            q.canonicalize();
            out.c_[m] += q;
        }
        return out;
    }

  private:
    static unsigned check_p(unsigned p) {
        if (p < 3 || p % 2 == 0)
            throw std::invalid_argument("PiAdic: p must be an odd prime (p = 2 is unsupported)");
        return p;
    }

    void check_same(const PiAdic& b) const {
        if (p_ != b.p_) throw std::invalid_argument("PiAdic: mixed primes");
    }

    static std::optional<mpq_class> min_cap(const std::optional<mpq_class>& a, const std::optional<mpq_class>& b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    // Error term of a product: e_a*b + a*e_b + e_a*e_b.
    static std::optional<mpq_class> mul_cap(const PiAdic& a, const PiAdic& b) {
        if (!a.cap_ && !b.cap_) return std::nullopt;
        std::optional<mpq_class> out;
        auto consider = [&out](const Valuation& v) {
            if (v.is_infinite()) return;
            if (!out || v.value() < *out) out = v.value();
        };
        if (a.cap_) consider(Valuation(*a.cap_) + b.valuation());
        if (b.cap_) consider(Valuation(*b.cap_) + a.valuation());
        if (a.cap_ && b.cap_) consider(Valuation(*a.cap_ + *b.cap_));
        if (!out) return mpq_class(0);  // both factors zero reps with caps; keep a floor
        return out;
    }

    // q -> canonical residue modulo p^s (s may be <= 0): p^v * (unit mod p^(s-v)).
    mpq_class reduce_rational(const mpq_class& q, long s) const {
        long v = ord_p_mpq(q, p_);
        if (v >= s) return mpq_class(0);
        mpz_class pz(static_cast<long>(p_));
        mpz_class num = q.get_num(), den = q.get_den(), rest;
        // strip p-powers
        if (num != 0) mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()), num = rest;
        mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
        den = rest;
        unsigned long k = static_cast<unsigned long>(s - v);
        mpz_class mod = pow_mpz(pz, k);
        mpz_class deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("PiAdic: p-free denominator not invertible");
        mpz_class unit = (num * deninv) % mod;
        if (unit < 0) unit += mod;
        mpq_class out(unit);
        if (v >= 0)
            out *= mpq_class(pow_mpz(pz, static_cast<unsigned long>(v)));
        else
            out /= mpq_class(pow_mpz(pz, static_cast<unsigned long>(-v)));
        out.canonicalize();
        return out;
    }

    // --- dense Q[X] helpers for the inverse ---
    static void trim(std::vector<mpq_class>& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    static std::vector<mpq_class> mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
        if (a.empty() || b.empty()) return {};
        std::vector<mpq_class> out(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        trim(out);
        return out;
    }
    static std::vector<mpq_class> sub(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
        std::vector<mpq_class> out = a;
        if (out.size() < b.size()) out.resize(b.size(), 0);
        for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
        trim(out);
        return out;
    }
    static std::pair<std::vector<mpq_class>, std::vector<mpq_class>> divmod(std::vector<mpq_class> a,
                                                                            const std::vector<mpq_class>& b) {
        std::vector<mpq_class> q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, 0);
        while (a.size() >= b.size() && !a.empty()) {
            mpq_class c = a.back() / b.back();
            size_t shift = a.size() - b.size();
            q[shift] = c;
            for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
            trim(a);
        }
        trim(q);
        return {q, a};
    }

    unsigned p_;
    std::vector<mpq_class> c_;
    std::optional<mpq_class> cap_;
};

/// pi-order (valuation in units of ord(pi) = 1/(p-1)); integral for nonzero
/// elements of Z[pi].
inline Valuation pi_order(const PiAdic& x) {
    Valuation v = x.valuation();
    if (v.is_infinite()) return v;
    return Valuation(v.value() * (static_cast<long>(x.prime()) - 1));
}

}  // namespace ahg
