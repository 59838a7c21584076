#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/padic.hpp"
#include "ahg/util.hpp"
#include "ahg/valuation.hpp"

namespace ahg {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Residue class ring Z/p^s with canonical nonnegative representatives.
class IntMod {
  public:
    IntMod() : v_(0), m_(0) {}
    IntMod(mpz_class v, mpz_class m) : v_(std::move(v)), m_(std::move(m)) { normalize(); }

    const mpz_class& value() const { return v_; }
    const mpz_class& modulus() const { return m_; }
    bool is_zero() const { return v_ == 0; }

    friend IntMod operator+(const IntMod& a, const IntMod& b) { return IntMod(a.v_ + b.v_, a.same(b)); }
    friend IntMod operator-(const IntMod& a, const IntMod& b) { return IntMod(a.v_ - b.v_, a.same(b)); }
    friend IntMod operator*(const IntMod& a, const IntMod& b) { return IntMod(a.v_ * b.v_, a.same(b)); }
    IntMod operator-() const { return IntMod(-v_, m_); }
    friend bool operator==(const IntMod& a, const IntMod& b) { return a.v_ == b.v_ && a.m_ == b.m_; }

    IntMod inverse() const {
        IntMod out(0, m_);
        if (mpz_invert(out.v_.get_mpz_t(), v_.get_mpz_t(), m_.get_mpz_t()) == 0)
            throw std::domain_error("IntMod: non-invertible element " + v_.get_str() + " mod " + m_.get_str());
        return out;
    }

    std::string str() const { return v_.get_str(); }

  private:
    void normalize() {
        if (m_ <= 0) throw std::invalid_argument("IntMod: modulus must be positive");
        v_ %= m_;
        if (v_ < 0) v_ += m_;
    }
    mpz_class same(const IntMod& b) const {
        if (m_ != b.m_) throw std::invalid_argument("IntMod: mixed moduli");
        return m_;
    }
    mpz_class v_, m_;
};

// --- coefficient customization points ---

inline bool coeff_is_zero(const mpz_class& c) { return c == 0; }
inline bool coeff_is_zero(const mpq_class& c) { return c == 0; }
inline bool coeff_is_zero(const IntMod& c) { return c.is_zero(); }
inline bool coeff_is_zero(const PiAdic& c) { return c.is_zero(); }

inline mpz_class coeff_inverse(const mpz_class& c) {
    if (c == 1 || c == -1) return c;
    throw std::domain_error("integer series: constant term " + c.get_str() + " is not a unit");
}
inline mpq_class coeff_inverse(const mpq_class& c) {
    if (c == 0) throw std::domain_error("rational series: constant term is zero");
    return 1 / c;
}
inline IntMod coeff_inverse(const IntMod& c) { return c.inverse(); }
inline PiAdic coeff_inverse(const PiAdic& c) { return c.invert_unit(); }

inline std::string coeff_str(const mpz_class& c) { return c.get_str(); }
inline std::string coeff_str(const mpq_class& c) { return c.get_str(); }
inline std::string coeff_str(const IntMod& c) { return c.str(); }
inline std::string coeff_str(const PiAdic& c) { return c.str(); }

/// Sparse multivariate power series in t_1..t_N truncated at a fixed total
/// degree.  Exponent keys are kept in lexicographic order, so iteration,
/// arithmetic and rendering are all deterministic.
template <class Coeff>
class TruncatedSeries {
  public:
    TruncatedSeries() : vars_(0), bound_(0), zero_() {}
    TruncatedSeries(size_t vars, int degree_bound, Coeff zero)
        : vars_(vars), bound_(degree_bound), zero_(std::move(zero)) {
        if (degree_bound < 0) throw std::invalid_argument("TruncatedSeries: negative degree bound");
    }

    size_t vars() const { return vars_; }
    int degree_bound() const { return bound_; }
    const Coeff& zero_coeff() const { return zero_; }
    const std::map<Exponent, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Coeff get(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? zero_ : it->second;
    }

    void set(const Exponent& e, const Coeff& c) {
        check_exponent(e);
        if (coeff_is_zero(c))
            terms_.erase(e);
        else
            terms_[e] = c;
    }

    void add_to(const Exponent& e, const Coeff& c) {
        check_exponent(e);
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!coeff_is_zero(c)) terms_.emplace(e, c);
            return;
        }
        it->second = it->second + c;
        if (coeff_is_zero(it->second)) terms_.erase(it);
    }

    TruncatedSeries operator-() const {
        TruncatedSeries out(vars_, bound_, zero_);
        for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
        return out;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries out = a;
        for (const auto& [e, c] : b.terms_) out.add_to(e, c);
        return out;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries out(a.vars_, a.bound_, a.zero_);
        for (const auto& [ea, ca] : a.terms_) {
            int da = total_degree(ea);
            for (const auto& [eb, cb] : b.terms_) {
                if (da + total_degree(eb) > a.bound_) continue;
                Exponent e(a.vars_);
                for (size_t i = 0; i < a.vars_; ++i) e[i] = ea[i] + eb[i];
                out.add_to(e, ca * cb);
            }
        }
        return out;
    }

    TruncatedSeries scaled(const Coeff& s) const {
        TruncatedSeries out(vars_, bound_, zero_);
        if (coeff_is_zero(s)) return out;
        for (const auto& [e, c] : terms_) {
            Coeff v = c * s;
            if (!coeff_is_zero(v)) out.terms_.emplace(e, v);
        }
        return out;
    }

    /// Retruncation to a smaller bound (or embedding into a larger one; the
    /// caller owns the semantics of missing high-degree terms).
    TruncatedSeries with_bound(int new_bound) const {
        TruncatedSeries out(vars_, new_bound, zero_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) <= new_bound) out.terms_.emplace(e, c);
        return out;
    }

    /// Frobenius substitution t -> t^p: exponents scale by p, terms leaving
    /// the window are dropped.  Coefficients derived from input degrees
    /// <= frobenius_degree_guarantee(bound, p) are exactly the substituted
    /// series' coefficients.
    TruncatedSeries substitute_power(unsigned p) const {
        TruncatedSeries out(vars_, bound_, zero_);
        for (const auto& [e, c] : terms_) {
            if (total_degree(e) * static_cast<long>(p) > bound_) continue;
            Exponent pe(vars_);
            for (size_t i = 0; i < vars_; ++i) pe[i] = e[i] * static_cast<int>(p);
            out.terms_.emplace(pe, c);
        }
        return out;
    }

    template <class F>
    auto map_coeffs(const F& f, decltype(f(std::declval<Coeff>())) mappedZero) const
        -> TruncatedSeries<decltype(f(std::declval<Coeff>()))> {
        TruncatedSeries<decltype(f(std::declval<Coeff>()))> out(vars_, bound_, mappedZero);
        for (const auto& [e, c] : terms_) out.set(e, f(c));
        return out;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        return a.terms_ == b.terms_;
    }

    /// One line per term, "e_1 .. e_N : coefficient", lexicographic order.
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << "\n";
            for (size_t i = 0; i < vars_; ++i) os << e[i] << (i + 1 < vars_ ? " " : "");
            if (vars_ == 0) os << "()";
            os << " : " << coeff_str(c);
            first = false;
        }
        if (first) os << "(zero series)";
        return os.str();
    }

  private:
    void check_exponent(const Exponent& e) const {
        if (e.size() != vars_) throw std::invalid_argument("TruncatedSeries: exponent arity mismatch");
        for (int x : e)
            if (x < 0) throw std::invalid_argument("TruncatedSeries: negative exponent");
        if (total_degree(e) > bound_) throw std::invalid_argument("TruncatedSeries: exponent beyond degree bound");
    }
    void check_compatible(const TruncatedSeries& b) const {
        if (vars_ != b.vars_ || bound_ != b.bound_)
            throw std::invalid_argument("TruncatedSeries: incompatible shapes");
    }

    size_t vars_;
    int bound_;
    Coeff zero_;
    std::map<Exponent, Coeff> terms_;
};

inline int frobenius_degree_guarantee(int degree_bound, unsigned p) {
    return degree_bound / static_cast<int>(p);
}

/// Quotient q with q*b = a up to the common degree bound; requires the
/// constant term of b to be invertible in the coefficient ring.
template <class Coeff>
TruncatedSeries<Coeff> divide_by_unit(const TruncatedSeries<Coeff>& a, const TruncatedSeries<Coeff>& b) {
    if (a.vars() != b.vars() || a.degree_bound() != b.degree_bound())
        throw std::invalid_argument("divide_by_unit: incompatible shapes");
    Exponent origin(a.vars(), 0);
    Coeff b0inv = coeff_inverse(b.get(origin));  // throws when not a unit

    TruncatedSeries<Coeff> q(a.vars(), a.degree_bound(), a.zero_coeff());
    TruncatedSeries<Coeff> r = a;
    // peel the remainder degree by degree
    for (int d = 0; d <= a.degree_bound(); ++d) {
        std::vector<std::pair<Exponent, Coeff>> layer;
        for (const auto& [e, c] : r.terms())
            if (total_degree(e) == d) layer.emplace_back(e, c);
        for (const auto& [e, c] : layer) {
            Coeff qc = c * b0inv;
            q.add_to(e, qc);
            // r -= qc * t^e * b
            for (const auto& [eb, cb] : b.terms()) {
                if (d + total_degree(eb) > a.degree_bound()) continue;
                Exponent em(a.vars());
                for (size_t i = 0; i < a.vars(); ++i) em[i] = e[i] + eb[i];
                r.add_to(em, -(qc * cb));
            }
        }
    }
    return q;
}

/// Gauss-norm valuation: min over coefficients, +inf for the zero series.
inline Valuation min_valuation(const TruncatedSeries<PiAdic>& s) {
    Valuation best = Valuation::infinity();
    for (const auto& [e, c] : s.terms()) {
        Valuation v = c.valuation();
        if (v < best) best = v;
    }
    return best;
}

inline Valuation min_valuation(const TruncatedSeries<mpz_class>& s, unsigned p) {
    Valuation best = Valuation::infinity();
    for (const auto& [e, c] : s.terms()) {
        Valuation v{mpq_class(ord_p_mpz(c, p))};
        if (v < best) best = v;
    }
    return best;
}

/// Evaluation of an integer series at integer arguments modulo m.
inline mpz_class evaluate_mod(const TruncatedSeries<mpz_class>& s, const std::vector<mpz_class>& values,
                              const mpz_class& m) {
    if (values.size() != s.vars()) throw std::invalid_argument("evaluate_mod: arity mismatch");
    mpz_class acc = 0;
    for (const auto& [e, c] : s.terms()) {
        mpz_class term = c % m;
        for (size_t i = 0; i < values.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_class pw;
            mpz_powm_ui(pw.get_mpz_t(), values[i].get_mpz_t(), static_cast<unsigned long>(e[i]), m.get_mpz_t());
            term = (term * pw) % m;
        }
        acc = (acc + term) % m;
    }
    acc %= m;
    if (acc < 0) acc += m;
    return acc;
}

}  // namespace ahg
