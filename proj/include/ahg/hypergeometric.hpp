#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "ahg/geometry.hpp"
#include "ahg/series.hpp"

namespace ahg {

/// Enumerates all nonnegative integer multiplicity vectors v with
/// sum_i v_i * pts[i] = target, in lexicographic order.  All pts have first
/// coordinate 1, so sum_i v_i = target[0] and the search terminates; interval
/// pruning on every coordinate keeps it sharp at desk scale.
inline void for_each_expansion(const IntMat& pts, const IntVec& target,
                               const std::function<void(const std::vector<int>&)>& emit) {
    if (target[0] < 0) return;
    const size_t m = pts.size();
    const size_t dims = target.size();
    if (m == 0) {
        if (is_zero_vec(target)) emit({});
        return;
    }
    // suffix coordinate ranges for pruning
    IntMat sufMin(m + 1, IntVec(dims, 0)), sufMax(m + 1, IntVec(dims, 0));
    for (size_t i = m; i-- > 0;) {
        for (size_t c = 0; c < dims; ++c) {
            if (i == m - 1) {
                sufMin[i][c] = sufMax[i][c] = pts[i][c];
            } else {
                sufMin[i][c] = std::min(pts[i][c], sufMin[i + 1][c]);
                sufMax[i][c] = std::max(pts[i][c], sufMax[i + 1][c]);
            }
        }
    }
    std::vector<int> v(m, 0);
    IntVec rem = target;  // remaining target
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == m) {
            if (is_zero_vec(rem)) emit(v);
            return;
        }
        const mpz_class& count = rem[0];  // remaining total multiplicity
        for (size_t c = 0; c < dims; ++c) {
            if (rem[c] < count * sufMin[i][c] || rem[c] > count * sufMax[i][c]) return;
        }
        long top = static_cast<long>(count.get_si());
        for (long k = 0; k <= top; ++k) {
            if (k > 0)
                for (size_t c = 0; c < dims; ++c) rem[c] -= pts[i][c];
            v[i] = static_cast<int>(k);
            rec(i + 1);
        }
        for (size_t c = 0; c < dims; ++c) rem[c] += top * pts[i][c];
        v[i] = 0;
    };
    rec(0);
}

/// Element of L_+: integer relation vector with l_1..l_N >= 0 and
/// l_0 = -(l_1+...+l_N).
using LplusElement = std::vector<int>;

/// All l in L_+ with l_1+...+l_N <= degree_bound, ordered by total degree
/// then lexicographically.
inline std::vector<LplusElement> enumerate_Lplus(const PointConfiguration& config, int degree_bound) {
    if (degree_bound < 0) throw std::invalid_argument("enumerate_Lplus: negative degree bound");
    std::vector<LplusElement> out;
    IntMat pts = config.hull_lifts();
    IntVec a0 = config.lift(0);
    for (int k = 0; k <= degree_bound; ++k) {
        IntVec target = vec_scale(k, a0);
        for_each_expansion(pts, target, [&](const std::vector<int>& l) {
            LplusElement full(config.N() + 1);
            full[0] = -k;
            for (size_t i = 0; i < l.size(); ++i) full[i + 1] = l[i];
            out.push_back(std::move(full));
        });
    }
    return out;
}

namespace detail {
inline mpz_class signed_multinomial(int k, const std::vector<int>& parts) {
    mpz_class c = factorial_mpz(static_cast<unsigned long>(k));
    for (int x : parts) c /= factorial_mpz(static_cast<unsigned long>(x));
    if (k % 2 != 0) c = -c;
    return c;
}
}  // namespace detail

/// The series Phi in t_i = lambda_i/lambda_0 up to total degree D: the term
/// of l in L_+ is (-1)^k k!/(l_1!..l_N!) t^(l_1..l_N) with k = l_1+..+l_N.
/// Coefficients are exact integers.
inline TruncatedSeries<mpz_class> phi_series(const PointConfiguration& config, int degree_bound) {
    TruncatedSeries<mpz_class> out(config.N(), degree_bound, mpz_class(0));
    IntMat pts = config.hull_lifts();
    IntVec a0 = config.lift(0);
    for (int k = 0; k <= degree_bound; ++k) {
        IntVec target = vec_scale(k, a0);
        for_each_expansion(pts, target, [&](const std::vector<int>& l) {
            out.add_to(Exponent(l.begin(), l.end()), detail::signed_multinomial(k, l));
        });
    }
    return out;
}

/// The truncation Phi_1: the sub-sum of Phi over l_1+...+l_N <= p-1, carried
/// in a window of the given degree bound so it composes with full series.
inline TruncatedSeries<mpz_class> phi1_series(const PointConfiguration& config, unsigned p, int degree_bound) {
    if (p < 2) throw std::invalid_argument("phi1_series: p must be a prime");
    TruncatedSeries<mpz_class> full = phi_series(config, std::min<int>(degree_bound, static_cast<int>(p) - 1));
    return full.with_bound(degree_bound);
}

/// Degree-k layer of Phi extracted the other way: the coefficient of
/// x^(k*a_0) in (sum_i lambda_i x^(a_i))^k, with the sign (-1)^k.  Used as an
/// independent oracle against phi_series.
inline TruncatedSeries<mpz_class> phi_layer_by_laurent_power(const PointConfiguration& config, int k) {
    // polynomial in x (Laurent exponents) with coefficients = polynomials in lambda
    using LambdaPoly = std::map<Exponent, mpz_class>;  // exponent over lambda_1..lambda_N
    std::map<IntVec, LambdaPoly> cur;                  // x-exponent -> lambda-poly
    LambdaPoly one;
    one.emplace(Exponent(config.N(), 0), mpz_class(1));
    cur.emplace(IntVec(config.n, 0), one);
    for (int step = 0; step < k; ++step) {
        std::map<IntVec, LambdaPoly> next;
        for (const auto& [xe, lp] : cur) {
            for (size_t i = 1; i <= config.N(); ++i) {
                IntVec nx = vec_add(xe, config.points[i]);
                for (const auto& [le, c] : lp) {
                    Exponent nl = le;
                    nl[i - 1] += 1;
                    next[nx][nl] += c;
                }
            }
        }
        cur = std::move(next);
    }
    TruncatedSeries<mpz_class> out(config.N(), k, mpz_class(0));
    IntVec targetX = vec_scale(k, IntVec(config.points[0]));
    auto it = cur.find(targetX);
    if (it != cur.end())
        for (const auto& [le, c] : it->second) out.add_to(le, k % 2 == 0 ? c : mpz_class(-c));
    return out;
}

/// A-hypergeometric annihilators: box operators from relation vectors and
/// the Euler operators Z_i.
struct HypergeometricOperator {
    enum class Kind { box, euler };
    Kind kind;
    IntVec relation;     // for box: l in L (checked against the lifts)
    size_t euler_index;  // for euler: i in 0..n

    static HypergeometricOperator box(const PointConfiguration& config, const IntVec& l) {
        IntVec s(config.n + 1, 0);
        for (size_t j = 0; j < l.size(); ++j) s = vec_add(s, vec_scale(l[j], config.lift(j)));
        if (!is_zero_vec(s)) throw std::invalid_argument("box operator: vector is not a relation of the lifts");
        return HypergeometricOperator{Kind::box, l, 0};
    }
    static HypergeometricOperator euler(const PointConfiguration& config, size_t i) {
        if (i > config.n) throw std::invalid_argument("euler operator: index out of range");
        return HypergeometricOperator{Kind::euler, {}, i};
    }
};

/// Residual of applying an annihilator to lambda_0^(-1) Phi, kept as Laurent
/// monomials in all of lambda_0..lambda_N.  A residual coefficient is
/// `reliable` when every source monomial it pairs is inside the computed
/// window (truncation cannot have destroyed the cancellation).
struct OperatorResidual {
    std::map<std::vector<int>, std::pair<mpz_class, bool>> terms;  // exponent -> (coeff, reliable)

    bool reliable_part_is_zero() const {
        for (const auto& [e, cb] : terms)
            if (cb.second && cb.first != 0) return false;
        return true;
    }
    bool identically_zero() const {
        for (const auto& [e, cb] : terms)
            if (cb.first != 0) return false;
        return true;
    }
};

namespace detail {

// lambda_0^(-1) Phi as Laurent monomials: exponent (l_0 - 1, l_1, ..., l_N).
inline std::map<std::vector<int>, mpz_class> phi_laurent_terms(const PointConfiguration& config, int degree_bound) {
    std::map<std::vector<int>, mpz_class> out;
    for (const auto& l : enumerate_Lplus(config, degree_bound)) {
        int k = -l[0];
        std::vector<int> e(l.begin(), l.end());
        e[0] -= 1;
        out.emplace(std::move(e), signed_multinomial(k, std::vector<int>(l.begin() + 1, l.end())));
    }
    return out;
}

inline mpz_class falling_factorial_product(const std::vector<int>& expo, const std::vector<int>& orders) {
    mpz_class f = 1;
    for (size_t i = 0; i < expo.size(); ++i) {
        for (int s = 0; s < orders[i]; ++s) f *= mpz_class(expo[i] - s);
    }
    return f;
}

// A Laurent exponent is "known" when we can certify its coefficient in
// lambda_0^(-1) Phi: either it has the shape of a series term inside the
// degree window, or it cannot be a series term at all.
inline bool exponent_known(const std::vector<int>& e, int degree_bound) {
    if (e[0] >= 0) return true;  // lambda_0 exponents of the series are <= -1
    int deg = 0;
    for (size_t i = 1; i < e.size(); ++i) {
        if (e[i] < 0) return true;  // not a series exponent
        deg += e[i];
    }
    return deg <= degree_bound;
}

}  // namespace detail

inline OperatorResidual apply_operator(const HypergeometricOperator& op, const PointConfiguration& config,
                                       int degree_bound) {
    OperatorResidual out;
    auto phi = detail::phi_laurent_terms(config, degree_bound);

    if (op.kind == HypergeometricOperator::Kind::euler) {
        const size_t i = op.euler_index;
        for (const auto& [e, c] : phi) {
            mpz_class factor = 0;
            if (i == 0) {
                for (int x : e) factor += x;
                factor += 1;
            } else {
                for (size_t j = 0; j < config.points.size(); ++j) factor += config.points[j][i - 1] * mpz_class(e[j]);
                factor += config.points[0][i - 1];
            }
            if (factor != 0) out.terms[e] = {c * factor, true};
        }
        return out;
    }

    // box operator: d^(plus) - d^(minus)
    std::vector<int> plus(op.relation.size()), minus(op.relation.size());
    for (size_t j = 0; j < op.relation.size(); ++j) {
        long lj = op.relation[j].get_si();
        plus[j] = lj > 0 ? static_cast<int>(lj) : 0;
        minus[j] = lj < 0 ? static_cast<int>(-lj) : 0;
    }
    auto accumulate = [&](const std::vector<int>& orders, int sign) {
        for (const auto& [e, c] : phi) {
            mpz_class f = detail::falling_factorial_product(e, orders);
            if (f == 0) continue;
            std::vector<int> shifted(e.size());
            for (size_t j = 0; j < e.size(); ++j) shifted[j] = e[j] - orders[j];
            auto& slot = out.terms[shifted];
            slot.first += sign * f * c;
            slot.second = true;  // reliability fixed below
        }
    };
    accumulate(plus, +1);
    accumulate(minus, -1);
    for (auto& [e, cb] : out.terms) {
        std::vector<int> srcPlus(e.size()), srcMinus(e.size());
        for (size_t j = 0; j < e.size(); ++j) {
            srcPlus[j] = e[j] + plus[j];
            srcMinus[j] = e[j] + minus[j];
        }
        cb.second = detail::exponent_known(srcPlus, degree_bound) && detail::exponent_known(srcMinus, degree_bound);
    }
    return out;
}

}  // namespace ahg
