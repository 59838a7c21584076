#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "ahg/padic.hpp"
#include "ahg/util.hpp"

namespace ahg {

/// Coefficients of the splitting function theta(t) = exp(pi(t - t^p)) =
/// sum_i b_i t^i, as exact elements of Q[pi]/(pi^(p-1)+p):
///     b_i = sum_{j+pk=i} (-1)^k pi^(j+k) / (j! k!).
/// Every b_i satisfies valuation(b_i) >= i(p-1)/p^2.
struct ThetaTable {
    unsigned p = 3;
    std::vector<PiAdic> b;

    size_t max_index() const { return b.empty() ? 0 : b.size() - 1; }

    const PiAdic& at(size_t i) const {
        if (i >= b.size())
            throw precision_error("ThetaTable: index " + std::to_string(i) + " beyond table size " +
                                  std::to_string(b.size()));
        return b[i];
    }

    /// Lower bound i(p-1)/p^2 from the classical estimate, as an exact rational.
    mpq_class valuation_floor(size_t i) const {
        return mpq_class(static_cast<long>(i) * (static_cast<long>(p) - 1),
                         static_cast<long>(p) * static_cast<long>(p));
    }
};

inline ThetaTable theta_coeffs(unsigned p, size_t max_index) {
    ThetaTable out;
    out.p = p;
    out.b.reserve(max_index + 1);
    for (size_t i = 0; i <= max_index; ++i) {
        PiAdic bi(p);
        for (size_t k = 0; k * p <= i; ++k) {
            size_t j = i - k * p;
            PiAdic term = PiAdic::pi_power(p, static_cast<long>(j + k));
            mpq_class denom(factorial_mpz(j) * factorial_mpz(k));
            term = term * (mpq_class(1) / denom);
            if (k % 2 == 1) term = -term;
            bi += term;
        }
        out.b.push_back(std::move(bi));
    }
    return out;
}

}  // namespace ahg
