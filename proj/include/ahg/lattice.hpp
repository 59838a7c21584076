#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ahg {

using IntVec = std::vector<mpz_class>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<mpq_class>;

inline mpz_class dot(const IntVec& a, const IntVec& b) {
    mpz_class s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline IntVec vec_scale(const mpz_class& c, const IntVec& a) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline bool is_zero_vec(const IntVec& a) {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& x) { return x == 0; });
}

/// Divide by the gcd of the entries (no-op on the zero vector).
inline IntVec primitive_part(IntVec v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

/// Clear denominators and divide by the content.
inline IntVec primitive_from_rational(const RatVec& v) {
    mpz_class lcm = 1;
    for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    IntVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = mpz_class(v[i].get_num() * (lcm / v[i].get_den()));
    return primitive_part(out);
}

/// Row-style Hermite normal form.  Rows of the result are a canonical basis
/// of the lattice generated by the input rows: echelon shape, positive
/// pivots, entries above each pivot reduced into [0, pivot).
struct HermiteBasis {
    IntMat rows;                 // rank many nonzero rows
    std::vector<size_t> pivots;  // pivot column per row, strictly increasing

    size_t rank() const { return rows.size(); }

    /// Integer coordinates of v in this basis, if v lies in the lattice.
    std::optional<IntVec> lattice_coords(IntVec v) const {
        IntVec coords(rows.size());
        for (size_t r = 0; r < rows.size(); ++r) {
            const mpz_class& piv = rows[r][pivots[r]];
            mpz_class q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v[pivots[r]].get_mpz_t(), piv.get_mpz_t());
            if (rem != 0) return std::nullopt;
            coords[r] = q;
            if (q != 0) v = vec_sub(v, vec_scale(q, rows[r]));
        }
        if (!is_zero_vec(v)) return std::nullopt;
        return coords;
    }

    bool contains(const IntVec& v) const { return lattice_coords(v).has_value(); }

    /// Rational span membership (coordinates over Q), if v lies in the span.
    std::optional<RatVec> span_coords(const IntVec& v) const {
        RatVec rv(v.size());
        for (size_t i = 0; i < v.size(); ++i) rv[i] = mpq_class(v[i]);
        RatVec coords(rows.size());
        for (size_t r = 0; r < rows.size(); ++r) {
            mpq_class q = rv[pivots[r]] / mpq_class(rows[r][pivots[r]]);
            coords[r] = q;
            if (q != 0)
                for (size_t i = 0; i < rv.size(); ++i) rv[i] -= q * mpq_class(rows[r][i]);
        }
        for (const auto& x : rv)
            if (x != 0) return std::nullopt;
        return coords;
    }

    bool spans(const IntVec& v) const { return span_coords(v).has_value(); }
};

inline HermiteBasis hermite_rows(IntMat rows) {
    HermiteBasis out;
    if (rows.empty()) return out;
    const size_t cols = rows[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        // Euclidean elimination below row r in column c.
        while (true) {
            size_t best = rows.size();
            for (size_t i = r; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                if (best == rows.size() || mpz_cmpabs(rows[i][c].get_mpz_t(), rows[best][c].get_mpz_t()) < 0) best = i;
            }
            if (best == rows.size()) break;  // column clear below r
            std::swap(rows[r], rows[best]);
            bool clean = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                rows[i] = vec_sub(rows[i], vec_scale(q, rows[r]));
                if (rows[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0) rows[r] = vec_scale(-1, rows[r]);
        // reduce entries above the pivot into [0, pivot)
        for (size_t i = 0; i < r; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
            if (q != 0) rows[i] = vec_sub(rows[i], vec_scale(q, rows[r]));
        }
        out.pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    out.rows = std::move(rows);
    return out;
}

/// Basis of the left-kernel lattice {l : sum_j l_j * rows_j = 0}, canonical
/// up to the sign convention chosen by the caller.
inline IntMat kernel_rows(const IntMat& rows) {
    if (rows.empty()) return {};
    const size_t m = rows.size(), cols = rows[0].size();
    // Augment [rows | I] and eliminate the first block.
    IntMat aug(m, IntVec(cols + m));
    for (size_t i = 0; i < m; ++i) {
        for (size_t c = 0; c < cols; ++c) aug[i][c] = rows[i][c];
        aug[i][cols + i] = 1;
    }
    size_t r = 0;
    for (size_t c = 0; c < cols && r < m; ++c) {
        while (true) {
            size_t best = m;
            for (size_t i = r; i < m; ++i) {
                if (aug[i][c] == 0) continue;
                if (best == m || mpz_cmpabs(aug[i][c].get_mpz_t(), aug[best][c].get_mpz_t()) < 0) best = i;
            }
            if (best == m) break;
            std::swap(aug[r], aug[best]);
            bool clean = true;
            for (size_t i = r + 1; i < m; ++i) {
                if (aug[i][c] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), aug[i][c].get_mpz_t(), aug[r][c].get_mpz_t());
                aug[i] = vec_sub(aug[i], vec_scale(q, aug[r]));
                if (aug[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (aug[r][c] != 0) ++r;
    }
    IntMat kernel;
    for (size_t i = r; i < m; ++i) {
        IntVec l(aug[i].begin() + static_cast<long>(cols), aug[i].end());
        IntVec head(aug[i].begin(), aug[i].begin() + static_cast<long>(cols));
        if (is_zero_vec(head) && !is_zero_vec(l)) kernel.push_back(std::move(l));
    }
    return kernel;
}

/// Rational nullspace basis of the matrix whose rows are given (i.e. vectors
/// h with rows_i . h = 0 for all i), via fraction-free elimination.
inline std::vector<RatVec> rational_nullspace(const IntMat& rows, size_t cols) {
    std::vector<RatVec> work;
    for (const auto& row : rows) {
        RatVec r(cols);
        for (size_t i = 0; i < cols; ++i) r[i] = mpq_class(row[i]);
        work.push_back(std::move(r));
    }
    std::vector<size_t> pivotCol;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < work.size(); ++c) {
        size_t sel = work.size();
        for (size_t i = r; i < work.size(); ++i)
            if (work[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == work.size()) continue;
        std::swap(work[r], work[sel]);
        mpq_class inv = work[r][c];
        for (auto& x : work[r]) x /= inv;
        for (size_t i = 0; i < work.size(); ++i) {
            if (i == r || work[i][c] == 0) continue;
            mpq_class f = work[i][c];
            for (size_t j = 0; j < cols; ++j) work[i][j] -= f * work[r][j];
        }
        pivotCol.push_back(c);
        ++r;
    }
    std::vector<bool> isPivot(cols, false);
    for (size_t c : pivotCol) isPivot[c] = true;
    std::vector<RatVec> basis;
    for (size_t c = 0; c < cols; ++c) {
        if (isPivot[c]) continue;
        RatVec v(cols, 0);
        v[c] = 1;
        for (size_t i = 0; i < pivotCol.size(); ++i) v[pivotCol[i]] = -work[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline size_t rational_rank(const IntMat& rows) {
    if (rows.empty()) return 0;
    return rows[0].size() - rational_nullspace(rows, rows[0].size()).size();
}

}  // namespace ahg
