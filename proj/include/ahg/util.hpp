#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ahg {

/// Thrown when a precision cap leaves no usable digits for the requested
/// operation, or when an infinite-sum truncation cannot reach the target.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown on cache write-once violations and corrupted-state detection.
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// p-adic order of a nonzero integer. Caller guards zero.
inline long ord_p_mpz(const mpz_class& v, unsigned long p) {
    if (v == 0) throw std::invalid_argument("ord_p of zero");
    mpz_class rest;
    mpz_class pz(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t()));
}

inline long ord_p_mpq(const mpq_class& v, unsigned long p) {
    if (v == 0) throw std::invalid_argument("ord_p of zero");
    long o = 0;
    if (v.get_num() != 0) o += ord_p_mpz(v.get_num(), p);
    o -= ord_p_mpz(v.get_den(), p);
    return o;
}

inline mpz_class ceil_mpq(const mpq_class& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

inline mpz_class pow_mpz(const mpz_class& base, unsigned long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline mpz_class factorial_mpz(unsigned long n) {
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

/// FNV-1a 64-bit content hash; used for cache keys and integrity stamps.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace ahg
