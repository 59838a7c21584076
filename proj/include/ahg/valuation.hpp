#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

#include "ahg/util.hpp"

namespace ahg {

/// Exact additive valuation value: a rational number or +infinity (for zero
/// elements).  Normalized so that ord(p) = 1.
class Valuation {
  public:
    Valuation() : inf_(true) {}
    explicit Valuation(const mpq_class& v) : inf_(false), v_(v) { v_.canonicalize(); }
    Valuation(long num, long den) : inf_(false), v_(num, den) { v_.canonicalize(); }

    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return inf_; }
    const mpq_class& value() const { return v_; }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return a < b || a == b; }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return b <= a; }

    // Addition follows the convention inf + x = inf.
    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.inf_ || b.inf_) return infinity();
        return Valuation(a.v_ + b.v_);
    }

    friend Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

    std::string str() const {
        if (inf_) return "inf";
        return v_.get_str();
    }

  private:
    bool inf_;
    mpq_class v_;
};

}  // namespace ahg
