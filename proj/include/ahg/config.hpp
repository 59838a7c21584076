#pragma once

#include <gmpxx.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ahg/geometry.hpp"
#include "ahg/util.hpp"

namespace ahg {

/// Fully explicit problem description.  There are no implicit defaults for
/// the prime, the points or the bounds: a run is reproducible from the file
/// alone.
struct ProblemConfig {
    unsigned p = 0;
    PointConfiguration points;
    int dlambda = 0;
    int dx = 0;
    mpq_class precision = 0;  // K
    bool allow_p2 = false;
    std::string report_format = "text";  // "text" | "structured"
    std::string cache_dir;               // empty: no cache

    /// Canonical line-oriented rendering; parse_config inverts it.
    std::string serialize() const {
        std::ostringstream os;
        os << "p " << p << "\n";
        os << "n " << points.n << "\n";
        for (size_t j = 0; j < points.points.size(); ++j) {
            os << (j == 0 ? "a0" : "a");
            for (const auto& c : points.points[j]) os << " " << c.get_str();
            os << "\n";
        }
        os << "dlambda " << dlambda << "\n";
        os << "dx " << dx << "\n";
        os << "precision " << precision.get_str() << "\n";
        if (allow_p2) os << "allow-p2 1\n";
        if (report_format != "text") os << "report-format " << report_format << "\n";
        if (!cache_dir.empty()) os << "cache-dir " << cache_dir << "\n";
        return os.str();
    }

    /// Cache key content: prime, point rows and bounds (precision and
    /// presentation flags do not change cached exact data).
    std::string digest() const {
        std::ostringstream os;
        os << "p " << p << "\n";
        for (size_t j = 0; j < points.points.size(); ++j) {
            for (const auto& c : points.points[j]) os << c.get_str() << " ";
            os << "\n";
        }
        os << "dlambda " << dlambda << " dx " << dx << "\n";
        return fnv1a64_hex(os.str());
    }
};

struct ParsedConfig {
    std::optional<ProblemConfig> config;
    std::vector<std::string> errors;  // every violation, not just the first
};

inline bool is_prime_u(unsigned long v) {
    mpz_class z(v);
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

inline ParsedConfig parse_config(const std::string& text, bool force_allow_p2 = false) {
    ParsedConfig out;
    ProblemConfig cfg;
    cfg.allow_p2 = force_allow_p2;
    bool sawP = false, sawN = false, sawA0 = false, sawDl = false, sawDx = false, sawK = false;
    std::vector<std::pair<size_t, std::vector<std::string>>> rows;  // line no + tokens of a-rows
    std::vector<std::string> a0row;

    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    auto err = [&](const std::string& msg) {
        out.errors.push_back("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        const std::string& key = tok[0];
        auto needOne = [&](const char* what) -> std::optional<std::string> {
            if (tok.size() != 2) {
                err(std::string(what) + " expects exactly one value");
                return std::nullopt;
            }
            return tok[1];
        };
        if (key == "p") {
            if (auto v = needOne("p")) {
                try {
                    long pv = std::stol(*v);
                    if (pv < 2) err("p must be a prime >= 2");
                    cfg.p = static_cast<unsigned>(pv);
                    sawP = true;
                } catch (...) {
                    err("p is not an integer: " + *v);
                }
            }
        } else if (key == "n") {
            if (auto v = needOne("n")) {
                try {
                    long nv = std::stol(*v);
                    if (nv < 1) err("n must be >= 1");
                    cfg.points.n = static_cast<size_t>(nv);
                    sawN = true;
                } catch (...) {
                    err("n is not an integer: " + *v);
                }
            }
        } else if (key == "a0" || key == "a") {
            std::vector<std::string> coords(tok.begin() + 1, tok.end());
            if (key == "a0") {
                if (sawA0) err("duplicate a0 row");
                a0row = coords;
                sawA0 = true;
            } else {
                rows.emplace_back(lineno, coords);
            }
        } else if (key == "dlambda") {
            if (auto v = needOne("dlambda")) {
                try {
                    cfg.dlambda = std::stoi(*v);
                    sawDl = true;
                } catch (...) {
                    err("dlambda is not an integer: " + *v);
                }
            }
        } else if (key == "dx") {
            if (auto v = needOne("dx")) {
                try {
                    cfg.dx = std::stoi(*v);
                    sawDx = true;
                } catch (...) {
                    err("dx is not an integer: " + *v);
                }
            }
        } else if (key == "precision") {
            if (auto v = needOne("precision")) {
                mpq_class k;
                if (k.set_str(*v, 10) != 0) {
                    err("precision is not a rational: " + *v);
                } else {
                    k.canonicalize();
                    cfg.precision = k;
                    sawK = true;
                }
            }
        } else if (key == "allow-p2") {
            if (auto v = needOne("allow-p2")) cfg.allow_p2 = cfg.allow_p2 || *v == "1" || *v == "true";
        } else if (key == "report-format") {
            if (auto v = needOne("report-format")) {
                if (*v != "text" && *v != "structured")
                    err("report-format must be text or structured");
                else
                    cfg.report_format = *v;
            }
        } else if (key == "cache-dir") {
            if (auto v = needOne("cache-dir")) cfg.cache_dir = *v;
        } else {
            err("unknown key '" + key + "'");
        }
    }

    lineno = 0;  // aggregate (non-positional) checks below
    auto gerr = [&](const std::string& msg) { out.errors.push_back(msg); };
    if (!sawP) gerr("missing required key: p");
    if (!sawN) gerr("missing required key: n");
    if (!sawA0) gerr("missing required row: a0");
    if (rows.empty()) gerr("missing hull rows: need at least one 'a' row");
    if (!sawDl) gerr("missing required key: dlambda");
    if (!sawDx) gerr("missing required key: dx");
    if (!sawK) gerr("missing required key: precision");

    if (sawP) {
        if (cfg.p == 2 && !cfg.allow_p2)
            gerr("p = 2 is unsupported by the pi-adic operator construction (it needs an odd prime); "
                 "set allow-p2 to run the mod-p congruence checks only");
        else if (cfg.p != 2 && cfg.p % 2 == 0)
            gerr("p must be an odd prime, got " + std::to_string(cfg.p));
        else if (!is_prime_u(cfg.p))
            gerr("p is not prime: " + std::to_string(cfg.p));
    }
    if (sawDl && cfg.dlambda <= 0) gerr("non-positive bound: dlambda must be >= 1");
    if (sawDx && cfg.dx <= 0) gerr("non-positive bound: dx must be >= 1");
    if (sawK && cfg.precision <= 0) gerr("non-positive bound: precision must be > 0");

    if (sawN && sawA0) {
        auto parseRow = [&](const std::vector<std::string>& coords, const std::string& label) -> std::optional<IntVec> {
            if (coords.size() != cfg.points.n) {
                gerr(label + " has " + std::to_string(coords.size()) + " coordinates, expected " +
                     std::to_string(cfg.points.n));
                return std::nullopt;
            }
            IntVec row;
            for (const auto& c : coords) {
                mpz_class z;
                if (z.set_str(c, 10) != 0) {
                    gerr(label + " has a non-integer coordinate: " + c);
                    return std::nullopt;
                }
                row.push_back(z);
            }
            return row;
        };
        bool a0Ok = false;
        if (auto r = parseRow(a0row, "a0")) {
            cfg.points.points.push_back(*r);
            a0Ok = true;
        }
        for (const auto& [ln, coords] : rows) {
            if (auto r = parseRow(coords, "a row at line " + std::to_string(ln))) cfg.points.points.push_back(*r);
        }
        // structural validation over the rows that did parse, so duplicate
        // reports survive alongside shape errors
        if (a0Ok && cfg.points.points.size() >= 2)
            for (const auto& v : cfg.points.validate()) gerr(v);
    }

    if (out.errors.empty()) out.config = std::move(cfg);
    return out;
}

}  // namespace ahg
