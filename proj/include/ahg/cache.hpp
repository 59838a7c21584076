#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ahg/dwork.hpp"
#include "ahg/series.hpp"
#include "ahg/theta.hpp"
#include "ahg/util.hpp"

namespace ahg {

/// On-disk cache of exact values for one (p, configuration, bounds) key:
/// the theta table and the B_mu polynomials, in the exact textual format of
/// the pi-adic ring.  The payload carries a content hash; a stamp mismatch
/// marks the entry corrupt and the caller recomputes instead of trusting it.
struct CacheSnapshot {
    unsigned p = 0;
    size_t vars = 0;
    int degree_bound = 0;
    std::vector<PiAdic> theta;
    std::map<IntVec, TruncatedSeries<PiAdic>> bmu;

    std::string payload() const {
        std::ostringstream os;
        os << "p " << p << "\n";
        os << "vars " << vars << "\n";
        os << "bound " << degree_bound << "\n";
        os << "theta " << theta.size() << "\n";
        for (size_t i = 0; i < theta.size(); ++i) os << "b " << i << " : " << theta[i].str() << "\n";
        os << "bmu-count " << bmu.size() << "\n";
        for (const auto& [mu, s] : bmu) {
            os << "bmu";
            for (const auto& c : mu) os << " " << c.get_str();
            os << " terms " << s.terms().size() << "\n";
            for (const auto& [e, c] : s.terms()) {
                os << "t";
                for (int x : e) os << " " << x;
                os << " : " << c.str() << "\n";
            }
        }
        return os.str();
    }

    std::string render() const {
        std::string body = payload();
        return "ahg-cache 1\nhash " + fnv1a64_hex(body) + "\n" + body;
    }
};

struct CacheLoad {
    bool ok = false;
    std::string why;  // reason when not ok (missing, corrupt, mismatched)
    CacheSnapshot snapshot;
};

inline CacheLoad parse_cache(const std::string& text) {
    CacheLoad out;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "ahg-cache 1") {
        out.why = "bad header";
        return out;
    }
    if (!std::getline(is, line) || line.rfind("hash ", 0) != 0) {
        out.why = "missing hash stamp";
        return out;
    }
    std::string stamp = line.substr(5);
    std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (fnv1a64_hex(body) != stamp) {
        out.why = "content hash mismatch (corrupt entry)";
        return out;
    }
    // hash verified; parse the payload
    std::istringstream ps(body);
    auto expect = [&](const std::string& key) -> std::string {
        std::string l;
        if (!std::getline(ps, l) || l.rfind(key + " ", 0) != 0)
            throw integrity_error("cache payload: expected '" + key + "'");
        return l.substr(key.size() + 1);
    };
    try {
        CacheSnapshot snap;
        snap.p = static_cast<unsigned>(std::stoul(expect("p")));
        snap.vars = std::stoul(expect("vars"));
        snap.degree_bound = std::stoi(expect("bound"));
        size_t thetaCount = std::stoul(expect("theta"));
        for (size_t i = 0; i < thetaCount; ++i) {
            std::string l;
            std::getline(ps, l);
            auto colon = l.find(" : ");
            if (l.rfind("b ", 0) != 0 || colon == std::string::npos)
                throw integrity_error("cache payload: bad theta line");
            snap.theta.push_back(PiAdic::parse(snap.p, l.substr(colon + 3)));
        }
        size_t bmuCount = std::stoul(expect("bmu-count"));
        for (size_t k = 0; k < bmuCount; ++k) {
            std::string l;
            std::getline(ps, l);
            auto tok = split_ws(l);
            if (tok.size() < 3 || tok[0] != "bmu" || tok[tok.size() - 2] != "terms")
                throw integrity_error("cache payload: bad bmu line");
            IntVec mu;
            for (size_t i = 1; i + 2 < tok.size(); ++i) mu.push_back(mpz_class(tok[i]));
            size_t terms = std::stoul(tok.back());
            TruncatedSeries<PiAdic> s(snap.vars, snap.degree_bound, PiAdic::zero(snap.p));
            for (size_t t = 0; t < terms; ++t) {
                std::string tl;
                std::getline(ps, tl);
                auto colon = tl.find(" : ");
                if (tl.rfind("t", 0) != 0 || colon == std::string::npos)
                    throw integrity_error("cache payload: bad term line");
                auto etok = split_ws(tl.substr(1, colon - 1));
                Exponent e;
                for (const auto& x : etok) e.push_back(std::stoi(x));
                s.set(e, PiAdic::parse(snap.p, tl.substr(colon + 3)));
            }
            snap.bmu.emplace(std::move(mu), std::move(s));
        }
        out.snapshot = std::move(snap);
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.why = e.what();
    }
    return out;
}

inline std::filesystem::path cache_path(const std::string& dir, const std::string& digest) {
    return std::filesystem::path(dir) / (digest + ".cache");
}

/// Loads a cache entry if present and intact; corrupt entries are reported
/// (and the caller recomputes; it never trusts them).
inline CacheLoad load_cache(const std::string& dir, const std::string& digest) {
    CacheLoad out;
    auto path = cache_path(dir, digest);
    std::ifstream in(path);
    if (!in) {
        out.why = "no cache entry";
        return out;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_cache(text);
}

inline void store_cache(const std::string& dir, const std::string& digest, const CacheSnapshot& snap) {
    std::filesystem::create_directories(dir);
    std::ofstream outf(cache_path(dir, digest));
    outf << snap.render();
}

/// Carries cached values into a live context (write-once semantics: any
/// disagreement with already-present entries is a fatal integrity error).
inline void adopt_cache(DworkContext& ctx, const CacheSnapshot& snap) {
    if (snap.p != ctx.p || snap.vars != ctx.config.N() || snap.degree_bound != ctx.dlambda)
        throw integrity_error("cache snapshot does not match the context key");
    for (const auto& [mu, s] : snap.bmu) ctx.bmu.insert_checked(mu, s);
}

inline CacheSnapshot snapshot_context(const DworkContext& ctx) {
    CacheSnapshot snap;
    snap.p = ctx.p;
    snap.vars = ctx.config.N();
    snap.degree_bound = ctx.dlambda;
    snap.theta = ctx.theta.b;
    snap.bmu = ctx.bmu.entries();
    return snap;
}

}  // namespace ahg
