#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "kinst/lam_series.hpp"

namespace kinst {

inline constexpr int kCacheFormatVersion = 1;

// Stable 64-bit content digest (FNV-1a).
inline uint64_t content_digest(const std::string& payload) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string digest_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

struct CacheRecord {
    int version = kCacheFormatVersion;
    std::string key;
    std::string payload;
    std::string digest;
};

namespace detail {

inline std::string cache_file_name(const std::string& key) {
    return "kinst-" + digest_hex(content_digest(key)) + ".rec";
}

} // namespace detail

// Content-addressed store; writes are atomic (temp file + rename).
inline void cache_store(const std::string& dir, const std::string& key,
                        const std::string& payload) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fs::path target = fs::path(dir) / detail::cache_file_name(key);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheCorrupt("cannot write cache file " + tmp.string());
        out << "version " << kCacheFormatVersion << "\n";
        out << "key " << key << "\n";
        out << "digest " << digest_hex(content_digest(payload)) << "\n";
        out << "payload " << payload.size() << "\n";
        out << payload;
    }
    fs::rename(tmp, target);
}

// Returns the payload on a verified hit, nullopt on a miss (absent record or
// version/key mismatch), and throws CacheCorrupt when the digest disagrees.
inline std::optional<std::string> cache_load(const std::string& dir, const std::string& key) {
    namespace fs = std::filesystem;
    fs::path target = fs::path(dir) / detail::cache_file_name(key);
    std::ifstream in(target, std::ios::binary);
    if (!in) return std::nullopt;
    std::string word;
    int version = -1;
    if (!(in >> word >> version) || word != "version") return std::nullopt;
    if (version != kCacheFormatVersion) return std::nullopt;
    std::string line;
    std::getline(in, line); // rest of version line
    if (!std::getline(in, line) || line.rfind("key ", 0) != 0) return std::nullopt;
    if (line.substr(4) != key) return std::nullopt;
    if (!std::getline(in, line) || line.rfind("digest ", 0) != 0) return std::nullopt;
    std::string digest = line.substr(7);
    if (!std::getline(in, line) || line.rfind("payload ", 0) != 0) return std::nullopt;
    size_t count = std::stoul(line.substr(8));
    std::string payload(count, '\0');
    in.read(payload.data(), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count)
        throw CacheCorrupt("truncated cache payload in " + target.string());
    if (digest_hex(content_digest(payload)) != digest)
        throw CacheCorrupt("cache digest mismatch in " + target.string());
    return payload;
}

// --- canonical text round trip -------------------------------------------

inline std::string serialize_series(const LamSeries& s) {
    std::ostringstream os;
    os << "lambda_cap " << s.lambda_cap << " ins_cap " << s.ins_cap << "\n";
    os << s.str();
    return os.str();
}

// Parses the canonical polynomial text form emitted by ExpPoly::str().
inline ExpPoly parse_exp_poly(const std::string& text) {
    if (text == "0") return ExpPoly::zero();
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find(" + ", pos);
        std::string term =
            next == std::string::npos ? text.substr(pos) : text.substr(pos, next - pos);
        pos = next == std::string::npos ? text.size() : next + 3;

        // COEFF [* e[var]^(p/q)]...
        size_t star = term.find(" * ");
        std::string coeff_str = star == std::string::npos ? term : term.substr(0, star);
        Rat coeff(coeff_str);
        coeff.canonicalize();
        ExpKey key;
        size_t p = star;
        while (p != std::string::npos) {
            p += 3; // skip " * "
            if (term.compare(p, 2, "e[") != 0) throw CacheCorrupt("bad polynomial term: " + term);
            size_t close = term.find(']', p);
            std::string var = term.substr(p + 2, close - p - 2);
            int v = -1;
            for (int cand = 0; cand < ExpKey::kMaxVars; ++cand)
                if (var_name(cand) == var) v = cand;
            if (v < 0) throw CacheCorrupt("unknown variable " + var);
            if (term.compare(close + 1, 2, "^(") != 0)
                throw CacheCorrupt("bad exponent in term: " + term);
            size_t endp = term.find(')', close);
            std::string expo = term.substr(close + 3, endp - close - 3);
            long num = 0, den = 1;
            size_t slash = expo.find('/');
            if (slash == std::string::npos) {
                num = std::stol(expo);
            } else {
                num = std::stol(expo.substr(0, slash));
                den = std::stol(expo.substr(slash + 1));
            }
            key.set(v, num * (4 / den));
            p = term.find(" * ", endp);
        }
        acc[key] += coeff;
    }
    return ExpPoly::from_map(acc);
}

inline InsMono parse_grade(const std::string& text) {
    if (text == "1") return InsMono::unit();
    InsMono g;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        bool is_t = tok.rfind("t[", 0) == 0;
        bool is_tau = tok.rfind("tau[", 0) == 0;
        if (!is_t && !is_tau) throw CacheCorrupt("bad insertion variable: " + tok);
        size_t open = tok.find('['), close = tok.find(']');
        int p = std::stoi(tok.substr(open + 1, close - open - 1));
        int power = 1;
        size_t caret = tok.find('^');
        if (caret != std::string::npos) power = std::stoi(tok.substr(caret + 1));
        g = g * InsMono{{{InsVar{is_t, p}, power}}};
    }
    return g;
}

inline LamSeries parse_series(const std::string& payload) {
    std::istringstream in(payload);
    std::string word;
    int lcap = 0, icap = 0;
    in >> word >> lcap >> word >> icap;
    std::string rest;
    std::getline(in, rest);
    LamSeries s(lcap, icap);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // L=<n> G=<grade> N=<poly> D=<poly>
        if (line.rfind("L=", 0) != 0) throw CacheCorrupt("bad series record: " + line);
        size_t gpos = line.find(" G=");
        size_t npos = line.find(" N=");
        size_t dpos = line.find(" D=");
        if (gpos == std::string::npos || npos == std::string::npos || dpos == std::string::npos)
            throw CacheCorrupt("bad series record: " + line);
        int n = std::stoi(line.substr(2, gpos - 2));
        InsMono g = parse_grade(line.substr(gpos + 3, npos - gpos - 3));
        ExpPoly num = parse_exp_poly(line.substr(npos + 3, dpos - npos - 3));
        ExpPoly den = parse_exp_poly(line.substr(dpos + 3));
        FracV v(num);
        if (!den.is_one()) v.mul_factor(den, -1);
        s.set(n, g, v);
    }
    return s;
}

} // namespace kinst
