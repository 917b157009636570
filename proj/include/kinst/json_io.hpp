#pragma once

#include <json.hpp>

#include "kinst/rat_frac.hpp"

namespace kinst {

// JSON-compatible cache record for a formal fraction:
//   { "num_terms": [ [[q0, q1, ...], "coeff"], ... ], "den_terms": [...] }
// with exponents in quarter-lattice units and coefficients as decimal
// rational strings.

inline nlohmann::json poly_to_json(const ExpPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : p.terms()) {
        nlohmann::json expo = nlohmann::json::array();
        int last = ExpKey::kMaxVars - 1;
        while (last > 0 && k[last] == 0) --last;
        for (int v = 0; v <= last; ++v) expo.push_back(k[v]);
        terms.push_back({expo, c.get_str()});
    }
    return terms;
}

inline ExpPoly poly_from_json(const nlohmann::json& terms) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    for (const auto& t : terms) {
        ExpKey k;
        const auto& expo = t.at(0);
        for (size_t v = 0; v < expo.size(); ++v) k.set(static_cast<int>(v), expo[v].get<long>());
        Rat c(t.at(1).get<std::string>());
        c.canonicalize();
        acc[k] += c;
    }
    return ExpPoly::from_map(acc);
}

inline nlohmann::json frac_to_json(const RatFrac& f) {
    return {{"num_terms", poly_to_json(f.num)}, {"den_terms", poly_to_json(f.den)}};
}

inline RatFrac frac_from_json(const nlohmann::json& j) {
    return RatFrac(poly_from_json(j.at("num_terms")), poly_from_json(j.at("den_terms")));
}

} // namespace kinst
