#pragma once

#include <nlohmann/json.hpp>

#include "qcurve/exactnum/puiseux.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

inline nlohmann::json to_json_value(const Rational &r) { return to_wire(r); }

// [{"coef": "p/q", "radicand": m}, ...] in ascending radicand order.
inline nlohmann::json to_json_value(const RadicalScalar &a)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto &[m, c] : a.terms()) {
        out.push_back({{"coef", to_wire(c)}, {"radicand", m}});
    }
    return out;
}

inline RadicalScalar radical_from_json(const nlohmann::json &j)
{
    if (!j.is_array()) {
        throw std::invalid_argument("radical scalar must be a JSON array");
    }
    RadicalScalar out;
    for (const auto &t : j) {
        const auto m = t.at("radicand").get<std::uint64_t>();
        if (!is_squarefree(m)) {
            throw std::invalid_argument("radicand " + std::to_string(m) + " is not squarefree");
        }
        out += RadicalScalar::term(parse_rational(t.at("coef").get<std::string>()), m);
    }
    return out;
}

template <typename C>
nlohmann::json to_json_value(const PuiseuxSeries<C> &s)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[e, c] : s.terms()) {
        terms.push_back({{"exponent", to_wire(e)}, {"coef", to_json_value(c)}});
    }
    nlohmann::json out;
    out["terms"] = terms;
    out["log"] = to_json_value(s.log_coefficient());
    out["truncation"] = s.truncation() ? nlohmann::json(to_wire(*s.truncation())) : nlohmann::json(nullptr);
    out["branch_denominator"] = s.branch_denominator();
    return out;
}

} // namespace qcurve
