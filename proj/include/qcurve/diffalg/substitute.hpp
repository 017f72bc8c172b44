#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcurve/diffalg/diffpoly.hpp"
#include "qcurve/exactnum/poly.hpp"
#include "qcurve/exactnum/rational_function.hpp"

namespace qcurve {

using XFunction = RationalFunction<RadicalScalar>;

// Polynomial in hbar whose coefficients are rational functions of x.
using HXFunction = Poly<XFunction>;

using Assignment = std::map<int, XFunction>;

// Replaces q_l^(k) by the k-th derivative of assignment[l].
inline HXFunction substitute(const DiffPoly &p, const Assignment &assignment)
{
    std::map<int, std::vector<XFunction>> derivs;
    auto value = [&](const DiffVar &v) -> const XFunction & {
        auto it = assignment.find(v.level);
        if (it == assignment.end()) {
            throw std::invalid_argument("substitution misses q" + std::to_string(v.level));
        }
        auto &cache = derivs[v.level];
        if (cache.empty()) {
            cache.push_back(it->second);
        }
        while (static_cast<int>(cache.size()) <= v.order) {
            cache.push_back(cache.back().derivative());
        }
        return cache[static_cast<std::size_t>(v.order)];
    };
    HXFunction out;
    for (const auto &[m, c] : p.terms()) {
        XFunction prod(RadicalScalar(1));
        for (const auto &v : m) {
            prod = prod * value(v);
        }
        out += c.map([](const RadicalScalar &s) { return XFunction(s); }).scaled(prod);
    }
    return out;
}

inline HXFunction derive_x(const HXFunction &f)
{
    return f.map([](const XFunction &g) { return g.derivative(); });
}

// "x - 2*ħ", grouping by hbar power.
inline std::string render(const HXFunction &f, const std::string &var = "x")
{
    if (f.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j <= f.degree(); ++j) {
        const XFunction &c = f.coefficients()[static_cast<std::size_t>(j)];
        if (c.is_zero()) {
            continue;
        }
        std::string body = render(c, var);
        const bool simple = body.find(' ') == std::string::npos;
        bool negative = simple && body.front() == '-';
        if (negative) {
            body.erase(0, 1);
        }
        if (!simple) {
            body = "(" + body + ")";
        }
        std::string h = j == 0 ? "" : (j == 1 ? "ħ" : "ħ^" + std::to_string(j));
        std::string piece = h.empty() ? body : (body == "1" ? h : body + "*" + h);
        if (first) {
            os << (negative ? "-" : "") << piece;
        } else {
            os << (negative ? " - " : " + ") << piece;
        }
        first = false;
    }
    return os.str();
}

} // namespace qcurve
