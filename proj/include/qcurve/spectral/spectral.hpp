#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/json.hpp"
#include "qcurve/exactnum/poly.hpp"
#include "qcurve/exactnum/rational.hpp"
#include "qcurve/exactnum/rational_function.hpp"

namespace qcurve {

using QPoly = Poly<Rational>;
using QFunction = RationalFunction<Rational>;

struct DivisorPoint {
    std::string label;
    int multiplicity = 0;

    friend bool operator==(const DivisorPoint &, const DivisorPoint &) = default;
};

struct DivisorData {
    int base_genus = 0;
    std::vector<DivisorPoint> zeros;
    std::vector<DivisorPoint> poles;
};

struct GenusReport {
    int a = 0;
    int p_a = 0;
    int delta = 0;
    int p_g = 0;
    int blowups = 0;

    friend bool operator==(const GenusReport &, const GenusReport &) = default;
};

struct SingularityClass {
    bool irregular = false;
    Rational klass{0};
};

// x ~ z^x_exponent, y ~ z^y_exponent, Galois action z -> -z.
struct NormalizationChart {
    int x_exponent = 2;
    int y_exponent = 0;
    // Airy-normalized pair, order 5 only
    std::optional<std::pair<QFunction, QFunction>> airy;
};

inline void validate(const DivisorData &d)
{
    if (d.base_genus < 0) {
        throw std::invalid_argument("base genus must be non-negative");
    }
    long balance = 0;
    for (const auto &p : d.zeros) {
        if (p.multiplicity <= 0) {
            throw std::invalid_argument("zero multiplicity must be positive at " + p.label);
        }
        balance += p.multiplicity;
    }
    for (const auto &p : d.poles) {
        if (p.multiplicity <= 0) {
            throw std::invalid_argument("pole multiplicity must be positive at " + p.label);
        }
        balance -= p.multiplicity;
    }
    if (balance != 4L * d.base_genus - 4) {
        throw std::invalid_argument("divisor degree " + std::to_string(balance) + " differs from 4g-4 = " +
                                    std::to_string(4 * d.base_genus - 4));
    }
}

// Yun: f = c * prod_i f_i^i with f_i monic, squarefree, pairwise coprime.
// Returns (i, f_i) for the nonconstant f_i.
inline std::vector<std::pair<int, QPoly>> squarefree_factorization(const QPoly &f)
{
    if (f.is_zero()) {
        throw std::domain_error("squarefree factorization of zero");
    }
    std::vector<std::pair<int, QPoly>> out;
    if (f.degree() == 0) {
        return out;
    }
    const QPoly fm = make_monic(f);
    const QPoly a0 = gcd(fm, fm.derivative());
    QPoly b = divmod(fm, a0).quotient;
    QPoly c = divmod(fm.derivative(), a0).quotient;
    QPoly d = c - b.derivative();
    for (int i = 1; b.degree() > 0; ++i) {
        const QPoly a = gcd(b, d);
        b = divmod(b, a).quotient;
        c = divmod(d, a).quotient;
        d = c - b.derivative();
        if (a.degree() > 0) {
            out.emplace_back(i, a);
        }
    }
    return out;
}

namespace detail {

inline void append_factor_points(std::vector<DivisorPoint> &out, const QPoly &factor, int multiplicity)
{
    if (factor.degree() == 1) {
        out.push_back({to_string(-factor.coeff(0)), multiplicity});
        return;
    }
    const std::string poly = render_poly(factor, "x");
    for (int i = 1; i <= factor.degree(); ++i) {
        out.push_back({"root" + std::to_string(i) + "(" + poly + ")", multiplicity});
    }
}

} // namespace detail

// Zeros and poles of q(x)(dx)^2 on P^1.
inline DivisorData discriminant_from_rational(const QFunction &q, bool include_infinity = true)
{
    if (q.is_zero()) {
        throw std::invalid_argument("q is identically zero");
    }
    DivisorData out;
    for (const auto &[m, f] : squarefree_factorization(q.numerator())) {
        detail::append_factor_points(out.zeros, f, m);
    }
    for (const auto &[n, f] : squarefree_factorization(q.denominator())) {
        detail::append_factor_points(out.poles, f, n);
    }
    if (include_infinity) {
        // dx = -u^-2 du
        const int order = q.denominator().degree() - q.numerator().degree() - 4;
        if (order > 0) {
            out.zeros.push_back({"inf", order});
        } else if (order < 0) {
            out.poles.push_back({"inf", -order});
        }
        validate(out);
    }
    return out;
}

inline GenusReport genus_report(const DivisorData &d)
{
    validate(d);
    GenusReport r;
    const int g = d.base_genus;
    for (const auto &p : d.zeros) {
        r.delta += p.multiplicity % 2;
        r.blowups += p.multiplicity / 2;
    }
    for (const auto &p : d.poles) {
        r.a += p.multiplicity;
        r.delta += p.multiplicity % 2;
        r.blowups += p.multiplicity / 2;
    }
    if (r.delta % 2 != 0) {
        throw InternalInconsistency("odd number of odd multiplicities");
    }
    r.p_a = 4 * g - 3 + r.a;
    r.p_g = 2 * g - 1 + r.delta / 2;
    if (r.p_g < 0) {
        throw DomainError("geometric genus " + std::to_string(r.p_g) +
                          " is negative: the spectral curve is reducible");
    }
    if (2 - 2 * r.p_g != 2 * (2 - 2 * g) - r.delta) {
        throw InternalInconsistency("Riemann-Hurwitz count fails");
    }
    if (r.p_g > r.p_a) {
        throw InternalInconsistency("geometric genus exceeds arithmetic genus");
    }
    return r;
}

inline NormalizationChart normalization_chart(int order)
{
    if (order < 1) {
        throw std::invalid_argument("chart order must be at least 1");
    }
    if (order % 2 == 0) {
        throw DomainError("even order " + std::to_string(order) + ": the curve germ splits into two sheets");
    }
    NormalizationChart c{2, -order, std::nullopt};
    if (order == 5) {
        const QFunction t = QFunction::variable();
        c.airy = std::make_pair(QFunction(4) / (t * t), QFunction(-2) / t);
    }
    return c;
}

// k, l: pole orders of a_1, a_2 in psi'' + a_1 psi' + a_2 psi = 0; nullopt for an
// identically zero coefficient.
inline SingularityClass singularity_class(std::optional<int> k, std::optional<int> l)
{
    const bool k_mild = !k || *k <= 1;
    const bool l_mild = !l || *l <= 2;
    if (k_mild && l_mild) {
        return {false, Rational(0)};
    }
    Rational r;
    if (!l || (k && 2 * *k >= *l)) {
        r = *k;
    } else {
        r = make_rational(*l, 2);
    }
    return {true, r - 1};
}

// psi'' = q psi at x = inf, rewritten in u = 1/x:
// psi_uu + (2/u) psi_u - u^-4 q(1/u) psi = 0.
inline SingularityClass singularity_class_at_infinity(const QFunction &q)
{
    if (q.is_zero()) {
        return singularity_class(1, std::nullopt);
    }
    return singularity_class(1, q.numerator().degree() - q.denominator().degree() + 4);
}

inline nlohmann::json to_json_value(const DivisorData &d)
{
    auto points = [](const std::vector<DivisorPoint> &ps) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &p : ps) {
            arr.push_back({{"label", p.label}, {"multiplicity", p.multiplicity}});
        }
        return arr;
    };
    return {{"base_genus", d.base_genus}, {"zeros", points(d.zeros)}, {"poles", points(d.poles)}};
}

inline nlohmann::json to_json_value(const NormalizationChart &c)
{
    nlohmann::json j{{"x_exponent", c.x_exponent}, {"y_exponent", c.y_exponent}, {"galois", "z -> -z"}};
    if (c.airy) {
        j["airy"] = {{"x", render(c.airy->first, "t")}, {"y", render(c.airy->second, "t")}};
    }
    return j;
}

inline nlohmann::json to_json_value(const SingularityClass &s)
{
    nlohmann::json j{{"kind", s.irregular ? "irregular" : "regular"}};
    if (s.irregular) {
        j["class"] = to_json_value(s.klass);
    }
    return j;
}

// {"a","p_a","delta","p_g","blowups","charts"}; one chart per odd pole.
inline nlohmann::json geometry_report(const DivisorData &d)
{
    const GenusReport r = genus_report(d);
    nlohmann::json charts = nlohmann::json::array();
    for (const auto &p : d.poles) {
        if (p.multiplicity % 2 == 1) {
            nlohmann::json c = to_json_value(normalization_chart(p.multiplicity));
            c["point"] = p.label;
            charts.push_back(std::move(c));
        }
    }
    return {{"a", r.a},         {"p_a", r.p_a},         {"delta", r.delta}, {"p_g", r.p_g},
            {"blowups", r.blowups}, {"charts", std::move(charts)}, {"divisor", to_json_value(d)}};
}

} // namespace qcurve
