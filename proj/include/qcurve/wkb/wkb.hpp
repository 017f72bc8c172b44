#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <nlohmann/json.hpp>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/json.hpp"
#include "qcurve/exactnum/puiseux.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

// psi = exp(sum_m hbar^(m-1) S_m)
template <typename C>
struct WkbExpansion {
    int branch = 1;
    int order = 0;
    std::vector<PuiseuxSeries<C>> S;
    // dS[m] = S_m'
    std::vector<PuiseuxSeries<C>> dS;
};

namespace detail {

template <typename C>
void require_known_terms(const PuiseuxSeries<C> &s, int m)
{
    if (s.truncation() && s.terms().empty() && detail::zero_value(s.log_coefficient())) {
        throw DomainError("truncation order insufficient: S_" + std::to_string(m) + "' has no known terms");
    }
}

// S_0' ~ x^a, S_m' ~ x^(a - m(1+a)); the truncation must lie above both.
template <typename C>
void require_precision(const PuiseuxSeries<C> &s, const Rational &alpha, int m)
{
    if (s.truncation() && *s.truncation() <= std::max(alpha, Rational(alpha - m * (1 + alpha)))) {
        throw DomainError("truncation order insufficient for S_" + std::to_string(m) + ": known only below x^" +
                          to_string(*s.truncation()));
    }
}

} // namespace detail

template <typename C>
WkbExpansion<C> wkb_expand(const PuiseuxSeries<C> &q, int branch, int M)
{
    if (q.is_zero()) {
        throw DomainError("q is identically zero");
    }
    if (branch != 1 && branch != -1) {
        throw std::invalid_argument("branch must be +1 or -1");
    }
    if (M < 0) {
        throw std::invalid_argument("WKB order must be non-negative");
    }
    if constexpr (std::is_same_v<C, RadicalScalar>) {
        for (const auto &[e, c] : q.terms()) {
            if (!c.is_rational()) {
                throw DomainError("q must have rational coefficients: only one radical extension is supported");
            }
        }
    }
    WkbExpansion<C> w;
    w.branch = branch;
    w.order = M;
    w.dS.push_back(q.sqrt().scaled(C(branch)));
    const PuiseuxSeries<C> half_inv = w.dS[0].scaled(C(2)).inverse();
    if (M >= 1) {
        w.dS.push_back(-(w.dS[0].derive() * half_inv));
    }
    for (int m = 1; m < M; ++m) {
        PuiseuxSeries<C> acc = w.dS[static_cast<std::size_t>(m)].derive();
        for (int a = 1; a <= m; ++a) {
            const int b = m + 1 - a;
            if (b >= 1 && b <= m) {
                acc += w.dS[static_cast<std::size_t>(a)] * w.dS[static_cast<std::size_t>(b)];
            }
        }
        w.dS.push_back(-(acc * half_inv));
    }
    detail::require_known_terms(w.dS[0], 0);
    const Rational alpha = *w.dS[0].valuation();
    for (int m = 0; m <= M; ++m) {
        detail::require_precision(w.dS[static_cast<std::size_t>(m)], alpha, m);
        w.S.push_back(w.dS[static_cast<std::size_t>(m)].integrate());
    }
    return w;
}

// Coefficient of hbar^k in exp(-F)(hbar^2 d^2/dx^2 - q)exp(F), F = sum hbar^(m-1) S_m:
// S_{k-1}'' + sum_{a+b=k} S_a' S_b' - [k = 0] q.
template <typename C>
PuiseuxSeries<C> plug_back_residual(const WkbExpansion<C> &w, const PuiseuxSeries<C> &q, int k)
{
    if (k < 0 || k > w.order) {
        throw std::invalid_argument("plug-back order outside the computed range");
    }
    std::vector<PuiseuxSeries<C>> d;
    for (const auto &s : w.S) {
        d.push_back(s.derive());
    }
    PuiseuxSeries<C> r;
    if (k >= 1) {
        r += d[static_cast<std::size_t>(k - 1)].derive();
    }
    for (int a = 0; a <= k; ++a) {
        r += d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(k - a)];
    }
    if (k == 0) {
        r -= q;
    }
    return r;
}

// S_m in the normalization coordinate z, x = x(z), y = y(z), h = y x_z.
template <typename C>
std::vector<PuiseuxSeries<C>> wkb_expand_z(const PuiseuxSeries<C> &x, const PuiseuxSeries<C> &y, int M)
{
    if (M < 0) {
        throw std::invalid_argument("WKB order must be non-negative");
    }
    if (y.is_zero() || x.derive().is_zero()) {
        throw DomainError("h has a vanishing leading term");
    }
    const PuiseuxSeries<C> h = y * x.derive();
    if (h.is_zero()) {
        throw DomainError("h has a vanishing leading term");
    }
    // c = 1/(2h)
    const PuiseuxSeries<C> c = h.scaled(C(2)).inverse();
    const PuiseuxSeries<C> dc = c.derive();
    std::vector<PuiseuxSeries<C>> u;
    u.push_back(h);
    if (M >= 1) {
        u.push_back(-(y.derive() * y.scaled(C(2)).inverse()));
    }
    if (M >= 2) {
        // d/dx = (y/h) d/dz
        const PuiseuxSeries<C> y_over_h = y * h.inverse();
        const PuiseuxSeries<C> ds1 = y_over_h * u[1];
        const PuiseuxSeries<C> dds1 = y_over_h * ds1.derive();
        u.push_back(-((h * (y * y).scaled(C(2)).inverse()) * (dds1 + ds1 * ds1)));
    }
    for (int m = 2; m < M; ++m) {
        PuiseuxSeries<C> sum;
        for (int a = 2; a <= m - 1; ++a) {
            const int b = m + 1 - a;
            if (b >= 2) {
                sum += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(b)];
            }
        }
        const auto &um = u[static_cast<std::size_t>(m)];
        u.push_back(-(c * um.derive()) - c * sum - dc * um);
    }
    std::vector<PuiseuxSeries<C>> S;
    detail::require_known_terms(u[0], 0);
    for (int m = 0; m <= M; ++m) {
        S.push_back(u[static_cast<std::size_t>(m)].integrate());
    }
    return S;
}

// Relative error between the order-M WKB partial sum of psi'' = x psi (decaying
// branch, hbar = 1) and a numerical solution started from it at x_anchor.
inline double airy_selfconsistency(int M, const Rational &x_eval, const Rational &x_anchor)
{
    if (!(x_eval > 0) || x_anchor < x_eval) {
        throw std::invalid_argument("need 0 < x_eval <= x_anchor");
    }
    const auto w = wkb_expand(PuiseuxSeries<Rational>::monomial(Rational(1), Rational(1)), -1, M);
    auto F = [&](double x) {
        double s = 0.0;
        for (const auto &t : w.S) {
            s += t.evaluate(x);
        }
        return s;
    };
    auto dF = [&](double x) {
        double s = 0.0;
        for (const auto &t : w.dS) {
            s += t.evaluate(x);
        }
        return s;
    };
    const double xa = to_double(x_anchor);
    const double xe = to_double(x_eval);
    // scale out exp(F(x_anchor)) to stay in range
    const double fa = F(xa);
    using State = std::array<double, 2>;
    State psi{1.0, dF(xa)};
    if (xa != xe) {
        namespace ode = boost::numeric::odeint;
        auto rhs = [](const State &s, State &ds, double x) {
            ds[0] = s[1];
            ds[1] = x * s[0];
        };
        try {
            ode::integrate_adaptive(ode::bulirsch_stoer<State>(1e-15, 1e-15), rhs, psi, xa, xe, -1e-3);
        } catch (const std::exception &e) {
            throw DomainError(std::string("integrator step failure: ") + e.what());
        }
    }
    const double wkb = std::exp(F(xe) - fa);
    return std::abs(psi[0] - wkb) / std::abs(wkb);
}

template <typename C>
nlohmann::json to_json_value(const WkbExpansion<C> &w)
{
    nlohmann::json terms = nlohmann::json::array();
    nlohmann::json rendered = nlohmann::json::array();
    for (const auto &s : w.S) {
        terms.push_back(to_json_value(s));
        rendered.push_back(render(s, "x"));
    }
    return {{"branch", w.branch}, {"order", w.order}, {"S", std::move(terms)}, {"rendered", std::move(rendered)}};
}

} // namespace qcurve
