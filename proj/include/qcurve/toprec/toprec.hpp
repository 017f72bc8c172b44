#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/json.hpp"
#include "qcurve/exactnum/puiseux.hpp"
#include "qcurve/exactnum/rational.hpp"
#include "qcurve/exactnum/rational_function.hpp"
#include "qcurve/toprec/mpoly.hpp"

namespace qcurve {

using Laurent = PuiseuxSeries<Rational>;

// Genus-0 degree-2 curve x = x(t), y = y(t) with involution t -> -t and
// eta = y dx = h(t) dt.
struct SpectralData {
    Laurent x;
    Laurent y;
    Laurent h;
    Rational mu;
};

namespace detail {

inline void require_laurent(const Laurent &s, const char *what)
{
    if (!s.is_exact() || !is_zero(s.log_coefficient())) {
        throw std::invalid_argument(std::string(what) + " must be an exact Laurent polynomial");
    }
    for (const auto &[e, c] : s.terms()) {
        if (!is_integer(e)) {
            throw std::invalid_argument(std::string(what) + " has a fractional exponent");
        }
    }
}

inline Laurent reflected(const Laurent &s) { return s.compose_monomial(Rational(-1), Rational(1)); }

} // namespace detail

inline SpectralData make_spectral_data(const Laurent &x, const Laurent &y)
{
    detail::require_laurent(x, "x(t)");
    detail::require_laurent(y, "y(t)");
    if (x.is_zero() || y.is_zero()) {
        throw std::invalid_argument("x(t) and y(t) must be nonzero");
    }
    if (!(detail::reflected(x) == x)) {
        throw std::invalid_argument("x(t) is not invariant under t -> -t");
    }
    SpectralData s{x, y, y * x.derive(), Rational(0)};
    s.mu = -*s.h.valuation() / 2;
    return s;
}

// x = 4/t^2, y = -2/t, eta = 16 t^-4 dt
inline SpectralData airy_spectral_data()
{
    return make_spectral_data(Laurent::monomial(Rational(4), Rational(-2)), Laurent::monomial(Rational(-2), Rational(-1)));
}

// 1/(z - a) - 1/(z + a)
inline RationalFunction<Rational> omega_kernel(const Rational &a)
{
    using RF = RationalFunction<Rational>;
    const RF z = RF::variable();
    return RF(1) / (z - RF(a)) - RF(1) / (z + RF(a));
}

// Omega = sigma^* W01 - W01 as the coefficient of dt.
inline Laurent omega_form(const SpectralData &s) { return -detail::reflected(s.h) - s.h; }

namespace detail {

// 1/Omega = kappa t^p with p >= 0.
struct InverseOmega {
    Rational kappa;
    int p = 0;

    MPoly at(int nvars, int i) const { return MPoly::variable_power(nvars, i, p, kappa); }
};

inline InverseOmega inverse_omega(const SpectralData &s)
{
    const Laurent omega = omega_form(s);
    if (omega.terms().size() != 1) {
        throw DomainError("Omega = " + render(omega, "t") + " is not a monomial; only monomial Omega is supported");
    }
    const auto &[e, c] = *omega.terms().begin();
    if (e > 0) {
        throw DomainError("1/Omega has a pole at t = 0");
    }
    return {Rational(1) / c, static_cast<int>(num(Rational(-e)).convert_to<long>())};
}

inline MPoly univariate(const Laurent &s, const char *what)
{
    MPoly out(1);
    if (!is_zero(s.log_coefficient())) {
        throw DomainError(std::string(what) + " has a logarithmic term");
    }
    for (const auto &[e, c] : s.terms()) {
        if (!is_integer(e) || e < 0) {
            throw DomainError(std::string(what) + " is not a polynomial in t: exponent " + to_string(e));
        }
        out.add_term({static_cast<int>(num(Rational(e)).convert_to<long>())}, c);
    }
    return out;
}

// z_i - sign * z_j divides p exactly, else nullopt.
inline std::optional<MPoly> divide_linear(const MPoly &p, int i, int j, int sign)
{
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    MPoly rem(p);
    MPoly quot(p.nvars());
    while (!rem.is_zero()) {
        auto lead = rem.terms().begin();
        for (auto it = rem.terms().begin(); it != rem.terms().end(); ++it) {
            if (it->first[ui] > lead->first[ui]) {
                lead = it;
            }
        }
        if (lead->first[ui] < 1) {
            return std::nullopt;
        }
        MPoly::Exponents q = lead->first;
        q[ui] -= 1;
        MPoly::Exponents shifted = q;
        shifted[uj] += 1;
        const Rational c = lead->second;
        const MPoly::Exponents top = lead->first;
        rem.add_term(top, -c);
        rem.add_term(shifted, c * sign);
        quot.add_term(std::move(q), c);
    }
    return quot;
}

inline MPoly var(int nvars, int i) { return MPoly::variable_power(nvars, i, 1); }

} // namespace detail

// -int_0^t W02(t, -t) / Omega(t)
inline MPoly initial_F11(const SpectralData &s)
{
    const Laurent omega = omega_form(s);
    if (omega.is_zero()) {
        throw DomainError("Omega vanishes identically");
    }
    if (omega.terms().size() != 1) {
        throw DomainError("Omega = " + render(omega, "t") + " is not a monomial; only monomial Omega is supported");
    }
    // W02(t, -t) = -1/(4 t^2) dt^2
    const Laurent w02 = Laurent::monomial(make_rational(-1, 4), Rational(-2));
    const Laurent integrand = -(w02 * omega.inverse());
    if (!is_zero(integrand.coefficient(Rational(-1)))) {
        throw DomainError("residue obstruction: the F11 integrand has a t^-1 term");
    }
    for (const auto &[e, c] : integrand.terms()) {
        if (e < -1) {
            throw DomainError("the F11 integrand has a pole at t = 0; integration from 0 is undefined");
        }
    }
    return detail::univariate(integrand.integrate(), "F11");
}

// The integrand W(z1, z2, z3) of F03, as a polynomial.
inline MPoly initial_W(const SpectralData &s)
{
    using detail::var;
    const detail::InverseOmega c = detail::inverse_omega(s);
    const MPoly z1 = var(3, 0), z2 = var(3, 1), z3 = var(3, 2);
    const MPoly A = z1 - z2, B = z1 + z2, Cc = z1 - z3, Dd = z1 + z3, E = z2 + z3;
    const MPoly E2 = E * E;
    const MPoly E4 = E2 * E2;
    // W02(z1, z2) W02(z1, -z3) + W02(z1, z3) W02(z1, -z2), over Omega(z1)
    const MPoly num1 = -(c.at(3, 0) * E4 * (B * B * Cc * Cc + A * A * Dd * Dd));
    // d/dz2 [2 z2 / ((z1^2 - z2^2)(z2 + z3)^2 Omega(z2))]
    const MPoly n2 = MPoly::constant(3, Rational(2)) * z2 * c.at(3, 1);
    const MPoly num2 = Cc * Cc * Dd * Dd * (n2.derivative(1) * A * B * E2 - n2 * E * (E * (A - B) + MPoly::constant(3, Rational(2)) * A * B));
    const MPoly n3 = MPoly::constant(3, Rational(2)) * z3 * c.at(3, 2);
    const MPoly num3 = A * A * B * B * (n3.derivative(2) * Cc * Dd * E2 - n3 * E * (E * (Cc - Dd) + MPoly::constant(3, Rational(2)) * Cc * Dd));

    std::optional<MPoly> w = num1 + num2 + num3;
    // A^2 B^2 Cc^2 Dd^2 E^4
    const std::vector<std::tuple<int, int, int, int>> factors{{0, 1, 1, 2}, {0, 1, -1, 2}, {0, 2, 1, 2},
                                                              {0, 2, -1, 2}, {1, 2, -1, 4}};
    for (const auto &[i, j, sign, times] : factors) {
        for (int k = 0; k < times && w; ++k) {
            w = detail::divide_linear(*w, i, j, sign);
        }
    }
    if (!w) {
        throw DomainError("the F03 integrand W is not a polynomial on this chart");
    }
    return *w;
}

// Lift of a series in x to the t chart, x = k t^m.
inline MPoly lift_to_chart(const SpectralData &s, const Laurent &in_x, const char *what)
{
    if (s.x.terms().size() != 1) {
        throw DomainError("lifting to the t chart needs a monomial x(t)");
    }
    const auto &[m, k] = *s.x.terms().begin();
    return detail::univariate(in_x.compose_monomial(k, m), what);
}

// t as a series in x, inverting x = k t^m.
inline Laurent chart_t_of_x(const SpectralData &s)
{
    if (s.x.terms().size() != 1) {
        throw DomainError("inverting the chart needs a monomial x(t)");
    }
    const auto &[m, k] = *s.x.terms().begin();
    // t = (x/k)^(1/m)
    return Laurent::monomial(Rational(1), Rational(1) / m).compose_monomial(Rational(1) / k, Rational(1));
}

inline MPoly initial_F03(const SpectralData &s, const Laurent &S2)
{
    const MPoly F11 = initial_F11(s);
    const MPoly W = initial_W(s);
    const MPoly G = W.integral(0).integral(1).integral(2);
    const MPoly S2t = lift_to_chart(s, S2, "S2 on the t chart");
    const MPoly Gdiag = detail::univariate(G.diagonal(), "G(z,z,z)");
    const MPoly f = S2t - F11 + Gdiag.scaled(make_rational(1, 6));
    const MPoly If = f.integral(0);
    MPoly F03 = -G;
    for (int i = 0; i < 3; ++i) {
        MPoly part = If.embedded({i}, 3);
        for (int j = 0; j < 3; ++j) {
            if (j != i) {
                part = part * detail::var(3, j);
            }
        }
        F03 += part.scaled(Rational(2));
    }
    if (!F03.is_symmetric()) {
        throw InternalInconsistency("F03 is not symmetric");
    }
    const MPoly check = F11 + detail::univariate(F03.diagonal(), "F03(z,z,z)").scaled(make_rational(1, 6));
    if (!(check == S2t)) {
        throw InternalInconsistency("S2 consistency fails: F11 + F03(z,z,z)/6 = " + render(check) +
                                    " but S2 lifts to " + render(S2t));
    }
    return F03;
}

class FreeEnergyTable {
public:
    using Key = std::pair<int, int>;

    bool contains(int g, int n) const { return entries_.count({g, n}) > 0; }

    const MPoly &at(int g, int n) const
    {
        auto it = entries_.find({g, n});
        if (it == entries_.end()) {
            throw std::invalid_argument("free energy F_{" + std::to_string(g) + "," + std::to_string(n) +
                                        "} is not in the table");
        }
        return it->second;
    }

    void insert(int g, int n, MPoly f) { entries_[{g, n}] = std::move(f); }

    const std::map<Key, MPoly> &entries() const { return entries_; }

    int max_level() const
    {
        int out = 0;
        for (const auto &[k, v] : entries_) {
            out = std::max(out, 2 * k.first - 2 + k.second);
        }
        return out;
    }

private:
    std::map<Key, MPoly> entries_;
};

// (g, n) with 2g - 2 + n = level, n >= 1
inline std::vector<std::pair<int, int>> level_entries(int level)
{
    std::vector<std::pair<int, int>> out;
    for (int g = 0; 2 * g - 1 <= level; ++g) {
        const int n = level + 2 - 2 * g;
        if (n >= 1) {
            out.emplace_back(g, n);
        }
    }
    return out;
}

// Odd exponents, homogeneous of degree level*(p-1), symmetric.
inline void check_free_energy(const MPoly &F, int g, int n, int p)
{
    const int level = 2 * g - 2 + n;
    const std::string name = "F_{" + std::to_string(g) + "," + std::to_string(n) + "}";
    if (F.nvars() != n) {
        throw InternalInconsistency(name + " has the wrong number of variables");
    }
    for (const auto &[e, c] : F.terms()) {
        int deg = 0;
        for (int k : e) {
            if (k < 1 || k % 2 == 0) {
                throw InternalInconsistency(name + " has a monomial with an even exponent");
            }
            deg += k;
        }
        if (deg != level * (p - 1)) {
            throw InternalInconsistency(name + " has a monomial of degree " + std::to_string(deg) + ", expected " +
                                        std::to_string(level * (p - 1)));
        }
    }
    if (!F.is_symmetric()) {
        throw InternalInconsistency(name + " is not symmetric");
    }
}

inline MPoly pde_recursion_step(const FreeEnergyTable &table, const SpectralData &s, int g, int n)
{
    if (2 * g - 2 + n < 2 || n < 1 || g < 0) {
        throw std::invalid_argument("pde_recursion_step needs 2g-2+n >= 2");
    }
    const detail::InverseOmega c = detail::inverse_omega(s);
    MPoly dF(n);

    if (n >= 2) {
        const MPoly dprev = table.at(g, n - 1).derivative(0);
        for (int j = 1; j < n; ++j) {
            std::vector<int> t1{0};
            std::vector<int> tj{j};
            for (int i = 1; i < n; ++i) {
                if (i != j) {
                    t1.push_back(i);
                    tj.push_back(i);
                }
            }
            const MPoly diff = c.at(n, 0) * dprev.embedded(t1, n) - c.at(n, j) * dprev.embedded(tj, n);
            dF += diff.divided_by_difference_of_squares(0, j) * MPoly::variable_power(n, j, 1, Rational(2));
        }
    }

    MPoly second(n);
    if (g >= 1) {
        std::vector<int> t{0, 0};
        for (int i = 1; i < n; ++i) {
            t.push_back(i);
        }
        second += table.at(g - 1, n + 1).derivative(0).derivative(1).embedded(t, n);
    }
    const int others = n - 1;
    for (int g1 = 0; g1 <= g; ++g1) {
        const int g2 = g - g1;
        for (unsigned mask = 0; mask < (1U << others); ++mask) {
            std::vector<int> ti{0};
            std::vector<int> tj{0};
            for (int i = 0; i < others; ++i) {
                ((mask >> i) & 1U ? ti : tj).push_back(i + 1);
            }
            const int ni = static_cast<int>(ti.size()) - 1;
            const int nj = static_cast<int>(tj.size()) - 1;
            if (2 * g1 - 1 + ni <= 0 || 2 * g2 - 1 + nj <= 0) {
                continue;
            }
            second += table.at(g1, ni + 1).derivative(0).embedded(ti, n) *
                      table.at(g2, nj + 1).derivative(0).embedded(tj, n);
        }
    }
    dF += c.at(n, 0) * second;

    MPoly F = dF.integral(0);
    check_free_energy(F, g, n, c.p);
    return F;
}

// Levels 1..max_level; entries within a level run concurrently.
inline FreeEnergyTable build_free_energy_table(const SpectralData &s, const Laurent &S2, int max_level)
{
    if (max_level < 1) {
        throw std::invalid_argument("free energy table needs max_level >= 1");
    }
    FreeEnergyTable table;
    const detail::InverseOmega c = detail::inverse_omega(s);
    {
        auto f11 = std::async(std::launch::async, [&] { return initial_F11(s); });
        auto f03 = std::async(std::launch::async, [&] { return initial_F03(s, S2); });
        MPoly F11 = f11.get();
        MPoly F03 = f03.get();
        check_free_energy(F11, 1, 1, c.p);
        check_free_energy(F03, 0, 3, c.p);
        table.insert(1, 1, std::move(F11));
        table.insert(0, 3, std::move(F03));
    }
    for (int level = 2; level <= max_level; ++level) {
        std::vector<std::pair<std::pair<int, int>, std::future<MPoly>>> jobs;
        for (const auto &[g, n] : level_entries(level)) {
            jobs.emplace_back(std::make_pair(g, n), std::async(std::launch::async, [&table, &s, g = g, n = n] {
                                  return pde_recursion_step(table, s, g, n);
                              }));
        }
        for (auto &[key, fut] : jobs) {
            table.insert(key.first, key.second, fut.get());
        }
    }
    return table;
}

namespace detail {

inline std::string intersection_key(int g, const std::vector<int> &d)
{
    std::string out = "g" + std::to_string(g) + "_d";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += (i ? "_" : "") + std::to_string(d[i]);
    }
    return out;
}

} // namespace detail

// Airy normalization:
// F = (-1)^n 2^-(2g-2+n) sum <tau_d> prod (t_i/2)^(2d_i+1) (2d_i-1)!!
inline std::map<std::string, Rational> intersection_numbers(const MPoly &F, int g)
{
    const int n = F.nvars();
    std::map<std::string, Rational> out;
    for (const auto &[e, coef] : F.terms()) {
        std::vector<int> d;
        int dim = 0;
        Rational v = coef * rpow(Rational(2), 2 * g - 2 + n) * (n % 2 == 0 ? 1 : -1);
        for (int k : e) {
            if (k < 1 || k % 2 == 0) {
                throw std::invalid_argument("monomial with an even exponent");
            }
            const int di = (k - 1) / 2;
            d.push_back(di);
            dim += di;
            v *= rpow(Rational(2), k) / double_factorial_odd(di);
        }
        if (dim != 3 * g - 3 + n) {
            throw std::invalid_argument("monomial violates sum d_i = 3g-3+n");
        }
        std::sort(d.begin(), d.end());
        const std::string key = detail::intersection_key(g, d);
        auto [it, inserted] = out.emplace(key, v);
        if (!inserted && it->second != v) {
            throw InternalInconsistency("orderings of " + key + " give different intersection numbers");
        }
    }
    return out;
}

// S_m(x) = sum_{2g-2+n = m-1} F_{g,n}(t(x), ..., t(x)) / n!
inline Laurent principal_specialization(const FreeEnergyTable &table, int m, const Laurent &chart)
{
    if (m < 2) {
        throw std::invalid_argument("principal specialization needs m >= 2");
    }
    Laurent out;
    for (const auto &[g, n] : level_entries(m - 1)) {
        const Laurent diag = table.at(g, n).diagonal();
        for (const auto &[e, c] : diag.terms()) {
            out += chart.pow(static_cast<int>(num(Rational(e)).convert_to<long>())).scaled(c / factorial(n));
        }
    }
    return out;
}

inline nlohmann::json to_json_value(const FreeEnergyTable &table)
{
    nlohmann::json free = nlohmann::json::object();
    for (const auto &[k, F] : table.entries()) {
        free["(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")"] = render(F);
    }
    return free;
}

} // namespace qcurve
