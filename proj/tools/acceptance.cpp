#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcurve/diffalg/operator.hpp"
#include "qcurve/exactnum/expr.hpp"
#include "qcurve/quantize/quantize.hpp"
#include "qcurve/spectral/spectral.hpp"
#include "qcurve/tds/tds.hpp"
#include "qcurve/toprec/dvv.hpp"
#include "qcurve/toprec/toprec.hpp"
#include "qcurve/wkb/wkb.hpp"

using namespace qcurve;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void fail(Outcome &o, const std::string &why)
{
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + why;
}

// 1: published operators for r = 2, 3, 4, under 1 s
Outcome golden_operators()
{
    Outcome o;
    const auto t0 = Clock::now();
    const char *published[] = {
        "(ħ d/dx)^2 - q2",
        "(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'",
        "(ħ d/dx)^4 - 10*q2*(ħ d/dx)^2 + (24*q3 - 10*ħ*q2')*(ħ d/dx) - 36*q4 + 9*q2^2 + 3*ħ^2*q2'' - 12*ħ*q3'",
    };
    for (int r = 2; r <= 4; ++r) {
        const auto op = quantum_curve(r);
        if (!(op == parse_operator(published[r - 2]))) {
            fail(o, "r=" + std::to_string(r) + " computed " + render(op));
        }
    }
    if (seconds_since(t0) >= 1.0) {
        fail(o, "runtime " + std::to_string(seconds_since(t0)) + " s");
    }
    return o;
}

// 2: semi-classical limit equals det(y + phi), r = 2..6, under 30 s
Outcome semiclassical_identity()
{
    Outcome o;
    for (int r = 2; r <= 6; ++r) {
        const auto t0 = Clock::now();
        if (!(semiclassical_limit(quantum_curve(r)) == char_poly(higgs_field(r)))) {
            fail(o, "r=" + std::to_string(r) + " differs");
        }
        if (r == 6 && seconds_since(t0) >= 30.0) {
            fail(o, "r=6 runtime " + std::to_string(seconds_since(t0)) + " s");
        }
    }
    return o;
}

// 3: C*-equivariance, r = 2..5
Outcome equivariance()
{
    Outcome o;
    for (int r = 2; r <= 5; ++r) {
        if (!is_equivariant(quantum_curve(r))) {
            fail(o, "r=" + std::to_string(r));
        }
    }
    return o;
}

// 4: Airy geometry and the holomorphic genus-2 case
Outcome airy_geometry()
{
    Outcome o;
    const auto q = parse_rational_function("x");
    const GenusReport g = genus_report(discriminant_from_rational(q, true));
    if (g.p_g != 0 || g.blowups != 2 || g.delta != 2 || g.p_a != 2) {
        fail(o, "q=x report p_g=" + std::to_string(g.p_g) + " blowups=" + std::to_string(g.blowups) +
                    " delta=" + std::to_string(g.delta) + " p_a=" + std::to_string(g.p_a));
    }
    const SingularityClass inf = singularity_class_at_infinity(q);
    if (!inf.irregular || inf.klass != make_rational(3, 2)) {
        fail(o, "class at infinity " + to_string(inf.klass));
    }
    const GenusReport hol = genus_report({2, {{"p1", 1}, {"p2", 1}, {"p3", 1}, {"p4", 1}}, {}});
    if (hol.p_g != 5) {
        fail(o, "genus 2 holomorphic p_g=" + std::to_string(hol.p_g));
    }
    return o;
}

Laurent airy_S2() { return Laurent::monomial(make_rational(-5, 48), make_rational(-3, 2)); }

// 5: F_{1,1} and F_{0,3}
Outcome airy_initial_data()
{
    Outcome o;
    const auto s = airy_spectral_data();
    if (!(initial_F11(s) == MPoly::monomial(make_rational(-1, 384), {3}))) {
        fail(o, "F11 = " + render(initial_F11(s)));
    }
    const MPoly F03 = initial_F03(s, airy_S2());
    if (!(F03 == MPoly::monomial(make_rational(-1, 16), {1, 1, 1}))) {
        fail(o, "F03 = " + render(F03));
    }
    return o;
}

std::vector<int> indices_of(const std::string &name)
{
    std::vector<int> d;
    std::istringstream parts(name.substr(name.find("_d") + 2));
    for (std::string tok; std::getline(parts, tok, '_');) {
        d.push_back(std::stoi(tok));
    }
    return d;
}

// 6: intersection numbers through level 5 against the Virasoro oracle, under 2 min
Outcome intersection_numbers_vs_oracle()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto table = build_free_energy_table(airy_spectral_data(), airy_S2(), 5);
    int checked = 0;
    for (const auto &[key, F] : table.entries()) {
        for (const auto &[name, value] : intersection_numbers(F, key.first)) {
            ++checked;
            if (value != dvv_oracle(key.first, indices_of(name))) {
                fail(o, name + " = " + to_string(value));
            }
        }
    }
    const struct {
        int g;
        std::vector<int> d;
        Rational v;
    } spots[] = {{0, {0, 0, 0}, Rational(1)},
                 {1, {1}, make_rational(1, 24)},
                 {2, {4}, make_rational(1, 1152)},
                 {1, {0, 2}, make_rational(1, 24)},
                 {1, {1, 1}, make_rational(1, 24)}};
    for (const auto &s : spots) {
        if (dvv_oracle(s.g, s.d) != s.v) {
            fail(o, "spot value at g=" + std::to_string(s.g));
        }
    }
    if (seconds_since(t0) >= 120.0) {
        fail(o, "runtime " + std::to_string(seconds_since(t0)) + " s");
    }
    o.detail = std::to_string(checked) + " numbers" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

// 7: WKB S_m equals the principal specialization, m = 2..6
Outcome wkb_equals_toprec()
{
    Outcome o;
    const auto w = wkb_expand(Laurent::monomial(Rational(1), Rational(1)), -1, 6);
    if (!(w.S[2] == airy_S2())) {
        fail(o, "S2 = " + render(w.S[2], "x"));
    }
    const auto s = airy_spectral_data();
    const auto table = build_free_energy_table(s, w.S[2], 5);
    const auto chart = chart_t_of_x(s);
    for (int m = 2; m <= 6; ++m) {
        if (!(principal_specialization(table, m, chart) == w.S[static_cast<std::size_t>(m)])) {
            fail(o, "m=" + std::to_string(m));
        }
    }
    return o;
}

// 8: plug-back through hbar^8 for 20 random polynomials of degree <= 4, both branches
Outcome plug_back()
{
    using RSeries = PuiseuxSeries<RadicalScalar>;
    Outcome o;
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> coef(-6, 6);
    std::uniform_int_distribution<int> positive(1, 12);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> lowest(0, 2);
    std::uniform_int_distribution<int> top(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const int lo = lowest(rng);
        const int hi = std::max(lo, top(rng));
        RSeries q = RSeries::monomial(RadicalScalar(make_rational(positive(rng), den(rng))), Rational(lo));
        for (int e = lo + 1; e <= hi; ++e) {
            q += RSeries::monomial(RadicalScalar(make_rational(coef(rng), den(rng))), Rational(e));
        }
        q = q.truncated(Rational(20));
        for (int branch : {1, -1}) {
            const auto w = wkb_expand(q, branch, 8);
            for (int k = 0; k <= 8; ++k) {
                const RSeries r = plug_back_residual(w, q, k);
                if (!r.terms().empty() || !is_zero(r.log_coefficient())) {
                    fail(o, "q=" + render(q, "x") + " hbar^" + std::to_string(k));
                }
            }
        }
    }
    return o;
}

// 9: numeric self-consistency
Outcome numeric_selfconsistency()
{
    Outcome o;
    double previous = 0.0;
    std::ostringstream errors;
    for (int M = 2; M <= 6; ++M) {
        const double e = airy_selfconsistency(M, Rational(5), Rational(20));
        errors << (M == 2 ? "" : " ") << "M" << M << "=" << e;
        if (M > 2 && !(e < previous)) {
            fail(o, "not monotone at M=" + std::to_string(M));
        }
        previous = e;
    }
    if (!(previous < 1e-8)) {
        fail(o, "M=6 relative error above 1e-8");
    }
    o.detail = errors.str() + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

// 10: cocycle for 100 random triples per rank, r = 2..6
Outcome cocycle()
{
    Outcome o;
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    auto draw = [&](bool nonzero) {
        while (true) {
            const int p = num(rng);
            if (!nonzero || p != 0) {
                return RadicalScalar(make_rational(p, den(rng)));
            }
        }
    };
    for (int r = 2; r <= 6; ++r) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto xi1 = draw(true);
            const auto xi2 = draw(true);
            const auto s1 = draw(false);
            const auto s2 = draw(false);
            const auto s13 = xi1 * s2 + s1 * inverse(xi2);
            if (!(oper_transition(r, xi1, s1) * oper_transition(r, xi2, s2) == oper_transition(r, xi1 * xi2, s13))) {
                fail(o, "r=" + std::to_string(r) + " trial " + std::to_string(trial));
            }
        }
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"golden operators r=2,3,4", golden_operators},
        {"semi-classical limit = char poly, r=2..6", semiclassical_identity},
        {"C*-equivariance, r=2..5", equivariance},
        {"Airy geometry and genus 2 holomorphic case", airy_geometry},
        {"Airy initial data F11, F03", airy_initial_data},
        {"intersection numbers through level 5", intersection_numbers_vs_oracle},
        {"WKB = principal specialization, m=2..6", wkb_equals_toprec},
        {"WKB plug-back, 20 random q, both branches", plug_back},
        {"Airy numeric self-consistency", numeric_selfconsistency},
        {"oper transition cocycle, r=2..6", cocycle},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %zu: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    seconds_since(t0), o.detail.empty() ? "" : " | ", o.detail.c_str());
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
