#include <gtest/gtest.h>

#include "qcurve/exactnum/expr.hpp"
#include "qcurve/toprec/dvv.hpp"
#include "qcurve/toprec/toprec.hpp"

using namespace qcurve;

namespace {

Laurent mono(const Rational &c, int e) { return Laurent::monomial(c, Rational(e)); }

// -5/48 x^(-3/2)
Laurent airy_S2() { return Laurent::monomial(make_rational(-5, 48), make_rational(-3, 2)); }

MPoly poly(std::vector<std::pair<std::vector<int>, Rational>> terms)
{
    MPoly p(static_cast<int>(terms.front().first.size()));
    for (auto &[e, c] : terms) {
        p.add_term(e, c);
    }
    return p;
}

const FreeEnergyTable &airy_table()
{
    static const FreeEnergyTable t = build_free_energy_table(airy_spectral_data(), airy_S2(), 5);
    return t;
}

} // namespace

TEST(OmegaKernel, Examples)
{
    const auto w = omega_kernel(Rational(1));
    EXPECT_EQ(w, parse_rational_function("2/(x^2 - 1)"));
    const auto z = RationalFunction<Rational>::variable();
    const Rational a = make_rational(3, 7);
    const auto wa = omega_kernel(a);
    const auto at_a = wa * (z - RationalFunction<Rational>(a));
    EXPECT_EQ(at_a.numerator().evaluate(a) / at_a.denominator().evaluate(a), Rational(1));
    const auto at_minus_a = wa * (z + RationalFunction<Rational>(a));
    EXPECT_EQ(at_minus_a.numerator().evaluate(Rational(-a)) / at_minus_a.denominator().evaluate(Rational(-a)),
              Rational(-1));
    EXPECT_EQ(omega_kernel(Rational(-a)), -wa);
}

TEST(SpectralData, Airy)
{
    const auto s = airy_spectral_data();
    EXPECT_EQ(s.h, mono(Rational(16), -4));
    EXPECT_EQ(s.mu, Rational(2));
    EXPECT_EQ(omega_form(s), mono(Rational(-32), -4));
    EXPECT_THROW(make_spectral_data(mono(Rational(1), -1), mono(Rational(1), 1)), std::invalid_argument);
}

TEST(InitialData, F11)
{
    const auto s = airy_spectral_data();
    const MPoly F11 = initial_F11(s);
    EXPECT_EQ(F11, MPoly::monomial(make_rational(-1, 384), {3}));
    EXPECT_EQ(render(F11), "-1/384*t^3");
    // -(1/2) <tau_1>_1 / 8
    EXPECT_EQ(F11.coefficient({3}), make_rational(-1, 2) * dvv_oracle(1, {1}) / 8);

    const Rational lambda(3);
    const auto scaled = make_spectral_data(s.x, s.y.scaled(lambda));
    EXPECT_EQ(initial_F11(scaled), F11.scaled(Rational(1) / lambda));
}

TEST(InitialData, NonMonomialOmegaIsRejected)
{
    const auto s = make_spectral_data(mono(Rational(1), -2), mono(Rational(1), -1) + mono(Rational(1), 1));
    EXPECT_THROW(initial_F11(s), DomainError);
    EXPECT_THROW(initial_W(s), DomainError);
}

TEST(InitialData, AiryW)
{
    EXPECT_EQ(initial_W(airy_spectral_data()), MPoly::constant(3, make_rational(1, 16)));
}

TEST(InitialData, F03)
{
    const MPoly F03 = initial_F03(airy_spectral_data(), airy_S2());
    EXPECT_EQ(F03, MPoly::monomial(make_rational(-1, 16), {1, 1, 1}));
    EXPECT_TRUE(F03.is_symmetric());
    // (-1)^3 / 2 * <tau_0^3>_0 * (1/2)^3
    EXPECT_EQ(F03.coefficient({1, 1, 1}), make_rational(-1, 2) * dvv_oracle(0, {0, 0, 0}) / 8);
    const Laurent wrong = Laurent::monomial(make_rational(-1, 12), make_rational(-3, 2));
    EXPECT_THROW(initial_F03(airy_spectral_data(), wrong), InternalInconsistency);
}

TEST(MPoly, ExactDivisionFailsLoudly)
{
    const MPoly p = poly({{{3, 0}, Rational(1)}, {{0, 3}, Rational(-1)}});
    EXPECT_THROW(p.divided_by_difference_of_squares(0, 1), InternalInconsistency);
    const MPoly q = poly({{{4, 0}, Rational(1)}, {{0, 4}, Rational(-1)}});
    EXPECT_EQ(q.divided_by_difference_of_squares(0, 1), poly({{{2, 0}, Rational(1)}, {{0, 2}, Rational(1)}}));
    EXPECT_THROW(MPoly::monomial(Rational(1), {-1}).integral(0), InternalInconsistency);
}

TEST(PdeRecursion, AiryExamples)
{
    const auto &t = airy_table();
    const Rational c04 = make_rational(1, 256);
    MPoly F04(4);
    for (int i = 0; i < 4; ++i) {
        std::vector<int> e{1, 1, 1, 1};
        e[static_cast<std::size_t>(i)] = 3;
        F04.add_term(e, c04);
    }
    EXPECT_EQ(t.at(0, 4), F04);
    EXPECT_EQ(t.at(1, 2), poly({{{5, 1}, make_rational(3, 6144)}, {{3, 3}, make_rational(1, 6144)},
                                {{1, 5}, make_rational(3, 6144)}}));
    EXPECT_EQ(t.at(2, 1), MPoly::monomial(make_rational(-35, 1572864), {9}));
}

TEST(PdeRecursion, RequiresLowerLevels)
{
    FreeEnergyTable empty;
    EXPECT_THROW(pde_recursion_step(empty, airy_spectral_data(), 0, 4), std::invalid_argument);
    EXPECT_THROW(pde_recursion_step(empty, airy_spectral_data(), 1, 1), std::invalid_argument);
}

TEST(PdeRecursion, TableInvariants)
{
    const auto &t = airy_table();
    EXPECT_EQ(t.max_level(), 5);
    for (int level = 1; level <= 5; ++level) {
        for (const auto &[g, n] : level_entries(level)) {
            const MPoly &F = t.at(g, n);
            EXPECT_TRUE(F.is_symmetric()) << g << "," << n;
            EXPECT_FALSE(F.is_zero()) << g << "," << n;
            for (const auto &[e, c] : F.terms()) {
                int deg = 0;
                for (int k : e) {
                    EXPECT_EQ(k % 2, 1);
                    deg += k;
                }
                EXPECT_EQ(deg, 6 * g - 6 + 3 * n);
            }
        }
    }
}

TEST(IntersectionNumbers, Examples)
{
    EXPECT_EQ(intersection_numbers(MPoly::monomial(make_rational(-1, 16), {1, 1, 1}), 0).at("g0_d0_0_0"),
              Rational(1));
    EXPECT_EQ(intersection_numbers(MPoly::monomial(make_rational(-1, 384), {3}), 1).at("g1_d1"),
              make_rational(1, 24));
    EXPECT_EQ(intersection_numbers(MPoly::monomial(make_rational(-35, 1572864), {9}), 2).at("g2_d4"),
              make_rational(1, 1152));
    EXPECT_THROW(intersection_numbers(MPoly::monomial(Rational(1), {5}), 1), std::invalid_argument);
}

TEST(IntersectionNumbers, MatchOracleThroughLevelFive)
{
    const auto &t = airy_table();
    int checked = 0;
    for (const auto &[key, F] : t.entries()) {
        for (const auto &[name, value] : intersection_numbers(F, key.first)) {
            std::vector<int> d;
            std::size_t pos = name.find("_d") + 2;
            while (pos <= name.size()) {
                const std::size_t next = name.find('_', pos);
                d.push_back(std::stoi(name.substr(pos, next - pos)));
                pos = next == std::string::npos ? name.size() + 1 : next + 1;
            }
            EXPECT_EQ(value, dvv_oracle(key.first, d)) << name;
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(DvvOracle, Examples)
{
    EXPECT_EQ(dvv_oracle(0, {0, 0, 0}), Rational(1));
    EXPECT_EQ(dvv_oracle(1, {1}), make_rational(1, 24));
    EXPECT_EQ(dvv_oracle(2, {4}), make_rational(1, 1152));
    EXPECT_EQ(dvv_oracle(0, {1, 0, 0, 0}), Rational(1));
    EXPECT_EQ(dvv_oracle(1, {0, 2}), make_rational(1, 24));
    EXPECT_EQ(dvv_oracle(1, {1, 1}), make_rational(1, 24));
    EXPECT_THROW(dvv_oracle(1, {2}), std::invalid_argument);
    EXPECT_THROW(dvv_oracle(0, {-1, 2, 2}), std::invalid_argument);
}

TEST(DvvOracle, StringDilatonAndOnePoint)
{
    // <tau_{3g-2}>_g = 1/(24^g g!)
    for (int g = 1; g <= 5; ++g) {
        EXPECT_EQ(dvv_oracle(g, {3 * g - 2}), Rational(1) / (rpow(Rational(24), g) * factorial(g))) << g;
    }
    // dilaton: <tau_1 tau_S>_g = (2g-2+n) <tau_S>_g
    EXPECT_EQ(dvv_oracle(2, {1, 2, 3}), Rational(4) * dvv_oracle(2, {2, 3}));
    EXPECT_EQ(dvv_oracle(2, {2, 3}), make_rational(29, 5760));
    EXPECT_EQ(dvv_oracle(1, {1, 1, 1}), Rational(2) * dvv_oracle(1, {1, 1}));
    // string: <tau_0 tau_S>_g = sum_j <tau_{d_j - 1} ...>
    EXPECT_EQ(dvv_oracle(2, {0, 3, 3}), Rational(2) * dvv_oracle(2, {2, 3}));
    EXPECT_EQ(dvv_oracle(2, {0, 2, 4}), dvv_oracle(2, {1, 4}) + dvv_oracle(2, {2, 3}));
    EXPECT_EQ(dvv_oracle(3, {0, 8}), dvv_oracle(3, {7}));
}

TEST(PrincipalSpecialization, Airy)
{
    const auto &t = airy_table();
    const Laurent chart = chart_t_of_x(airy_spectral_data());
    EXPECT_EQ(chart, Laurent::monomial(Rational(2), make_rational(-1, 2)));
    EXPECT_EQ(principal_specialization(t, 2, chart), airy_S2());
    for (int m = 2; m <= 6; ++m) {
        const Laurent S = principal_specialization(t, m, chart);
        ASSERT_EQ(S.terms().size(), 1U) << m;
        EXPECT_EQ(S.terms().begin()->first, make_rational(-3 * (m - 1), 2)) << m;
    }
    EXPECT_THROW(principal_specialization(t, 7, chart), std::invalid_argument);
}

TEST(FreeEnergyTable, Json)
{
    const auto j = to_json_value(airy_table());
    EXPECT_EQ(j["(0,3)"], "-1/16*t1*t2*t3");
    EXPECT_EQ(j["(1,1)"], "-1/384*t^3");
}
