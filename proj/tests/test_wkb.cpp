#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "qcurve/toprec/toprec.hpp"
#include "qcurve/wkb/wkb.hpp"

using namespace qcurve;

namespace {

using QSeries = PuiseuxSeries<Rational>;
using RSeries = PuiseuxSeries<RadicalScalar>;

QSeries xpow(const Rational &c, const Rational &e) { return QSeries::monomial(c, e); }

const WkbExpansion<Rational> &airy_minus()
{
    static const auto w = wkb_expand(xpow(Rational(1), Rational(1)), -1, 6);
    return w;
}

RSeries random_q(std::mt19937 &rng, int N)
{
    std::uniform_int_distribution<int> coef(-6, 6);
    std::uniform_int_distribution<int> positive(1, 12);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> lowest(0, 2);
    std::uniform_int_distribution<int> top(0, 4);
    const int lo = lowest(rng);
    const int hi = std::max(lo, top(rng));
    RSeries q = RSeries::monomial(RadicalScalar(make_rational(positive(rng), den(rng))), Rational(lo));
    for (int e = lo + 1; e <= hi; ++e) {
        q += RSeries::monomial(RadicalScalar(make_rational(coef(rng), den(rng))), Rational(e));
    }
    return q.truncated(Rational(N));
}

} // namespace

TEST(WkbExpand, AiryExamples)
{
    const auto &w = airy_minus();
    EXPECT_EQ(w.S[0], xpow(make_rational(-2, 3), make_rational(3, 2)));
    EXPECT_EQ(render(w.S[1], "x"), "-1/4*log(x)");
    EXPECT_EQ(w.S[1], QSeries::log_term(make_rational(-1, 4)));
    EXPECT_EQ(w.S[2], xpow(make_rational(-5, 48), make_rational(-3, 2)));
    EXPECT_EQ(wkb_expand(xpow(Rational(1), Rational(1)), 1, 0).S[0], xpow(make_rational(2, 3), make_rational(3, 2)));
}

TEST(WkbExpand, Errors)
{
    EXPECT_THROW(wkb_expand(QSeries(), 1, 3), DomainError);
    // 2 x is not a square in Q
    EXPECT_THROW(wkb_expand(xpow(Rational(2), Rational(1)), 1, 3), DomainError);
    // exact non-monomial q needs a truncation order
    EXPECT_THROW(wkb_expand(xpow(Rational(1), Rational(0)) + xpow(Rational(1), Rational(1)), 1, 2), DomainError);
    const QSeries coarse = (xpow(Rational(1), Rational(0)) + xpow(Rational(1), Rational(1))).truncated(Rational(3));
    EXPECT_THROW(wkb_expand(coarse, 1, 6), DomainError);
    EXPECT_THROW(wkb_expand(RSeries::monomial(RadicalScalar::sqrt_of(2), Rational(1)), 1, 2), DomainError);
}

TEST(WkbExpand, BranchFlipOnAiry)
{
    const auto plus = wkb_expand(xpow(Rational(1), Rational(1)), 1, 6);
    const auto &minus = airy_minus();
    for (int m = 0; m <= 6; ++m) {
        const Rational sign = (m - 1) % 2 == 0 ? Rational(1) : Rational(-1);
        EXPECT_EQ(minus.S[static_cast<std::size_t>(m)], plus.S[static_cast<std::size_t>(m)].scaled(sign)) << m;
    }
}

TEST(WkbExpand, AiryShape)
{
    const auto &w = airy_minus();
    for (int m = 2; m <= 6; ++m) {
        const auto &s = w.S[static_cast<std::size_t>(m)];
        ASSERT_EQ(s.terms().size(), 1U);
        EXPECT_EQ(s.terms().begin()->first, make_rational(-3 * (m - 1), 2));
    }
}

TEST(PlugBack, AiryExact)
{
    const QSeries q = xpow(Rational(1), Rational(1));
    const auto w = wkb_expand(q, 1, 8);
    for (int k = 0; k <= 8; ++k) {
        EXPECT_TRUE(plug_back_residual(w, q, k).is_zero()) << k;
    }
}

TEST(PlugBack, RandomPolynomialsBothBranches)
{
    std::mt19937 rng(2024);
    const int N = 20;
    for (int trial = 0; trial < 20; ++trial) {
        const RSeries q = random_q(rng, N);
        for (int branch : {1, -1}) {
            const auto w = wkb_expand(q, branch, 8);
            for (int k = 0; k <= 8; ++k) {
                const RSeries r = plug_back_residual(w, q, k);
                EXPECT_TRUE(r.terms().empty() && is_zero(r.log_coefficient()))
                    << "trial " << trial << " branch " << branch << " hbar^" << k << ": " << render(r, "x");
                ASSERT_TRUE(r.truncation().has_value());
                // the check must cover a nontrivial range of exponents
                EXPECT_GE(*r.truncation(), Rational(1)) << render(q, "x");
            }
        }
    }
}

TEST(WkbExpandZ, AiryChart)
{
    const QSeries x = QSeries::monomial(Rational(4), Rational(-2));
    const QSeries y = QSeries::monomial(Rational(-2), Rational(-1));
    const auto S = wkb_expand_z(x, y, 6);
    EXPECT_EQ(S[2], QSeries::monomial(make_rational(-5, 384), Rational(3)));
    const auto &w = airy_minus();
    for (int m = 0; m <= 6; ++m) {
        EXPECT_EQ(S[static_cast<std::size_t>(m)], w.S[static_cast<std::size_t>(m)].compose_monomial(Rational(4), Rational(-2)))
            << m;
    }
}

TEST(WkbExpandZ, CubicChart)
{
    // q = x^3 with x = z^2, y = z^3, h = 2 z^4
    const QSeries x = QSeries::monomial(Rational(1), Rational(2));
    const QSeries y = QSeries::monomial(Rational(1), Rational(3));
    const auto S = wkb_expand_z(x, y, 6);
    const auto w = wkb_expand(xpow(Rational(1), Rational(3)), 1, 6);
    for (int m = 0; m <= 6; ++m) {
        EXPECT_EQ(S[static_cast<std::size_t>(m)], w.S[static_cast<std::size_t>(m)].compose_monomial(Rational(1), Rational(2)))
            << m;
    }
    EXPECT_THROW(wkb_expand_z(x, QSeries(), 2), DomainError);
}

TEST(WkbVersusToprec, AiryPrincipalSpecialization)
{
    const auto s = airy_spectral_data();
    const auto &w = airy_minus();
    const auto table = build_free_energy_table(s, w.S[2], 5);
    const auto chart = chart_t_of_x(s);
    for (int m = 2; m <= 6; ++m) {
        EXPECT_EQ(principal_specialization(table, m, chart), w.S[static_cast<std::size_t>(m)]) << m;
    }
}

TEST(AirySelfConsistency, AnchorEqualsEvaluation)
{
    EXPECT_EQ(airy_selfconsistency(4, Rational(7), Rational(7)), 0.0);
    EXPECT_THROW(airy_selfconsistency(4, Rational(8), Rational(7)), std::invalid_argument);
}

TEST(AirySelfConsistency, MonotoneInOrder)
{
    double previous = 1.0;
    for (int M = 2; M <= 6; ++M) {
        const double e = airy_selfconsistency(M, Rational(5), Rational(20));
        std::printf("M=%d relative error %.3e\n", M, e);
        EXPECT_LT(e, previous) << M;
        previous = e;
    }
}

TEST(AirySelfConsistency, OrderSixTolerance)
{
    const double e = airy_selfconsistency(6, Rational(5), Rational(20));
    EXPECT_LT(e, 1e-8) << "relative error " << e;
}
