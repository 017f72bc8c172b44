#include <random>

#include <gtest/gtest.h>

#include "qcurve/diffalg/diffpoly.hpp"
#include "qcurve/diffalg/operator.hpp"
#include "qcurve/diffalg/substitute.hpp"
#include "qcurve/exactnum/expr.hpp"

using namespace qcurve;

namespace {

DiffPoly q(int l, int k = 0) { return DiffPoly::var(l, k); }
DiffPoly hbar(int k = 1) { return DiffPoly::hbar(k); }

XFunction xf(const std::string &s) { return parse_rational_function<RadicalScalar>(s); }

DiffPoly random_diffpoly(std::mt19937 &rng)
{
    std::uniform_int_distribution<int> level(2, 4);
    std::uniform_int_distribution<int> order(0, 2);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> len(0, 3);
    std::uniform_int_distribution<int> hp(0, 2);
    DiffPoly out;
    for (int t = 0; t < 3; ++t) {
        DiffPoly m = DiffPoly(coef(rng)) * hbar(hp(rng));
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            m = m * q(level(rng), order(rng));
        }
        out += m;
    }
    return out;
}

} // namespace

TEST(DiffVar, RejectsInvalid)
{
    EXPECT_THROW(DiffPoly::var(1), std::invalid_argument);
    EXPECT_THROW(DiffPoly::var(2, -1), std::invalid_argument);
}

TEST(DiffDerive, Examples)
{
    EXPECT_EQ(diff_derive(q(2)), q(2, 1));
    EXPECT_EQ(diff_derive(q(2) * q(2)), DiffPoly(2) * q(2) * q(2, 1));
    EXPECT_EQ(diff_derive(hbar() * q(2) * q(3, 1)), hbar() * (q(2, 1) * q(3, 1) + q(2) * q(3, 2)));
    EXPECT_TRUE(diff_derive(hbar(3)).is_zero());
}

TEST(DiffDerive, IsADerivation)
{
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        const DiffPoly a = random_diffpoly(rng);
        const DiffPoly b = random_diffpoly(rng);
        EXPECT_EQ(diff_derive(a * b), diff_derive(a) * b + a * diff_derive(b));
        EXPECT_EQ(diff_derive(a + b), diff_derive(a) + diff_derive(b));
    }
}

TEST(WeightedDegree, Examples)
{
    EXPECT_EQ(weighted_degree(hbar(2) * q(2, 2)), 4);
    EXPECT_EQ(weighted_degree(q(2) * q(2)), 4);
    EXPECT_EQ(weighted_degree(hbar() * q(3, 1)), 4);
    EXPECT_EQ(weighted_degree(q(2) + q(3)), std::nullopt);
    EXPECT_EQ(weighted_degree(DiffPoly(DiffPoly(4) * q(3) - DiffPoly(2) * hbar() * q(2, 1))), 3);
}

TEST(Substitute, Examples)
{
    const Assignment a2{{2, xf("x")}};
    EXPECT_EQ(substitute(q(2), a2), HXFunction(xf("x")));
    EXPECT_EQ(substitute(q(2, 1), {{2, xf("x^2")}}), HXFunction(xf("2*x")));
    const DiffPoly c0 = DiffPoly(4) * q(3) - DiffPoly(2) * hbar() * q(2, 1);
    const HXFunction got = substitute(c0, {{2, xf("x")}, {3, xf("0")}});
    EXPECT_EQ(got, HXFunction::monomial(xf("-2"), 1));
    EXPECT_EQ(render(got), "-2*ħ");
    EXPECT_THROW(substitute(q(3), a2), std::invalid_argument);
}

TEST(Substitute, CommutesWithDerive)
{
    std::mt19937 rng(17);
    const Assignment a{{2, xf("x^3 - 2*x + 1")}, {3, xf("1/(x + 1)")}, {4, xf("x^2/3")}};
    for (int i = 0; i < 60; ++i) {
        const DiffPoly p = random_diffpoly(rng);
        EXPECT_EQ(substitute(diff_derive(p), a), derive_x(substitute(p, a)));
    }
}

TEST(Render, OperatorRoundTrip)
{
    const std::string text = "(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'";
    const ScalarOperator op = parse_operator(text);
    EXPECT_EQ(op.order, 3);
    EXPECT_EQ(op.coefficient(3), hbar(3));
    EXPECT_EQ(op.coefficient(1), DiffPoly(-4) * q(2) * hbar());
    EXPECT_EQ(op.coefficient(0), DiffPoly(4) * q(3) - DiffPoly(2) * hbar() * q(2, 1));
    EXPECT_EQ(render(op), text);
    EXPECT_EQ(parse_operator("hbar^2*(d/dx)^2 - q2"), parse_operator("(ħ d/dx)^2 - q2"));
}

TEST(Render, FallbackAndRadicals)
{
    ScalarOperator op{1, {q(2), DiffPoly(1)}};
    EXPECT_EQ(render(op), "(d/dx) + q2");
    EXPECT_EQ(parse_operator(render(op)), op);
    const DiffPoly p = q(2).scaled(RadicalScalar::sqrt_of(2) + RadicalScalar(1)) - q(3).scaled(RadicalScalar::sqrt_of(3));
    EXPECT_EQ(render(p), "(1 + sqrt(2))*q2 - sqrt(3)*q3");
    EXPECT_EQ(parse_diffpoly(render(p)), p);
}

TEST(Render, RandomRoundTrip)
{
    std::mt19937 rng(99);
    for (int i = 0; i < 50; ++i) {
        ScalarOperator op{3, {random_diffpoly(rng), random_diffpoly(rng), DiffPoly(), hbar(3)}};
        EXPECT_EQ(parse_operator(render(op)), op) << render(op);
    }
}

TEST(Render, YPolynomial)
{
    YPoly p = YPoly::monomial(DiffPoly(1), 3) - YPoly::monomial(DiffPoly(4) * q(2), 1) + YPoly(DiffPoly(4) * q(3));
    EXPECT_EQ(render(p), "y^3 - 4*q2*y + 4*q3");
    EXPECT_EQ(parse_ypoly(render(p)), p);
}

TEST(Parse, Malformed)
{
    EXPECT_THROW(parse_operator("q2 +"), std::invalid_argument);
    EXPECT_THROW(parse_operator("(ħ d/dx)*(d/dx)"), std::invalid_argument);
    EXPECT_THROW(parse_operator("q1"), std::invalid_argument);
    EXPECT_THROW(parse_diffpoly("y"), std::invalid_argument);
    EXPECT_THROW(parse_operator("1/0"), std::invalid_argument);
}
