#include <gtest/gtest.h>

#include "qcurve/diffalg/operator.hpp"
#include "qcurve/quantize/quantize.hpp"

using namespace qcurve;

namespace {

DiffPoly q(int l, int k = 0) { return DiffPoly::var(l, k); }

RadicalScalar inv_sqrt(long n) { return inverse(RadicalScalar::sqrt_of(static_cast<std::uint64_t>(n))); }

} // namespace

TEST(Elimination, LowRowsMatchClosedForms)
{
    for (int r = 4; r <= 6; ++r) {
        const auto t = flat_section_elimination(r);
        const long s1 = s_value(r, 1);
        const long s2 = s_value(r, 2);
        const long s3 = s_value(r, 3);
        // psi_1 = -(1/sqrt s1) hbar psi'
        EXPECT_EQ(t.coefficient(1, 1), DiffPoly(-inv_sqrt(s1)));
        EXPECT_TRUE(t.coefficient(1, 0).is_zero());
        // psi_2 = (hbar^2 psi'' - s1 q2 psi)/sqrt(s1 s2)
        const RadicalScalar n2 = inv_sqrt(s1 * s2);
        EXPECT_EQ(t.coefficient(2, 2), DiffPoly(n2));
        EXPECT_EQ(t.coefficient(2, 0), (DiffPoly(-s1) * q(2)).scaled(n2));
        // psi_3 = (-hbar^3 psi''' + hbar(s1+s2) q2 psi' + (hbar s1 q2' - s1 s2 q3) psi)/sqrt(s1 s2 s3)
        const RadicalScalar n3 = inv_sqrt(s1 * s2 * s3);
        EXPECT_EQ(t.coefficient(3, 3), DiffPoly(-n3));
        EXPECT_EQ(t.coefficient(3, 1), (DiffPoly(s1 + s2) * q(2)).scaled(n3));
        EXPECT_EQ(t.coefficient(3, 0), (DiffPoly(s1) * DiffPoly::hbar() * q(2, 1) - DiffPoly(s1 * s2) * q(3)).scaled(n3));
    }
}

TEST(QuantumCurve, PublishedOperators)
{
    EXPECT_EQ(quantum_curve(2), parse_operator("(ħ d/dx)^2 - q2"));
    EXPECT_EQ(render(quantum_curve(2)), "(ħ d/dx)^2 - q2");
    EXPECT_EQ(quantum_curve(3), parse_operator("(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'"));
    EXPECT_EQ(render(quantum_curve(3)), "(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'");
    EXPECT_EQ(quantum_curve(4), parse_operator("(ħ d/dx)^4 - 10*q2*(ħ d/dx)^2 + (24*q3 - 10*ħ*q2')*(ħ d/dx)"
                                               " - 36*q4 + 9*q2^2 + 3*ħ^2*q2'' - 12*ħ*q3'"))
        << "computed: " << render(quantum_curve(4));
}

TEST(QuantumCurve, RankFourComputed)
{
    EXPECT_EQ(render(quantum_curve(4)), "(ħ d/dx)^4 - 10*q2*(ħ d/dx)^2 + 24*q3*(ħ d/dx) - 10*ħ*q2'*(ħ d/dx)"
                                        " - 36*q4 + 9*q2^2 + 12*ħ*q3' - 3*ħ^2*q2''");
}

TEST(QuantumCurve, FormalAdjointSymmetry)
{
    for (int r = 2; r <= 6; ++r) {
        const auto op = quantum_curve(r);
        ScalarOperator expected = op;
        for (auto &c : expected.coefficients) {
            c = odd_level_flip(c).scaled(RadicalScalar(r % 2 == 0 ? 1 : -1));
        }
        EXPECT_EQ(formal_adjoint(op), expected) << r;
    }
}

TEST(QuantumCurve, RenderRoundTrip)
{
    for (int r = 2; r <= 6; ++r) {
        const auto op = quantum_curve(r);
        EXPECT_EQ(parse_operator(render(op)), op) << r;
    }
}

TEST(QuantumCurve, RankTwoHasNoDerivatives)
{
    EXPECT_EQ(quantum_curve(2).coefficient(0).max_derivative_order(), 0);
}

TEST(ExtractOmegas, Examples)
{
    const auto w2 = extract_omegas(quantum_curve(2));
    ASSERT_EQ(w2.size(), 1U);
    EXPECT_EQ(w2[0], q(2));
    const auto w3 = extract_omegas(quantum_curve(3));
    EXPECT_EQ(w3[0], DiffPoly(4) * q(2));
    EXPECT_EQ(w3[1], DiffPoly(-4) * q(3) + DiffPoly(2) * DiffPoly::hbar() * q(2, 1));
    EXPECT_EQ(extract_omegas(quantum_curve(4))[0], DiffPoly(10) * q(2));

    ScalarOperator bad{3, {DiffPoly(), DiffPoly::var(2), DiffPoly(), DiffPoly::hbar(3)}};
    EXPECT_THROW(extract_omegas(bad), InternalInconsistency);
}

TEST(SemiclassicalLimit, Examples)
{
    EXPECT_EQ(semiclassical_limit(quantum_curve(2)), parse_ypoly("y^2 - q2"));
    EXPECT_EQ(semiclassical_limit(quantum_curve(3)), parse_ypoly("y^3 - 4*q2*y + 4*q3"));
    EXPECT_EQ(semiclassical_limit(quantum_curve(5)), char_poly(higgs_field(5)));
}

TEST(SemiclassicalLimit, EqualsCharacteristicPolynomial)
{
    for (int r = 2; r <= 6; ++r) {
        EXPECT_EQ(semiclassical_limit(quantum_curve(r)), char_poly(higgs_field(r))) << r;
    }
}

TEST(SemiclassicalLimit, NoDerivativesSurvive)
{
    for (int r = 2; r <= 6; ++r) {
        for (const auto &w : extract_omegas(quantum_curve(r))) {
            EXPECT_EQ(w.at_hbar_zero().max_derivative_order(), 0) << r;
        }
    }
}

TEST(Equivariance, WeightedScaling)
{
    for (int r = 2; r <= 5; ++r) {
        const auto op = quantum_curve(r);
        EXPECT_TRUE(is_equivariant(op)) << r;
        const auto omegas = extract_omegas(op);
        for (int i = 2; i <= r; ++i) {
            EXPECT_EQ(weighted_degree(omegas[static_cast<std::size_t>(i - 2)]), i);
        }
    }
    ScalarOperator broken = quantum_curve(3);
    broken.coefficients[0] += DiffPoly::var(2);
    EXPECT_FALSE(is_equivariant(broken));
}
