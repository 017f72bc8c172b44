#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcurve/diffalg/diffpoly.hpp"
#include "qcurve/diffalg/operator.hpp"
#include "qcurve/errors.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/tds/tds.hpp"

namespace qcurve {

// psi_k = sum_j rows[k][j] hbar^j psi^(j), k = 0..r-1.
struct EliminationTable {
    int rank = 0;
    std::vector<std::vector<DiffPoly>> rows;

    const DiffPoly &coefficient(int k, int j) const
    {
        return rows.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(j));
    }
};

namespace detail {

// sqrt(s_k s_{k-1} ... s_{k-l+2}), the coefficient of q_l psi_{k-l+1} in the
// flat-section equation for row k.
inline RadicalScalar elimination_weight(int r, int k, int l)
{
    Rational prod(1);
    for (int i = k; i >= k - l + 2; --i) {
        prod *= s_value(r, i);
    }
    return RadicalScalar::sqrt_of(prod);
}

// hbar psi_k' + sum_{l=2}^{k+1} weight * q_l psi_{k-l+1}, in the hbar^j psi^(j)
// basis; length k+2.
inline std::vector<DiffPoly> flat_section_combination(int r, const std::vector<std::vector<DiffPoly>> &rows, int k)
{
    const auto &row = rows[static_cast<std::size_t>(k)];
    std::vector<DiffPoly> out(static_cast<std::size_t>(k) + 2);
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] += row[j].derive().hbar_shifted(1);
        out[j + 1] += row[j];
    }
    for (int l = 2; l <= k + 1; ++l) {
        const DiffPoly factor = DiffPoly::var(l).scaled(elimination_weight(r, k, l));
        const auto &lower = rows[static_cast<std::size_t>(k - l + 1)];
        for (std::size_t j = 0; j < lower.size(); ++j) {
            out[j] += factor * lower[j];
        }
    }
    return out;
}

inline RadicalScalar diagonal_entry(int r, int k)
{
    Rational prod(1);
    for (int i = 1; i <= k; ++i) {
        prod *= s_value(r, i);
    }
    const RadicalScalar root_inv = inverse(RadicalScalar::sqrt_of(prod));
    return k % 2 == 0 ? root_inv : -root_inv;
}

} // namespace detail

inline void check_elimination_table(const EliminationTable &t)
{
    const int r = t.rank;
    if (!(t.coefficient(0, 0) == DiffPoly(1))) {
        throw InternalInconsistency("elimination row 0 is not psi");
    }
    for (int k = 1; k < r; ++k) {
        if (!(t.coefficient(k, k) == DiffPoly(detail::diagonal_entry(r, k)))) {
            throw InternalInconsistency("elimination diagonal differs from (-1)^k/sqrt(s_1...s_k) at row " +
                                        std::to_string(k));
        }
        if (!t.coefficient(k, k - 1).is_zero()) {
            throw InternalInconsistency("first upper diagonal of the elimination table is nonzero at row " +
                                        std::to_string(k));
        }
    }
}

// Solves sqrt(s_{k+1}) psi_{k+1} + hbar psi_k' + sum_l (...) q_l psi_{k-l+1} = 0
// for psi_{k+1}, row by row.
inline EliminationTable flat_section_elimination(int r)
{
    require_rank(r);
    EliminationTable t{r, {{DiffPoly(1)}}};
    for (int k = 0; k + 1 < r; ++k) {
        const RadicalScalar scale = -inverse(RadicalScalar::sqrt_of(static_cast<std::uint64_t>(s_value(r, k + 1))));
        std::vector<DiffPoly> next = detail::flat_section_combination(r, t.rows, k);
        for (auto &c : next) {
            c = c.scaled(scale);
        }
        t.rows.push_back(std::move(next));
    }
    check_elimination_table(t);
    return t;
}

// Monic order-r operator sum_j c_j (d/dx)^j from the last flat-section equation.
inline ScalarOperator quantum_curve(int r)
{
    const EliminationTable t = flat_section_elimination(r);
    const std::vector<DiffPoly> e = detail::flat_section_combination(r, t.rows, r - 1);
    const RadicalScalar lead_inv = inverse(detail::diagonal_entry(r, r - 1));
    if (!(e.back() == DiffPoly(detail::diagonal_entry(r, r - 1)))) {
        throw InternalInconsistency("unexpected leading coefficient of the order-r equation");
    }
    ScalarOperator op;
    op.order = r;
    op.coefficients.resize(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) {
        DiffPoly c = e[static_cast<std::size_t>(j)].scaled(lead_inv);
        if (!c.is_rational()) {
            throw InternalInconsistency("radical residue in the coefficient of (d/dx)^" + std::to_string(j));
        }
        op.coefficients[static_cast<std::size_t>(j)] = c.hbar_shifted(j);
    }
    if (!op.coefficient(r - 1).is_zero()) {
        throw InternalInconsistency("quantum curve is not traceless");
    }
    for (int j = 0; j <= r; ++j) {
        if (!op.coefficient(j).divisible_by_hbar(j)) {
            throw InternalInconsistency("coefficient of (d/dx)^" + std::to_string(j) + " is not divisible by hbar^" +
                                        std::to_string(j));
        }
    }
    return op;
}

// omega_i = -hbar^(-(r-i)) c_(r-i), i = 2..r; index 0 of the result is omega_2.
inline std::vector<DiffPoly> extract_omegas(const ScalarOperator &p)
{
    const int r = p.order;
    std::vector<DiffPoly> out;
    for (int i = 2; i <= r; ++i) {
        const DiffPoly &c = p.coefficient(r - i);
        if (!c.divisible_by_hbar(r - i)) {
            throw InternalInconsistency("omega_" + std::to_string(i) + " leaves a remainder on division by hbar");
        }
        out.push_back(-c.hbar_shifted(-(r - i)));
    }
    return out;
}

// y^r - sum_i omega_i(q, 0) y^(r-i)
inline YPoly semiclassical_limit(const ScalarOperator &p)
{
    const int r = p.order;
    const std::vector<DiffPoly> omegas = extract_omegas(p);
    if (!(p.coefficient(r) == DiffPoly::hbar(r))) {
        throw InternalInconsistency("operator is not monic in (hbar d/dx)");
    }
    YPoly out = YPoly::monomial(DiffPoly(1), r);
    for (int i = 2; i <= r; ++i) {
        out -= YPoly::monomial(omegas[static_cast<std::size_t>(i - 2)].at_hbar_zero(), r - i);
    }
    return out;
}

// P(lambda hbar; lambda^l q_l) == lambda^r P, coefficient by coefficient.
inline bool is_equivariant(const ScalarOperator &p)
{
    for (const auto &c : p.coefficients) {
        if (c.is_zero()) {
            continue;
        }
        const auto parts = lambda_components(c);
        if (parts.size() != 1 || parts.begin()->first != p.order || !(parts.begin()->second == c)) {
            return false;
        }
    }
    return true;
}

// Formal adjoint: sum_j (-d/dx)^j o c_j.
inline ScalarOperator formal_adjoint(const ScalarOperator &p)
{
    ScalarOperator out{p.order, std::vector<DiffPoly>(static_cast<std::size_t>(p.order) + 1)};
    for (int j = 0; j <= p.order; ++j) {
        DiffPoly f = p.coefficient(j);
        Rational binom(1);
        for (int k = 0; k <= j; ++k) {
            if (k > 0) {
                f = f.derive();
                binom = binom * (j - k + 1) / k;
            }
            out.coefficients[static_cast<std::size_t>(j - k)] += f.scaled(RadicalScalar(j % 2 == 0 ? binom : -binom));
        }
    }
    return out;
}

// q_l -> (-1)^l q_l
inline DiffPoly odd_level_flip(const DiffPoly &p)
{
    DiffPoly out;
    for (const auto &[m, c] : p.terms()) {
        int sign = 1;
        for (const auto &v : m) {
            sign = v.level % 2 == 0 ? sign : -sign;
        }
        out += DiffPoly::term(m, c.scaled(RadicalScalar(sign)));
    }
    return out;
}

} // namespace qcurve
