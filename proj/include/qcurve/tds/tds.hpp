#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qcurve/diffalg/diffpoly.hpp"
#include "qcurve/diffalg/operator.hpp"
#include "qcurve/errors.hpp"
#include "qcurve/exactnum/poly.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/exactnum/rational_function.hpp"
#include "qcurve/tds/matrix.hpp"

namespace qcurve {

using RadicalMatrix = Matrix<RadicalScalar>;
using HiggsMatrix = Matrix<DiffPoly>;

// s_i = i(r - i), 1-based.
inline long s_value(int r, int i) { return static_cast<long>(i) * (r - i); }

// Diagonal entry of H in 1-based row i.
inline int h_weight(int r, int i) { return r - 2 * i + 1; }

struct TdsTriple {
    int rank = 0;
    RadicalMatrix x_minus;
    RadicalMatrix x_plus;
    RadicalMatrix h;
};

inline void require_rank(int r)
{
    if (r < 2) {
        throw std::invalid_argument("rank must be at least 2");
    }
}

inline TdsTriple tds_generators(int r)
{
    require_rank(r);
    const auto n = static_cast<std::size_t>(r);
    TdsTriple t{r, RadicalMatrix(n, n), RadicalMatrix(n, n), RadicalMatrix(n, n)};
    for (int i = 1; i <= r; ++i) {
        t.h(i - 1, i - 1) = RadicalScalar(h_weight(r, i));
    }
    for (int i = 1; i < r; ++i) {
        const auto root = RadicalScalar::sqrt_of(static_cast<std::uint64_t>(s_value(r, i)));
        t.x_plus(i - 1, i) = root;
        t.x_minus(i, i - 1) = root;
    }
    return t;
}

// Entry (i, i+l) = sqrt(s_i s_{i+1} ... s_{i+l-1}).
inline RadicalMatrix xplus_power(int r, int l)
{
    require_rank(r);
    if (l < 0 || l > r - 1) {
        throw std::invalid_argument("power of X_+ outside [0, r-1]");
    }
    const auto n = static_cast<std::size_t>(r);
    RadicalMatrix out(n, n);
    for (int i = 1; i + l <= r; ++i) {
        Rational prod(1);
        for (int k = i; k < i + l; ++k) {
            prod *= s_value(r, k);
        }
        out(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i - 1 + l)) = RadicalScalar::sqrt_of(prod);
    }
    return out;
}

inline HiggsMatrix to_diff_matrix(const RadicalMatrix &m)
{
    return m.map([](const RadicalScalar &c) { return DiffPoly(c); });
}

// X_- + sum_l q_l X_+^(l-1)
inline HiggsMatrix higgs_field(int r)
{
    require_rank(r);
    HiggsMatrix out = to_diff_matrix(tds_generators(r).x_minus);
    for (int l = 2; l <= r; ++l) {
        const DiffPoly q = DiffPoly::var(l);
        out = out + to_diff_matrix(xplus_power(r, l - 1)).scaled(q);
    }
    return out;
}

namespace detail {

inline Matrix<YPoly> shifted_by_y(const HiggsMatrix &m)
{
    Matrix<YPoly> a = m.map([](const DiffPoly &c) { return YPoly(c); });
    for (std::size_t i = 0; i < m.rows(); ++i) {
        a(i, i) = a(i, i) + YPoly::variable();
    }
    return a;
}

inline void require_rational(const YPoly &p)
{
    for (const auto &c : p.coefficients()) {
        if (!c.is_rational()) {
            throw InternalInconsistency("characteristic polynomial kept a radical coefficient");
        }
    }
}

} // namespace detail

// det(y I + m) by fraction-free Bareiss elimination. Every pivot is a leading
// principal minor of y I + m, hence monic in y, so the divisions are exact
// over the differential ring.
inline YPoly char_poly(const HiggsMatrix &m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("char_poly needs a nonempty square matrix");
    }
    Matrix<YPoly> a = detail::shifted_by_y(m);
    const std::size_t n = m.rows();
    YPoly prev(DiffPoly(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = exact_quotient_monic(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
            }
        }
        prev = a(k, k);
    }
    YPoly out = a(n - 1, n - 1);
    detail::require_rational(out);
    return out;
}

// Leibniz permutation expansion; independent check for char_poly.
inline YPoly char_poly_expansion(const HiggsMatrix &m)
{
    Matrix<YPoly> a = detail::shifted_by_y(m);
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    YPoly out;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                inversions += perm[i] > perm[j] ? 1 : 0;
            }
        }
        YPoly term(DiffPoly(inversions % 2 == 0 ? 1 : -1));
        for (std::size_t i = 0; i < n && !term.is_zero(); ++i) {
            term = term * a(i, perm[i]);
        }
        out += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline RadicalScalar inverse_scalar(const RadicalScalar &a) { return inverse(a); }
inline Rational inverse_scalar(const Rational &a) { return inverse(a); }

template <typename F>
RationalFunction<F> inverse_scalar(const RationalFunction<F> &a)
{
    return RationalFunction<F>(F(1)) / a;
}

template <typename F>
F int_power(const F &x, int e)
{
    if (e < 0) {
        return int_power(inverse_scalar(x), -e);
    }
    F out(1);
    for (int i = 0; i < e; ++i) {
        out = out * x;
    }
    return out;
}

// diag(xi^(r-2i+1)) * sum_{n<r} (hbar sigma / xi)^n X_+^n / n!, a matrix of
// polynomials in hbar. F must contain the radicals of X_+ (RadicalScalar or
// rational functions over it).
template <typename F>
Matrix<Poly<F>> oper_transition(int r, const F &xi, const F &sigma)
{
    require_rank(r);
    if (xi == F(0)) {
        throw DomainError("transition function xi must be invertible");
    }
    const F a = sigma * inverse_scalar(xi);
    const auto n = static_cast<std::size_t>(r);
    Matrix<Poly<F>> series(n, n);
    F an(1);
    Rational nfact(1);
    for (int k = 0; k < r; ++k) {
        if (k > 0) {
            an = an * a;
            nfact *= k;
        }
        const RadicalMatrix xk = xplus_power(r, k);
        const F scale = an * F(RadicalScalar(inverse(nfact)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!xk(i, j).is_zero()) {
                    series(i, j) = series(i, j) + Poly<F>::monomial(scale * F(xk(i, j)), k);
                }
            }
        }
    }
    Matrix<Poly<F>> diag(n, n);
    for (int i = 1; i <= r; ++i) {
        diag(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i - 1)) = Poly<F>(int_power(xi, h_weight(r, i)));
    }
    return diag * series;
}

// Laurent polynomial in s = hbar^(1/2): exponent (in units of s) -> coefficient.
class HalfHbarLaurent {
public:
    HalfHbarLaurent() = default;
    HalfHbarLaurent(int c) : HalfHbarLaurent(RadicalScalar(c)) {}
    HalfHbarLaurent(const RadicalScalar &c)
    {
        if (!c.is_zero()) {
            terms_.emplace(0, c);
        }
    }

    static HalfHbarLaurent s_power(int k, const RadicalScalar &c = RadicalScalar(1))
    {
        HalfHbarLaurent out;
        if (!c.is_zero()) {
            out.terms_.emplace(k, c);
        }
        return out;
    }

    friend HalfHbarLaurent operator+(const HalfHbarLaurent &a, const HalfHbarLaurent &b)
    {
        HalfHbarLaurent out = a;
        for (const auto &[k, c] : b.terms_) {
            out.add(k, c);
        }
        return out;
    }

    friend HalfHbarLaurent operator-(const HalfHbarLaurent &a, const HalfHbarLaurent &b)
    {
        HalfHbarLaurent out = a;
        for (const auto &[k, c] : b.terms_) {
            out.add(k, -c);
        }
        return out;
    }

    friend HalfHbarLaurent operator*(const HalfHbarLaurent &a, const HalfHbarLaurent &b)
    {
        HalfHbarLaurent out;
        for (const auto &[k1, c1] : a.terms_) {
            for (const auto &[k2, c2] : b.terms_) {
                out.add(k1 + k2, c1 * c2);
            }
        }
        return out;
    }

    friend bool operator==(const HalfHbarLaurent &a, const HalfHbarLaurent &b) { return a.terms_ == b.terms_; }

private:
    void add(int k, const RadicalScalar &c)
    {
        auto &slot = terms_[k];
        slot += c;
        if (slot.is_zero()) {
            terms_.erase(k);
        }
    }

    std::map<int, RadicalScalar> terms_;
};

// hbar^(-H/2) X_- hbar^(H/2) = hbar X_- and hbar^(-H/2) X_+^l hbar^(H/2) = hbar^(-l) X_+^l
// for l = 1..r-1, as exact identities over Q[s, 1/s] with s^2 = hbar.
inline bool gauge_scaling_check(int r)
{
    require_rank(r);
    using M = Matrix<HalfHbarLaurent>;
    const auto n = static_cast<std::size_t>(r);
    M g(n, n);
    M g_inv(n, n);
    for (int i = 1; i <= r; ++i) {
        g(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i - 1)) = HalfHbarLaurent::s_power(-h_weight(r, i));
        g_inv(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i - 1)) =
            HalfHbarLaurent::s_power(h_weight(r, i));
    }
    auto lift = [](const RadicalMatrix &m) { return m.map([](const RadicalScalar &c) { return HalfHbarLaurent(c); }); };
    if (!(g * g_inv == M::identity(n))) {
        return false;
    }
    const M xm = lift(tds_generators(r).x_minus);
    if (!(g * xm * g_inv == xm.scaled(HalfHbarLaurent::s_power(2)))) {
        return false;
    }
    for (int l = 1; l < r; ++l) {
        const M xp = lift(xplus_power(r, l));
        if (!(g * xp * g_inv == xp.scaled(HalfHbarLaurent::s_power(-2 * l)))) {
            return false;
        }
    }
    return true;
}

} // namespace qcurve
