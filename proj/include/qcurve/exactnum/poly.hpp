#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

// Dense univariate polynomial over a commutative ring R. The ring needs a
// zero default, construction from int, + - *, == and a free is_zero(R).
// Field-only operations (divmod, gcd) additionally use a free inverse(R).
template <typename R>
class Poly {
public:
    Poly() = default;
    Poly(const R &c)
    {
        if (!detail::zero_value(c)) {
            coeffs_.push_back(c);
        }
    }
    explicit Poly(std::vector<R> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Poly monomial(const R &c, int degree)
    {
        if (degree < 0) {
            throw std::invalid_argument("Poly::monomial: negative degree");
        }
        std::vector<R> v(static_cast<std::size_t>(degree) + 1);
        v.back() = c;
        return Poly(std::move(v));
    }

    static Poly variable() { return monomial(R(1), 1); }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    R coeff(int i) const
    {
        if (i < 0 || i > degree()) {
            return R{};
        }
        return coeffs_[static_cast<std::size_t>(i)];
    }
    R operator[](int i) const { return coeff(i); }

    const R &leading() const
    {
        if (coeffs_.empty()) {
            throw std::domain_error("leading coefficient of zero polynomial");
        }
        return coeffs_.back();
    }

    const std::vector<R> &coefficients() const { return coeffs_; }

    // Lowest power with a nonzero coefficient; -1 for zero.
    int valuation() const
    {
        for (int i = 0; i <= degree(); ++i) {
            if (!detail::zero_value(coeffs_[static_cast<std::size_t>(i)])) {
                return i;
            }
        }
        return -1;
    }

    Poly operator-() const
    {
        Poly out = *this;
        for (auto &c : out.coeffs_) {
            c = R(0) - c;
        }
        return out;
    }

    Poly &operator+=(const Poly &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] = coeffs_[i] + o.coeffs_[i];
        }
        trim();
        return *this;
    }

    Poly &operator-=(const Poly &o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] = coeffs_[i] - o.coeffs_[i];
        }
        trim();
        return *this;
    }

    Poly &operator*=(const Poly &o)
    {
        *this = *this * o;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }

    friend Poly operator*(const Poly &a, const Poly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<R> v(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (detail::zero_value(a.coeffs_[i])) {
                continue;
            }
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return Poly(std::move(v));
    }

    Poly scaled(const R &c) const
    {
        std::vector<R> v = coeffs_;
        for (auto &x : v) {
            x = c * x;
        }
        return Poly(std::move(v));
    }

    friend bool operator==(const Poly &a, const Poly &b) { return a.coeffs_ == b.coeffs_; }

    Poly derivative() const
    {
        if (coeffs_.size() <= 1) {
            return {};
        }
        std::vector<R> v(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            v[i - 1] = R(static_cast<int>(i)) * coeffs_[i];
        }
        return Poly(std::move(v));
    }

    // Multiply by var^k.
    Poly shifted(int k) const
    {
        if (is_zero() || k == 0) {
            return *this;
        }
        if (k < 0) {
            return divided_by_var_power(-k);
        }
        std::vector<R> v(static_cast<std::size_t>(k));
        v.insert(v.end(), coeffs_.begin(), coeffs_.end());
        return Poly(std::move(v));
    }

    bool divisible_by_var_power(int k) const
    {
        for (int i = 0; i < k && i <= degree(); ++i) {
            if (!detail::zero_value(coeffs_[static_cast<std::size_t>(i)])) {
                return false;
            }
        }
        return true;
    }

    Poly divided_by_var_power(int k) const
    {
        if (!divisible_by_var_power(k)) {
            throw InternalInconsistency("polynomial not divisible by the requested power of its variable");
        }
        if (k >= static_cast<int>(coeffs_.size())) {
            return {};
        }
        return Poly(std::vector<R>(coeffs_.begin() + k, coeffs_.end()));
    }

    // Horner evaluation in any ring V that R multiplies into.
    template <typename V>
    V evaluate(const V &at) const
    {
        V out{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            out = out * at + V(*it);
        }
        return out;
    }

    template <typename F>
    auto map(F &&f) const -> Poly<decltype(f(std::declval<const R &>()))>
    {
        using S = decltype(f(std::declval<const R &>()));
        std::vector<S> v;
        v.reserve(coeffs_.size());
        for (const auto &c : coeffs_) {
            v.push_back(f(c));
        }
        return Poly<S>(std::move(v));
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && detail::zero_value(coeffs_.back())) {
            coeffs_.pop_back();
        }
    }

    std::vector<R> coeffs_;
};

template <typename R>
bool detail::zero_value(const Poly<R> &p)
{
    return p.is_zero();
}

template <typename R>
struct DivMod {
    Poly<R> quotient;
    Poly<R> remainder;
};

// Long division by a monic divisor; valid over any commutative ring.
template <typename R>
DivMod<R> divmod_monic(const Poly<R> &a, const Poly<R> &b)
{
    if (b.is_zero() || !(b.leading() == R(1))) {
        throw std::invalid_argument("divmod_monic: divisor must be monic");
    }
    std::vector<R> rem = a.coefficients();
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) {
        return {Poly<R>{}, a};
    }
    std::vector<R> quot(static_cast<std::size_t>(da - db) + 1);
    for (int i = da; i >= db; --i) {
        const R c = rem[static_cast<std::size_t>(i)];
        if (detail::zero_value(c)) {
            continue;
        }
        quot[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j) {
            auto &slot = rem[static_cast<std::size_t>(i - db + j)];
            slot = slot - c * b.coeff(j);
        }
    }
    return {Poly<R>(std::move(quot)), Poly<R>(std::move(rem))};
}

template <typename R>
Poly<R> exact_quotient_monic(const Poly<R> &a, const Poly<R> &b)
{
    auto qr = divmod_monic(a, b);
    if (!qr.remainder.is_zero()) {
        throw InternalInconsistency("exact division by monic polynomial left a nonzero remainder");
    }
    return std::move(qr.quotient);
}

template <typename F>
Poly<F> make_monic(const Poly<F> &p)
{
    if (p.is_zero()) {
        return p;
    }
    return p.scaled(inverse(p.leading()));
}

// Division over a field.
template <typename F>
DivMod<F> divmod(const Poly<F> &a, const Poly<F> &b)
{
    if (b.is_zero()) {
        throw std::domain_error("polynomial division by zero");
    }
    const F lc_inv = inverse(b.leading());
    auto qr = divmod_monic(a.scaled(lc_inv), b.scaled(lc_inv));
    // a*lc_inv = q * b*lc_inv + r*lc_inv  =>  a = q*b + r
    return {std::move(qr.quotient), qr.remainder.scaled(b.leading())};
}

// Monic Euclidean gcd over a field.
template <typename F>
Poly<F> gcd(Poly<F> a, Poly<F> b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

// Polynomial in hbar over the radical field.
using HPoly = Poly<RadicalScalar>;

inline HPoly hbar_power(int k, const RadicalScalar &c = RadicalScalar(1)) { return HPoly::monomial(c, k); }

} // namespace qcurve
