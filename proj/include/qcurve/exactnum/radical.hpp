#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

struct RadicandSplit {
    std::uint64_t square_root_part;
    std::uint64_t squarefree_part;

    bool operator==(const RadicandSplit &) const = default;
};

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) {
                n /= p;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

// n = square_root_part^2 * squarefree_part.
inline RadicandSplit normalize_radicand(std::uint64_t n)
{
    if (n == 0) {
        throw std::invalid_argument("normalize_radicand: radicand must be positive");
    }
    std::uint64_t root = 1;
    std::uint64_t free = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) {
            root *= p;
        }
        if (e % 2 == 1) {
            free *= p;
        }
    }
    free *= n;
    return {root, free};
}

inline bool is_squarefree(std::uint64_t n) { return n != 0 && normalize_radicand(n).square_root_part == 1; }

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("radicand product exceeds 64 bits");
    }
    return out;
}

} // namespace detail

// Element of Q[sqrt(m) : m squarefree], stored as radicand -> coefficient.
// Radicand 1 carries the rational part; zero coefficients are never stored.
class RadicalScalar {
public:
    using TermMap = std::map<std::uint64_t, Rational>;

    RadicalScalar() = default;
    RadicalScalar(int v) : RadicalScalar(Rational(v)) {}
    RadicalScalar(long v) : RadicalScalar(Rational(v)) {}
    RadicalScalar(const Rational &v)
    {
        if (!v.is_zero()) {
            terms_.emplace(1, v);
        }
    }

    // c * sqrt(n) for any positive n; the radicand is normalized.
    static RadicalScalar term(const Rational &c, std::uint64_t n)
    {
        RadicalScalar out;
        if (c.is_zero()) {
            return out;
        }
        const auto [root, free] = normalize_radicand(n);
        out.terms_.emplace(free, c * Rational(root));
        return out;
    }

    static RadicalScalar sqrt_of(std::uint64_t n) { return term(Rational(1), n); }

    // sqrt(p/q) = sqrt(p*q)/q for p/q >= 0.
    static RadicalScalar sqrt_of(const Rational &r)
    {
        if (r < 0) {
            throw std::domain_error("square root of a negative rational is outside the radical ring");
        }
        if (r.is_zero()) {
            return {};
        }
        const Integer pq = num(r) * den(r);
        if (pq > Integer(std::numeric_limits<std::uint64_t>::max())) {
            throw std::overflow_error("radicand exceeds 64 bits");
        }
        return term(Rational(Integer(1), den(r)), pq.convert_to<std::uint64_t>());
    }

    const TermMap &terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1); }

    Rational rational_part() const
    {
        const auto it = terms_.find(1);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational as_rational() const
    {
        if (!is_rational()) {
            throw std::domain_error("radical scalar is not rational");
        }
        return rational_part();
    }

    // Image under sqrt(p) -> -sqrt(p) for a prime p.
    RadicalScalar conjugate(std::uint64_t prime) const
    {
        RadicalScalar out = *this;
        for (auto &[m, c] : out.terms_) {
            if (m % prime == 0) {
                c = -c;
            }
        }
        return out;
    }

    RadicalScalar operator-() const
    {
        RadicalScalar out = *this;
        for (auto &kv : out.terms_) {
            kv.second = -kv.second;
        }
        return out;
    }

    RadicalScalar &operator+=(const RadicalScalar &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, c);
        }
        return *this;
    }

    RadicalScalar &operator-=(const RadicalScalar &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, -c);
        }
        return *this;
    }

    RadicalScalar &operator*=(const RadicalScalar &o)
    {
        *this = *this * o;
        return *this;
    }

    RadicalScalar &operator/=(const RadicalScalar &o);

    friend RadicalScalar operator+(RadicalScalar a, const RadicalScalar &b) { return a += b; }
    friend RadicalScalar operator-(RadicalScalar a, const RadicalScalar &b) { return a -= b; }

    // sqrt(m) sqrt(m') = g sqrt((m/g)(m'/g)) with g = gcd(m, m').
    friend RadicalScalar operator*(const RadicalScalar &a, const RadicalScalar &b)
    {
        RadicalScalar out;
        for (const auto &[m1, c1] : a.terms_) {
            for (const auto &[m2, c2] : b.terms_) {
                const std::uint64_t g = std::gcd(m1, m2);
                const std::uint64_t m = detail::checked_mul(m1 / g, m2 / g);
                out.add_term(m, c1 * c2 * Rational(g));
            }
        }
        return out;
    }

    friend RadicalScalar operator/(const RadicalScalar &a, const RadicalScalar &b);

    friend bool operator==(const RadicalScalar &a, const RadicalScalar &b) { return a.terms_ == b.terms_; }

    double to_double() const
    {
        double out = 0.0;
        for (const auto &[m, c] : terms_) {
            out += qcurve::to_double(c) * std::sqrt(static_cast<double>(m));
        }
        return out;
    }

private:
    void add_term(std::uint64_t m, const Rational &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    TermMap terms_;
};

inline bool is_zero(const RadicalScalar &a) { return a.is_zero(); }

// Rationalizes by multiplying through with conjugates, one prime at a time:
// a * conj_p(a) is free of every radicand divisible by p.
inline RadicalScalar inverse(const RadicalScalar &a)
{
    if (a.is_zero()) {
        throw std::domain_error("inverse of zero radical scalar");
    }
    RadicalScalar numer(1);
    RadicalScalar denom = a;
    while (!denom.is_rational()) {
        std::uint64_t radicand = 0;
        for (const auto &kv : denom.terms()) {
            if (kv.first != 1) {
                radicand = kv.first;
                break;
            }
        }
        const std::uint64_t p = prime_factors(radicand).front();
        const RadicalScalar conj = denom.conjugate(p);
        numer *= conj;
        denom *= conj;
    }
    const Rational d = denom.rational_part();
    if (d.is_zero()) {
        throw std::domain_error("radical scalar rationalizes to zero; not invertible");
    }
    return numer * RadicalScalar(Rational(1) / d);
}

inline RadicalScalar operator/(const RadicalScalar &a, const RadicalScalar &b) { return a * inverse(b); }

inline RadicalScalar &RadicalScalar::operator/=(const RadicalScalar &o)
{
    *this = *this / o;
    return *this;
}

// "0", "-3/2", "sqrt(2)", "-2*sqrt(3)", "1 + sqrt(2)".
inline std::string to_string(const RadicalScalar &a)
{
    if (a.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : a.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (m == 1) {
            os << to_string(mag);
        } else {
            if (mag != 1) {
                os << to_string(mag) << "*";
            }
            os << "sqrt(" << m << ")";
        }
    }
    return os.str();
}

} // namespace qcurve
