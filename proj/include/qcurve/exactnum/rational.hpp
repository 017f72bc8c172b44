#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace qcurve {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

inline bool is_zero(const Rational &r) { return r.is_zero(); }

namespace detail {

// Dispatches to the free is_zero overload, found by ADL for ring types
// defined after this point; needed inside classes with an is_zero member.
template <typename T>
bool zero_value(const T &v)
{
    using qcurve::is_zero;
    return is_zero(v);
}

} // namespace detail

inline Rational inverse(const Rational &r)
{
    if (r.is_zero()) {
        throw std::domain_error("division by zero rational");
    }
    return Rational(1) / r;
}

inline Integer num(const Rational &r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational &r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational &r) { return den(r) == 1; }

inline Rational make_rational(long long p, long long q = 1) { return Rational(Integer(p), Integer(q)); }

// Human form: "3", "-1/2".
inline std::string to_string(const Rational &r) { return r.str(); }

// Wire form: always "p/q", "3" is written "3/1".
inline std::string to_wire(const Rational &r) { return num(r).str() + "/" + den(r).str(); }

// Accepts "p", "p/q", "-p/q" with optional surrounding blanks; no decimals.
inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
            s.remove_prefix(1);
        }
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
            s.remove_suffix(1);
        }
        return s;
    };
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (char c : s) {
            if (c < '0' || c > '9') {
                return false;
            }
        }
        return true;
    };
    text = trim(text);
    const auto slash = text.find('/');
    std::string_view p = trim(text.substr(0, slash));
    std::string_view q = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
    if (!is_int(p) || !is_int(q)) {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    std::string ps(p);
    if (ps.front() == '+') {
        ps.erase(0, 1);
    }
    Integer qi(std::string{q});
    if (qi == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(Integer(ps), qi);
}

inline Rational rpow(const Rational &base, int e)
{
    if (e < 0) {
        return rpow(inverse(base), -e);
    }
    Rational out(1);
    Rational b = base;
    while (e > 0) {
        if (e & 1) {
            out *= b;
        }
        b *= b;
        e >>= 1;
    }
    return out;
}

inline Rational factorial(int n)
{
    Rational out(1);
    for (int i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

// (2k-1)!! with the convention (-1)!! = 1.
inline Rational double_factorial_odd(int k)
{
    Rational out(1);
    for (int i = 2 * k - 1; i > 1; i -= 2) {
        out *= i;
    }
    return out;
}

// Exact square root of a nonnegative rational, if it exists.
inline bool rational_sqrt(const Rational &r, Rational &out)
{
    if (r < 0) {
        return false;
    }
    const Integer p = num(r);
    const Integer q = den(r);
    const Integer sp = boost::multiprecision::sqrt(p);
    const Integer sq = boost::multiprecision::sqrt(q);
    if (sp * sp != p || sq * sq != q) {
        return false;
    }
    out = Rational(sp, sq);
    return true;
}

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

} // namespace qcurve
