#pragma once

#include <sstream>
#include <string>
#include <utility>

#include "qcurve/exactnum/poly.hpp"

namespace qcurve {

// Univariate rational function over a field, kept reduced with a monic
// denominator so that equality is structural.
template <typename F>
class RationalFunction {
public:
    using PolyT = Poly<F>;

    RationalFunction() : den_(F(1)) {}
    RationalFunction(int c) : num_(F(c)), den_(F(1)) {}
    RationalFunction(const F &c) : num_(c), den_(F(1)) {}
    RationalFunction(PolyT numerator) : num_(std::move(numerator)), den_(F(1)) {}
    RationalFunction(PolyT numerator, PolyT denominator) : num_(std::move(numerator)), den_(std::move(denominator))
    {
        reduce();
    }

    static RationalFunction variable() { return RationalFunction(PolyT::variable()); }

    const PolyT &numerator() const { return num_; }
    const PolyT &denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    RationalFunction operator-() const { return RationalFunction(-num_, den_, reduced_tag{}); }

    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.den_ == b.den_) {
            return RationalFunction(a.num_ + b.num_, a.den_);
        }
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b)
    {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b)
    {
        if (b.is_zero()) {
            throw std::domain_error("rational function division by zero");
        }
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFunction &operator+=(const RationalFunction &o) { return *this = *this + o; }
    RationalFunction &operator-=(const RationalFunction &o) { return *this = *this - o; }
    RationalFunction &operator*=(const RationalFunction &o) { return *this = *this * o; }

    friend bool operator==(const RationalFunction &a, const RationalFunction &b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    RationalFunction derivative() const
    {
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RationalFunction pow(int e) const
    {
        if (e < 0) {
            return RationalFunction(F(1)) / pow(-e);
        }
        RationalFunction out(F(1));
        for (int i = 0; i < e; ++i) {
            out = out * *this;
        }
        return out;
    }

private:
    struct reduced_tag {};
    RationalFunction(PolyT n, PolyT d, reduced_tag) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce()
    {
        if (den_.is_zero()) {
            throw std::domain_error("rational function with zero denominator");
        }
        if (num_.is_zero()) {
            den_ = PolyT(F(1));
            return;
        }
        const PolyT g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = divmod(num_, g).quotient;
            den_ = divmod(den_, g).quotient;
        }
        const F lc = den_.leading();
        if (!(lc == F(1))) {
            const F inv = inverse(lc);
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    PolyT num_;
    PolyT den_;
};

template <typename F>
bool is_zero(const RationalFunction<F> &r)
{
    return r.is_zero();
}

// Plain-text polynomial in a named variable: "x^2 - 3*x + 1/2".
template <typename F>
std::string render_poly(const Poly<F> &p, const std::string &var)
{
    if (p.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const F c = p.coeff(i);
        if (is_zero(c)) {
            continue;
        }
        std::string cs = to_string(c);
        const bool compound = cs.find(' ') != std::string::npos;
        bool negative = !compound && cs.front() == '-';
        if (negative) {
            cs.erase(0, 1);
        }
        if (compound) {
            cs = "(" + cs + ")";
        }
        if (first) {
            os << (negative ? "-" : "");
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            os << cs;
            continue;
        }
        if (cs != "1") {
            os << cs << "*";
        }
        os << var;
        if (i > 1) {
            os << "^" << i;
        }
    }
    return os.str();
}

template <typename F>
std::string render(const RationalFunction<F> &r, const std::string &var)
{
    const std::string n = render_poly(r.numerator(), var);
    if (r.is_polynomial()) {
        return n;
    }
    const bool n_simple = r.numerator().degree() <= 0 ||
                          (r.numerator().coefficients().size() > 0 && n.find(' ') == std::string::npos);
    const bool d_simple = render_poly(r.denominator(), var).find(' ') == std::string::npos &&
                          render_poly(r.denominator(), var).find('*') == std::string::npos;
    return (n_simple ? n : "(" + n + ")") + "/" +
           (d_simple ? render_poly(r.denominator(), var) : "(" + render_poly(r.denominator(), var) + ")");
}

} // namespace qcurve
