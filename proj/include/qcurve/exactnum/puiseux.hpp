#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/radical.hpp"
#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

inline Rational scalar_sqrt(const Rational &c)
{
    Rational out;
    if (!rational_sqrt(c, out)) {
        throw DomainError("leading coefficient " + to_string(c) + " is not a rational square");
    }
    return out;
}

inline RadicalScalar scalar_sqrt(const RadicalScalar &c)
{
    if (!c.is_rational()) {
        throw DomainError("square root of an irrational leading coefficient needs a nested radical");
    }
    if (c.rational_part() < 0) {
        throw DomainError("square root of a negative leading coefficient");
    }
    return RadicalScalar::sqrt_of(c.rational_part());
}

inline double scalar_to_double(const Rational &c) { return to_double(c); }
inline double scalar_to_double(const RadicalScalar &c) { return c.to_double(); }

// Series in x^(1/d) with an optional log x term. Exponents are stored as
// rationals; the branch denominator d is the lcm of their denominators.
// truncation() = T means every coefficient at exponent >= T is unknown;
// nullopt means the series is exact (a finite sum).
template <typename C>
class PuiseuxSeries {
public:
    using TermMap = std::map<Rational, C>;

    PuiseuxSeries() = default;
    PuiseuxSeries(const C &c)
    {
        if (!detail::zero_value(c)) {
            terms_.emplace(Rational(0), c);
        }
    }

    static PuiseuxSeries monomial(const C &c, const Rational &exponent)
    {
        PuiseuxSeries out;
        if (!detail::zero_value(c)) {
            out.terms_.emplace(exponent, c);
        }
        return out;
    }

    static PuiseuxSeries log_term(const C &c)
    {
        PuiseuxSeries out;
        out.log_ = c;
        return out;
    }

    const TermMap &terms() const { return terms_; }
    const C &log_coefficient() const { return log_; }
    const std::optional<Rational> &truncation() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }

    C coefficient(const Rational &e) const
    {
        const auto it = terms_.find(e);
        return it == terms_.end() ? C{} : it->second;
    }

    int branch_denominator() const
    {
        Integer d = 1;
        for (const auto &kv : terms_) {
            d = boost::multiprecision::lcm(d, den(kv.first));
        }
        if (trunc_) {
            d = boost::multiprecision::lcm(d, den(*trunc_));
        }
        return d.convert_to<int>();
    }

    // No known nonzero coefficient and no log term.
    bool is_zero() const { return terms_.empty() && detail::zero_value(log_); }

    // Lowest exponent carrying a nonzero coefficient, or nullopt.
    std::optional<Rational> valuation() const
    {
        if (terms_.empty()) {
            return std::nullopt;
        }
        return terms_.begin()->first;
    }

    PuiseuxSeries truncated(const Rational &order) const
    {
        PuiseuxSeries out = *this;
        out.set_truncation(trunc_ ? std::min(*trunc_, order) : order);
        return out;
    }

    PuiseuxSeries operator-() const
    {
        PuiseuxSeries out = *this;
        for (auto &kv : out.terms_) {
            kv.second = C(0) - kv.second;
        }
        out.log_ = C(0) - log_;
        return out;
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        PuiseuxSeries out = a;
        for (const auto &[e, c] : b.terms_) {
            out.add_term(e, c);
        }
        out.log_ = a.log_ + b.log_;
        out.set_truncation(min_trunc(a.trunc_, b.trunc_));
        return out;
    }

    friend PuiseuxSeries operator-(const PuiseuxSeries &a, const PuiseuxSeries &b) { return a + (-b); }

    friend PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        if (!detail::zero_value(a.log_) || !detail::zero_value(b.log_)) {
            throw DomainError("product of series carrying a log term is outside the Puiseux ring");
        }
        PuiseuxSeries out;
        for (const auto &[e1, c1] : a.terms_) {
            for (const auto &[e2, c2] : b.terms_) {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        std::optional<Rational> t;
        if (a.trunc_) {
            t = *a.trunc_ + lower_bound(b);
        }
        if (b.trunc_) {
            t = min_trunc(t, *b.trunc_ + lower_bound(a));
        }
        if (a.terms_.empty() && !a.trunc_) {
            t.reset();
        }
        if (b.terms_.empty() && !b.trunc_) {
            t.reset();
        }
        out.set_truncation(t);
        return out;
    }

    PuiseuxSeries &operator+=(const PuiseuxSeries &o) { return *this = *this + o; }
    PuiseuxSeries &operator-=(const PuiseuxSeries &o) { return *this = *this - o; }
    PuiseuxSeries &operator*=(const PuiseuxSeries &o) { return *this = *this * o; }

    PuiseuxSeries scaled(const C &c) const
    {
        PuiseuxSeries out;
        for (const auto &[e, v] : terms_) {
            out.add_term(e, c * v);
        }
        out.log_ = c * log_;
        out.trunc_ = trunc_;
        return out;
    }

    // Multiply by x^e.
    PuiseuxSeries shifted(const Rational &e) const
    {
        if (!detail::zero_value(log_)) {
            throw DomainError("shift of a series carrying a log term");
        }
        PuiseuxSeries out;
        for (const auto &[k, v] : terms_) {
            out.terms_.emplace(k + e, v);
        }
        if (trunc_) {
            out.trunc_ = *trunc_ + e;
        }
        return out;
    }

    friend bool operator==(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        return a.terms_ == b.terms_ && a.log_ == b.log_ && a.trunc_ == b.trunc_;
    }

    // Same known coefficients and log term, ignoring truncation metadata.
    bool same_terms(const PuiseuxSeries &o) const { return terms_ == o.terms_ && log_ == o.log_; }

    PuiseuxSeries derive() const
    {
        PuiseuxSeries out;
        for (const auto &[e, c] : terms_) {
            if (!e.is_zero()) {
                out.add_term(e - 1, C(e) * c);
            }
        }
        out.add_term(Rational(-1), log_);
        if (trunc_) {
            out.set_truncation(*trunc_ - 1);
        }
        return out;
    }

    PuiseuxSeries integrate() const
    {
        if (!detail::zero_value(log_)) {
            throw DomainError("integration of a log term leaves the Puiseux ring");
        }
        PuiseuxSeries out;
        for (const auto &[e, c] : terms_) {
            if (e == -1) {
                out.log_ = c;
            } else {
                out.add_term(e + 1, c * C(qcurve::inverse(Rational(e + 1))));
            }
        }
        if (trunc_) {
            out.set_truncation(*trunc_ + 1);
        }
        return out;
    }

    PuiseuxSeries inverse() const
    {
        return unit_series([](int n) { return n % 2 == 0 ? Rational(1) : Rational(-1); }, -1, "inverse");
    }

    PuiseuxSeries sqrt() const
    {
        return unit_series(
            [](int n) {
                Rational b(1);
                for (int i = 0; i < n; ++i) {
                    b *= (make_rational(1, 2) - i) / Rational(i + 1);
                }
                return b;
            },
            0, "square root");
    }

    PuiseuxSeries pow(int n) const
    {
        if (n < 0) {
            return inverse().pow(-n);
        }
        PuiseuxSeries out(C(1));
        for (int i = 0; i < n; ++i) {
            out = out * *this;
        }
        return out;
    }

    // Substitute x = c * t^beta and re-express as a series in t. The log
    // term keeps its slope beta and drops the additive constant log c.
    PuiseuxSeries compose_monomial(const C &c, const Rational &beta) const
    {
        PuiseuxSeries out;
        for (const auto &[e, v] : terms_) {
            C factor(1);
            if (!(c == C(1))) {
                if (!is_integer(e) && den(Rational(e)) != 2) {
                    throw DomainError("fractional power of a non-unit substitution coefficient");
                }
                const C base = is_integer(e) ? c : scalar_sqrt(c);
                const long k = num(Rational(is_integer(e) ? e : e * 2)).convert_to<long>();
                for (long i = 0; i < (k < 0 ? -k : k); ++i) {
                    factor = factor * base;
                }
                if (k < 0) {
                    factor = qcurve::inverse(factor);
                }
            }
            out.add_term(e * beta, factor * v);
        }
        out.log_ = log_ * C(beta);
        if (trunc_) {
            if (beta <= 0) {
                throw DomainError("truncated series cannot be composed with a non-positive power");
            }
            out.set_truncation(*trunc_ * beta);
        }
        return out;
    }

    double evaluate(double x) const
    {
        double out = 0.0;
        for (const auto &[e, c] : terms_) {
            out += scalar_to_double(c) * std::pow(x, to_double(e));
        }
        if (!detail::zero_value(log_)) {
            out += scalar_to_double(log_) * std::log(x);
        }
        return out;
    }

private:
    static std::optional<Rational> min_trunc(const std::optional<Rational> &a, const std::optional<Rational> &b)
    {
        if (!a) {
            return b;
        }
        if (!b) {
            return a;
        }
        return std::min(*a, *b);
    }

    // Lower bound on the exponents a series may carry.
    static Rational lower_bound(const PuiseuxSeries &s)
    {
        if (!s.terms_.empty()) {
            return s.terms_.begin()->first;
        }
        return s.trunc_ ? *s.trunc_ : Rational(0);
    }

    void add_term(const Rational &e, const C &c)
    {
        if (detail::zero_value(c)) {
            return;
        }
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second = it->second + c;
            if (detail::zero_value(it->second)) {
                terms_.erase(it);
            }
        }
    }

    void set_truncation(const std::optional<Rational> &t)
    {
        trunc_ = t;
        if (t) {
            terms_.erase(terms_.lower_bound(*t), terms_.end());
        }
    }

    // c x^a (1+u) -> c' x^(p a) sum_n coef(n) u^n for p = -1 (inverse) or
    // p = 1/2 (square root, selected by power == 0).
    template <typename Coef>
    PuiseuxSeries unit_series(Coef coef, int power, const char *what) const
    {
        if (!detail::zero_value(log_)) {
            throw DomainError(std::string(what) + " of a series carrying a log term");
        }
        if (terms_.empty()) {
            throw DomainError(std::string(what) + " of a series with no known leading term");
        }
        const Rational alpha = terms_.begin()->first;
        const C lead = terms_.begin()->second;
        const C lead_inv = qcurve::inverse(lead);
        PuiseuxSeries u;
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
            u.terms_.emplace(it->first - alpha, it->second * lead_inv);
        }
        std::optional<Rational> rel;
        if (trunc_) {
            rel = *trunc_ - alpha;
            u.trunc_ = rel;
        } else if (!u.terms_.empty()) {
            throw DomainError(std::string(what) + " of an exact non-monomial series needs a truncation order");
        }
        PuiseuxSeries sum(C(1));
        if (rel) {
            const Rational step = u.terms_.empty() ? *rel : u.terms_.begin()->first;
            PuiseuxSeries un(C(1));
            for (int n = 1; Rational(n) * step < *rel; ++n) {
                un = un * u;
                sum = sum + un.scaled(C(coef(n)));
            }
            sum.set_truncation(*rel);
        }
        if (power == -1) {
            return sum.scaled(lead_inv).shifted(-alpha);
        }
        return sum.scaled(scalar_sqrt(lead)).shifted(alpha / 2);
    }

    TermMap terms_;
    C log_{};
    std::optional<Rational> trunc_;
};

template <typename C>
bool detail::zero_value(const PuiseuxSeries<C> &s)
{
    return s.is_zero();
}

inline std::string render_exponent_power(const std::string &var, const Rational &e)
{
    if (e == 1) {
        return var;
    }
    if (is_integer(e) && e > 0) {
        return var + "^" + to_string(e);
    }
    return var + "^(" + to_string(e) + ")";
}

// "-2/3*x^(3/2) - 1/4*log(x) + O(x^(7/2))", terms by ascending exponent.
template <typename C>
std::string render(const PuiseuxSeries<C> &s, const std::string &var = "x")
{
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const C &c, const std::string &factor) {
        std::string cs = to_string(c);
        const bool compound = cs.find(' ') != std::string::npos;
        const bool negative = !compound && cs.front() == '-';
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
        if (factor.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << factor;
        } else {
            os << cs << "*" << factor;
        }
    };
    for (const auto &[e, c] : s.terms()) {
        emit(c, e.is_zero() ? std::string() : render_exponent_power(var, e));
    }
    if (!is_zero(s.log_coefficient())) {
        emit(s.log_coefficient(), "log(" + var + ")");
    }
    if (s.truncation()) {
        os << (first ? "" : " + ") << "O(" << render_exponent_power(var, *s.truncation()) << ")";
        first = false;
    }
    if (first) {
        return "0";
    }
    return os.str();
}

} // namespace qcurve
