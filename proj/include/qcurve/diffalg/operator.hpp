#pragma once

#include <cctype>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcurve/diffalg/diffpoly.hpp"
#include "qcurve/exactnum/poly.hpp"

namespace qcurve {

// sum_j coefficients[j] (d/dx)^j
struct ScalarOperator {
    int order = 0;
    std::vector<DiffPoly> coefficients;

    const DiffPoly &coefficient(int j) const { return coefficients.at(static_cast<std::size_t>(j)); }

    friend bool operator==(const ScalarOperator &, const ScalarOperator &) = default;
};

// Polynomial in y over the differential ring.
using YPoly = Poly<DiffPoly>;

namespace detail {

inline std::string op_factor(const char *base, int j)
{
    if (j == 0) {
        return {};
    }
    return j == 1 ? std::string(base) : std::string(base) + "^" + std::to_string(j);
}

inline void render_coefficient_terms(std::ostringstream &os, bool &first, const DiffPoly &body,
                                     const std::string &factor)
{
    for (const auto &t : ordered_terms(body)) {
        auto [negative, factors] = term_factors(t);
        if (!factor.empty()) {
            factors.push_back(factor);
        }
        append_signed(os, first, negative, factors.empty() ? std::string("1") : join_factors(factors));
    }
}

} // namespace detail

// "(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'"; coefficients not divisible by
// hbar^j fall back to "(d/dx)^j".
inline std::string render(const ScalarOperator &op)
{
    std::ostringstream os;
    bool first = true;
    for (int j = op.order; j >= 0; --j) {
        const DiffPoly &c = op.coefficient(j);
        if (c.is_zero()) {
            continue;
        }
        if (c.divisible_by_hbar(j)) {
            detail::render_coefficient_terms(os, first, c.hbar_shifted(-j), detail::op_factor("(ħ d/dx)", j));
        } else {
            detail::render_coefficient_terms(os, first, c, detail::op_factor("(d/dx)", j));
        }
    }
    return first ? "0" : os.str();
}

// "y^3 - 4*q2*y + 4*q3"
inline std::string render(const YPoly &p)
{
    std::ostringstream os;
    bool first = true;
    for (int j = p.degree(); j >= 0; --j) {
        detail::render_coefficient_terms(os, first, p.coeff(j), detail::op_factor("y", j));
    }
    return first ? "0" : os.str();
}

namespace detail {

enum class OpKind { none, hbar_d, d, y };

struct ParsedTerm {
    DiffPoly coef{1};
    int power = 0;
    OpKind kind = OpKind::none;
};

// Grammar shared by operators, y-polynomials and plain differential polynomials:
//   sum    := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := integer ['/' integer] | 'sqrt(' integer ')' | ('ħ'|'hbar') ['^' n]
//           | 'q' level '\''* ['^' n] | 'y' ['^' n]
//           | '(' ('ħ'|'hbar') ' d/dx' ')' ['^' n] | '(d/dx)' ['^' n] | '(' sum ')'
class DiffParser {
public:
    DiffParser(std::string_view text, bool allow_d, bool allow_y) : text_(text), allow_d_(allow_d), allow_y_(allow_y)
    {
    }

    // power -> coefficient of the operator factor
    std::map<int, DiffPoly> parse()
    {
        auto out = sum();
        skip();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw std::invalid_argument("cannot parse '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                                    ": " + what);
    }

    void skip()
    {
        while (pos_ < text_.size() && text_[pos_] == ' ') {
            ++pos_;
        }
    }

    bool accept(std::string_view s)
    {
        skip();
        if (text_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    bool peek_digit()
    {
        skip();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    Integer integer()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected an integer");
        }
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    int small_int()
    {
        const Integer v = integer();
        if (v > 10000) {
            fail("integer too large");
        }
        return v.convert_to<int>();
    }

    int optional_power()
    {
        return accept("^") ? small_int() : 1;
    }

    std::map<int, DiffPoly> sum()
    {
        std::map<int, DiffPoly> out;
        bool negative = false;
        if (accept("-")) {
            negative = true;
        } else {
            accept("+");
        }
        while (true) {
            ParsedTerm t = term();
            DiffPoly c = t.kind == OpKind::hbar_d ? t.coef.hbar_shifted(t.power) : t.coef;
            out[t.power] += negative ? -c : c;
            if (out[t.power].is_zero()) {
                out.erase(t.power);
            }
            if (accept("+")) {
                negative = false;
            } else if (accept("-")) {
                negative = true;
            } else {
                return out;
            }
        }
    }

    ParsedTerm term()
    {
        ParsedTerm t;
        factor(t);
        while (accept("*")) {
            factor(t);
        }
        return t;
    }

    void set_op(ParsedTerm &t, OpKind kind, int power)
    {
        if (t.kind != OpKind::none) {
            fail("more than one operator factor in a term");
        }
        t.kind = kind;
        t.power = power;
    }

    void factor(ParsedTerm &t)
    {
        skip();
        if (peek_digit()) {
            Integer n = integer();
            Integer d = 1;
            if (accept("/")) {
                d = integer();
                if (d == 0) {
                    fail("zero denominator");
                }
            }
            t.coef = t.coef.scaled(RadicalScalar(Rational(n, d)));
            return;
        }
        if (accept("sqrt(")) {
            const Integer n = integer();
            if (!accept(")")) {
                fail("expected ')'");
            }
            if (n == 0) {
                fail("sqrt(0)");
            }
            t.coef = t.coef.scaled(RadicalScalar::sqrt_of(n.convert_to<std::uint64_t>()));
            return;
        }
        if (accept("ħ") || accept("hbar")) {
            t.coef = t.coef.hbar_shifted(optional_power());
            return;
        }
        if (accept("q")) {
            const int level = small_int();
            int order = 0;
            while (accept("'")) {
                ++order;
            }
            const int p = optional_power();
            DiffPoly v = DiffPoly::var(level, order);
            for (int i = 0; i < p; ++i) {
                t.coef = t.coef * v;
            }
            return;
        }
        if (accept("y")) {
            if (!allow_y_) {
                fail("'y' not allowed here");
            }
            set_op(t, OpKind::y, optional_power());
            return;
        }
        if (accept("(")) {
            const std::size_t save = pos_;
            if ((accept("ħ") || accept("hbar")) && accept("d/dx") && accept(")")) {
                if (!allow_d_) {
                    fail("derivative operator not allowed here");
                }
                set_op(t, OpKind::hbar_d, optional_power());
                return;
            }
            pos_ = save;
            if (accept("d/dx") && accept(")")) {
                if (!allow_d_) {
                    fail("derivative operator not allowed here");
                }
                set_op(t, OpKind::d, optional_power());
                return;
            }
            pos_ = save;
            auto inner = sum();
            if (!accept(")")) {
                fail("expected ')'");
            }
            if (inner.size() > 1 || (inner.size() == 1 && inner.begin()->first != 0)) {
                fail("operator factor inside parentheses");
            }
            t.coef = inner.empty() ? DiffPoly() : t.coef * inner.begin()->second;
            return;
        }
        fail("unexpected input");
    }

    std::string_view text_;
    bool allow_d_;
    bool allow_y_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::ostream &operator<<(std::ostream &os, const ScalarOperator &op) { return os << render(op); }
inline std::ostream &operator<<(std::ostream &os, const YPoly &p) { return os << render(p); }
inline std::ostream &operator<<(std::ostream &os, const DiffPoly &p) { return os << render(p); }

inline ScalarOperator parse_operator(std::string_view text)
{
    const auto parts = detail::DiffParser(text, true, false).parse();
    ScalarOperator op;
    op.order = parts.empty() ? 0 : parts.rbegin()->first;
    op.coefficients.assign(static_cast<std::size_t>(op.order) + 1, DiffPoly());
    for (const auto &[j, c] : parts) {
        op.coefficients[static_cast<std::size_t>(j)] = c;
    }
    return op;
}

inline YPoly parse_ypoly(std::string_view text)
{
    const auto parts = detail::DiffParser(text, false, true).parse();
    YPoly out;
    for (const auto &[j, c] : parts) {
        out += YPoly::monomial(c, j);
    }
    return out;
}

inline DiffPoly parse_diffpoly(std::string_view text)
{
    const auto parts = detail::DiffParser(text, false, false).parse();
    return parts.empty() ? DiffPoly() : parts.begin()->second;
}

} // namespace qcurve
