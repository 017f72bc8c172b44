#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcurve/exactnum/rational_function.hpp"

namespace qcurve {

namespace detail {

// Recursive descent over
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := integer | var | '(' expr ')'
template <typename F>
class RationalFunctionParser {
public:
    RationalFunctionParser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

    RationalFunction<F> parse()
    {
        auto out = expr();
        skip();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return out;
    }

private:
    using RF = RationalFunction<F>;

    [[noreturn]] void fail(const std::string &what) const
    {
        throw std::invalid_argument("cannot parse '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                                    ": " + what);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
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

    RF expr()
    {
        RF out = term();
        while (true) {
            if (accept('+')) {
                out = out + term();
            } else if (accept('-')) {
                out = out - term();
            } else {
                return out;
            }
        }
    }

    RF term()
    {
        RF out = unary();
        while (true) {
            if (accept('*')) {
                out = out * unary();
            } else if (accept('/')) {
                RF d = unary();
                if (d.is_zero()) {
                    fail("division by zero");
                }
                out = out / d;
            } else {
                return out;
            }
        }
    }

    RF unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    RF power()
    {
        RF base = atom();
        if (!accept('^')) {
            return base;
        }
        const bool negative = accept('-');
        const Integer e = integer();
        if (e > 1000) {
            fail("exponent too large");
        }
        const int k = e.convert_to<int>();
        if (negative && base.is_zero()) {
            fail("negative power of zero");
        }
        return base.pow(negative ? -k : k);
    }

    RF atom()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        if (accept('(')) {
            RF inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            return RF(F(Rational(integer())));
        }
        if (text_.substr(pos_, var_.size()) == var_) {
            pos_ += var_.size();
            return RF::variable();
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    std::string_view var_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Parses a rational function in the named variable, e.g. "x^3 - 1/2",
// "(t^2 + 1)/t^4". Throws std::invalid_argument on malformed input.
template <typename F = Rational>
RationalFunction<F> parse_rational_function(std::string_view text, std::string_view var = "x")
{
    return detail::RationalFunctionParser<F>(text, var).parse();
}

} // namespace qcurve
