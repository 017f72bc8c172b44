#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/puiseux.hpp"
#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

// Sparse polynomial over Q in t1..tn.
class MPoly {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, Rational>;

    MPoly() = default;
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, const Rational &c)
    {
        MPoly p(nvars);
        p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
        return p;
    }

    static MPoly monomial(const Rational &c, Exponents e)
    {
        MPoly p(static_cast<int>(e.size()));
        p.add_term(std::move(e), c);
        return p;
    }

    // c * t_i^k
    static MPoly variable_power(int nvars, int i, int k, const Rational &c = Rational(1))
    {
        Exponents e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(i)] = k;
        return monomial(c, std::move(e));
    }

    int nvars() const { return nvars_; }
    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Exponents &e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(Exponents e, const Rational &c)
    {
        if (static_cast<int>(e.size()) != nvars_) {
            throw std::invalid_argument("exponent vector length differs from the variable count");
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    MPoly operator-() const { return scaled(Rational(-1)); }

    MPoly &operator+=(const MPoly &o)
    {
        check_arity(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    MPoly &operator-=(const MPoly &o) { return *this += -o; }

    friend MPoly operator+(MPoly a, const MPoly &b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly &b) { return a -= b; }

    friend MPoly operator*(const MPoly &a, const MPoly &b)
    {
        a.check_arity(b);
        MPoly out(a.nvars_);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] += eb[i];
                }
                out.add_term(std::move(e), ca * cb);
            }
        }
        return out;
    }

    friend bool operator==(const MPoly &a, const MPoly &b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

    MPoly scaled(const Rational &c) const
    {
        MPoly out(nvars_);
        if (c == 0) {
            return out;
        }
        for (const auto &[e, v] : terms_) {
            out.terms_.emplace(e, v * c);
        }
        return out;
    }

    MPoly derivative(int i) const
    {
        MPoly out(nvars_);
        for (const auto &[e, c] : terms_) {
            const int k = e[static_cast<std::size_t>(i)];
            if (k == 0) {
                continue;
            }
            Exponents f(e);
            --f[static_cast<std::size_t>(i)];
            out.add_term(std::move(f), c * k);
        }
        return out;
    }

    // Antiderivative in t_i vanishing at t_i = 0.
    MPoly integral(int i) const
    {
        MPoly out(nvars_);
        for (const auto &[e, c] : terms_) {
            const int k = e[static_cast<std::size_t>(i)];
            if (k == -1) {
                throw InternalInconsistency("residue term t^-1 under integration");
            }
            if (k < -1) {
                throw InternalInconsistency("pole at t = 0 under integration from 0");
            }
            Exponents f(e);
            ++f[static_cast<std::size_t>(i)];
            out.add_term(std::move(f), c / (k + 1));
        }
        return out;
    }

    // Variable i goes to targets[i] in an nvars-variable ring; repeated targets
    // multiply.
    MPoly embedded(const std::vector<int> &targets, int nvars) const
    {
        if (static_cast<int>(targets.size()) != nvars_) {
            throw std::invalid_argument("embedding map has the wrong length");
        }
        MPoly out(nvars);
        for (const auto &[e, c] : terms_) {
            Exponents f(static_cast<std::size_t>(nvars), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                f[static_cast<std::size_t>(targets[i])] += e[i];
            }
            out.add_term(std::move(f), c);
        }
        return out;
    }

    // Exact quotient by t_i^2 - t_j^2.
    MPoly divided_by_difference_of_squares(int i, int j) const
    {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        MPoly rem(*this);
        MPoly quot(nvars_);
        while (!rem.is_zero()) {
            auto lead = std::max_element(rem.terms_.begin(), rem.terms_.end(), [ui](const auto &a, const auto &b) {
                return a.first[ui] < b.first[ui];
            });
            if (lead->first[ui] < 2) {
                throw InternalInconsistency("exact division by (z_i^2 - z_j^2) left a nonzero remainder");
            }
            Exponents q = lead->first;
            q[ui] -= 2;
            const Rational c = lead->second;
            Exponents shifted = q;
            shifted[uj] += 2;
            rem.add_term(lead->first, -c);
            rem.add_term(shifted, c);
            quot.add_term(std::move(q), c);
        }
        return quot;
    }

    MPoly permuted(const std::vector<int> &perm) const { return embedded(perm, nvars_); }

    MPoly symmetrized() const
    {
        std::vector<int> perm(static_cast<std::size_t>(nvars_));
        std::iota(perm.begin(), perm.end(), 0);
        MPoly out(nvars_);
        long count = 0;
        do {
            out += permuted(perm);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out.scaled(Rational(1) / Rational(count));
    }

    bool is_symmetric() const
    {
        for (int i = 0; i + 1 < nvars_; ++i) {
            std::vector<int> swap(static_cast<std::size_t>(nvars_));
            std::iota(swap.begin(), swap.end(), 0);
            std::swap(swap[static_cast<std::size_t>(i)], swap[static_cast<std::size_t>(i) + 1]);
            if (!(permuted(swap) == *this)) {
                return false;
            }
        }
        return true;
    }

    // p(t, t, ..., t)
    PuiseuxSeries<Rational> diagonal() const
    {
        PuiseuxSeries<Rational> out;
        for (const auto &[e, c] : terms_) {
            out += PuiseuxSeries<Rational>::monomial(c, Rational(std::accumulate(e.begin(), e.end(), 0)));
        }
        return out;
    }

private:
    void check_arity(const MPoly &o) const
    {
        if (o.nvars_ != nvars_) {
            throw std::invalid_argument("polynomials in different numbers of variables");
        }
    }

    int nvars_ = 0;
    TermMap terms_;
};

// "-1/16*t1*t2*t3"; one variable renders as "t".
inline std::string render(const MPoly &p, const std::string &var = "t")
{
    if (p.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto &[e, c] = *it;
        const bool negative = c < 0;
        const Rational a = negative ? Rational(-c) : c;
        std::vector<std::string> factors;
        if (a != 1) {
            factors.push_back(to_string(a));
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            std::string v = p.nvars() == 1 ? var : var + std::to_string(i + 1);
            if (e[i] != 1) {
                v += "^" + std::to_string(e[i]);
            }
            factors.push_back(v);
        }
        std::string body;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            body += (i ? "*" : "") + factors[i];
        }
        if (body.empty()) {
            body = "1";
        }
        if (first) {
            os << (negative ? "-" : "") << body;
        } else {
            os << (negative ? " - " : " + ") << body;
        }
        first = false;
    }
    return os.str();
}

} // namespace qcurve
