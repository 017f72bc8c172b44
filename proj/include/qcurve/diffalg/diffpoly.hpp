#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcurve/errors.hpp"
#include "qcurve/exactnum/poly.hpp"
#include "qcurve/exactnum/radical.hpp"

namespace qcurve {

// q_level^(order)
struct DiffVar {
    int level = 2;
    int order = 0;

    auto operator<=>(const DiffVar &) const = default;
};

inline DiffVar make_diffvar(int level, int order = 0)
{
    if (level < 2) {
        throw std::invalid_argument("differential variable level must be at least 2");
    }
    if (order < 0) {
        throw std::invalid_argument("differential variable derivative order must be nonnegative");
    }
    return {level, order};
}

// Sorted multiset of variables (by level, then derivative order).
using Monomial = std::vector<DiffVar>;

inline Monomial monomial_product(const Monomial &a, const Monomial &b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int monomial_weight(const Monomial &m)
{
    int w = 0;
    for (const auto &v : m) {
        w += v.level;
    }
    return w;
}

// Differential polynomial in the q_l^(k) with coefficients in Qbar[hbar].
class DiffPoly {
public:
    using TermMap = std::map<Monomial, HPoly>;

    DiffPoly() = default;
    DiffPoly(int c) : DiffPoly(HPoly(RadicalScalar(c))) {}
    DiffPoly(const Rational &c) : DiffPoly(HPoly(RadicalScalar(c))) {}
    DiffPoly(const RadicalScalar &c) : DiffPoly(HPoly(c)) {}
    DiffPoly(const HPoly &c)
    {
        if (!c.is_zero()) {
            terms_.emplace(Monomial{}, c);
        }
    }

    static DiffPoly var(int level, int order = 0)
    {
        DiffPoly out;
        out.terms_.emplace(Monomial{make_diffvar(level, order)}, HPoly(RadicalScalar(1)));
        return out;
    }

    static DiffPoly term(const Monomial &m, const HPoly &c)
    {
        DiffPoly out;
        Monomial sorted = m;
        std::sort(sorted.begin(), sorted.end());
        out.add(sorted, c);
        return out;
    }

    static DiffPoly hbar(int power = 1) { return DiffPoly(hbar_power(power)); }

    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    DiffPoly operator-() const
    {
        DiffPoly out = *this;
        for (auto &kv : out.terms_) {
            kv.second = -kv.second;
        }
        return out;
    }

    DiffPoly &operator+=(const DiffPoly &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add(m, c);
        }
        return *this;
    }

    DiffPoly &operator-=(const DiffPoly &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add(m, -c);
        }
        return *this;
    }

    DiffPoly &operator*=(const DiffPoly &o) { return *this = *this * o; }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly &b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly &b) { return a -= b; }

    friend DiffPoly operator*(const DiffPoly &a, const DiffPoly &b)
    {
        DiffPoly out;
        for (const auto &[m1, c1] : a.terms_) {
            for (const auto &[m2, c2] : b.terms_) {
                out.add(monomial_product(m1, m2), c1 * c2);
            }
        }
        return out;
    }

    friend bool operator==(const DiffPoly &a, const DiffPoly &b) { return a.terms_ == b.terms_; }

    DiffPoly scaled(const RadicalScalar &c) const
    {
        DiffPoly out;
        for (const auto &[m, p] : terms_) {
            out.add(m, p.scaled(c));
        }
        return out;
    }

    // Multiply by hbar^k; negative k divides exactly.
    DiffPoly hbar_shifted(int k) const
    {
        DiffPoly out;
        for (const auto &[m, p] : terms_) {
            out.add(m, p.shifted(k));
        }
        return out;
    }

    bool divisible_by_hbar(int k) const
    {
        return std::all_of(terms_.begin(), terms_.end(),
                           [k](const auto &kv) { return kv.second.divisible_by_var_power(k); });
    }

    // Leibniz rule; hbar is a constant.
    DiffPoly derive() const
    {
        DiffPoly out;
        for (const auto &[m, c] : terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i > 0 && m[i] == m[i - 1]) {
                    continue;
                }
                const auto mult = static_cast<int>(std::count(m.begin(), m.end(), m[i]));
                Monomial dm = m;
                dm.erase(dm.begin() + static_cast<std::ptrdiff_t>(i));
                dm.insert(std::upper_bound(dm.begin(), dm.end(), DiffVar{m[i].level, m[i].order + 1}),
                          DiffVar{m[i].level, m[i].order + 1});
                out.add(dm, c.scaled(RadicalScalar(mult)));
            }
        }
        return out;
    }

    DiffPoly at_hbar_zero() const
    {
        DiffPoly out;
        for (const auto &[m, c] : terms_) {
            out.add(m, HPoly(c.coeff(0)));
        }
        return out;
    }

    bool is_rational() const
    {
        for (const auto &kv : terms_) {
            for (const auto &c : kv.second.coefficients()) {
                if (!c.is_rational()) {
                    return false;
                }
            }
        }
        return true;
    }

    int max_derivative_order() const
    {
        int out = 0;
        for (const auto &kv : terms_) {
            for (const auto &v : kv.first) {
                out = std::max(out, v.order);
            }
        }
        return out;
    }

    int max_level() const
    {
        int out = 0;
        for (const auto &kv : terms_) {
            for (const auto &v : kv.first) {
                out = std::max(out, v.level);
            }
        }
        return out;
    }

private:
    void add(const Monomial &m, const HPoly &c)
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

inline bool is_zero(const DiffPoly &p) { return p.is_zero(); }

inline DiffPoly diff_derive(const DiffPoly &p) { return p.derive(); }

// Grading wt(hbar) = 1, wt(q_l^(k)) = l. Zero has weight 0; nullopt when
// the monomials disagree.
inline std::optional<int> weighted_degree(const DiffPoly &p)
{
    std::optional<int> out;
    for (const auto &[m, c] : p.terms()) {
        const int base = monomial_weight(m);
        for (int j = 0; j <= c.degree(); ++j) {
            if (c.coeff(j).is_zero()) {
                continue;
            }
            if (out && *out != base + j) {
                return std::nullopt;
            }
            out = base + j;
        }
    }
    return out ? out : std::optional<int>(0);
}

// P(lambda hbar; lambda^l q_l) = sum_w lambda^w P_w, returned as w -> P_w.
inline std::map<int, DiffPoly> lambda_components(const DiffPoly &p)
{
    std::map<int, DiffPoly> out;
    for (const auto &[m, c] : p.terms()) {
        const int base = monomial_weight(m);
        for (int j = 0; j <= c.degree(); ++j) {
            if (c.coeff(j).is_zero()) {
                continue;
            }
            out[base + j] += DiffPoly::term(m, hbar_power(j, c.coeff(j)));
        }
    }
    return out;
}

// "q2", "q3'", "q2''"
inline std::string render_diffvar(const DiffVar &v)
{
    return "q" + std::to_string(v.level) + std::string(static_cast<std::size_t>(v.order), '\'');
}

struct DiffTerm {
    RadicalScalar coef;
    int hbar = 0;
    Monomial monomial;
};

// Flattened terms ordered by hbar power, then monomial degree, then lexicographically.
inline std::vector<DiffTerm> ordered_terms(const DiffPoly &p)
{
    std::vector<DiffTerm> out;
    for (const auto &[m, c] : p.terms()) {
        for (int j = 0; j <= c.degree(); ++j) {
            if (!c.coeff(j).is_zero()) {
                out.push_back({c.coeff(j), j, m});
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const DiffTerm &a, const DiffTerm &b) {
        if (a.hbar != b.hbar) {
            return a.hbar < b.hbar;
        }
        if (a.monomial.size() != b.monomial.size()) {
            return a.monomial.size() < b.monomial.size();
        }
        return a.monomial < b.monomial;
    });
    return out;
}

// Factor list of one term without its sign: {"2", "ħ", "q2^2", "q3'"}.
// Returns the sign separately; compound radical coefficients are parenthesized.
inline std::pair<bool, std::vector<std::string>> term_factors(const DiffTerm &t)
{
    std::vector<std::string> factors;
    std::string cs = to_string(t.coef);
    const bool compound = cs.find(' ') != std::string::npos;
    const bool negative = !compound && cs.front() == '-';
    if (negative) {
        cs.erase(0, 1);
    }
    if (compound) {
        cs = "(" + cs + ")";
    }
    if (cs != "1") {
        factors.push_back(cs);
    }
    if (t.hbar == 1) {
        factors.emplace_back("ħ");
    } else if (t.hbar > 1) {
        factors.push_back("ħ^" + std::to_string(t.hbar));
    }
    for (std::size_t i = 0; i < t.monomial.size();) {
        std::size_t j = i;
        while (j < t.monomial.size() && t.monomial[j] == t.monomial[i]) {
            ++j;
        }
        std::string f = render_diffvar(t.monomial[i]);
        if (j - i > 1) {
            f += "^" + std::to_string(j - i);
        }
        factors.push_back(f);
        i = j;
    }
    return {negative, factors};
}

inline std::string join_factors(const std::vector<std::string> &factors)
{
    std::string out;
    for (const auto &f : factors) {
        if (!out.empty()) {
            out += "*";
        }
        out += f;
    }
    return out;
}

// Appends "sign term" pieces to a running sum; `first` tracks the leading term.
inline void append_signed(std::ostringstream &os, bool &first, bool negative, const std::string &body)
{
    if (first) {
        os << (negative ? "-" : "") << body;
    } else {
        os << (negative ? " - " : " + ") << body;
    }
    first = false;
}

inline std::string render(const DiffPoly &p)
{
    std::ostringstream os;
    bool first = true;
    for (const auto &t : ordered_terms(p)) {
        auto [negative, factors] = term_factors(t);
        append_signed(os, first, negative, factors.empty() ? std::string("1") : join_factors(factors));
    }
    return first ? "0" : os.str();
}

} // namespace qcurve
