#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcurve/exactnum/rational.hpp"

namespace qcurve {

namespace detail {

class DvvRecursion {
public:
    // <tau_d1 ... tau_dn>_g; zero off the dimension constraint.
    Rational value(int g, std::vector<int> d)
    {
        std::sort(d.begin(), d.end());
        if (g < 0 || d.empty() || d.front() < 0) {
            return Rational(0);
        }
        const int n = static_cast<int>(d.size());
        const int dim = std::accumulate(d.begin(), d.end(), 0);
        if (dim != 3 * g - 3 + n) {
            return Rational(0);
        }
        const Key key{g, d};
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        const Rational v = compute(g, d);
        memo_.emplace(key, v);
        return v;
    }

private:
    using Key = std::pair<int, std::vector<int>>;

    static Rational dfact(int k) { return k <= 0 ? Rational(1) : Rational(double_factorial_odd((k + 1) / 2)); }

    Rational compute(int g, std::vector<int> d)
    {
        if (g == 0 && d == std::vector<int>{0, 0, 0}) {
            return Rational(1);
        }
        // d is sorted; peel off the largest insertion tau_{k+1}
        const int k = d.back() - 1;
        d.pop_back();
        const std::vector<int> &s = d;
        Rational acc(0);
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::vector<int> rest(s);
            const int dj = rest[j];
            rest[j] = k + dj;
            acc += dfact(2 * k + 2 * dj + 1) / dfact(2 * dj - 1) * value(g, rest);
        }
        for (int r = 0; r <= k - 1; ++r) {
            const int t = k - 1 - r;
            const Rational w = dfact(2 * r + 1) * dfact(2 * t + 1) / 2;
            std::vector<int> both(s);
            both.push_back(r);
            both.push_back(t);
            acc += w * value(g - 1, both);
            const std::size_t m = s.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
                std::vector<int> left{r};
                std::vector<int> right{t};
                for (std::size_t i = 0; i < m; ++i) {
                    ((mask >> i) & 1U ? left : right).push_back(s[i]);
                }
                for (int g1 = 0; g1 <= g; ++g1) {
                    const Rational a = value(g1, left);
                    if (a != 0) {
                        acc += w * a * value(g - g1, right);
                    }
                }
            }
        }
        if (g == 1 && s.empty() && k == 0) {
            acc += make_rational(1, 8);
        }
        return acc / dfact(2 * k + 3);
    }

    std::map<Key, Rational> memo_;
};

} // namespace detail

// Witten-Kontsevich intersection numbers from the Virasoro (DVV) recursion.
inline Rational dvv_oracle(int g, const std::vector<int> &d)
{
    if (g < 0 || d.empty()) {
        throw std::invalid_argument("dvv_oracle needs g >= 0 and at least one insertion");
    }
    int dim = 0;
    for (int x : d) {
        if (x < 0) {
            throw std::invalid_argument("negative descendant index");
        }
        dim += x;
    }
    if (dim != 3 * g - 3 + static_cast<int>(d.size())) {
        throw std::invalid_argument("dimension mismatch: sum d_i = " + std::to_string(dim) + " but 3g-3+n = " +
                                    std::to_string(3 * g - 3 + static_cast<int>(d.size())));
    }
    static std::mutex lock;
    static detail::DvvRecursion rec;
    std::lock_guard<std::mutex> guard(lock);
    return rec.value(g, d);
}

} // namespace qcurve
