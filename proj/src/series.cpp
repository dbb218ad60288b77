#include "mmwb/series.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace mmwb {

namespace {

void enumerate(int n, int total, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (var == n - 1) {
        cur[var] = total;
        out.push_back(cur);
        return;
    }
    for (int k = total; k >= 0; --k) {
        cur[var] = k;
        enumerate(n, total - k, var + 1, cur, out);
    }
    cur[var] = 0;
}

}  // namespace

std::string index_str(const MultiIndex& k) {
    std::string s = "(";
    for (std::size_t j = 0; j < k.size(); ++j) s += (j ? "," : "") + std::to_string(k[j]);
    return s + ")";
}

SeriesShape::SeriesShape(int n, int K) : n_(n), K_(K) {
    if (n < 0 || K < 0) throw std::invalid_argument("series shape needs n >= 0 and K >= 0");
    prefix_.push_back(0);
    for (int c = 0; c <= K; ++c) {
        if (n == 0) {
            if (c == 0) indices_.emplace_back();
        } else {
            MultiIndex cur(n, 0);
            enumerate(n, c, 0, cur, indices_);
        }
        prefix_.push_back(indices_.size());
    }
    for (const auto& k : indices_) {
        int t = 0;
        for (int x : k) t += x;
        totals_.push_back(t);
    }
    shift_.resize(indices_.size() * static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < indices_.size(); ++p) {
        for (int j = 0; j < n; ++j) {
            MultiIndex k = indices_[p];
            ++k[j];
            shift_[p * n + j] = position(k);
        }
    }
    prod_start_.push_back(0);
    for (std::size_t a = 0; a < indices_.size(); ++a) {
        for (std::size_t b = 0; b < prefix(K - totals_[a]); ++b) {
            MultiIndex k = indices_[a];
            for (int j = 0; j < n; ++j) k[j] += indices_[b][j];
            prod_.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(position(k))});
        }
        prod_start_.push_back(prod_.size());
    }
}

std::size_t SeriesShape::prefix(int c) const {
    if (c < 0) return 0;
    if (c > K_) return indices_.size();
    return prefix_[c + 1];
}

std::size_t SeriesShape::position(const MultiIndex& k) const {
    if (static_cast<int>(k.size()) != n_) throw std::invalid_argument("multi-index arity mismatch");
    int t = 0;
    for (int x : k) {
        if (x < 0) return indices_.size();
        t += x;
    }
    if (t > K_) return indices_.size();
    auto lo = indices_.begin() + static_cast<std::ptrdiff_t>(prefix(t - 1));
    auto hi = indices_.begin() + static_cast<std::ptrdiff_t>(prefix(t));
    auto it = std::lower_bound(lo, hi, k, [](const MultiIndex& a, const MultiIndex& b) { return a > b; });
    return static_cast<std::size_t>(it - indices_.begin());
}

std::shared_ptr<const SeriesShape> SeriesShape::get(int n, int K) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const SeriesShape>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, K}];
    if (!slot) slot = std::make_shared<const SeriesShape>(n, K);
    return slot;
}

double factorial(int k) {
    double r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

Rational factorial_exact(int k) {
    Rational r(1);
    for (int i = 2; i <= k; ++i) r *= Rational(i);
    return r;
}

}  // namespace mmwb
