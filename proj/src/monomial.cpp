#include "mmwb/monomial.hpp"

#include <algorithm>
#include <set>

namespace mmwb {

int Monomial::max_letter() const {
    int m = -1;
    for (char c : w_) m = std::max(m, static_cast<int>(static_cast<unsigned char>(c)));
    return m;
}

Monomial Monomial::rotated(std::size_t k) const {
    if (w_.empty()) return *this;
    k %= w_.size();
    return Monomial(w_.substr(k) + w_.substr(0, k));
}

int Monomial::count(int i) const {
    return static_cast<int>(std::count(w_.begin(), w_.end(), static_cast<char>(i)));
}

std::string Monomial::str() const {
    if (w_.empty()) return "1";
    std::string out;
    std::size_t k = 0;
    while (k < w_.size()) {
        std::size_t run = 1;
        while (k + run < w_.size() && w_[k + run] == w_[k]) ++run;
        if (!out.empty()) out += "*";
        out += "x" + std::to_string((*this)[k] + 1);
        if (run > 1) out += "^" + std::to_string(run);
        k += run;
    }
    return out;
}

Monomial cyclic_canonical(const Monomial& q) {
    const std::string& s = q.letters();
    std::size_t n = s.size();
    if (n <= 1) return q;
    std::string ss = s + s;
    std::string_view v(ss);
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r)
        if (v.substr(r, n) < v.substr(best, n)) best = r;
    return Monomial(ss.substr(best, n));
}

std::vector<Monomial> all_words(int m, int degree) {
    std::vector<Monomial> out;
    std::string w(static_cast<std::size_t>(degree), 0);
    if (degree == 0) return {Monomial()};
    if (m <= 0) return {};
    while (true) {
        out.emplace_back(w);
        int p = degree - 1;
        while (p >= 0 && w[p] == m - 1) {
            w[p] = 0;
            --p;
        }
        if (p < 0) break;
        ++w[p];
    }
    return out;
}

std::vector<Monomial> canonical_words(int m, int degree) {
    std::vector<Monomial> out;
    for (auto& w : all_words(m, degree))
        if (cyclic_canonical(w) == w) out.push_back(w);
    return out;
}

}  // namespace mmwb
