#include "mmwb/fluctuation.hpp"

namespace mmwb {

template <Field F>
OperatorContext<F>::OperatorContext(const SeriesMoments<F>& mu) : mu_(mu) {}

template <Field F>
Series<F> OperatorContext<F>::times(const Series<F>& a, const Series<F>& b, int c) const {
    Series<F> r;
    if (!a.has_shape() || !b.has_shape()) return r;
    if (a.min_order() + b.min_order() > c) return r;
    r.add_product(a, b);
    return c >= order() ? r : r.truncated(c);
}

template <Field F>
Series<F> OperatorContext<F>::mu_word(const std::string& w, int c) const {
    if (c < 0) return {};
    return mu_.upto(Monomial(w), c);
}

template <Field F>
void OperatorContext<F>::prune(SPoly<F>& p, int c) {
    SPoly<F> out;
    for (const auto& [w, a] : p) {
        if (a.min_order() > c) continue;
        out.add(w, a.truncated(c));
    }
    p = std::move(out);
}

template <Field F>
Series<F> OperatorContext<F>::mu(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    for (const auto& [w, a] : p) {
        int o = a.min_order();
        if (o > c) continue;
        acc += times(a, mu_word(w.letters(), c - o), c);
    }
    return acc;
}

template <Field F>
const std::vector<typename OperatorContext<F>::Xi1Term>& OperatorContext<F>::xi1_of(const std::string& w) const {
    std::lock_guard guard(lock_);
    auto it = xi1_cache_.find(w);
    if (it != xi1_cache_.end()) return it->second;
    std::vector<Xi1Term> terms;
    const Potential& V = potential();
    Rational inv_deg(1, static_cast<long long>(w.size()));
    for (std::size_t p = 0; p < w.size(); ++p) {
        int k = static_cast<unsigned char>(w[p]);
        for (int j = 0; j < V.size(); ++j) {
            const Monomial& q = V.term(j).q;
            for (std::size_t a = 0; a < q.degree(); ++a) {
                if (q[a] != k) continue;
                std::string word = w.substr(0, p) + q.sub(a + 1).letters() + q.sub(0, a).letters() + w.substr(p + 1);
                if (word.empty()) continue;  // Pi
                terms.push_back({std::move(word), j, inv_deg});
            }
        }
    }
    return xi1_cache_.emplace(w, std::move(terms)).first->second;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi1(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out;
    F sign = flip_xi1_ ? F(-1) : F(1);
    for (const auto& [w, a] : p) {
        if (w.empty() || a.min_order() + 1 > c) continue;
        for (const auto& t : xi1_of(w.letters())) out.add(Monomial(t.word), a.times_var(t.j) * (from_rational<F>(t.factor) * sign));
    }
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi2(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out;
    for (const auto& [w, a] : p) {
        int o = a.min_order();
        if (w.empty() || o > c) continue;
        Series<F> ad = a * from_rational<F>(Rational(1, static_cast<long long>(w.degree())));
        const std::string& s = w.letters();
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            char k = s[pos];
            std::string u = s.substr(pos + 1) + s.substr(0, pos);
            for (std::size_t r = 0; r < u.size(); ++r) {
                if (u[r] != k) continue;
                std::string A = u.substr(0, r), B = u.substr(r + 1);
                if (!B.empty()) out.add(Monomial(B), times(ad, mu_word(A, c - o), c));
                if (!A.empty()) out.add(Monomial(A), times(ad, mu_word(B, c - o), c));
            }
        }
    }
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi0(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out = pi(p) - xi2(p, c);
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out = xi0(p, c) + xi1(p, c);
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi0_inverse(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> acc = pi(p);
    prune(acc, c);
    SPoly<F> term = acc;
    while (!term.is_zero()) {
        term = xi2(term, c);
        acc += term;
    }
    return acc;
}

template <Field F>
SPoly<F> OperatorContext<F>::xi_inverse(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> term = xi0_inverse(p, c);
    SPoly<F> acc = term;
    // Each Xi_1 raises the t-order by one, so c + 1 rounds are exact.
    for (int n = 0; n <= c && !term.is_zero(); ++n) {
        term = -xi0_inverse(xi1(term, c), c);
        acc += term;
    }
    return acc;
}

template <Field F>
SPoly<F> OperatorContext<F>::xibar1(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out;
    const Potential& V = potential();
    for (const auto& [w, a] : p) {
        if (a.min_order() + 1 > c) continue;
        const std::string& s = w.letters();
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            int k = static_cast<unsigned char>(s[pos]);
            for (int j = 0; j < V.size(); ++j) {
                const Monomial& q = V.term(j).q;
                for (std::size_t b = 0; b < q.degree(); ++b) {
                    if (q[b] != k) continue;
                    std::string word = s.substr(0, pos) + q.sub(b + 1).letters() + q.sub(0, b).letters() + s.substr(pos + 1);
                    out.add(Monomial(word), a.times_var(j));
                }
            }
        }
    }
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xibar2(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out;
    for (const auto& [w, a] : p) {
        int o = a.min_order();
        if (o > c) continue;
        Series<F> twice = a * F(2);
        const std::string& s = w.letters();
        for (std::size_t x = 0; x < s.size(); ++x)
            for (std::size_t y = x + 1; y < s.size(); ++y) {
                if (s[x] != s[y]) continue;
                out.add(Monomial(s.substr(0, x) + s.substr(y + 1)), times(twice, mu_word(s.substr(x + 1, y - x - 1), c - o), c));
            }
    }
    prune(out, c);
    return out;
}

template <Field F>
SPoly<F> OperatorContext<F>::xibar(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    SPoly<F> out = sigma_inverse(p) - xibar2(p, c) + xibar1(p, c);
    prune(out, c);
    return out;
}

template <Field F>
SVector<F> OperatorContext<F>::hess_apply(const SVector<F>& v, int budget) const {
    int c = clamp(budget);
    int m = colors();
    if (static_cast<int>(v.size()) != m) throw std::invalid_argument("vector length differs from the color count");
    SVector<F> out(static_cast<std::size_t>(m));
    const Potential& V = potential();
    for (int j = 0; j < V.size(); ++j) {
        const Monomial& q = V.term(j).q;
        for (std::size_t a = 0; a < q.degree(); ++a) {
            int l = q[a];
            std::string d = q.sub(a + 1).letters() + q.sub(0, a).letters();  // a word of D_l q_j
            for (std::size_t r = 0; r < d.size(); ++r) {
                int i = static_cast<unsigned char>(d[r]);
                for (const auto& [u, coef] : v[static_cast<std::size_t>(i)]) {
                    if (coef.min_order() + 1 > c) continue;
                    out[static_cast<std::size_t>(l)].add(Monomial(d.substr(0, r) + u.letters() + d.substr(r + 1)), coef.times_var(j));
                }
            }
        }
    }
    for (auto& x : out) prune(x, c);
    return out;
}

template <Field F>
SVector<F> OperatorContext<F>::gradient(const SPoly<F>& p) const {
    int m = colors();
    SVector<F> out(static_cast<std::size_t>(m));
    for (const auto& [w, a] : p) {
        const std::string& s = w.letters();
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            int k = static_cast<unsigned char>(s[pos]);
            check_color(k, m);
            out[static_cast<std::size_t>(k)].add(Monomial(s.substr(pos + 1) + s.substr(0, pos)), a);
        }
    }
    return out;
}

template <Field F>
Series<F> OperatorContext<F>::covariance_tensor_part(const SVector<F>& p, const SVector<F>& q, int budget) const {
    int c = clamp(budget);
    int m = colors();
    Series<F> acc(shape());
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            for (const auto& [u, a] : p[static_cast<std::size_t>(l)]) {
                const std::string& us = u.letters();
                for (const auto& [v, b] : q[static_cast<std::size_t>(k)]) {
                    int o = a.min_order() + b.min_order();
                    if (o > c) continue;
                    const std::string& vs = v.letters();
                    Series<F> inner(shape());
                    for (std::size_t x = 0; x < us.size(); ++x) {
                        if (static_cast<unsigned char>(us[x]) != k) continue;
                        for (std::size_t y = 0; y < vs.size(); ++y) {
                            if (static_cast<unsigned char>(vs[y]) != l) continue;
                            Series<F> m1 = mu_word(us.substr(0, x) + vs.substr(0, y), c - o);
                            if (m1.is_zero()) continue;
                            inner += times(m1, mu_word(us.substr(x + 1) + vs.substr(y + 1), c - o), c - o);
                        }
                    }
                    if (inner.is_zero()) continue;
                    acc += times(times(a, b, c), inner, c);
                }
            }
        }
    return acc;
}

template <Field F>
Series<F> OperatorContext<F>::covariance_potential_part(const SVector<F>& p, const SVector<F>& q, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    const Potential& V = potential();
    for (int j = 0; j < V.size(); ++j) {
        const std::string& s = V.term(j).q.letters();
        for (std::size_t x = 0; x < s.size(); ++x)
            for (std::size_t y = 0; y < s.size(); ++y) {
                if (x == y) continue;
                int k = static_cast<unsigned char>(s[x]), l = static_cast<unsigned char>(s[y]);
                for (const auto& [u, a] : p[static_cast<std::size_t>(k)])
                    for (const auto& [v, b] : q[static_cast<std::size_t>(l)]) {
                        int o = a.min_order() + b.min_order() + 1;
                        if (o > c) continue;
                        std::string word;
                        if (x < y) {
                            word = s.substr(0, x) + u.letters() + s.substr(x + 1, y - x - 1) + v.letters() + s.substr(y + 1);
                        } else {
                            word = s.substr(0, y) + v.letters() + s.substr(y + 1, x - y - 1) + u.letters() + s.substr(x + 1);
                        }
                        acc += times(times(a, b, c).times_var(j), mu_word(word, c - o), c);
                    }
            }
    }
    return acc;
}

template <Field F>
Series<F> OperatorContext<F>::covariance_diagonal_part(const SVector<F>& p, const SVector<F>& q, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    for (int k = 0; k < colors(); ++k)
        for (const auto& [u, a] : p[static_cast<std::size_t>(k)])
            for (const auto& [v, b] : q[static_cast<std::size_t>(k)]) {
                int o = a.min_order() + b.min_order();
                if (o > c) continue;
                acc += times(times(a, b, c), mu_word(u.letters() + v.letters(), c - o), c);
            }
    return acc;
}

template <Field F>
Series<F> OperatorContext<F>::covariance_C(const SVector<F>& p, const SVector<F>& q, int budget) const {
    int c = clamp(budget);
    if (static_cast<int>(p.size()) != colors() || static_cast<int>(q.size()) != colors())
        throw std::invalid_argument("vector length differs from the color count");
    return covariance_tensor_part(p, q, c) + covariance_potential_part(p, q, c) + covariance_diagonal_part(p, q, c);
}

template <Field F>
Series<F> OperatorContext<F>::mu_tensor_product(const STensor<F>& A, const STensor<F>& B, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    for (const auto& [ka, a] : A)
        for (const auto& [kb, b] : B) {
            int o = a.min_order() + b.min_order();
            if (o > c) continue;
            Series<F> m1 = mu_word(ka.first.letters() + kb.first.letters(), c - o);
            if (m1.is_zero()) continue;
            Series<F> inner = times(m1, mu_word(ka.second.letters() + kb.second.letters(), c - o), c - o);
            acc += times(times(a, b, c), inner, c);
        }
    return acc;
}

template <Field F>
SVector<F> OperatorContext<F>::transport(const Monomial& w, int budget) const {
    int c = clamp(budget);
    std::string key = cyclic_canonical(w).letters();
    {
        std::lock_guard guard(lock_);
        auto it = transport_cache_.find(key);
        if (it != transport_cache_.end() && it->second.first >= c) {
            SVector<F> v = it->second.second;
            for (auto& x : v) prune(x, c);
            return v;
        }
    }
    SVector<F> v = gradient(sigma(xi_inverse(pi(lift(Monomial(key))), c)));
    std::lock_guard guard(lock_);
    transport_cache_[key] = {c, v};
    return v;
}

template <Field F>
SVector<F> OperatorContext<F>::transport(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    return gradient(sigma(xi_inverse(pi(p), c)));
}

template <Field F>
Series<F> OperatorContext<F>::sigma2(const Monomial& p, const Monomial& q, int budget) const {
    int c = clamp(budget);
    if (p.empty() || q.empty()) return Series<F>(shape());
    auto key = std::make_pair(cyclic_canonical(p).letters(), cyclic_canonical(q).letters());
    {
        std::lock_guard guard(lock_);
        auto it = sigma2_cache_.find(key);
        if (it != sigma2_cache_.end() && it->second.first >= c) return it->second.second.truncated(c);
    }
    Series<F> s = covariance_C(transport(Monomial(key.first), c), transport(Monomial(key.second), c), c);
    std::lock_guard guard(lock_);
    sigma2_cache_[key] = {c, s};
    return s;
}

template <Field F>
Series<F> OperatorContext<F>::sigma2(const SPoly<F>& p, const SPoly<F>& q, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    for (const auto& [u, a] : p)
        for (const auto& [v, b] : q) {
            int o = a.min_order() + b.min_order();
            if (o > c) continue;
            acc += times(times(a, b, c), sigma2(u, v, c - o), c);
        }
    return acc;
}

template <Field F>
Series<F> OperatorContext<F>::sigma2(const STensor<F>& t, int budget) const {
    int c = clamp(budget);
    Series<F> acc(shape());
    for (const auto& [k, a] : t) {
        int o = a.min_order();
        if (o > c) continue;
        acc += times(a, sigma2(k.first, k.second, c - o), c);
    }
    return acc;
}

template <Field F>
Series<F> OperatorContext<F>::phi0(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    STensor<F> t;
    for (const auto& [w, a] : p) {
        if (a.min_order() > c) continue;
        const std::string& s = w.letters();
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            std::string u = s.substr(pos + 1) + s.substr(0, pos);
            for (std::size_t r = 0; r < u.size(); ++r)
                if (u[r] == s[pos]) t.add({Monomial(u.substr(0, r)), Monomial(u.substr(r + 1))}, a);
        }
    }
    return sigma2(t, c);
}

template <Field F>
Series<F> OperatorContext<F>::phi(const SPoly<F>& p, int budget) const {
    return phi0(sigma(p), budget);
}

template <Field F>
Series<F> OperatorContext<F>::second_order_correction(const SPoly<F>& p, int budget) const {
    int c = clamp(budget);
    return phi(xi_inverse(pi(p), c), c);
}

template class OperatorContext<Rational>;
template class OperatorContext<double>;

}  // namespace mmwb
