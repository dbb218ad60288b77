#include "mmwb/recursions.hpp"

namespace mmwb {

namespace {

std::vector<std::vector<std::vector<std::string>>> cyclic_derivative_words(const Potential& V) {
    std::vector<std::vector<std::vector<std::string>>> dv(static_cast<std::size_t>(V.colors()),
                                                          std::vector<std::vector<std::string>>(static_cast<std::size_t>(V.size())));
    for (int j = 0; j < V.size(); ++j) {
        const Monomial& q = V.term(j).q;
        for (std::size_t a = 0; a < q.degree(); ++a)
            dv[static_cast<std::size_t>(q[a])][static_cast<std::size_t>(j)].push_back(q.sub(a + 1).letters() + q.sub(0, a).letters());
    }
    return dv;
}

std::string canon(const std::string& w) { return cyclic_canonical(Monomial(w)).letters(); }

// Adds the order-c part of s to out.
template <Field F>
void add_at_order(Series<F>& out, const Series<F>& s, int c) {
    const auto& sh = *out.shape();
    for (std::size_t p = sh.prefix(c - 1); p < sh.prefix(c); ++p)
        if (!is_zero(s[p])) out[p] += s[p];
}

// out -= t_j * (order c-1 part of s).
template <Field F>
void subtract_shifted(Series<F>& out, const Series<F>& s, int c, int j) {
    const auto& sh = *out.shape();
    for (std::size_t p = sh.prefix(c - 2); p < sh.prefix(c - 1); ++p)
        if (!is_zero(s[p])) out[sh.shift(p, j)] -= s[p];
}

}  // namespace

template <Field F>
TwoStarPlanar<F>::TwoStarPlanar(const SeriesMoments<F>& mu) : mu_(mu), dv_(cyclic_derivative_words(mu.potential())) {}

template <Field F>
const typename TwoStarPlanar<F>::Entry& TwoStarPlanar<F>::ensure(const std::string& p, const std::string& q, int c) const {
    Entry& e = memo_[p + '\x7f' + q];
    if (e.done >= c) return e;
    if (!e.value.has_shape()) e.value = Series<F>(mu_.shape());
    if (p.empty() || q.empty()) {
        e.done = mu_.order();
        return e;
    }
    while (e.done < c) {
        compute_order(p, q, e, e.done + 1);
        ++e.done;
    }
    return e;
}

template <Field F>
void TwoStarPlanar<F>::compute_order(const std::string& w, const std::string& q, Entry& e, int c) const {
    int i = static_cast<unsigned char>(w[0]);
    std::string P = w.substr(1);
    for (std::size_t k = 0; k < P.size(); ++k) {
        if (static_cast<unsigned char>(P[k]) != i) continue;
        std::string R = P.substr(0, k), S = P.substr(k + 1);
        if (!R.empty()) e.value.add_product_at_order(mu_.upto(Monomial(S), c), ensure(canon(R), q, c).value, c);
        if (!S.empty()) e.value.add_product_at_order(mu_.upto(Monomial(R), c), ensure(canon(S), q, c).value, c);
    }
    if (c >= 1 && i < static_cast<int>(dv_.size())) {
        for (std::size_t j = 0; j < dv_[static_cast<std::size_t>(i)].size(); ++j)
            for (const auto& d : dv_[static_cast<std::size_t>(i)][j])
                subtract_shifted(e.value, ensure(canon(d + P), q, c - 1).value, c, static_cast<int>(j));
    }
    for (std::size_t a = 0; a < q.size(); ++a) {
        if (static_cast<unsigned char>(q[a]) != i) continue;
        add_at_order(e.value, mu_.upto(Monomial(q.substr(a + 1) + q.substr(0, a) + P), c), c);
    }
}

template <Field F>
Series<F> TwoStarPlanar<F>::operator()(const Monomial& P, const Monomial& Q) const {
    return upto(P, Q, mu_.order());
}

template <Field F>
Series<F> TwoStarPlanar<F>::upto(const Monomial& P, const Monomial& Q, int c) const {
    std::lock_guard guard(lock_);
    c = std::min(c, mu_.order());
    if (c < 0) return Series<F>(mu_.shape());
    return ensure(cyclic_canonical(P).letters(), cyclic_canonical(Q).letters(), c).value.truncated(c);
}

template <Field F>
OneStarGenus1<F>::OneStarGenus1(const TwoStarPlanar<F>& M) : M_(M), dv_(cyclic_derivative_words(M.moments().potential())) {}

template <Field F>
const typename OneStarGenus1<F>::Entry& OneStarGenus1<F>::ensure(const std::string& p, int c) const {
    Entry& e = memo_[p];
    if (e.done >= c) return e;
    if (!e.value.has_shape()) e.value = Series<F>(M_.moments().shape());
    if (p.empty()) {
        e.done = M_.moments().order();
        return e;
    }
    while (e.done < c) {
        compute_order(p, e, e.done + 1);
        ++e.done;
    }
    return e;
}

template <Field F>
void OneStarGenus1<F>::compute_order(const std::string& w, Entry& e, int c) const {
    const auto& mu = M_.moments();
    int i = static_cast<unsigned char>(w[0]);
    std::string P = w.substr(1);
    for (std::size_t k = 0; k < P.size(); ++k) {
        if (static_cast<unsigned char>(P[k]) != i) continue;
        std::string R = P.substr(0, k), S = P.substr(k + 1);
        if (!R.empty()) e.value.add_product_at_order(mu.upto(Monomial(S), c), ensure(canon(R), c).value, c);
        if (!S.empty()) e.value.add_product_at_order(mu.upto(Monomial(R), c), ensure(canon(S), c).value, c);
        if (!R.empty() && !S.empty()) add_at_order(e.value, M_.upto(Monomial(R), Monomial(S), c), c);
    }
    if (c >= 1 && i < static_cast<int>(dv_.size())) {
        for (std::size_t j = 0; j < dv_[static_cast<std::size_t>(i)].size(); ++j)
            for (const auto& d : dv_[static_cast<std::size_t>(i)][j])
                subtract_shifted(e.value, ensure(canon(d + P), c - 1).value, c, static_cast<int>(j));
    }
}

template <Field F>
Series<F> OneStarGenus1<F>::operator()(const Monomial& P) const {
    std::lock_guard guard(lock_);
    return ensure(cyclic_canonical(P).letters(), M_.moments().order()).value;
}

template class TwoStarPlanar<Rational>;
template class TwoStarPlanar<double>;
template class OneStarGenus1<Rational>;
template class OneStarGenus1<double>;

Series<Rational> two_star_planar(const Monomial& P, const Monomial& Q, const Potential& V, int K) {
    SeriesMoments<Rational> mu(V, K);
    TwoStarPlanar<Rational> M(mu);
    return M(P, Q);
}

Series<Rational> one_star_genus1(const Monomial& P, const Potential& V, int K) {
    SeriesMoments<Rational> mu(V, K);
    TwoStarPlanar<Rational> M(mu);
    OneStarGenus1<Rational> M1(M);
    return M1(P);
}

}  // namespace mmwb
