#include "mmwb/sdsolve.hpp"

#include <algorithm>
#include <cmath>

#include "mmwb/mapcount.hpp"

namespace mmwb {

void SolverConfig::validate(const Potential& V) const {
    if (K < 0) throw std::invalid_argument("series order K must be >= 0");
    if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
    if (!(damping > 0 && damping <= 1)) throw std::invalid_argument("damping must lie in (0, 1]");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (mode == SolveMode::numeric && D_max < std::max(2, V.degree()))
        throw DegreeCapError("D_max = " + std::to_string(D_max) + " is below the potential degree " + std::to_string(V.degree()));
}

namespace {

std::vector<std::vector<std::vector<std::string>>> cyclic_derivatives(const Potential& V) {
    int m = V.colors();
    std::vector<std::vector<std::vector<std::string>>> dv(static_cast<std::size_t>(m),
                                                          std::vector<std::vector<std::string>>(static_cast<std::size_t>(V.size())));
    for (int j = 0; j < V.size(); ++j) {
        const Monomial& q = V.term(j).q;
        for (std::size_t a = 0; a < q.degree(); ++a)
            dv[static_cast<std::size_t>(q[a])][static_cast<std::size_t>(j)].push_back(q.sub(a + 1).letters() + q.sub(0, a).letters());
    }
    return dv;
}

std::string canon(const std::string& w) { return cyclic_canonical(Monomial(w)).letters(); }

}  // namespace

template <Field F>
SeriesMoments<F>::SeriesMoments(Potential V, int K, int D_max)
    : V_(std::move(V)), K_(K), shape_(SeriesShape::get(V_.size(), K)), dv_(cyclic_derivatives(V_)) {
    if (K < 0) throw std::invalid_argument("series order K must be >= 0");
    for (int d = 1; d <= D_max; ++d)
        for (const auto& w : canonical_words(V_.colors(), d)) ensure(w.letters(), K_);
}

template <Field F>
const typename SeriesMoments<F>::Entry& SeriesMoments<F>::ensure(const std::string& w, int c) const {
    Entry& e = memo_[w];
    if (e.done >= c) return e;
    if (!e.value.has_shape()) e.value = Series<F>(shape_);
    if (w.empty()) {
        e.value[0] = F(1);
        e.done = K_;
        return e;
    }
    while (e.done < c) {
        compute_order(w, e, e.done + 1);
        ++e.done;
    }
    return e;
}

template <Field F>
void SeriesMoments<F>::compute_order(const std::string& w, Entry& e, int c) const {
    int i = static_cast<unsigned char>(w[0]);
    std::string P = w.substr(1);
    for (std::size_t k = 0; k < P.size(); ++k) {
        if (static_cast<unsigned char>(P[k]) != i) continue;
        const Entry& r = ensure(canon(P.substr(0, k)), c);
        const Entry& s = ensure(canon(P.substr(k + 1)), c);
        e.value.add_product_at_order(r.value, s.value, c);
    }
    if (c == 0 || i >= static_cast<int>(dv_.size())) return;
    const auto& sh = *shape_;
    for (std::size_t j = 0; j < dv_[static_cast<std::size_t>(i)].size(); ++j) {
        for (const auto& d : dv_[static_cast<std::size_t>(i)][j]) {
            const Entry& u = ensure(canon(d + P), c - 1);
            for (std::size_t p = sh.prefix(c - 2); p < sh.prefix(c - 1); ++p) {
                if (mmwb::is_zero(u.value[p])) continue;
                e.value[sh.shift(p, static_cast<int>(j))] -= u.value[p];
            }
        }
    }
}

template <Field F>
Series<F> SeriesMoments<F>::operator()(const Monomial& w) const {
    std::lock_guard lock(mu_);
    return ensure(cyclic_canonical(w).letters(), K_).value;
}

template <Field F>
Series<F> SeriesMoments<F>::upto(const Monomial& w, int c) const {
    std::lock_guard lock(mu_);
    c = std::min(c, K_);
    if (c < 0) return Series<F>(shape_);
    return ensure(cyclic_canonical(w).letters(), c).value.truncated(c);
}

template <Field F>
Series<F> SeriesMoments<F>::apply_series(const Polynomial<Series<F>>& p) const {
    Series<F> acc(shape_);
    for (const auto& [w, c] : p) {
        int lo = c.min_order();
        if (lo > K_) continue;
        acc.add_product(c, upto(w, K_ - lo));
    }
    return acc;
}

template <Field F>
std::size_t SeriesMoments<F>::stored() const {
    std::lock_guard lock(mu_);
    return memo_.size();
}

template <Field F>
Series<F> SeriesMoments<F>::residual(int i, const Monomial& P) const {
    check_color(i, V_.colors());
    Series<F> r(shape_);
    for (std::size_t k = 0; k < P.degree(); ++k)
        if (P[k] == i) r.add_product((*this)(P.sub(0, k)), (*this)(P.sub(k + 1)));
    r -= (*this)(Monomial::letter(i) * P);
    for (std::size_t j = 0; j < dv_[static_cast<std::size_t>(i)].size(); ++j)
        for (const auto& d : dv_[static_cast<std::size_t>(i)][j]) r -= (*this)(Monomial(d) * P).times_var(static_cast<int>(j));
    return r;
}

template class SeriesMoments<Rational>;
template class SeriesMoments<double>;

NumericMoments::NumericMoments(Potential V, const SolverConfig& cfg) : V_(std::move(V)), D_max_(cfg.D_max), t_(V_.coupling_values()) {
    cfg.validate(V_);
    for (int d = 1; d <= D_max_; ++d)
        for (const auto& w : canonical_words(V_.colors(), d)) {
            index_.emplace(w.letters(), words_.size());
            words_.push_back(w.letters());
        }
    values_.assign(words_.size(), Complex{});

    // Precomputed recursion structure: index -1 is the unit word, -2 a word above the cap.
    auto idx = [&](const std::string& w) -> long {
        if (w.empty()) return -1;
        if (static_cast<int>(w.size()) > D_max_) return -2;
        return static_cast<long>(index_.at(canon(w)));
    };
    auto dv = cyclic_derivatives(V_);
    struct Rule {
        std::vector<std::pair<long, long>> splits;
        std::vector<std::pair<std::size_t, long>> pot;
    };
    std::vector<Rule> rules(words_.size());
    for (std::size_t n = 0; n < words_.size(); ++n) {
        const std::string& w = words_[n];
        int i = static_cast<unsigned char>(w[0]);
        std::string P = w.substr(1);
        for (std::size_t k = 0; k < P.size(); ++k)
            if (static_cast<unsigned char>(P[k]) == i) rules[n].splits.emplace_back(idx(P.substr(0, k)), idx(P.substr(k + 1)));
        for (std::size_t j = 0; j < dv[static_cast<std::size_t>(i)].size(); ++j)
            for (const auto& d : dv[static_cast<std::size_t>(i)][j]) rules[n].pot.emplace_back(j, idx(d + P));
    }
    auto val = [&](long k) -> Complex {
        if (k == -1) return 1.0;
        if (k == -2) return 0.0;
        return values_[static_cast<std::size_t>(k)];
    };

    double a = cfg.damping;
    for (iterations_ = 1; iterations_ <= cfg.max_iter; ++iterations_) {
        double change = 0;
        for (std::size_t n = 0; n < words_.size(); ++n) {
            Complex rhs{};
            for (auto [r, s] : rules[n].splits) rhs += val(r) * val(s);
            for (auto [j, u] : rules[n].pot) rhs -= t_[j] * val(u);
            Complex next = (1 - a) * values_[n] + a * rhs;
            change = std::max(change, std::abs(next - values_[n]));
            values_[n] = next;
        }
        last_change_ = change;
        if (!std::isfinite(change)) throw NoConvergence("numeric Schwinger-Dyson iteration diverged");
        if (change < cfg.tol) break;
    }
    if (iterations_ > cfg.max_iter)
        throw NoConvergence("numeric Schwinger-Dyson iteration did not converge in " + std::to_string(cfg.max_iter) +
                            " sweeps (last change " + std::to_string(last_change_) + "); couplings likely outside the perturbative regime");
    for (int i = 0; i < V_.colors(); ++i)
        for (int d = 1; d <= D_max_; ++d) {
            double v = std::abs(lookup(Monomial::power(i, d).letters()));
            if (v > std::pow(cfg.moment_bound, d))
                throw MomentBoundViolation("|mu(x" + std::to_string(i + 1) + "^" + std::to_string(d) + ")| = " + std::to_string(v) +
                                           " exceeds C^d with C = " + std::to_string(cfg.moment_bound));
        }
}

Complex NumericMoments::lookup(const std::string& w) const {
    if (w.empty()) return 1.0;
    if (static_cast<int>(w.size()) > D_max_) return 0.0;
    return values_[index_.at(canon(w))];
}

Complex NumericMoments::operator()(const Monomial& w) const {
    if (static_cast<int>(w.degree()) > D_max_)
        throw DegreeCapError("moment of degree " + std::to_string(w.degree()) + " requested above D_max = " + std::to_string(D_max_));
    if (w.max_letter() >= V_.colors()) throw ColorError("word uses a color outside the potential's range");
    return lookup(w.letters());
}

Complex NumericMoments::residual(int i, const Monomial& P) const {
    check_color(i, V_.colors());
    Complex r{};
    for (std::size_t k = 0; k < P.degree(); ++k)
        if (P[k] == i) r += (*this)(P.sub(0, k)) * (*this)(P.sub(k + 1));
    r -= (*this)(Monomial::letter(i) * P);
    for (int j = 0; j < V_.size(); ++j) {
        const Monomial& q = V_.term(j).q;
        for (std::size_t a = 0; a < q.degree(); ++a)
            if (q[a] == i) r -= t_[static_cast<std::size_t>(j)] * (*this)(q.sub(a + 1) * q.sub(0, a) * P);
    }
    return r;
}

Rational WickPolynomial::evaluate(const Rational& N) const {
    Rational x = Rational(1) / (N * N), acc, pw(1);
    for (const auto& c : coeffs) {
        acc += c * pw;
        pw *= x;
    }
    return acc;
}

double WickPolynomial::evaluate(double N) const {
    double x = 1.0 / (N * N), acc = 0, pw = 1;
    for (const auto& c : coeffs) {
        acc += c.to_double() * pw;
        pw *= x;
    }
    return acc;
}

std::string WickPolynomial::str() const {
    std::string out;
    for (std::size_t g = 0; g < coeffs.size(); ++g) {
        if (coeffs[g].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += coeffs[g].str();
        if (g > 0) out += "*N^-" + std::to_string(2 * g);
    }
    return out.empty() ? "0" : out;
}

bool operator==(const WickPolynomial& a, const WickPolynomial& b) {
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t g = 0; g < n; ++g) {
        Rational x = g < a.coeffs.size() ? a.coeffs[g] : Rational(0);
        Rational y = g < b.coeffs.size() ? b.coeffs[g] : Rational(0);
        if (!(x == y)) return false;
    }
    return true;
}

namespace {

// Sum over pairings sigma of N^{c(gamma sigma) - k - 1}, gamma the cyclic shift.
struct WickEnumerator {
    const std::string& w;
    std::vector<int> pair;
    std::vector<char> seen;
    std::vector<std::uint64_t> by_genus;

    explicit WickEnumerator(const std::string& word) : w(word), pair(word.size(), -1), seen(word.size(), 0) {}

    void leaf() {
        int L = static_cast<int>(w.size());
        std::fill(seen.begin(), seen.end(), 0);
        int cycles = 0;
        for (int p = 0; p < L; ++p) {
            if (seen[p]) continue;
            ++cycles;
            for (int x = p; !seen[x]; x = (pair[x] + 1) % L) seen[x] = 1;
        }
        int g2 = L / 2 + 1 - cycles;
        std::size_t g = static_cast<std::size_t>(g2 / 2);
        if (by_genus.size() <= g) by_genus.resize(g + 1, 0);
        ++by_genus[g];
    }

    void run(int p) {
        int L = static_cast<int>(w.size());
        while (p < L && pair[p] >= 0) ++p;
        if (p == L) {
            leaf();
            return;
        }
        for (int q = p + 1; q < L; ++q) {
            if (pair[q] >= 0 || w[q] != w[p]) continue;
            pair[p] = q;
            pair[q] = p;
            run(p + 1);
            pair[q] = -1;
        }
        pair[p] = -1;
    }
};

}  // namespace

WickPolynomial wick_finite_N(const Monomial& q, int cap) {
    if (static_cast<int>(q.degree()) > cap)
        throw CapExceeded("Wick sum over " + std::to_string(q.degree()) + " positions exceeds the cap of " + std::to_string(cap));
    WickPolynomial out;
    if (q.empty()) {
        out.coeffs = {Rational(1)};
        return out;
    }
    WickEnumerator e(q.letters());
    e.run(0);
    for (auto c : e.by_genus) out.coeffs.emplace_back(static_cast<long long>(c));
    return out;
}

MomentsVsMapsReport moments_vs_maps(const Potential& V, const Monomial& P, int K) {
    MomentsVsMapsReport r;
    SeriesMoments<Rational> mu(V, K);
    r.series = mu(P);
    if (P.empty()) {
        r.maps = Series<Rational>(mu.shape(), Rational(1));
    } else {
        r.maps = map_series(V, K, {P}, 0);
    }
    const auto& sh = *mu.shape();
    for (std::size_t p = 0; p < sh.size(); ++p) {
        if (!(r.series[p] == r.maps[p])) {
            r.pass = false;
            r.first_mismatch = "coefficient " + index_str(sh.index(p)) + ": series " + r.series[p].str() + " vs maps " + r.maps[p].str();
            break;
        }
    }
    return r;
}

}  // namespace mmwb
