#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>

#include "mmwb/monomial.hpp"
#include "mmwb/rational.hpp"
#include "mmwb/series.hpp"

namespace mmwb {

// Scalar multiples of coefficients by exact rationals, uniformly across the
// coefficient types used in the library.
inline Rational scaled(const Rational& c, const Rational& r) { return c * r; }
inline GaussianRational scaled(const GaussianRational& c, const Rational& r) { return {c.re * r, c.im * r}; }
inline double scaled(double c, const Rational& r) { return c * r.to_double(); }
inline Complex scaled(const Complex& c, const Rational& r) { return c * r.to_double(); }
template <Field F>
Series<F> scaled(const Series<F>& c, const Rational& r) {
    return c * from_rational<F>(r);
}

/// Sparse map from keys to nonzero coefficients.
template <class Key, class C>
class TermMap {
public:
    using map_type = std::map<Key, C>;
    using const_iterator = typename map_type::const_iterator;

    TermMap() = default;
    TermMap(const Key& k, C c) { add(k, std::move(c)); }

    const_iterator begin() const { return terms_.begin(); }
    const_iterator end() const { return terms_.end(); }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const map_type& terms() const { return terms_; }

    C coefficient(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C{} : it->second;
    }

    void add(const Key& k, const C& c) {
        if (mmwb::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (mmwb::is_zero(it->second)) terms_.erase(it);
        }
    }
    void add(const Key& k, C&& c) {
        if (mmwb::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(k, std::move(c));
        if (!inserted) {
            it->second += c;
            if (mmwb::is_zero(it->second)) terms_.erase(it);
        }
    }
    void set(const Key& k, C c) {
        if (mmwb::is_zero(c)) {
            terms_.erase(k);
        } else {
            terms_[k] = std::move(c);
        }
    }
    void erase(const Key& k) { terms_.erase(k); }

    TermMap& operator+=(const TermMap& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    TermMap& operator-=(const TermMap& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend TermMap operator+(TermMap a, const TermMap& b) { return a += b; }
    friend TermMap operator-(TermMap a, const TermMap& b) { return a -= b; }
    TermMap operator-() const {
        TermMap r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    TermMap scaled_by(const Rational& r) const {
        TermMap out;
        if (r.is_zero()) return out;
        for (const auto& [k, c] : terms_) out.add(k, mmwb::scaled(c, r));
        return out;
    }
    template <class S>
    TermMap times(const S& s) const {
        TermMap out;
        for (const auto& [k, c] : terms_) out.add(k, c * s);
        return out;
    }
    template <class Fn>
    auto map_coefficients(Fn&& f) const {
        using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
        TermMap<Key, D> out;
        for (const auto& [k, c] : terms_) out.add(k, f(c));
        return out;
    }

    friend bool operator==(const TermMap& a, const TermMap& b) { return a.terms_ == b.terms_; }

private:
    map_type terms_;
};

template <class C>
using Polynomial = TermMap<Monomial, C>;
using TensorKey = std::pair<Monomial, Monomial>;
template <class C>
using TensorPolynomial = TermMap<TensorKey, C>;
using TripleKey = std::array<Monomial, 3>;
template <class C>
using TripleTensorPolynomial = TermMap<TripleKey, C>;

template <class Key, class C>
bool is_zero(const TermMap<Key, C>& p) {
    return p.is_zero();
}

template <class C>
Polynomial<C> constant(C c) {
    return Polynomial<C>(Monomial(), std::move(c));
}

template <class C>
Polynomial<C> operator*(const Polynomial<C>& a, const Polynomial<C>& b) {
    Polynomial<C> out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add(ka * kb, ca * cb);
    return out;
}

template <class C>
std::size_t degree(const Polynomial<C>& p) {
    std::size_t d = 0;
    for (const auto& [k, c] : p) d = std::max(d, k.degree());
    return d;
}

template <class C>
std::string to_string(const Polynomial<C>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : p) {
        if (!out.empty()) out += " + ";
        std::string cs = to_string(c);
        if (k.empty()) {
            out += cs;
        } else if (cs == "1") {
            out += k.str();
        } else {
            out += (cs.find_first_of("+ ") != std::string::npos ? "(" + cs + ")" : cs) + "*" + k.str();
        }
    }
    return out;
}

template <class C>
std::string to_string(const TensorPolynomial<C>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : p) {
        if (!out.empty()) out += " + ";
        out += to_string(c) + "*(" + k.first.str() + " (x) " + k.second.str() + ")";
    }
    return out;
}

/// Converts coefficients between representations.
template <class D, class C>
Polynomial<D> convert_poly(const Polynomial<C>& p) {
    Polynomial<D> out;
    for (const auto& [k, c] : p) {
        if constexpr (std::is_same_v<D, Complex>) {
            out.add(k, to_complex(c));
        } else if constexpr (std::is_same_v<D, double>) {
            out.add(k, to_complex(c).real());
        } else {
            out.add(k, D(c));
        }
    }
    return out;
}

}  // namespace mmwb
