#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mmwb/polynomial.hpp"

namespace mmwb {

class ColorError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline void check_color(int i, int m) {
    if (i < 0 || i >= m)
        throw ColorError("color " + std::to_string(i + 1) + " outside 1.." + std::to_string(m));
}

constexpr int kAnyColors = 255;

template <class C>
Polynomial<C> involution(const Polynomial<C>& p) {
    Polynomial<C> out;
    for (const auto& [k, c] : p) out.add(k.reversed(), conjugate(c));
    return out;
}

/// d_i P = sum over P = R X_i S of R (x) S.
template <class C>
TensorPolynomial<C> partial(int i, const Polynomial<C>& p, int m = kAnyColors) {
    check_color(i, m);
    TensorPolynomial<C> out;
    for (const auto& [w, c] : p)
        for (std::size_t k = 0; k < w.degree(); ++k)
            if (w[k] == i) out.add({w.sub(0, k), w.sub(k + 1)}, c);
    return out;
}

/// D_i P = sum over P = R X_i S of S R.
template <class C>
Polynomial<C> cyclic_derivative(int i, const Polynomial<C>& p, int m = kAnyColors) {
    check_color(i, m);
    Polynomial<C> out;
    for (const auto& [w, c] : p)
        for (std::size_t k = 0; k < w.degree(); ++k)
            if (w[k] == i) out.add(w.sub(k + 1) * w.sub(0, k), c);
    return out;
}

/// d_i^2 P = 2 sum over P = R X_i S X_i Q of R (x) S (x) Q.
template <class C>
TripleTensorPolynomial<C> partial2(int i, const Polynomial<C>& p, int m = kAnyColors) {
    check_color(i, m);
    TripleTensorPolynomial<C> out;
    for (const auto& [w, c] : p) {
        C twice = c + c;
        for (std::size_t a = 0; a < w.degree(); ++a) {
            if (w[a] != i) continue;
            for (std::size_t b = a + 1; b < w.degree(); ++b)
                if (w[b] == i) out.add({w.sub(0, a), w.sub(a + 1, b - a - 1), w.sub(b + 1)}, twice);
        }
    }
    return out;
}

/// (A (x) B) # R = A R B.
template <class C>
Polynomial<C> sharp(const TensorPolynomial<C>& t, const Polynomial<C>& r) {
    Polynomial<C> out;
    for (const auto& [k, c] : t)
        for (const auto& [w, d] : r) out.add(k.first * w * k.second, c * d);
    return out;
}

/// (A (x) B (x) C) # (S, T) = A S B T C.
template <class C>
Polynomial<C> sharp2(const TripleTensorPolynomial<C>& t, const Polynomial<C>& s, const Polynomial<C>& r) {
    Polynomial<C> out;
    for (const auto& [k, c] : t)
        for (const auto& [ws, cs] : s)
            for (const auto& [wr, cr] : r) out.add(k[0] * ws * k[1] * wr * k[2], c * cs * cr);
    return out;
}

/// Sigma: q -> q / deg q, constants -> 0.
template <class C>
Polynomial<C> sigma(const Polynomial<C>& p) {
    Polynomial<C> out;
    for (const auto& [w, c] : p)
        if (!w.empty()) out.add(w, scaled(c, Rational(1, static_cast<long long>(w.degree()))));
    return out;
}

/// Sigma^{-1}: q -> deg q * q (kills constants).
template <class C>
Polynomial<C> sigma_inverse(const Polynomial<C>& p) {
    Polynomial<C> out;
    for (const auto& [w, c] : p)
        if (!w.empty()) out.add(w, scaled(c, Rational(static_cast<long long>(w.degree()))));
    return out;
}

/// Pi: removes the constant term.
template <class C>
Polynomial<C> pi(const Polynomial<C>& p) {
    Polynomial<C> out = p;
    out.erase(Monomial());
    return out;
}

template <class C>
double norm_A(const Polynomial<C>& p, double A) {
    if (!(A > 1.0)) throw std::domain_error("norm_A requires A > 1");
    double s = 0;
    for (const auto& [w, c] : p)
        if (!w.empty()) s += magnitude(c) * std::pow(A, static_cast<double>(w.degree()));
    return s;
}

/// (A (x) B) x (C (x) D) = AC (x) BD.
template <class C>
TensorPolynomial<C> tensor_product(const TensorPolynomial<C>& a, const TensorPolynomial<C>& b) {
    TensorPolynomial<C> out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add({ka.first * kb.first, ka.second * kb.second}, ca * cb);
    return out;
}

template <class C>
TensorPolynomial<C> transpose(const TensorPolynomial<C>& t) {
    TensorPolynomial<C> out;
    for (const auto& [k, c] : t) out.add({k.second, k.first}, c);
    return out;
}

/// (P (x) 1) T.
template <class C>
TensorPolynomial<C> left_multiply(const Polynomial<C>& p, const TensorPolynomial<C>& t) {
    TensorPolynomial<C> out;
    for (const auto& [w, c] : p)
        for (const auto& [k, d] : t) out.add({w * k.first, k.second}, c * d);
    return out;
}

/// T (1 (x) Q).
template <class C>
TensorPolynomial<C> right_multiply(const TensorPolynomial<C>& t, const Polynomial<C>& q) {
    TensorPolynomial<C> out;
    for (const auto& [k, d] : t)
        for (const auto& [w, c] : q) out.add({k.first, k.second * w}, d * c);
    return out;
}

/// Multiplication map A (x) B -> A B.
template <class C>
Polynomial<C> multiply_legs(const TensorPolynomial<C>& t) {
    Polynomial<C> out;
    for (const auto& [k, c] : t) out.add(k.first * k.second, c);
    return out;
}

}  // namespace mmwb
