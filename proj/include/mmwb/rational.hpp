#pragma once

#include <complex>
#include <concepts>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mmwb {

/// Exact rational number.
///
/// Values whose normalized numerator and denominator fit in 64 bits are kept
/// inline; anything larger is promoted to a GMP rational and demoted again as
/// soon as it fits. The representation is always normalized (gcd 1, positive
/// denominator), so equality is structural.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long long n, long long d);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& o);
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&&) noexcept = default;
    ~Rational() = default;

    /// Parses "a", "a/b" or a finite decimal such as "-0.125" or "2.5e-3".
    static Rational parse(std::string_view text);

    bool is_zero() const { return !big_ && num_ == 0; }
    bool is_integer() const;
    int sign() const;

    mpq_class to_mpq() const;
    double to_double() const;
    std::string str() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator<(const Rational& a, const Rational& b);

private:
    void set_big(mpq_class q);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

/// Gaussian rational a + b·i with exact parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(long long r) : re(r) {}            // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str() const;

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    GaussianRational operator-() const { return {-re, -im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

using Complex = std::complex<double>;

// Uniform coefficient vocabulary used by the polynomial and series templates.

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Complex& x) { return x == Complex{}; }

inline Rational conjugate(const Rational& x) { return x; }
inline GaussianRational conjugate(const GaussianRational& x) { return {x.re, -x.im}; }
inline double conjugate(double x) { return x; }
inline Complex conjugate(const Complex& x) { return std::conj(x); }

inline double magnitude(const Rational& x) { return x.to_double() < 0 ? -x.to_double() : x.to_double(); }
inline double magnitude(const GaussianRational& x) { return std::abs(x.to_complex()); }
inline double magnitude(double x) { return x < 0 ? -x : x; }
inline double magnitude(const Complex& x) { return std::abs(x); }

inline Complex to_complex(const Rational& x) { return {x.to_double(), 0.0}; }
inline Complex to_complex(const GaussianRational& x) { return x.to_complex(); }
inline Complex to_complex(double x) { return {x, 0.0}; }
inline Complex to_complex(const Complex& x) { return x; }

inline std::string to_string(const Rational& x) { return x.str(); }
inline std::string to_string(const GaussianRational& x) { return x.str(); }
std::string to_string(double x);
std::string to_string(const Complex& x);

/// Scalar field used by the exact and floating backends.
template <class F>
concept Field = std::same_as<F, Rational> || std::same_as<F, double>;

template <Field F>
F from_rational(const Rational& r) {
    if constexpr (std::same_as<F, Rational>) {
        return r;
    } else {
        return r.to_double();
    }
}

}  // namespace mmwb
