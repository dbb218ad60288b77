#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwb/rational.hpp"

namespace mmwb {

using MultiIndex = std::vector<int>;

/// "(k1,...,kn)".
std::string index_str(const MultiIndex& k);

/// Index layout shared by all series in n variables truncated at total order K.
///
/// Multi-indices are listed by total order, then lexicographically descending
/// in the first variable, so the coefficients of order <= c form a prefix.
class SeriesShape {
public:
    static std::shared_ptr<const SeriesShape> get(int n, int K);

    int vars() const { return n_; }
    int order() const { return K_; }
    std::size_t size() const { return indices_.size(); }
    /// Number of multi-indices of total order <= c.
    std::size_t prefix(int c) const;
    const MultiIndex& index(std::size_t pos) const { return indices_[pos]; }
    int total(std::size_t pos) const { return totals_[pos]; }
    /// Position of a multi-index, or size() if it exceeds the truncation.
    std::size_t position(const MultiIndex& k) const;
    /// Position of k + e_j, or size() if truncated away.
    std::size_t shift(std::size_t pos, int j) const { return shift_[pos * n_ + j]; }

    struct Product {
        std::uint32_t b;
        std::uint32_t out;
    };
    /// For a given left position a, all (b, a+b) with |a|+|b| <= K.
    std::span<const Product> products(std::size_t a) const {
        return {prod_.data() + prod_start_[a], prod_.data() + prod_start_[a + 1]};
    }

    SeriesShape(int n, int K);

private:
    int n_;
    int K_;
    std::vector<MultiIndex> indices_;
    std::vector<int> totals_;
    std::vector<std::size_t> prefix_;
    std::vector<std::size_t> shift_;
    std::vector<Product> prod_;
    std::vector<std::size_t> prod_start_;
};

using ShapePtr = std::shared_ptr<const SeriesShape>;

/// Truncated multivariate power series with coefficients in F.
///
/// A default-constructed series (no shape) is the zero series and combines
/// with series of any shape.
template <Field F>
class Series {
public:
    Series() = default;
    explicit Series(ShapePtr shape) : shape_(std::move(shape)), c_(shape_->size(), F(0)) {}
    Series(ShapePtr shape, const F& constant) : Series(std::move(shape)) { c_[0] = constant; }

    static Series monomial(ShapePtr shape, const MultiIndex& k, const F& coef) {
        Series s(shape);
        std::size_t p = shape->position(k);
        if (p < s.c_.size()) s.c_[p] = coef;
        return s;
    }

    const ShapePtr& shape() const { return shape_; }
    bool has_shape() const { return static_cast<bool>(shape_); }
    std::size_t size() const { return c_.size(); }
    const F& operator[](std::size_t p) const { return c_[p]; }
    F& operator[](std::size_t p) { return c_[p]; }
    const std::vector<F>& coeffs() const { return c_; }

    F coefficient(const MultiIndex& k) const {
        if (!shape_) return F(0);
        std::size_t p = shape_->position(k);
        return p < c_.size() ? c_[p] : F(0);
    }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!mmwb::is_zero(x)) return false;
        return true;
    }

    /// Smallest total order carrying a nonzero coefficient; K+1 for zero.
    int min_order() const {
        if (!shape_) return 1 << 20;
        for (std::size_t p = 0; p < c_.size(); ++p)
            if (!mmwb::is_zero(c_[p])) return shape_->total(p);
        return shape_->order() + 1;
    }

    F constant() const { return c_.empty() ? F(0) : c_[0]; }

    Complex evaluate(std::span<const Complex> t) const {
        Complex acc{};
        if (!shape_) return acc;
        for (std::size_t p = 0; p < c_.size(); ++p) {
            if (mmwb::is_zero(c_[p])) continue;
            Complex term = to_complex(c_[p]);
            const auto& k = shape_->index(p);
            for (int j = 0; j < shape_->vars(); ++j)
                for (int e = 0; e < k[j]; ++e) term *= t[j];
            acc += term;
        }
        return acc;
    }

    /// Drops coefficients of total order > c.
    Series truncated(int c) const {
        Series r = *this;
        if (!shape_) return r;
        for (std::size_t p = shape_->prefix(c); p < r.c_.size(); ++p) r.c_[p] = F(0);
        return r;
    }

    /// Multiplies by t_j (shift of every index by e_j).
    Series times_var(int j) const {
        if (!shape_) return {};
        Series r(shape_);
        for (std::size_t p = 0; p < c_.size(); ++p) {
            if (mmwb::is_zero(c_[p])) continue;
            std::size_t q = shape_->shift(p, j);
            if (q < r.c_.size()) r.c_[q] = c_[p];
        }
        return r;
    }

    Series& operator+=(const Series& o) {
        if (!o.shape_) return *this;
        if (!shape_) return *this = o;
        check(o);
        for (std::size_t p = 0; p < c_.size(); ++p)
            if (!mmwb::is_zero(o.c_[p])) c_[p] += o.c_[p];
        return *this;
    }
    Series& operator-=(const Series& o) {
        if (!o.shape_) return *this;
        if (!shape_) {
            *this = o;
            for (auto& x : c_) x = -x;
            return *this;
        }
        check(o);
        for (std::size_t p = 0; p < c_.size(); ++p)
            if (!mmwb::is_zero(o.c_[p])) c_[p] -= o.c_[p];
        return *this;
    }
    Series& operator*=(const F& s) {
        if (mmwb::is_zero(s)) {
            for (auto& x : c_) x = F(0);
            return *this;
        }
        for (auto& x : c_)
            if (!mmwb::is_zero(x)) x *= s;
        return *this;
    }
    Series& operator/=(const F& s) {
        for (auto& x : c_)
            if (!mmwb::is_zero(x)) x /= s;
        return *this;
    }

    /// this += a * b, truncated.
    void add_product(const Series& a, const Series& b) {
        if (!a.shape_ || !b.shape_) return;
        if (!shape_) *this = Series(a.shape_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (mmwb::is_zero(a.c_[i])) continue;
            for (auto pr : a.shape_->products(i)) {
                const F& y = b.c_[pr.b];
                if (!mmwb::is_zero(y)) c_[pr.out] += a.c_[i] * y;
            }
        }
    }

    /// this += a * b restricted to output coefficients of exactly total order c.
    void add_product_at_order(const Series& a, const Series& b, int c) {
        if (!a.shape_ || !b.shape_) return;
        if (!shape_) *this = Series(a.shape_);
        const auto& sh = *a.shape_;
        for (std::size_t i = 0; i < sh.prefix(c); ++i) {
            if (mmwb::is_zero(a.c_[i])) continue;
            for (auto pr : sh.products(i)) {
                if (sh.total(pr.out) != c) continue;
                const F& y = b.c_[pr.b];
                if (!mmwb::is_zero(y)) c_[pr.out] += a.c_[i] * y;
            }
        }
    }

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        r.add_product(a, b);
        return r;
    }
    friend Series operator*(Series a, const F& s) { return a *= s; }
    friend Series operator*(const F& s, Series a) { return a *= s; }
    Series operator-() const {
        Series r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend bool operator==(const Series& a, const Series& b) {
        if (!a.shape_ || !b.shape_) return a.is_zero() && b.is_zero();
        return a.shape_ == b.shape_ && a.c_ == b.c_;
    }

    std::string str() const {
        if (!shape_ || is_zero()) return "0";
        std::string out;
        for (std::size_t p = 0; p < c_.size(); ++p) {
            if (mmwb::is_zero(c_[p])) continue;
            if (!out.empty()) out += " + ";
            out += to_string(c_[p]);
            const auto& k = shape_->index(p);
            for (std::size_t j = 0; j < k.size(); ++j) {
                if (k[j] == 0) continue;
                out += "*t" + std::to_string(j + 1);
                if (k[j] > 1) out += "^" + std::to_string(k[j]);
            }
        }
        return out;
    }

private:
    void check(const Series& o) const {
        if (shape_ != o.shape_) throw std::logic_error("series shape mismatch");
    }

    ShapePtr shape_;
    std::vector<F> c_;
};

template <Field F>
bool is_zero(const Series<F>& s) {
    return s.is_zero();
}

template <Field F>
std::string to_string(const Series<F>& s) {
    return s.str();
}

/// Converts exact coefficients to the target field.
template <Field F>
Series<F> convert(const Series<Rational>& s) {
    if constexpr (std::same_as<F, Rational>) {
        return s;
    } else {
        if (!s.has_shape()) return {};
        Series<F> r(s.shape());
        for (std::size_t p = 0; p < s.size(); ++p) r[p] = s[p].to_double();
        return r;
    }
}

double factorial(int k);
Rational factorial_exact(int k);

}  // namespace mmwb
