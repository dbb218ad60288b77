#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmwb/calculus.hpp"
#include "mmwb/potential.hpp"
#include "mmwb/series.hpp"

namespace mmwb {

enum class SolveMode { series, numeric };

struct SolverConfig {
    SolveMode mode = SolveMode::series;
    int K = 4;                  // series order
    int D_max = 12;             // moment degree cap
    double tol = 1e-13;         // numeric fixed-point tolerance
    int max_iter = 20000;
    double damping = 0.5;
    double moment_bound = 8.0;  // C in |mu(X_i^d)| <= C^d

    void validate(const Potential& V) const;
};

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MomentBoundViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegreeCapError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Formal-series solution of the Schwinger-Dyson equation
///   mu(X_i P) = sum_{P = R X_i S} mu(R) mu(S) - sum_j t_j mu(D_i q_j P),
/// one formal variable per potential term. Values are computed lazily and
/// exactly, order by order in t; a word of degree d at order c depends only on
/// shorter words at order c and arbitrary words at order c - 1.
template <Field F>
class SeriesMoments {
public:
    SeriesMoments(Potential V, int K, int D_max = 0);

    const Potential& potential() const { return V_; }
    int order() const { return K_; }
    const ShapePtr& shape() const { return shape_; }

    /// mu(w) to the full order K.
    Series<F> operator()(const Monomial& w) const;
    /// mu(w) with coefficients of order > c left at zero.
    Series<F> upto(const Monomial& w, int c) const;

    /// mu applied linearly to a polynomial with scalar coefficients.
    template <class C>
    Series<F> apply(const Polynomial<C>& p) const {
        Series<F> acc(shape_);
        for (const auto& [w, c] : p) acc += scale_coef((*this)(w), c);
        return acc;
    }
    /// mu applied to a polynomial whose coefficients are series.
    Series<F> apply_series(const Polynomial<Series<F>>& p) const;

    /// Number of stored canonical words.
    std::size_t stored() const;

    /// SD residual mu (x) mu(d_i P) - mu((X_i + D_i V) P) for a monomial P.
    Series<F> residual(int i, const Monomial& P) const;

private:
    struct Entry {
        Series<F> value;
        int done = -1;
    };

    template <class C>
    static Series<F> scale_coef(const Series<F>& s, const C& c) {
        if constexpr (std::is_same_v<C, F>) {
            return s * c;
        } else if constexpr (std::is_same_v<C, Rational>) {
            return s * from_rational<F>(c);
        } else if constexpr (std::is_same_v<C, GaussianRational>) {
            if (!c.im.is_zero()) throw std::domain_error("complex coefficient in a real series evaluation");
            return s * from_rational<F>(c.re);
        } else {
            return s * static_cast<F>(c);
        }
    }

    const Entry& ensure(const std::string& canonical, int c) const;
    void compute_order(const std::string& w, Entry& e, int c) const;

    Potential V_;
    int K_;
    ShapePtr shape_;
    // D_i q_j as lists of words, per color i and term j.
    std::vector<std::vector<std::vector<std::string>>> dv_;
    mutable std::unordered_map<std::string, Entry> memo_;
    mutable std::recursive_mutex mu_;
};

extern template class SeriesMoments<Rational>;
extern template class SeriesMoments<double>;

/// Numeric solution at the potential's coupling values by damped fixed-point
/// iteration over canonical words of degree <= D_max; longer words count as 0.
class NumericMoments {
public:
    NumericMoments(Potential V, const SolverConfig& cfg);

    const Potential& potential() const { return V_; }
    int max_degree() const { return D_max_; }
    int iterations() const { return iterations_; }
    double last_change() const { return last_change_; }

    Complex operator()(const Monomial& w) const;
    template <class C>
    Complex apply(const Polynomial<C>& p) const {
        Complex acc{};
        for (const auto& [w, c] : p) acc += to_complex(c) * (*this)(w);
        return acc;
    }
    /// SD residual at a monomial P with deg(X_i P) + deg V - 2 <= D_max.
    Complex residual(int i, const Monomial& P) const;

private:
    Complex lookup(const std::string& w) const;

    Potential V_;
    int D_max_;
    std::vector<Complex> t_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
    std::vector<Complex> values_;
    int iterations_ = 0;
    double last_change_ = 0;
};

/// Exact finite-N GUE expectation E[N^{-1} Tr q(A)] at V = 0 as a polynomial
/// in x = N^{-2}: coefficient g is the number of pairings of genus g.
struct WickPolynomial {
    std::vector<Rational> coeffs;  // index g

    Rational evaluate(const Rational& N) const;
    double evaluate(double N) const;
    std::string str() const;
    friend bool operator==(const WickPolynomial& a, const WickPolynomial& b);
};

WickPolynomial wick_finite_N(const Monomial& q, int cap = 20);

struct MomentsVsMapsReport {
    bool pass = true;
    std::string first_mismatch;
    Series<Rational> series;
    Series<Rational> maps;
};

/// Coefficientwise check of mu_t(P) against the genus-0 census generating
/// function of k_j stars of type q_j plus one star of type P.
MomentsVsMapsReport moments_vs_maps(const Potential& V, const Monomial& P, int K);

}  // namespace mmwb
