#pragma once

#include <mutex>
#include <string>
#include <unordered_map>

#include "mmwb/sdsolve.hpp"

namespace mmwb {

/// Planar two-star generating function M(P, Q) from the recursion
///   M(X_k P, Q) = M((I (x) mu + mu (x) I) d_k P, Q) - M(D_k V P, Q) + mu(D_k Q P),
/// with M(1, Q) = M(P, 1) = 0. Memoized on ordered canonical pairs, order by
/// order, so symmetry in (P, Q) is a checkable property rather than an input.
template <Field F>
class TwoStarPlanar {
public:
    explicit TwoStarPlanar(const SeriesMoments<F>& mu);

    const SeriesMoments<F>& moments() const { return mu_; }
    Series<F> operator()(const Monomial& P, const Monomial& Q) const;
    Series<F> upto(const Monomial& P, const Monomial& Q, int c) const;

private:
    struct Entry {
        Series<F> value;
        int done = -1;
    };
    const Entry& ensure(const std::string& p, const std::string& q, int c) const;
    void compute_order(const std::string& p, const std::string& q, Entry& e, int c) const;

    const SeriesMoments<F>& mu_;
    std::vector<std::vector<std::vector<std::string>>> dv_;
    mutable std::unordered_map<std::string, Entry> memo_;
    mutable std::recursive_mutex lock_;
};

/// Genus-one one-star generating function M^1(P) from
///   M^1(X_k P) = M^1((I (x) mu + mu (x) I) d_k P) - M^1(D_k V P) + sum_{P = R X_k S} M(R, S),
/// with M^1(1) = 0.
template <Field F>
class OneStarGenus1 {
public:
    explicit OneStarGenus1(const TwoStarPlanar<F>& M);

    Series<F> operator()(const Monomial& P) const;
    template <class C>
    Series<F> apply(const Polynomial<C>& p) const {
        Series<F> acc(M_.moments().shape());
        for (const auto& [w, c] : p) acc += (*this)(w) * from_rational<F>(c);
        return acc;
    }

private:
    struct Entry {
        Series<F> value;
        int done = -1;
    };
    const Entry& ensure(const std::string& p, int c) const;
    void compute_order(const std::string& p, Entry& e, int c) const;

    const TwoStarPlanar<F>& M_;
    std::vector<std::vector<std::vector<std::string>>> dv_;
    mutable std::unordered_map<std::string, Entry> memo_;
    mutable std::recursive_mutex lock_;
};

extern template class TwoStarPlanar<Rational>;
extern template class TwoStarPlanar<double>;
extern template class OneStarGenus1<Rational>;
extern template class OneStarGenus1<double>;

/// Convenience wrappers building a fresh solver.
Series<Rational> two_star_planar(const Monomial& P, const Monomial& Q, const Potential& V, int K);
Series<Rational> one_star_genus1(const Monomial& P, const Potential& V, int K);

}  // namespace mmwb
