#pragma once

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mmwb/recursions.hpp"
#include "mmwb/sdsolve.hpp"

namespace mmwb {

template <Field F>
using SPoly = Polynomial<Series<F>>;
template <Field F>
using SVector = std::vector<SPoly<F>>;
template <Field F>
using STensor = TensorPolynomial<Series<F>>;

/// Operators of the fluctuation theory built on a solved series state.
///
/// Every polynomial carries series coefficients in the formal couplings. Each
/// operation takes an order budget c <= K; coefficients above c are dropped
/// and moments are only requested to the order that can still contribute.
template <Field F>
class OperatorContext {
public:
    explicit OperatorContext(const SeriesMoments<F>& mu);

    const SeriesMoments<F>& moments() const { return mu_; }
    const Potential& potential() const { return mu_.potential(); }
    int order() const { return mu_.order(); }
    int colors() const { return mu_.potential().colors(); }
    const ShapePtr& shape() const { return mu_.shape(); }

    /// Mutation hook for the verification suite: flips the sign of Xi_1.
    void set_xi1_sign_flip(bool on) { flip_xi1_ = on; }

    // Lifting of scalar polynomials.
    template <class C>
    SPoly<F> lift(const Polynomial<C>& p) const {
        SPoly<F> out;
        for (const auto& [w, c] : p) out.add(w, Series<F>(shape(), to_field(c)));
        return out;
    }
    SPoly<F> lift(const Monomial& w) const { return SPoly<F>(w, Series<F>(shape(), F(1))); }

    Series<F> mu(const SPoly<F>& p, int budget = -1) const;

    SPoly<F> xi1(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xi2(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xi0(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xi(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xi0_inverse(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xi_inverse(const SPoly<F>& p, int budget = -1) const;

    SPoly<F> xibar1(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xibar2(const SPoly<F>& p, int budget = -1) const;
    SPoly<F> xibar(const SPoly<F>& p, int budget = -1) const;
    SVector<F> hess_apply(const SVector<F>& v, int budget = -1) const;

    /// Componentwise cyclic gradient (D_1 P, ..., D_m P).
    SVector<F> gradient(const SPoly<F>& p) const;

    /// C(p, q) = sum_{k,l} mu(x)mu[d_k p_l x d_l q_k] + C_2(p, q) + sum_k mu(p_k q_k).
    Series<F> covariance_C(const SVector<F>& p, const SVector<F>& q, int budget = -1) const;
    /// The three pieces of covariance_C, exposed for tests.
    Series<F> covariance_tensor_part(const SVector<F>& p, const SVector<F>& q, int budget = -1) const;
    Series<F> covariance_potential_part(const SVector<F>& p, const SVector<F>& q, int budget = -1) const;
    Series<F> covariance_diagonal_part(const SVector<F>& p, const SVector<F>& q, int budget = -1) const;

    /// mu (x) mu[A x B] for tensors, using mu(a c) mu(b d) per leg pair.
    Series<F> mu_tensor_product(const STensor<F>& a, const STensor<F>& b, int budget = -1) const;

    /// D Sigma Xi^{-1} Pi(w), cached per canonical monomial.
    SVector<F> transport(const Monomial& w, int budget = -1) const;
    SVector<F> transport(const SPoly<F>& p, int budget = -1) const;

    /// sigma^2(P, Q) = C(D Sigma Xi^{-1} Pi P, D Sigma Xi^{-1} Pi Q).
    Series<F> sigma2(const SPoly<F>& p, const SPoly<F>& q, int budget = -1) const;
    Series<F> sigma2(const Monomial& p, const Monomial& q, int budget = -1) const;
    /// Bilinear extension to tensors: sigma^2(A (x) B) = sigma^2(A, B).
    Series<F> sigma2(const STensor<F>& t, int budget = -1) const;

    /// phi_0(P) = sum_i sigma^2(d_i D_i P); phi = phi_0 o Sigma.
    Series<F> phi0(const SPoly<F>& p, int budget = -1) const;
    Series<F> phi(const SPoly<F>& p, int budget = -1) const;
    /// phi(Xi^{-1} Pi P).
    Series<F> second_order_correction(const SPoly<F>& p, int budget = -1) const;

private:
    int clamp(int budget) const { return budget < 0 || budget > order() ? order() : budget; }
    template <class C>
    static F to_field(const C& c) {
        if constexpr (std::is_same_v<C, F>) {
            return c;
        } else if constexpr (std::is_same_v<C, Rational>) {
            return from_rational<F>(c);
        } else if constexpr (std::is_same_v<C, GaussianRational>) {
            if (!c.im.is_zero()) throw std::domain_error("complex coefficients are not supported in series mode");
            return from_rational<F>(c.re);
        } else {
            return static_cast<F>(c);
        }
    }
    /// a * b truncated at order c, skipping work above the budget.
    Series<F> times(const Series<F>& a, const Series<F>& b, int c) const;
    Series<F> mu_word(const std::string& w, int c) const;
    static void prune(SPoly<F>& p, int c);

    struct Xi1Term {
        std::string word;
        int j;
        Rational factor;
    };
    const std::vector<Xi1Term>& xi1_of(const std::string& w) const;

    const SeriesMoments<F>& mu_;
    bool flip_xi1_ = false;
    mutable std::recursive_mutex lock_;
    mutable std::unordered_map<std::string, std::vector<Xi1Term>> xi1_cache_;
    mutable std::unordered_map<std::string, std::pair<int, SVector<F>>> transport_cache_;
    mutable std::map<std::pair<std::string, std::string>, std::pair<int, Series<F>>> sigma2_cache_;
};

extern template class OperatorContext<Rational>;
extern template class OperatorContext<double>;

}  // namespace mmwb
