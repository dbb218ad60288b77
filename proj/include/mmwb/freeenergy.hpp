#pragma once

#include <string>
#include <vector>

#include "mmwb/fluctuation.hpp"

namespace mmwb {

struct FreeEnergyCheck {
    MultiIndex index;
    std::string which;  // "F0" or "F1"
    Rational series;
    Rational maps;
    bool pass;
};

struct FreeEnergyReport {
    Series<Rational> F0;
    Series<Rational> F1;
    int K = 0;
    std::vector<FreeEnergyCheck> cross_check;
    bool pass() const;
};

/// F0 = -int_0^1 mu_{at}(sum_j t_j q_j) da, done termwise: the coefficient at
/// k (|k| >= 1) is -(1/|k|) sum_{j: k_j >= 1} [mu(q_j)]_{k - e_j}.
template <Field F>
Series<F> f0(const SeriesMoments<F>& mu);
/// F1 = -int_0^1 phi_{at}(Xi_{at}^{-1} sum_j t_j q_j) da, same integration rule.
template <Field F>
Series<F> f1(const OperatorContext<F>& ctx);

Series<Rational> f0(const Potential& V, int K);
Series<Rational> f1(const Potential& V, int K);

/// F0 and F1 with a coefficientwise comparison against the genus-0 and
/// genus-1 census generating functions of k_j stars of type q_j.
FreeEnergyReport free_energy(const Potential& V, int K, bool cross_check = true);

/// Series side of log Z = N^2 F0 + F1 + o(1), evaluated at the potential's
/// coupling values (optionally rescaled by alpha).
struct ThermoReference {
    Series<Rational> F0;
    Series<Rational> F1;
    std::vector<Complex> couplings;

    Complex F0_at(double alpha = 1.0) const;
    Complex F1_at(double alpha = 1.0) const;
    Complex log_Z(double N, double alpha = 1.0) const;
};

ThermoReference thermo_reference(const Potential& V, int K);

extern template Series<Rational> f0(const SeriesMoments<Rational>&);
extern template Series<double> f0(const SeriesMoments<double>&);
extern template Series<Rational> f1(const OperatorContext<Rational>&);
extern template Series<double> f1(const OperatorContext<double>&);

}  // namespace mmwb
