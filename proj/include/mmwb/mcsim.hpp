#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmwb/potential.hpp"

namespace mmwb {

using Matrix = Eigen::MatrixXcd;
using MatrixTuple = std::vector<Matrix>;
using Rng = std::mt19937_64;

enum class SamplerKind { exact_gue, metropolis, random_walk, langevin };

SamplerKind parse_sampler(const std::string& s);
std::string to_string(SamplerKind k);

struct MatrixEnsembleConfig {
    int N = 100;
    int m = 1;
    Potential V;
    SamplerKind sampler = SamplerKind::exact_gue;
    double step = 0.05;           // HMC step h, random-walk scale, or Langevin time step
    int leapfrog = 30;            // HMC steps per proposal
    int burn_in = 200;
    int samples = 1000;
    int thinning = 1;
    std::uint64_t seed = 1;
    std::optional<double> cutoff;  // reject proposals with operator norm >= L
    double spectral_guard = 10.0;  // warning threshold without cutoff
    int chains = 1;

    void validate() const;
};

class AcceptanceCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact GUE draw: diagonal N(0, 1/N), off-diagonal real and imaginary parts
/// N(0, 1/(2N)); Hermitian by construction.
Matrix sample_gue_matrix(int N, Rng& rng);
MatrixTuple sample_gue(int N, int m, Rng& rng);

/// Largest eigenvalue in absolute value (operator norm of a Hermitian matrix).
double spectral_radius(const Matrix& A);
double hermiticity_defect(const Matrix& A);

/// Tr q(A) for a word q; products of sub-words are cached per call.
class TraceEvaluator {
public:
    explicit TraceEvaluator(const MatrixTuple& A) : A_(A) {}
    Complex trace(const Monomial& w);
    template <class C>
    Complex trace(const Polynomial<C>& p) {
        Complex acc{};
        for (const auto& [w, c] : p) acc += to_complex(c) * trace(w);
        return acc;
    }
    const Matrix& product(const std::string& w);

private:
    const MatrixTuple& A_;
    std::map<std::string, Matrix> cache_;
};

/// Matrix value of a polynomial.
Matrix evaluate(const Polynomial<GaussianRational>& p, const MatrixTuple& A);
/// N Re Tr(V(A) + sum_i A_i^2 / 2).
double energy(const Potential& V, const MatrixTuple& A);
/// Gradient of Tr V: (D_i V)(A), Hermitian for self-adjoint V.
MatrixTuple potential_gradient(const Potential& V, const MatrixTuple& A);

/// Runs a chain (or independent draws) and hands every retained sample to the
/// callback together with its index.
struct ChainSummary {
    long proposals = 0;
    long accepted = 0;
    long cutoff_rejections = 0;
    double max_spectral_radius = 0;
    std::vector<std::string> warnings;
    double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 1.0; }
};

ChainSummary sample_gibbs(const MatrixEnsembleConfig& cfg, const std::function<void(long, const MatrixTuple&)>& on_sample);

/// One HMC proposal from (A, P): half kick, exact Gaussian rotation, half kick.
/// Exposed for reversibility checks.
void hmc_trajectory(const Potential& V, double h, int steps, MatrixTuple& A, MatrixTuple& P);
/// N Re Tr(W(A) + sum P_i^2 / 2).
double hamiltonian(const Potential& V, const MatrixTuple& A, const MatrixTuple& P);

struct SampleStats {
    std::string name;
    long n = 0;
    double mean = 0;
    double variance = 0;
    double stderr_mean = 0;
    double ess = 0;
    double tau_int = 0.5;
    double skewness = 0;
    double excess_kurtosis = 0;
};

/// Mean, variance, integrated autocorrelation time (Sokal window, c = 5) and
/// effective sample size of a scalar series.
SampleStats summarize(const std::vector<double>& x, const std::string& name = "");

struct RunResult {
    std::vector<std::string> observables;
    std::vector<std::vector<double>> values;  // [observable][sample], real part of (1/N) Tr P(A)
    std::vector<SampleStats> stats;
    ChainSummary chain;
};

/// Samples and records (1/N) Tr P(A) for each observable; optionally streams
/// the raw values to a binary trace file.
RunResult mc_run(const MatrixEnsembleConfig& cfg, const std::vector<std::pair<std::string, Polynomial<GaussianRational>>>& observables,
                 const std::string& trace_path = "");

/// Binary trace: "MMWB0001", uint64 LE observable count, then LE f64 row-major.
void write_trace(const std::string& path, const std::vector<std::vector<double>>& values);
std::vector<std::vector<double>> read_trace(const std::string& path);

struct FluctuationReport {
    double predicted = 0;
    double sample_variance = 0;
    double ci_low = 0;
    double ci_high = 0;
    double relative_error = 0;
    double skew_z = 0;
    double kurtosis_z = 0;
    double ess = 0;
    double mean_centered = 0;
    long samples = 0;
    bool in_ci = false;
    ChainSummary chain;
};

/// Samples Tr P(A) - N mu(P) and compares its variance with the prediction.
/// Pass iff the prediction lies in the 99% confidence interval (in_ci).
FluctuationReport fluctuation_test(const MatrixEnsembleConfig& cfg, const Polynomial<GaussianRational>& P, double sigma2_pred,
                                   double mu_P = 0.0);

struct FluctuationTarget {
    Polynomial<GaussianRational> P;
    double sigma2_pred = 0;
    double mu_P = 0;
};

/// Several observables on one sample stream.
std::vector<FluctuationReport> fluctuation_test(const MatrixEnsembleConfig& cfg, const std::vector<FluctuationTarget>& targets);

struct TailReport {
    std::vector<int> Ns;
    std::vector<double> frequencies;
    double M = 0;
    bool pass = false;
};

/// Frequency of {lambda_max > M} for several N; pass iff non-increasing in N.
TailReport tail_test(const MatrixEnsembleConfig& cfg, double M, const std::vector<int>& Ns = {50, 100, 200});

/// Smallest observed second directional derivative of Tr W (W = V + sum X_i^2/2)
/// at A along random unit Hermitian directions. Diagnostic only.
double convexity_probe(const Potential& V, const MatrixTuple& A, int directions, Rng& rng);

struct ThermoIntegration {
    std::vector<double> alphas;
    std::vector<double> mean_trace_V;  // E_{alpha V}[Tr V(A)] per alpha
    double log_Z_ratio = 0;            // log Z_V - log Z_0 by the trapezoid rule
};

/// Demonstration of d/d alpha log Z_{alpha V} = -N E_{alpha V}[Tr V]. No acceptance gate.
ThermoIntegration thermo_integration(const MatrixEnsembleConfig& cfg, const std::vector<double>& alphas);

}  // namespace mmwb
