#include "mmwb/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <gmpxx.h>

#include "mmwb/calculus.hpp"

namespace mmwb {

SamplerKind parse_sampler(const std::string& s) {
    if (s == "exact-gue") return SamplerKind::exact_gue;
    if (s == "metropolis") return SamplerKind::metropolis;
    if (s == "random-walk") return SamplerKind::random_walk;
    if (s == "langevin") return SamplerKind::langevin;
    throw std::invalid_argument("unknown sampler '" + s + "' (exact-gue, metropolis, random-walk, langevin)");
}

std::string to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::exact_gue: return "exact-gue";
        case SamplerKind::metropolis: return "metropolis";
        case SamplerKind::random_walk: return "random-walk";
        case SamplerKind::langevin: return "langevin";
    }
    return "?";
}

void MatrixEnsembleConfig::validate() const {
    if (N < 2) throw std::invalid_argument("N must be at least 2");
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    if (thinning < 1) throw std::invalid_argument("thinning must be at least 1");
    if (burn_in < 0) throw std::invalid_argument("burn-in must be nonnegative");
    if (leapfrog < 1) throw std::invalid_argument("leapfrog steps must be at least 1");
    if (chains < 1) throw std::invalid_argument("chains must be at least 1");
    if (cutoff && !(*cutoff > 0)) throw std::invalid_argument("cutoff must be positive");
    if (V.colors() > m) throw std::invalid_argument("potential uses more colors than m");
    if (sampler == SamplerKind::exact_gue && !V.is_zero())
        throw std::invalid_argument("exact-gue sampling requires V = 0");
}

Matrix sample_gue_matrix(int N, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sd_diag = 1.0 / std::sqrt(static_cast<double>(N));
    const double sd_off = 1.0 / std::sqrt(2.0 * N);
    Matrix A(N, N);
    for (int i = 0; i < N; ++i) {
        A(i, i) = {sd_diag * gauss(rng), 0.0};
        for (int j = i + 1; j < N; ++j) {
            double re = sd_off * gauss(rng);
            double im = sd_off * gauss(rng);
            A(i, j) = {re, im};
            A(j, i) = {re, -im};
        }
    }
    return A;
}

MatrixTuple sample_gue(int N, int m, Rng& rng) {
    MatrixTuple out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.push_back(sample_gue_matrix(N, rng));
    return out;
}

double spectral_radius(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double hermiticity_defect(const Matrix& A) { return (A - A.adjoint()).cwiseAbs().maxCoeff(); }

const Matrix& TraceEvaluator::product(const std::string& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    Matrix out;
    if (w.empty()) {
        const auto n = A_.front().rows();
        out = Matrix::Identity(n, n);
    } else if (w.size() == 1) {
        out = A_.at(static_cast<unsigned char>(w[0]));
    } else {
        std::size_t h = w.size() / 2;
        out = product(w.substr(0, h)) * product(w.substr(h));
    }
    return cache_.emplace(w, std::move(out)).first->second;
}

Complex TraceEvaluator::trace(const Monomial& w) {
    const std::string& s = w.letters();
    if (s.empty()) return {static_cast<double>(A_.front().rows()), 0.0};
    if (s.size() == 1) return A_.at(static_cast<unsigned char>(s[0])).trace();
    std::size_t h = s.size() / 2;
    const Matrix& L = product(s.substr(0, h));
    const Matrix& R = product(s.substr(h));
    return L.transpose().cwiseProduct(R).sum();
}

Matrix evaluate(const Polynomial<GaussianRational>& p, const MatrixTuple& A) {
    const auto n = A.front().rows();
    Matrix out = Matrix::Zero(n, n);
    TraceEvaluator ev(A);
    for (const auto& [w, c] : p) out += to_complex(c) * ev.product(w.letters());
    return out;
}

namespace {

/// Hermitian part, exact in floating point: (G + G*)/2.
void hermitize(Matrix& G) {
    Matrix H = (G + G.adjoint()) * 0.5;
    G = std::move(H);
}

class GibbsModel {
public:
    GibbsModel(const Potential& V, int m) : V_(V), m_(m) {
        auto poly = V.as_polynomial();
        for (int i = 0; i < m; ++i) grads_.push_back(cyclic_derivative(i, poly));
    }

    double tr_V(const MatrixTuple& A) const {
        if (V_.is_zero()) return 0.0;
        TraceEvaluator ev(A);
        return ev.trace(V_.as_polynomial()).real();
    }

    double energy(const MatrixTuple& A) const {
        double N = static_cast<double>(A.front().rows());
        double gauss = 0;
        for (const auto& a : A) gauss += 0.5 * a.squaredNorm();
        return N * (gauss + tr_V(A));
    }

    MatrixTuple gradient(const MatrixTuple& A) const {
        MatrixTuple out;
        const auto n = A.front().rows();
        TraceEvaluator ev(A);
        for (int i = 0; i < m_; ++i) {
            Matrix G = Matrix::Zero(n, n);
            for (const auto& [w, c] : grads_[static_cast<std::size_t>(i)]) G += to_complex(c) * ev.product(w.letters());
            hermitize(G);
            out.push_back(std::move(G));
        }
        return out;
    }

    bool has_potential() const { return !V_.is_zero(); }

private:
    const Potential& V_;
    int m_;
    std::vector<Polynomial<GaussianRational>> grads_;
};

double max_radius(const MatrixTuple& A) {
    double r = 0;
    for (const auto& a : A) r = std::max(r, spectral_radius(a));
    return r;
}

void kick(const GibbsModel& model, double h, const MatrixTuple& A, MatrixTuple& P) {
    if (!model.has_potential()) return;
    auto G = model.gradient(A);
    for (std::size_t i = 0; i < P.size(); ++i) P[i] -= h * G[i];
}

void trajectory(const GibbsModel& model, double h, int steps, MatrixTuple& A, MatrixTuple& P) {
    const double c = std::cos(h), s = std::sin(h);
    kick(model, 0.5 * h, A, P);
    for (int k = 0; k < steps; ++k) {
        for (std::size_t i = 0; i < A.size(); ++i) {
            Matrix a = c * A[i] + s * P[i];
            P[i] = c * P[i] - s * A[i];
            A[i] = std::move(a);
        }
        kick(model, k + 1 < steps ? h : 0.5 * h, A, P);
    }
}

double kinetic(const MatrixTuple& P) {
    double N = static_cast<double>(P.front().rows());
    double k = 0;
    for (const auto& p : P) k += 0.5 * p.squaredNorm();
    return N * k;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// The spectral guard is checked on every kGuardStride-th emitted sample.
constexpr long kGuardStride = 16;

bool inside(const std::optional<double>& cutoff, const MatrixTuple& A, ChainSummary& s) {
    if (!cutoff) return true;
    double r = max_radius(A);
    if (r >= *cutoff) {
        ++s.cutoff_rejections;
        return false;
    }
    return true;
}

ChainSummary run_chain(const MatrixEnsembleConfig& cfg, std::uint64_t seed, long first, long count,
                       const std::function<void(long, const MatrixTuple&)>& emit) {
    ChainSummary s;
    Rng rng(seed);
    const int N = cfg.N;
    bool guard_warned = false;
    long emitted = 0;
    auto observe = [&](const MatrixTuple& A) {
        if (cfg.cutoff || emitted++ % kGuardStride != 0) return;
        double r = max_radius(A);
        s.max_spectral_radius = std::max(s.max_spectral_radius, r);
        if (r > cfg.spectral_guard && !guard_warned) {
            s.warnings.push_back("SpectralEscape: spectral radius " + std::to_string(r) + " exceeds guard " +
                                 std::to_string(cfg.spectral_guard));
            guard_warned = true;
        }
    };

    if (cfg.sampler == SamplerKind::exact_gue) {
        for (long k = 0; k < count; ++k) {
            MatrixTuple A;
            do {
                A = sample_gue(N, cfg.m, rng);
                ++s.proposals;
            } while (!inside(cfg.cutoff, A, s));
            ++s.accepted;
            observe(A);
            emit(first + k, A);
        }
        return s;
    }

    GibbsModel model(cfg.V, cfg.m);
    MatrixTuple A;
    for (int i = 0; i < cfg.m; ++i) A.push_back(Matrix::Zero(N, N));
    double U = model.energy(A);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long burn_props = 0, burn_acc = 0;

    auto step = [&]() -> bool {
        switch (cfg.sampler) {
            case SamplerKind::metropolis: {
                MatrixTuple P = sample_gue(N, cfg.m, rng);
                double H0 = U + kinetic(P);
                MatrixTuple B = A;
                trajectory(model, cfg.step, cfg.leapfrog, B, P);
                if (!inside(cfg.cutoff, B, s)) return false;
                double UB = model.energy(B);
                double dH = UB + kinetic(P) - H0;
                if (dH <= 0 || unif(rng) < std::exp(-dH)) {
                    A = std::move(B);
                    U = UB;
                    return true;
                }
                return false;
            }
            case SamplerKind::random_walk: {
                MatrixTuple B = A;
                for (auto& b : B) b += cfg.step * sample_gue_matrix(N, rng);
                if (!inside(cfg.cutoff, B, s)) return false;
                double UB = model.energy(B);
                double dU = UB - U;
                if (dU <= 0 || unif(rng) < std::exp(-dU)) {
                    A = std::move(B);
                    U = UB;
                    return true;
                }
                return false;
            }
            case SamplerKind::langevin: {
                MatrixTuple G = model.has_potential() ? model.gradient(A) : MatrixTuple{};
                MatrixTuple B = A;
                const double h = cfg.step, noise = std::sqrt(cfg.step);
                for (std::size_t i = 0; i < B.size(); ++i) {
                    Matrix drift = B[i];
                    if (!G.empty()) drift += G[i];
                    B[i] += -0.5 * h * drift + noise * sample_gue_matrix(N, rng);
                }
                if (!inside(cfg.cutoff, B, s)) return false;
                A = std::move(B);
                U = model.energy(A);
                return true;
            }
            case SamplerKind::exact_gue: break;
        }
        return false;
    };

    for (int k = 0; k < cfg.burn_in; ++k) {
        ++burn_props;
        if (step()) ++burn_acc;
    }
    if (burn_props >= 20 && static_cast<double>(burn_acc) < 0.01 * static_cast<double>(burn_props))
        throw AcceptanceCollapse("acceptance rate " + std::to_string(static_cast<double>(burn_acc) / static_cast<double>(burn_props)) +
                                 " over burn-in is below 1%; reduce the step size");

    for (long k = 0; k < count; ++k) {
        for (int t = 0; t < cfg.thinning; ++t) {
            ++s.proposals;
            if (step()) ++s.accepted;
        }
        observe(A);
        emit(first + k, A);
    }
    return s;
}

}  // namespace

double energy(const Potential& V, const MatrixTuple& A) {
    GibbsModel model(V, static_cast<int>(A.size()));
    return model.energy(A);
}

MatrixTuple potential_gradient(const Potential& V, const MatrixTuple& A) {
    GibbsModel model(V, static_cast<int>(A.size()));
    return model.gradient(A);
}

void hmc_trajectory(const Potential& V, double h, int steps, MatrixTuple& A, MatrixTuple& P) {
    GibbsModel model(V, static_cast<int>(A.size()));
    trajectory(model, h, steps, A, P);
}

double hamiltonian(const Potential& V, const MatrixTuple& A, const MatrixTuple& P) { return energy(V, A) + kinetic(P); }

ChainSummary sample_gibbs(const MatrixEnsembleConfig& cfg, const std::function<void(long, const MatrixTuple&)>& on_sample) {
    cfg.validate();
    const int chains = std::min<long>(cfg.chains, cfg.samples);
    if (chains == 1) return run_chain(cfg, splitmix(cfg.seed), 0, cfg.samples, on_sample);

    std::vector<ChainSummary> summaries(static_cast<std::size_t>(chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chains));
    std::mutex lock;
    auto emit = [&](long idx, const MatrixTuple& A) {
        std::lock_guard<std::mutex> g(lock);
        on_sample(idx, A);
    };
    std::vector<std::thread> workers;
    long per = cfg.samples / chains, extra = cfg.samples % chains, first = 0;
    for (int c = 0; c < chains; ++c) {
        long count = per + (c < extra ? 1 : 0);
        std::uint64_t seed = splitmix(cfg.seed ^ splitmix(static_cast<std::uint64_t>(c) + 1));
        workers.emplace_back([&, c, seed, first, count] {
            try {
                summaries[static_cast<std::size_t>(c)] = run_chain(cfg, seed, first, count, emit);
            } catch (...) {
                errors[static_cast<std::size_t>(c)] = std::current_exception();
            }
        });
        first += count;
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    ChainSummary total;
    for (const auto& s : summaries) {
        total.proposals += s.proposals;
        total.accepted += s.accepted;
        total.cutoff_rejections += s.cutoff_rejections;
        total.max_spectral_radius = std::max(total.max_spectral_radius, s.max_spectral_radius);
        total.warnings.insert(total.warnings.end(), s.warnings.begin(), s.warnings.end());
    }
    return total;
}

SampleStats summarize(const std::vector<double>& x, const std::string& name) {
    SampleStats st;
    st.name = name;
    st.n = static_cast<long>(x.size());
    if (x.empty()) return st;
    const double n = static_cast<double>(x.size());
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    st.mean = mean;
    st.variance = x.size() > 1 ? m2 * n / (n - 1) : 0.0;
    if (m2 > 0) {
        st.skewness = m3 / std::pow(m2, 1.5);
        st.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }

    double tau = 0.5;
    if (m2 > 0 && x.size() > 2) {
        const std::size_t nmax = x.size() / 2;
        for (std::size_t t = 1; t < nmax; ++t) {
            double c = 0;
            for (std::size_t k = 0; k + t < x.size(); ++k) c += (x[k] - mean) * (x[k + t] - mean);
            tau += c / n / m2;
            if (static_cast<double>(t) >= 5.0 * tau) break;
        }
    }
    st.tau_int = std::max(tau, 0.5);
    st.ess = n / (2.0 * st.tau_int);
    st.stderr_mean = std::sqrt(st.variance / st.ess);
    return st;
}

RunResult mc_run(const MatrixEnsembleConfig& cfg, const std::vector<std::pair<std::string, Polynomial<GaussianRational>>>& observables,
                 const std::string& trace_path) {
    RunResult r;
    for (const auto& [name, p] : observables) r.observables.push_back(name);
    r.values.assign(observables.size(), std::vector<double>(static_cast<std::size_t>(cfg.samples)));
    const double N = cfg.N;
    r.chain = sample_gibbs(cfg, [&](long idx, const MatrixTuple& A) {
        TraceEvaluator ev(A);
        for (std::size_t o = 0; o < observables.size(); ++o)
            r.values[o][static_cast<std::size_t>(idx)] = ev.trace(observables[o].second).real() / N;
    });
    for (std::size_t o = 0; o < observables.size(); ++o) r.stats.push_back(summarize(r.values[o], r.observables[o]));
    if (!trace_path.empty()) write_trace(trace_path, r.values);
    return r;
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated trace file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

constexpr char kMagic[8] = {'M', 'M', 'W', 'B', '0', '0', '0', '1'};

}  // namespace

void write_trace(const std::string& path, const std::vector<std::vector<double>>& values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open trace file " + path);
    os.write(kMagic, 8);
    put_u64(os, values.size());
    const std::size_t rows = values.empty() ? 0 : values.front().size();
    for (std::size_t s = 0; s < rows; ++s)
        for (const auto& col : values) {
            std::uint64_t bits;
            std::memcpy(&bits, &col[s], 8);
            put_u64(os, bits);
        }
}

std::vector<std::vector<double>> read_trace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open trace file " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("bad trace magic");
    const std::uint64_t cols = get_u64(is);
    std::vector<std::vector<double>> out(cols);
    while (cols > 0 && is.peek() != std::char_traits<char>::eof()) {
        for (auto& col : out) {
            std::uint64_t bits = get_u64(is);
            double v;
            std::memcpy(&v, &bits, 8);
            col.push_back(v);
        }
    }
    return out;
}

std::vector<FluctuationReport> fluctuation_test(const MatrixEnsembleConfig& cfg, const std::vector<FluctuationTarget>& targets) {
    std::vector<std::vector<double>> x(targets.size(), std::vector<double>(static_cast<std::size_t>(cfg.samples)));
    const double N = cfg.N;
    auto chain = sample_gibbs(cfg, [&](long idx, const MatrixTuple& A) {
        TraceEvaluator ev(A);
        for (std::size_t k = 0; k < targets.size(); ++k)
            x[k][static_cast<std::size_t>(idx)] = ev.trace(targets[k].P).real() - N * targets[k].mu_P;
    });
    std::vector<FluctuationReport> out;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        FluctuationReport rep;
        rep.predicted = targets[k].sigma2_pred;
        rep.chain = chain;
        auto st = summarize(x[k]);
        rep.samples = st.n;
        rep.sample_variance = st.variance;
        rep.mean_centered = st.mean;
        rep.ess = st.ess;
        // Var of the sample variance is sigma^4 (2 + excess kurtosis) / n; 99% two-sided.
        const double z = 2.5758293035489;
        const double spread = st.variance * std::sqrt(std::max(2.0 + st.excess_kurtosis, 0.0) / std::max(st.ess - 1.0, 1.0));
        rep.ci_low = st.variance - z * spread;
        rep.ci_high = st.variance + z * spread;
        const double pred = rep.predicted;
        rep.relative_error = pred != 0 ? std::abs(st.variance - pred) / std::abs(pred) : std::abs(st.variance);
        rep.skew_z = st.skewness / std::sqrt(6.0 / st.ess);
        rep.kurtosis_z = st.excess_kurtosis / std::sqrt(24.0 / st.ess);
        rep.in_ci = pred >= rep.ci_low && pred <= rep.ci_high;
        out.push_back(std::move(rep));
    }
    return out;
}

FluctuationReport fluctuation_test(const MatrixEnsembleConfig& cfg, const Polynomial<GaussianRational>& P, double sigma2_pred,
                                   double mu_P) {
    return fluctuation_test(cfg, {FluctuationTarget{P, sigma2_pred, mu_P}}).front();
}

TailReport tail_test(const MatrixEnsembleConfig& cfg, double M, const std::vector<int>& Ns) {
    TailReport rep;
    rep.M = M;
    rep.Ns = Ns;
    for (std::size_t k = 0; k < Ns.size(); ++k) {
        MatrixEnsembleConfig c = cfg;
        c.N = Ns[k];
        c.seed = splitmix(cfg.seed + k);
        long hits = 0;
        sample_gibbs(c, [&](long, const MatrixTuple& A) {
            if (max_radius(A) > M) ++hits;
        });
        rep.frequencies.push_back(static_cast<double>(hits) / static_cast<double>(c.samples));
    }
    rep.pass = true;
    for (std::size_t k = 1; k < rep.frequencies.size(); ++k) {
        double prev = rep.frequencies[k - 1], cur = rep.frequencies[k];
        bool interior = prev > 0 && prev < 1;
        if (cur > prev || (interior && cur >= prev)) rep.pass = false;
    }
    return rep;
}

double convexity_probe(const Potential& V, const MatrixTuple& A, int directions, Rng& rng) {
    GibbsModel model(V, static_cast<int>(A.size()));
    const int N = static_cast<int>(A.front().rows());
    const double eps = 1e-3;
    const double f0 = model.energy(A) / N;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
        MatrixTuple H = sample_gue(N, static_cast<int>(A.size()), rng);
        double norm2 = 0;
        for (const auto& h : H) norm2 += h.squaredNorm();
        MatrixTuple plus = A, minus = A;
        for (std::size_t i = 0; i < A.size(); ++i) {
            plus[i] += eps * H[i];
            minus[i] -= eps * H[i];
        }
        double second = (model.energy(plus) / N - 2 * f0 + model.energy(minus) / N) / (eps * eps);
        best = std::min(best, second / norm2);
    }
    return best;
}

ThermoIntegration thermo_integration(const MatrixEnsembleConfig& cfg, const std::vector<double>& alphas) {
    ThermoIntegration out;
    out.alphas = alphas;
    const auto poly = cfg.V.as_polynomial();
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        std::vector<PotentialTerm> terms;
        Rational a(mpq_class(alphas[k]));
        for (const auto& t : cfg.V.terms()) terms.push_back(PotentialTerm{t.value * GaussianRational(a), t.q});
        MatrixEnsembleConfig c = cfg;
        c.V = Potential(cfg.V.colors(), terms);
        if (c.V.is_zero() && c.sampler != SamplerKind::exact_gue && !c.cutoff) c.sampler = SamplerKind::exact_gue;
        c.seed = splitmix(cfg.seed + k);
        double sum = 0;
        sample_gibbs(c, [&](long, const MatrixTuple& A) {
            TraceEvaluator ev(A);
            sum += ev.trace(poly).real();
        });
        out.mean_trace_V.push_back(sum / c.samples);
    }
    for (std::size_t k = 1; k < alphas.size(); ++k)
        out.log_Z_ratio -= cfg.N * 0.5 * (out.mean_trace_V[k] + out.mean_trace_V[k - 1]) * (alphas[k] - alphas[k - 1]);
    return out;
}

}  // namespace mmwb
