#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "mmwb/mcsim.hpp"
#include "mmwb/sdsolve.hpp"

using namespace mmwb;

namespace {

Polynomial<GaussianRational> gpoly(const char* text) { return parse_polynomial(text); }

MatrixEnsembleConfig gue(int N, int samples, std::uint64_t seed = 7) {
    MatrixEnsembleConfig cfg;
    cfg.N = N;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.V = Potential(1, {});
    return cfg;
}

}  // namespace

TEST_SUITE("mcsim") {
    TEST_CASE("GUE entries and hermiticity") {
        Rng rng(3);
        Matrix A = sample_gue_matrix(60, rng);
        CHECK(hermiticity_defect(A) == 0.0);
        double diag = 0, off = 0;
        for (int i = 0; i < 60; ++i) diag += std::norm(A(i, i));
        for (int i = 0; i < 60; ++i)
            for (int j = i + 1; j < 60; ++j) off += std::norm(A(i, j));
        CHECK(diag / 60 == doctest::Approx(1.0 / 60).epsilon(0.4));
        CHECK(off / (60 * 59 / 2) == doctest::Approx(1.0 / 60).epsilon(0.1));
    }

    TEST_CASE("GUE moments match the Wick oracle") {
        const int N = 40;
        std::vector<std::pair<std::string, Polynomial<GaussianRational>>> obs;
        for (int k = 1; k <= 8; ++k) obs.emplace_back("x1^" + std::to_string(k), gpoly(("x1^" + std::to_string(k)).c_str()));
        RunResult r = mc_run(gue(N, 4000), obs);
        for (int k = 1; k <= 8; ++k) {
            const auto& s = r.stats[static_cast<std::size_t>(k - 1)];
            double exact = wick_finite_N(Monomial::power(0, k)).evaluate(static_cast<double>(N));
            INFO("k = " << k << " mean " << s.mean << " exact " << exact << " se " << s.stderr_mean);
            CHECK(std::abs(s.mean - exact) <= 4 * s.stderr_mean + 1e-12);
        }
        CHECK(wick_finite_N(Monomial::power(0, 4)).evaluate(100.0) == doctest::Approx(2.0001));
    }

    TEST_CASE("two-matrix GUE moments") {
        MatrixEnsembleConfig cfg = gue(30, 3000);
        cfg.m = 2;
        RunResult r = mc_run(cfg, {{"x1*x2*x1*x2", gpoly("x1*x2*x1*x2")}, {"x1^2*x2^2", gpoly("x1^2*x2^2")}});
        for (std::size_t j = 0; j < 2; ++j) {
            double exact = wick_finite_N(j == 0 ? Monomial{0, 1, 0, 1} : Monomial{0, 0, 1, 1}).evaluate(30.0);
            CHECK(std::abs(r.stats[j].mean - exact) <= 4 * r.stats[j].stderr_mean);
        }
    }

    TEST_CASE("samples are Hermitian and reproducible") {
        for (SamplerKind kind : {SamplerKind::exact_gue, SamplerKind::metropolis, SamplerKind::langevin}) {
            MatrixEnsembleConfig cfg = gue(12, 30, 99);
            cfg.sampler = kind;
            cfg.burn_in = 20;
            if (kind != SamplerKind::exact_gue) cfg.V = parse_potential("0.05*x1^4");
            if (kind == SamplerKind::langevin) cfg.step = 0.01;
            std::vector<MatrixTuple> a, b;
            auto sa = sample_gibbs(cfg, [&](long, const MatrixTuple& A) {
                CHECK(hermiticity_defect(A[0]) < 1e-12);
                a.push_back(A);
            });
            sample_gibbs(cfg, [&](long, const MatrixTuple& A) { b.push_back(A); });
            REQUIRE(a.size() == 30);
            REQUIRE(b.size() == 30);
            for (std::size_t k = 0; k < a.size(); ++k) CHECK((a[k][0] - b[k][0]).norm() == 0.0);
            CHECK(sa.proposals >= 30);
        }
    }

    TEST_CASE("HMC trajectories are reversible and nearly conserve energy") {
        Potential V = parse_potential("0.05*x1^4 + 0.05*x2^4 + 0.02*x1*x2");
        Rng rng(5);
        MatrixTuple A = sample_gue(20, 2, rng), P = sample_gue(20, 2, rng);
        MatrixTuple A0 = A, P0 = P;
        double H0 = hamiltonian(V, A, P);
        hmc_trajectory(V, 0.05, 20, A, P);
        double H1 = hamiltonian(V, A, P);
        CHECK(std::abs(H1 - H0) < 1.0);
        CHECK((A[0] - A0[0]).norm() > 1e-3);
        for (auto& p : P) p = -p;
        hmc_trajectory(V, 0.05, 20, A, P);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK((A[i] - A0[i]).norm() < 1e-9);
            CHECK((P[i] + P0[i]).norm() < 1e-9);
        }
        // Detailed balance on the logged pair: a(x->y) e^{-H(x)} = a(y->x) e^{-H(y)}.
        double fwd = std::min(1.0, std::exp(H0 - H1)) * std::exp(-(H0 - H0));
        double bwd = std::min(1.0, std::exp(H1 - H0)) * std::exp(-(H1 - H0));
        CHECK(fwd == doctest::Approx(bwd).epsilon(1e-12));
    }

    TEST_CASE("energy and gradient are consistent") {
        Potential V = parse_potential("0.1*x1^4 + 0.2*x1*x2 + 0.1*x2^2");
        Rng rng(8);
        MatrixTuple A = sample_gue(8, 2, rng);
        MatrixTuple G = potential_gradient(V, A);
        MatrixTuple H = sample_gue(8, 2, rng);
        const double eps = 1e-5;
        MatrixTuple Ap = A, Am = A;
        for (int i = 0; i < 2; ++i) {
            Ap[static_cast<std::size_t>(i)] += eps * H[static_cast<std::size_t>(i)];
            Am[static_cast<std::size_t>(i)] -= eps * H[static_cast<std::size_t>(i)];
        }
        double fd = (energy(V, Ap) - energy(V, Am)) / (2 * eps);
        double an = 0;
        for (int i = 0; i < 2; ++i) {
            const auto& a = A[static_cast<std::size_t>(i)];
            an += 8 * ((G[static_cast<std::size_t>(i)] + a) * H[static_cast<std::size_t>(i)]).trace().real();
        }
        CHECK(fd == doctest::Approx(an).epsilon(1e-6));
        CHECK(hermiticity_defect(G[0]) < 1e-12);
    }

    TEST_CASE("trace evaluator") {
        Rng rng(9);
        MatrixTuple A = sample_gue(10, 2, rng);
        TraceEvaluator ev(A);
        Complex t = ev.trace(Monomial{0, 1, 0, 0, 1});
        Complex direct = (A[0] * A[1] * A[0] * A[0] * A[1]).trace();
        CHECK(std::abs(t - direct) < 1e-10);
        CHECK(std::abs(ev.trace(Monomial()) - Complex(10, 0)) < 1e-12);
        Matrix E = evaluate(gpoly("x1^2 + 2*x1*x2"), A);
        CHECK((E - (A[0] * A[0] + 2.0 * A[0] * A[1])).norm() < 1e-10);
    }

    TEST_CASE("Metropolis at V = 0 agrees with exact sampling") {
        MatrixEnsembleConfig cfg = gue(20, 1500, 11);
        cfg.sampler = SamplerKind::metropolis;
        cfg.burn_in = 100;
        RunResult r = mc_run(cfg, {{"x1^2", gpoly("x1^2")}, {"x1^4", gpoly("x1^4")}});
        CHECK(r.chain.acceptance_rate() > 0.5);
        CHECK(std::abs(r.stats[0].mean - 1.0) <= 4 * r.stats[0].stderr_mean);
        CHECK(std::abs(r.stats[1].mean - (2.0 + 1.0 / 400)) <= 4 * r.stats[1].stderr_mean);
    }

    TEST_CASE("cutoff contract") {
        MatrixEnsembleConfig cfg = gue(20, 200, 12);
        cfg.sampler = SamplerKind::metropolis;
        cfg.burn_in = 20;
        cfg.cutoff = 2.2;
        long seen = 0;
        ChainSummary s = sample_gibbs(cfg, [&](long, const MatrixTuple& A) {
            ++seen;
            CHECK(spectral_radius(A[0]) < 2.2);
        });
        CHECK(seen == 200);
        CHECK(s.max_spectral_radius < 2.2);
        cfg.sampler = SamplerKind::exact_gue;
        cfg.N = 10;
        cfg.cutoff = 2.0;
        sample_gibbs(cfg, [&](long, const MatrixTuple& A) { CHECK(spectral_radius(A[0]) < 2.0); });
    }

    TEST_CASE("tail frequencies") {
        MatrixEnsembleConfig cfg = gue(50, 100, 13);
        TailReport bulk = tail_test(cfg, 1.5, {20, 40});
        for (double f : bulk.frequencies) CHECK(f > 0.95);
        TailReport edge = tail_test(cfg, 3.0, {20, 40});
        CHECK(edge.pass);
        cfg.cutoff = 2.5;
        TailReport cut = tail_test(cfg, 2.5, {20, 40});
        for (double f : cut.frequencies) CHECK(f == 0.0);
        CHECK(cut.pass);
    }

    TEST_CASE("binary trace round trip") {
        auto path = (std::filesystem::temp_directory_path() / "mmwb_unit_trace.bin").string();
        std::vector<std::vector<double>> values = {{1.0, -2.5, 3.25}, {0.0, 1e-300, 7.0}};
        write_trace(path, values);
        CHECK(read_trace(path) == values);
        std::ifstream in(path, std::ios::binary);
        char header[16];
        in.read(header, 16);
        CHECK(std::string(header, 8) == "MMWB0001");
        CHECK(static_cast<unsigned char>(header[8]) == 2);
        for (int k = 9; k < 16; ++k) CHECK(header[k] == 0);
        CHECK(std::filesystem::file_size(path) == 16 + 6 * 8);
        std::filesystem::remove(path);
    }

    TEST_CASE("configuration validation") {
        MatrixEnsembleConfig cfg = gue(1, 10);
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = gue(10, 10);
        cfg.V = parse_potential("x1^4");
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.sampler = SamplerKind::metropolis;
        CHECK_NOTHROW(cfg.validate());
        cfg.step = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.step = 0.05;
        cfg.cutoff = -1.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.cutoff.reset();
        cfg.V = parse_potential("x2^4");
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        CHECK(parse_sampler("exact-gue") == SamplerKind::exact_gue);
        CHECK(to_string(SamplerKind::langevin) == "langevin");
        CHECK_THROWS(parse_sampler("gibbs"));
    }

    TEST_CASE("acceptance collapse") {
        MatrixEnsembleConfig cfg = gue(20, 10, 14);
        cfg.V = parse_potential("0.05*x1^4");
        cfg.sampler = SamplerKind::random_walk;
        cfg.step = 50.0;
        cfg.burn_in = 50;
        CHECK_THROWS_AS(sample_gibbs(cfg, [](long, const MatrixTuple&) {}), AcceptanceCollapse);
    }

    TEST_CASE("effective sample size") {
        std::mt19937_64 rng(15);
        std::normal_distribution<double> z;
        std::vector<double> iid(20000), ar(20000);
        double x = 0;
        for (std::size_t k = 0; k < iid.size(); ++k) {
            iid[k] = z(rng);
            x = 0.9 * x + std::sqrt(1 - 0.81) * z(rng);
            ar[k] = x;
        }
        SampleStats a = summarize(iid), b = summarize(ar);
        CHECK(a.tau_int == doctest::Approx(0.5).epsilon(0.2));
        CHECK(a.ess > 15000);
        CHECK(a.variance == doctest::Approx(1.0).epsilon(0.05));
        CHECK(b.tau_int == doctest::Approx(9.5).epsilon(0.3));
        CHECK(b.stderr_mean == doctest::Approx(std::sqrt(b.variance / b.ess)).epsilon(1e-9));
        CHECK(std::abs(a.skewness) < 0.1);
        CHECK(std::abs(a.excess_kurtosis) < 0.2);
    }

    TEST_CASE("fluctuation test at the semicircle") {
        MatrixEnsembleConfig cfg = gue(40, 3000, 16);
        FluctuationReport r = fluctuation_test(cfg, gpoly("x1^2"), 2.0, 1.0);
        CHECK(r.relative_error < 0.15);
        CHECK(r.ci_low < r.sample_variance);
        CHECK(r.sample_variance < r.ci_high);
        CHECK(std::abs(r.skew_z) < 10);
        CHECK(r.samples == 3000);
    }
}
