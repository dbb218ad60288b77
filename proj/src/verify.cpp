#include "mmwb/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "mmwb/freeenergy.hpp"
#include "mmwb/mapcount.hpp"
#include "mmwb/mcsim.hpp"
#include "mmwb/recursions.hpp"

namespace mmwb {

namespace {

using SP = SPoly<Rational>;

const char* kQuartic = "x1^4";
const char* kTwoMatrix = "x1^4 + x2^4 + x1*x2";

/// The two test potentials. The one-matrix quartic is declared on two colors
/// so that mixed queries such as x1*x2*x1*x2 see a free Gaussian second matrix.
std::vector<std::pair<std::string, Potential>> test_potentials(int m_min = 1) {
    return {{kQuartic, parse_potential(kQuartic, std::max(1, m_min))}, {kTwoMatrix, parse_potential(kTwoMatrix)}};
}

Polynomial<Rational> random_polynomial(std::mt19937_64& g, int m, int max_degree) {
    std::uniform_int_distribution<int> nterms(1, 3), deg(1, max_degree), col(0, m - 1), coef(-3, 3);
    Polynomial<Rational> p;
    while (p.is_zero()) {
        int n = nterms(g);
        for (int i = 0; i < n; ++i) {
            int d = deg(g);
            std::string w;
            for (int k = 0; k < d; ++k) w.push_back(static_cast<char>(col(g)));
            int c = coef(g);
            p.add(Monomial(w), Rational(c == 0 ? 1 : c));
        }
    }
    return p;
}

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

std::string rat_str(const Series<Rational>& s) { return s.str(); }

CheckResult crit1(const VerifyOptions&) {
    CheckResult r;
    const std::uint64_t catalan[] = {1, 2, 5, 14, 42, 132};
    r.pass = true;
    std::vector<std::uint64_t> got;
    for (int k = 1; k <= 6; ++k) {
        auto star = star_from_monomial(Monomial::power(0, 2 * k));
        auto c = census({star});
        std::uint64_t dfact = 1;
        for (int j = 2 * k - 1; j > 1; j -= 2) dfact *= static_cast<std::uint64_t>(j);
        got.push_back(c.at(0));
        if (c.at(0) != catalan[k - 1] || c.total() != dfact) {
            r.pass = false;
            r.notes.push_back("k=" + std::to_string(k) + ": g0=" + std::to_string(c.at(0)) + " total=" + std::to_string(c.total()));
        }
    }
    std::string list;
    for (auto v : got) list += (list.empty() ? "" : " ") + std::to_string(v);
    r.summary = "genus-0 counts " + list + "; totals (2k-1)!!";
    r.data["genus0"] = got;
    return r;
}

CheckResult crit2(const VerifyOptions&) {
    CheckResult r;
    r.pass = true;
    for (int k = 1; k <= 5; ++k) {
        auto q = Monomial::power(0, 2 * k);
        auto w = wick_finite_N(q);
        auto c = census({star_from_monomial(q)});
        WickPolynomial from_maps;
        for (auto [g, n] : c.counts) {
            if (from_maps.coeffs.size() <= static_cast<std::size_t>(g)) from_maps.coeffs.resize(static_cast<std::size_t>(g) + 1);
            from_maps.coeffs[static_cast<std::size_t>(g)] = Rational(static_cast<long long>(n));
        }
        bool ok = w == from_maps;
        r.data["X^" + std::to_string(2 * k)] = w.str();
        if (!ok) {
            r.pass = false;
            r.notes.push_back("X^" + std::to_string(2 * k) + ": wick " + w.str() + " vs census " + from_maps.str());
        }
    }
    r.summary = "E[N^-1 Tr A^2k] = sum_g N^-2g census_g for k <= 5 (X^10: " + r.data["X^10"].get<std::string>() + ")";
    return r;
}

CheckResult crit3(const VerifyOptions&) {
    CheckResult r;
    r.pass = true;
    int checked = 0;
    for (const auto& [name, V] : test_potentials()) {
        for (int d = 1; d <= 4; ++d)
            for (const auto& w : canonical_words(V.colors(), d)) {
                auto rep = moments_vs_maps(V, w, 3);
                ++checked;
                if (!rep.pass) {
                    r.pass = false;
                    r.notes.push_back(name + ", " + w.str() + ": " + rep.first_mismatch);
                }
            }
    }
    r.summary = std::to_string(checked) + " (potential, monomial) pairs, order 3, degree <= 4";
    r.data["pairs"] = checked;
    return r;
}

CheckResult crit4(const VerifyOptions& opt) {
    CheckResult r;
    r.pass = true;
    std::mt19937_64 g(opt.seed ^ 0x4a);
    int failures = 0, total = 0;
    for (const auto& [name, V] : test_potentials()) {
        SeriesMoments<Rational> mu(V, 3);
        OperatorContext<Rational> ctx(mu);
        ctx.set_xi1_sign_flip(opt.xi1_sign_flip);
        const int m = V.colors();
        for (int it = 0; it < opt.random_cases; ++it) {
            SP P = ctx.lift(random_polynomial(g, m, 5));
            SP Q = ctx.lift(random_polynomial(g, m, 5));
            Series<Rational> lhs = ctx.sigma2(ctx.xi(P), Q);
            Series<Rational> rhs(ctx.shape());
            SP sp = sigma(P);
            for (int i = 0; i < m; ++i) rhs += ctx.mu(cyclic_derivative(i, sp) * cyclic_derivative(i, Q));
            ++total;
            if (!(lhs == rhs)) {
                ++failures;
                if (r.notes.size() < 3) r.notes.push_back(name + ": sigma2(Xi P, Q) - sum mu(D Sigma P D Q) = " + rat_str(lhs - rhs));
            }
        }
    }
    r.pass = failures == 0;
    r.summary = std::to_string(total - failures) + "/" + std::to_string(total) + " random (P, Q), degree <= 5, order 3";
    r.data["failures"] = failures;
    return r;
}

/// Genus-0 census of the stars P, Q plus k_j stars of type q_j, as a series;
/// coefficients whose diagrams exceed max_half_edges are left unset.
Series<Rational> two_star_census(const Potential& V, int K, const Monomial& P, const Monomial& Q, int max_half_edges,
                                 std::vector<bool>& covered) {
    auto shape = SeriesShape::get(V.size(), K);
    Series<Rational> out(shape);
    covered.assign(shape->size(), false);
    for (std::size_t p = 0; p < shape->size(); ++p) {
        const auto& k = shape->index(p);
        int half = static_cast<int>(P.degree() + Q.degree());
        for (int j = 0; j < V.size(); ++j) half += k[static_cast<std::size_t>(j)] * static_cast<int>(V.term(j).q.degree());
        if (half > max_half_edges) continue;
        covered[p] = true;
        std::vector<Star> stars{star_from_monomial(P), star_from_monomial(Q)};
        Rational weight(1);
        int sign = 1;
        for (int j = 0; j < V.size(); ++j)
            for (int e = 0; e < k[static_cast<std::size_t>(j)]; ++e) {
                stars.push_back(star_from_monomial(V.term(j).q));
                weight /= Rational(e + 1);
                sign = -sign;
            }
        auto c = census(stars);
        out[p] = weight * Rational(sign * static_cast<long long>(c.at(0)));
    }
    return out;
}

CheckResult crit5(const VerifyOptions&) {
    CheckResult r;
    r.pass = true;
    int compared = 0;
    const int K = 3;
    // Anchors at t = 0 under V = 0.
    {
        Potential zero = parse_potential("0", 2);
        SeriesMoments<Rational> mu(zero, 0);
        OperatorContext<Rational> ctx(mu);
        const std::vector<std::tuple<std::string, Monomial, long long>> anchors = {
            {"X^2", Monomial::power(0, 2), 2}, {"X^3", Monomial::power(0, 3), 12}, {"X^4", Monomial::power(0, 4), 36}, {"X1X2", Monomial{0, 1}, 1}};
        for (const auto& [label, w, want] : anchors) {
            Rational got = ctx.sigma2(w, w).constant();
            r.data["anchors"][label] = got.str();
            if (!(got == Rational(want))) {
                r.pass = false;
                r.notes.push_back("anchor sigma2(" + label + ") = " + got.str() + ", expected " + std::to_string(want));
            }
        }
    }
    const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> cases = {
        {kQuartic, {{"x1", "x1"}, {"x1^2", "x1^2"}, {"x1", "x1^3"}, {"x1^3", "x1^3"}, {"x1^2", "x1^4"}, {"x1^4", "x1^4"}}},
        {kTwoMatrix, {{"x1*x2", "x1*x2"}, {"x1", "x2"}, {"x1^2", "x2^2"}, {"x1*x2", "x2*x1"}, {"x1^2*x2", "x2"}, {"x1*x2*x1*x2", "x1^2"}}}};
    for (const auto& [name, pairs] : cases) {
        Potential V = parse_potential(name, 2);
        SeriesMoments<Rational> mu(V, K);
        OperatorContext<Rational> ctx(mu);
        TwoStarPlanar<Rational> M(mu);
        for (const auto& [ps, qs] : pairs) {
            Monomial P = parse_monomial(ps), Q = parse_monomial(qs);
            auto s2 = ctx.sigma2(P, Q);
            auto m2 = M(P, Q);
            std::vector<bool> covered;
            auto cen = two_star_census(V, K, P, Q, 16, covered);
            for (std::size_t p = 0; p < covered.size(); ++p) {
                bool ok = s2[p] == m2[p] && (!covered[p] || s2[p] == cen[p]);
                compared += covered[p] ? 1 : 0;
                if (!ok) {
                    r.pass = false;
                    r.notes.push_back(name + " (" + ps + ", " + qs + ") at " + index_str(s2.shape()->index(p)) + ": sigma2 " + s2[p].str() +
                                      ", M " + m2[p].str() + ", census " + cen[p].str());
                }
            }
        }
    }
    r.summary = "sigma2 = M = census on " + std::to_string(compared) + " coefficients (<= 16 half-edges); anchors 2, 12, 36, 1";
    r.data["coefficients"] = compared;
    return r;
}

CheckResult crit6(const VerifyOptions& opt) {
    CheckResult r;
    std::mt19937_64 g(opt.seed ^ 0x6c);
    int comm_fail = 0, sym_fail = 0, total = 0;
    for (const auto& [name, V] : test_potentials()) {
        SeriesMoments<Rational> mu(V, 3);
        OperatorContext<Rational> ctx(mu);
        ctx.set_xi1_sign_flip(opt.xi1_sign_flip);
        const int m = V.colors();
        for (int it = 0; it < opt.random_cases; ++it) {
            SP P = ctx.lift(random_polynomial(g, m, 6));
            SP Q = ctx.lift(random_polynomial(g, m, 6));
            ++total;
            auto lhs = ctx.gradient(ctx.xi(P));
            auto ds = ctx.gradient(sigma(P));
            auto h = ctx.hess_apply(ds);
            for (int l = 0; l < m; ++l) {
                SP rhs = ds[static_cast<std::size_t>(l)] + h[static_cast<std::size_t>(l)] + ctx.xibar(ds[static_cast<std::size_t>(l)]);
                if (!(rhs == lhs[static_cast<std::size_t>(l)])) {
                    ++comm_fail;
                    if (r.notes.size() < 3) r.notes.push_back(name + ": commutation fails for P = " + to_string(P));
                    break;
                }
            }
            Series<Rational> a = ctx.mu(P * ctx.xibar(Q));
            Series<Rational> b(ctx.shape());
            for (int k = 0; k < m; ++k) b += ctx.mu_tensor_product(partial(k, P), transpose(partial(k, Q)));
            if (!(a == b)) {
                ++sym_fail;
                if (r.notes.size() < 3) r.notes.push_back(name + ": symmetry fails, difference " + rat_str(a - b));
            }
        }
    }
    r.pass = comm_fail == 0 && sym_fail == 0;
    r.summary = "commutation " + std::to_string(total - comm_fail) + "/" + std::to_string(total) + ", symmetry " +
                std::to_string(total - sym_fail) + "/" + std::to_string(total) + " (degree <= 6, order 3)";
    r.data["commutation_failures"] = comm_fail;
    r.data["symmetry_failures"] = sym_fail;
    return r;
}

CheckResult crit7(const VerifyOptions& opt) {
    CheckResult r;
    r.pass = true;
    const int K = 2;
    const std::vector<std::string> queries = {"x1^2", "x1^4", "x1^6", "x1*x2*x1*x2"};
    for (const auto& [name, V] : test_potentials(2)) {
        SeriesMoments<Rational> mu(V, K);
        OperatorContext<Rational> ctx(mu);
        ctx.set_xi1_sign_flip(opt.xi1_sign_flip);
        TwoStarPlanar<Rational> M(mu);
        OneStarGenus1<Rational> M1(M);
        for (const auto& qs : queries) {
            Monomial P = parse_monomial(qs);
            auto phi = ctx.second_order_correction(ctx.lift(P));
            auto rec = M1(P);
            auto maps = map_series(V, K, {P}, 1);
            r.data[name][qs] = phi.str();
            if (!(phi == rec && rec == maps)) {
                r.pass = false;
                r.notes.push_back(name + ", " + qs + ": phi " + phi.str() + " | M1 " + rec.str() + " | census " + maps.str());
            }
            if (qs == "x1^4" && name == kQuartic && !(phi.constant() == Rational(1))) {
                r.pass = false;
                r.notes.push_back("anchor phi(Xi^-1 X^4) at t = 0 is " + phi.constant().str() + ", expected 1");
            }
        }
    }
    r.summary = "phi(Xi^-1 P) = M1(P) = genus-1 census for 4 queries x 2 potentials, order 2; anchor 1";
    return r;
}

CheckResult crit8(const VerifyOptions&) {
    CheckResult r;
    r.pass = true;
    int compared = 0;
    for (const auto& [name, V] : test_potentials()) {
        auto rep = free_energy(V, 3, true);
        compared += static_cast<int>(rep.cross_check.size());
        for (const auto& c : rep.cross_check)
            if (!c.pass) {
                r.pass = false;
                r.notes.push_back(name + " " + c.which + " at " + index_str(c.index) + ": series " + c.series.str() + " vs maps " + c.maps.str());
            }
        r.data[name]["F0"] = rep.F0.str();
        r.data[name]["F1"] = rep.F1.str();
        if (name == kQuartic) {
            Rational a0 = -rep.F0.coefficient({1}), a1 = -rep.F1.coefficient({1});
            if (!(a0 == Rational(2)) || !(a1 == Rational(1))) {
                r.pass = false;
                r.notes.push_back("anchors: coefficient of (-t) in F0 is " + a0.str() + ", in F1 " + a1.str());
            }
        }
    }
    r.summary = std::to_string(compared) + " coefficients of F0/F1 equal census, order 3; anchors 2 and 1";
    return r;
}

Series<Rational> sigma2_series(const Potential& V, int K, const Monomial& P) {
    SeriesMoments<Rational> mu(V, K);
    OperatorContext<Rational> ctx(mu);
    return ctx.sigma2(P, P);
}

CheckResult crit9a(const VerifyOptions& opt) {
    CheckResult r;
    Potential zero = parse_potential("0", 1);
    const double pred2 = sigma2_series(zero, 0, Monomial::power(0, 2)).constant().to_double();
    const double pred4 = sigma2_series(zero, 0, Monomial::power(0, 4)).constant().to_double();
    MatrixEnsembleConfig cfg;
    cfg.N = 150;
    cfg.samples = 20000;
    cfg.sampler = SamplerKind::exact_gue;
    cfg.seed = opt.seed ^ 0x9a;
    // The centering constants are the limits mu(X^2) = 1, mu(X^4) = 2.
    auto reps = fluctuation_test(cfg, {{parse_polynomial("x1^2"), pred2, 1.0}, {parse_polynomial("x1^4"), pred4, 2.0}});
    r.pass = true;
    const char* labels[] = {"Tr A^2", "Tr A^4"};
    std::string summary;
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& f = reps[k];
        bool ok = f.relative_error <= 0.15 && std::abs(f.skew_z) < 4 && std::abs(f.kurtosis_z) < 4;
        r.pass = r.pass && ok;
        summary += std::string(k ? "; " : "") + labels[k] + " var " + fmt(f.sample_variance, 5) + " vs " + fmt(f.predicted) + " (" +
                   fmt(100 * f.relative_error, 3) + "%), skew z " + fmt(f.skew_z, 3) + ", kurt z " + fmt(f.kurtosis_z, 3);
        r.notes.push_back(std::string(labels[k]) + ": 99% CI [" + fmt(f.ci_low, 5) + ", " + fmt(f.ci_high, 5) + "], prediction " +
                          (f.in_ci ? "inside" : "outside"));
        r.data[labels[k]] = {{"variance", f.sample_variance}, {"predicted", f.predicted}, {"relative_error", f.relative_error},
                             {"skew_z", f.skew_z},            {"kurtosis_z", f.kurtosis_z}, {"ci", {f.ci_low, f.ci_high}}};
    }
    r.summary = "N=150, 20000 GUE samples: " + summary;
    return r;
}

CheckResult crit9b(const VerifyOptions& opt) {
    CheckResult r;
    const int K = 6;
    const double t = 0.05;
    Potential V = parse_potential("0.05*x1^4");
    Potential Vf = parse_potential("x1^4");
    SeriesMoments<Rational> mu(Vf, K);
    OperatorContext<Rational> ctx(mu);
    const std::vector<Complex> tv{Complex(t, 0)};
    const double mu2 = mu(Monomial::power(0, 2)).evaluate(tv).real();
    const double s2 = ctx.sigma2(Monomial::power(0, 2), Monomial::power(0, 2)).evaluate(tv).real();

    MatrixEnsembleConfig cfg;
    cfg.N = 100;
    cfg.V = V;
    cfg.sampler = SamplerKind::metropolis;
    cfg.samples = 2000;
    cfg.burn_in = 200;
    cfg.seed = opt.seed ^ 0x9b;
    auto run = mc_run(cfg, {{"x1^2", parse_polynomial("x1^2")}});
    const auto& st = run.stats.front();
    std::vector<double> tr2;
    for (double x : run.values.front()) tr2.push_back(cfg.N * x);
    auto fl = summarize(tr2);
    const double slack = 3 * st.stderr_mean + 2.0 / (cfg.N * cfg.N);
    const bool mean_ok = std::abs(st.mean - mu2) <= slack;
    const double var_err = std::abs(fl.variance - s2) / std::abs(s2);
    const bool var_ok = var_err <= 0.25;
    r.pass = mean_ok && var_ok;
    r.summary = "mean (1/N)Tr A^2 " + fmt(st.mean) + " +- " + fmt(st.stderr_mean, 2) + " vs order-6 series " + fmt(mu2) + "; var Tr A^2 " +
                fmt(fl.variance, 4) + " vs order-6 sigma2 " + fmt(s2) + " (" + fmt(100 * var_err, 3) + "%)";
    SolverConfig sc;
    sc.mode = SolveMode::numeric;
    sc.D_max = 24;
    double numeric = NumericMoments(V, sc)(Monomial::power(0, 2)).real();
    r.notes.push_back("acceptance " + fmt(run.chain.acceptance_rate(), 3) + ", ESS " + fmt(st.ess, 4));
    r.notes.push_back("diagnostic: numeric Schwinger-Dyson mu(X^2) at t = 0.05 is " + fmt(numeric, 8) +
                      "; the order-6 series is evaluated outside its radius of convergence 1/48");
    r.data = {{"series_mu2", mu2}, {"series_sigma2", s2}, {"mc_mean", st.mean}, {"mc_stderr", st.stderr_mean},
              {"mc_variance", fl.variance}, {"numeric_mu2", numeric}};
    return r;
}

CheckResult crit10(const VerifyOptions& opt) {
    CheckResult r;
    MatrixEnsembleConfig cfg;
    cfg.N = 100;
    cfg.V = parse_potential("0.05*x1^4");
    cfg.sampler = SamplerKind::metropolis;
    cfg.samples = 2000;
    cfg.burn_in = 200;
    const std::vector<std::pair<std::string, Polynomial<GaussianRational>>> obs = {{"x1^2", parse_polynomial("x1^2")},
                                                                                  {"x1^4", parse_polynomial("x1^4")}};
    cfg.seed = opt.seed ^ 0x10a;
    auto free_run = mc_run(cfg, obs);
    MatrixEnsembleConfig cut = cfg;
    cut.cutoff = 3.0;
    cut.seed = opt.seed ^ 0x10b;
    double max_radius = 0;
    long violations = 0;
    std::vector<std::vector<double>> values(obs.size(), std::vector<double>(static_cast<std::size_t>(cut.samples)));
    auto chain = sample_gibbs(cut, [&](long idx, const MatrixTuple& A) {
        double rad = spectral_radius(A.front());
        max_radius = std::max(max_radius, rad);
        if (!(rad < *cut.cutoff)) ++violations;
        TraceEvaluator ev(A);
        for (std::size_t o = 0; o < obs.size(); ++o) values[o][static_cast<std::size_t>(idx)] = ev.trace(obs[o].second).real() / cut.N;
    });
    r.pass = violations == 0;
    std::string summary;
    for (std::size_t o = 0; o < obs.size(); ++o) {
        auto a = free_run.stats[o];
        auto b = summarize(values[o]);
        double combined = std::sqrt(a.stderr_mean * a.stderr_mean + b.stderr_mean * b.stderr_mean);
        double z = std::abs(a.mean - b.mean) / combined;
        bool ok = z <= 3.0;
        r.pass = r.pass && ok;
        summary += (o ? "; " : "") + obs[o].first + " " + fmt(a.mean) + " vs " + fmt(b.mean) + " (" + fmt(z, 3) + " combined se)";
        r.data[obs[o].first] = {{"no_cutoff", a.mean}, {"cutoff", b.mean}, {"combined_se", combined}};
    }
    r.summary = summary + "; max spectral radius " + fmt(max_radius, 4) + " < 3 on all " + std::to_string(cut.samples) + " samples";
    r.notes.push_back("cut-off chain acceptance " + fmt(chain.acceptance_rate(), 3) + ", rejections at the cut-off " +
                      std::to_string(chain.cutoff_rejections));
    r.data["violations"] = violations;
    r.data["max_spectral_radius"] = max_radius;
    return r;
}

CheckResult crit11(const VerifyOptions&) {
    CheckResult r;
    r.pass = true;
    r.reproducible = false;
    r.summary = "NOT REPRODUCIBLE at desk scale: isolating the O(1) term F1 of log Z from a Monte Carlo estimate needs o(1) accuracy "
                "against an N^2 leading term; F1 is verified exactly by criteria 7 and 8 instead";
    return r;
}

const std::map<std::string, std::pair<std::string, std::function<CheckResult(const VerifyOptions&)>>>& registry() {
    static const std::map<std::string, std::pair<std::string, std::function<CheckResult(const VerifyOptions&)>>> reg = {
        {"1", {"one-star planar counts are Catalan numbers", crit1}},
        {"2", {"finite-N Wick moments equal the genus expansion of the census", crit2}},
        {"3", {"Schwinger-Dyson series moments equal planar map counts", crit3}},
        {"4", {"variance identity sigma2(Xi P, Q) = sum_i mu(D_i Sigma P D_i Q)", crit4}},
        {"5", {"sigma2 equals planar two-star counts", crit5}},
        {"6", {"commutation and symmetry identities", crit6}},
        {"7", {"genus-1 chain phi(Xi^-1 P) = M1(P) = genus-1 census", crit7}},
        {"8", {"free energy F0, F1 equal genus-0/1 census", crit8}},
        {"9a", {"GUE fluctuations of Tr A^2 and Tr A^4", crit9a}},
        {"9b", {"Metropolis at V = 0.05 X^4 against the order-6 series", crit9b}},
        {"10", {"cut-off model agrees with the free chain", crit10}},
        {"11", {"sharpness of the free-energy expansion by Monte Carlo", crit11}},
    };
    return reg;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
    static const std::vector<std::string> ids = {"1", "2", "3", "4", "5", "6", "7", "8", "9a", "9b", "10", "11"};
    return ids;
}

const std::vector<std::string>& quick_criterion_ids() {
    static const std::vector<std::string> ids = {"1", "2", "3", "4", "5", "6", "7", "8", "11"};
    return ids;
}

CheckResult run_criterion(const std::string& id, const VerifyOptions& opt) {
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end()) throw std::invalid_argument("unknown criterion '" + id + "'");
    auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = it->second.second(opt);
    } catch (const std::exception& e) {
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
    }
    r.id = id;
    r.title = it->second.first;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

nlohmann::json to_json(const CheckResult& r) {
    return {{"id", r.id},           {"title", r.title}, {"pass", r.pass},       {"reproducible", r.reproducible},
            {"summary", r.summary}, {"notes", r.notes}, {"seconds", r.seconds}, {"data", r.data}};
}

}  // namespace mmwb
