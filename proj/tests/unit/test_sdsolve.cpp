#include <cmath>

#include <doctest.h>

#include "mmwb/mapcount.hpp"
#include "mmwb/sdsolve.hpp"

using namespace mmwb;

namespace {

Monomial xk(int k) { return Monomial::power(0, k); }

const long long kCatalan[] = {1, 1, 2, 5, 14, 42, 132};

double series_vs_numeric_gap(const std::string& text, int K, int D_max) {
    Potential V = parse_potential(text);
    SeriesMoments<Rational> series(V, K);
    SolverConfig cfg;
    cfg.mode = SolveMode::numeric;
    cfg.D_max = D_max;
    NumericMoments numeric(V, cfg);
    auto t = V.coupling_values();
    double gap = 0;
    for (int d = 1; d <= 4; ++d)
        for (const auto& w : canonical_words(V.colors(), d))
            gap = std::max(gap, std::abs(series(w).evaluate(t) - numeric(w)));
    return gap;
}

}  // namespace

TEST_SUITE("sdsolve") {
    TEST_CASE("semicircle moments are Catalan numbers") {
        SeriesMoments<Rational> mu(Potential(1, {}), 0);
        for (int k = 0; k <= 6; ++k) CHECK(mu(xk(2 * k)).constant() == Rational(kCatalan[k]));
        for (int k = 0; k <= 5; ++k) CHECK(mu(xk(2 * k + 1)).is_zero());
    }

    TEST_CASE("two free semicircles") {
        SeriesMoments<Rational> mu(Potential(2, {}), 0);
        CHECK(mu(Monomial{0, 1, 0, 1}).constant() == Rational(0));
        CHECK(mu(Monomial{0, 1, 1, 0}).constant() == Rational(1));
        CHECK(mu(Monomial{0, 0, 1, 1}).constant() == Rational(1));
        CHECK(mu(Monomial{0, 1}).constant() == Rational(0));
    }

    TEST_CASE("quartic first order") {
        Potential V = parse_potential("x1^4");
        SeriesMoments<Rational> mu(V, 2);
        Series<Rational> s = mu(xk(2));
        CHECK(s.coefficient({0}) == Rational(1));
        CHECK(s.coefficient({1}) == Rational(-8));
        std::vector<Star> stars = {star_from_monomial(xk(4)), star_from_monomial(xk(2))};
        CHECK(s.coefficient({1}) == -Rational(static_cast<long long>(census(stars).at(0))));
    }

    TEST_CASE("tracial state invariants") {
        Potential V = parse_potential("x1^4 + x2^4 + x1*x2");
        SeriesMoments<Rational> mu(V, 2);
        CHECK(mu(Monomial()).constant() == Rational(1));
        CHECK(mu(Monomial()).min_order() == 0);
        for (const auto& w : all_words(2, 4)) {
            CHECK(mu(w) == mu(w.rotated(1)));
            CHECK(mu(w) == mu(w.reversed()));
        }
    }

    TEST_CASE("series solution satisfies the Schwinger-Dyson equation") {
        for (const char* text : {"x1^4", "x1^3 + x1^2", "x1^4 + x2^4 + x1*x2"}) {
            Potential V = parse_potential(text);
            SeriesMoments<Rational> mu(V, 3);
            for (int d = 0; d <= 4; ++d)
                for (const auto& P : all_words(V.colors(), d))
                    for (int i = 0; i < V.colors(); ++i) CHECK(mu.residual(i, P).is_zero());
        }
    }

    TEST_CASE("numeric solution satisfies the Schwinger-Dyson equation") {
        SolverConfig cfg;
        cfg.mode = SolveMode::numeric;
        cfg.D_max = 24;
        NumericMoments one(parse_potential("0.02*x1^4"), cfg);
        for (int d = 0; d <= 8; ++d) CHECK(std::abs(one.residual(0, xk(d))) < 1e-10);
        // With two colors only one rotation of each word is solved for, so the
        // other rotations carry the degree-truncation error.
        auto worst = [&](int D_max) {
            cfg.D_max = D_max;
            NumericMoments two(parse_potential("0.005*x1^4 + 0.005*x2^4 + 0.02*x1*x2"), cfg);
            double w = 0;
            for (int d = 0; d <= 4; ++d)
                for (const auto& P : all_words(2, d))
                    for (int i = 0; i < 2; ++i) w = std::max(w, std::abs(two.residual(i, P)));
            return w;
        };
        double coarse = worst(12), fine = worst(16);
        CHECK(fine < 1e-8);
        CHECK(fine < coarse / 10);
    }

    TEST_CASE("series and numeric modes agree") {
        // The quartic series has radius 1/48, so its coupling is kept well inside.
        CHECK(series_vs_numeric_gap("0.02*x1*x2", 4, 14) < 1e-6);
        CHECK(series_vs_numeric_gap("0.001*x1^4", 4, 30) < 1e-6);
        CHECK(series_vs_numeric_gap("0.02*x1*x2 + 0.001*x1^4 + 0.001*x2^4", 4, 14) < 1e-6);
    }

    TEST_CASE("floating series backend matches the exact one") {
        Potential V = parse_potential("x1^4 + x1*x2 + x2^2");
        SeriesMoments<Rational> exact(V, 3);
        SeriesMoments<double> fl(V, 3);
        for (const auto& w : canonical_words(2, 4)) {
            auto a = exact(w);
            auto b = fl(w);
            for (std::size_t p = 0; p < a.size(); ++p) CHECK(std::abs(a[p].to_double() - b[p]) <= 1e-12 * (1 + std::abs(b[p])));
        }
    }

    TEST_CASE("solver errors") {
        SolverConfig cfg;
        cfg.mode = SolveMode::numeric;
        cfg.max_iter = 2;
        cfg.D_max = 12;
        CHECK_THROWS_AS(NumericMoments(parse_potential("0.05*x1^4"), cfg), NoConvergence);
        cfg.max_iter = 20000;
        cfg.D_max = 2;
        CHECK_THROWS_AS(NumericMoments(parse_potential("0.05*x1^4"), cfg), DegreeCapError);
        cfg.D_max = 12;
        cfg.tol = 0;
        CHECK_THROWS_AS(cfg.validate(parse_potential("x1^4")), std::invalid_argument);
        cfg.tol = 1e-12;
        NumericMoments ok(parse_potential("0.05*x1^4"), cfg);
        CHECK_THROWS_AS(ok(xk(14)), DegreeCapError);
    }

    TEST_CASE("finite-N Wick oracle") {
        CHECK(wick_finite_N(xk(2)).evaluate(Rational(7)) == Rational(1));
        WickPolynomial x4 = wick_finite_N(xk(4));
        REQUIRE(x4.coeffs.size() >= 2);
        CHECK(x4.coeffs[0] == Rational(2));
        CHECK(x4.coeffs[1] == Rational(1));
        CHECK(x4.evaluate(Rational(10)) == Rational(201, 100));
        CHECK(wick_finite_N(Monomial{0, 1}).evaluate(Rational(3)) == Rational(0));
        CHECK_THROWS_AS(wick_finite_N(xk(22)), CapExceeded);
    }

    TEST_CASE("large-N limit of the Wick oracle equals the semicircle moments") {
        SeriesMoments<Rational> mu(Potential(2, {}), 0);
        for (int d = 2; d <= 8; d += 2)
            for (const auto& w : canonical_words(2, d)) {
                WickPolynomial p = wick_finite_N(w);
                Rational leading = p.coeffs.empty() ? Rational(0) : p.coeffs[0];
                CHECK(leading == mu(w).constant());
            }
    }

    TEST_CASE("moments agree with planar map counts") {
        CHECK(moments_vs_maps(parse_potential("x1^4"), xk(2), 2).pass);
        auto r = moments_vs_maps(Potential(1, {}), xk(6), 0);
        CHECK(r.pass);
        CHECK(r.series.constant() == Rational(5));
        CHECK(r.maps.constant() == Rational(5));
        CHECK(moments_vs_maps(parse_potential("x1^4 + x2^4 + x1*x2"), Monomial{0, 1}, 2).pass);
    }
}
