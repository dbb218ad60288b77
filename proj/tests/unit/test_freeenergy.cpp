#include <cmath>

#include <doctest.h>

#include "mmwb/freeenergy.hpp"
#include "mmwb/mapcount.hpp"

using namespace mmwb;

namespace {

// sum over k of (-1)^k / k! * census(k stars of type q).g
Rational census_coefficient(const Monomial& q, int k, int g) {
    std::vector<Star> stars;
    for (int j = 0; j < k; ++j) stars.push_back(star_from_monomial(q));
    Rational r = Rational(static_cast<long long>(census(stars).at(g))) / factorial_exact(k);
    return k % 2 ? -r : r;
}

}  // namespace

TEST_SUITE("freeenergy") {
    TEST_CASE("quartic anchors") {
        Potential V = parse_potential("x1^4");
        Series<Rational> F0 = f0(V, 3), F1 = f1(V, 3);
        CHECK(F0.coefficient({0}) == Rational(0));
        CHECK(F0.coefficient({1}) == Rational(-2));
        CHECK(F1.coefficient({0}) == Rational(0));
        CHECK(F1.coefficient({1}) == Rational(-1));
    }

    TEST_CASE("quadratic anchors") {
        Potential V = parse_potential("x1^2");
        Series<Rational> F0 = f0(V, 4), F1 = f1(V, 4);
        CHECK(F0.coefficient({1}) == Rational(-1));
        CHECK(F1.coefficient({1}) == Rational(0));
        for (int k = 1; k <= 4; ++k) {
            CHECK(F0.coefficient({k}) == census_coefficient(Monomial::power(0, 2), k, 0));
            CHECK(F1.coefficient({k}) == census_coefficient(Monomial::power(0, 2), k, 1));
        }
    }

    TEST_CASE("mixed quadratic term has no genus-one self gluing") {
        Potential V = parse_potential("x1*x2");
        CHECK(f1(V, 2).coefficient({1}) == Rational(0));
        CHECK(f0(V, 2).coefficient({1}) == Rational(0));
    }

    TEST_CASE("quartic free energy equals map counts") {
        Potential V = parse_potential("x1^4");
        Series<Rational> F0 = f0(V, 3), F1 = f1(V, 3);
        for (int k = 1; k <= 3; ++k) {
            CHECK(F0.coefficient({k}) == census_coefficient(Monomial::power(0, 4), k, 0));
            CHECK(F1.coefficient({k}) == census_coefficient(Monomial::power(0, 4), k, 1));
        }
    }

    TEST_CASE("built-in cross-check") {
        FreeEnergyReport r = free_energy(parse_potential("x1^4 + x2^4 + x1*x2"), 3);
        CHECK(r.pass());
        CHECK_FALSE(r.cross_check.empty());
        CHECK(r.F0.constant() == Rational(0));
        CHECK(r.F1.constant() == Rational(0));
    }

    TEST_CASE("coupling derivative of F0 is minus the moment") {
        Potential V = parse_potential("x1^4 + x2^4 + x1*x2");
        const int K = 3;
        SeriesMoments<Rational> mu(V, K);
        Series<Rational> F0 = f0(mu);
        const auto& shape = *F0.shape();
        for (int j = 0; j < V.size(); ++j) {
            Series<Rational> m = mu(V.term(j).q);
            for (std::size_t p = 0; p < shape.size(); ++p) {
                if (shape.total(p) >= K) continue;
                MultiIndex k = shape.index(p);
                int kj = k[static_cast<std::size_t>(j)];
                k[static_cast<std::size_t>(j)] += 1;
                CHECK(F0.coefficient(k) * Rational(kj + 1) == -m[p]);
            }
        }
    }

    TEST_CASE("thermodynamic reference") {
        ThermoReference zero = thermo_reference(parse_potential("0.05*x1^4"), 3);
        CHECK(std::abs(zero.F0_at(0.0)) == doctest::Approx(0.0));
        Complex F0 = zero.F0_at(1.0);
        double expected = 0;
        for (int k = 1; k <= 3; ++k)
            expected += std::pow(0.05, k) * census_coefficient(Monomial::power(0, 4), k, 0).to_double();
        CHECK(F0.real() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(F0.imag() == doctest::Approx(0.0));
        CHECK(zero.log_Z(10.0).real() == doctest::Approx(100 * F0.real() + zero.F1_at(1.0).real()));
        CHECK(zero.F0.coefficient({1}) == Rational(-2));
    }
}
