#include <random>
#include <set>

#include <doctest.h>

#include "mmwb/calculus.hpp"
#include "mmwb/potential.hpp"

using namespace mmwb;

namespace {

using P = Polynomial<Rational>;
using T = TensorPolynomial<Rational>;

P x(int i) { return P(Monomial::letter(i - 1), Rational(1)); }
P one() { return constant(Rational(1)); }
P word(std::initializer_list<int> letters) {
    Monomial w;
    for (int l : letters) w *= Monomial::letter(l - 1);
    return P(w, Rational(1));
}
T tensor(const P& a, const P& b) {
    T out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add({ka, kb}, ca * cb);
    return out;
}

P random_poly(std::mt19937_64& rng, int m, int max_degree, int terms, bool with_constant = true) {
    std::uniform_int_distribution<int> deg(with_constant ? 0 : 1, max_degree), letter(0, m - 1), coef(-3, 3);
    P out;
    for (int t = 0; t < terms; ++t) {
        Monomial w;
        int d = deg(rng);
        for (int k = 0; k < d; ++k) w *= Monomial::letter(letter(rng));
        out.add(w, Rational(coef(rng)));
    }
    return out;
}

Polynomial<GaussianRational> gx(int i) { return Polynomial<GaussianRational>(Monomial::letter(i - 1), 1); }

}  // namespace

TEST_SUITE("ncpoly") {
    TEST_CASE("involution examples") {
        Polynomial<GaussianRational> p(Monomial{0, 1}, GaussianRational(2, 1));
        auto q = involution(p);
        CHECK(q.size() == 1);
        CHECK(q.coefficient(Monomial{1, 0}) == GaussianRational(2, -1));
        CHECK(involution(one()) == one());
        P s = word({1, 2}) + word({2, 1});
        CHECK(involution(s) == s);
        CHECK(involution(involution(p)) == p);
    }

    TEST_CASE("partial examples") {
        CHECK(partial(0, word({1, 2, 1})) == tensor(one(), word({2, 1})) + tensor(word({1, 2}), one()));
        CHECK(partial(0, x(2)).is_zero());
        CHECK(partial(0, word({1, 1})) == tensor(one(), x(1)) + tensor(x(1), one()));
        CHECK_THROWS_AS(partial(2, x(1), 2), ColorError);
    }

    TEST_CASE("cyclic derivative examples") {
        CHECK(cyclic_derivative(0, word({1, 2, 3})) == word({2, 3}));
        for (int k = 1; k <= 6; ++k) {
            P p(Monomial::power(0, k), Rational(1));
            CHECK(cyclic_derivative(0, p) == P(Monomial::power(0, k - 1), Rational(k)));
        }
        CHECK(cyclic_derivative(0, word({2, 3})).is_zero());
        CHECK_THROWS_AS(cyclic_derivative(-1, x(1)), ColorError);
    }

    TEST_CASE("second partial examples") {
        TripleTensorPolynomial<Rational> a;
        a.add({Monomial(), Monomial(), Monomial()}, Rational(2));
        CHECK(partial2(0, word({1, 1})) == a);
        TripleTensorPolynomial<Rational> b;
        b.add({Monomial(), Monomial::letter(1), Monomial()}, Rational(2));
        CHECK(partial2(0, word({1, 2, 1})) == b);
        CHECK(partial2(0, x(1)).is_zero());
    }

    TEST_CASE("sharp examples") {
        CHECK(sharp(tensor(x(1), x(2)), x(3)) == word({1, 3, 2}));
        P p = word({1, 2}) + x(2).scaled_by(Rational(3)) + one();
        CHECK(sharp(tensor(one(), one()), p) == p);
        TripleTensorPolynomial<Rational> t;
        t.add({Monomial(), Monomial::letter(1), Monomial()}, Rational(1));
        CHECK(sharp2(t, x(1), x(1)) == word({1, 2, 1}));
    }

    TEST_CASE("sigma and pi examples") {
        CHECK(sigma(word({1, 2})) == word({1, 2}).scaled_by(Rational(1, 2)));
        CHECK(sigma(one()).is_zero());
        CHECK(sigma(x(1) + word({1, 1})) == x(1) + word({1, 1}).scaled_by(Rational(1, 2)));
        CHECK(pi(one().scaled_by(Rational(3)) + x(1)) == x(1));
        CHECK(pi(word({1, 2})) == word({1, 2}));
        CHECK(pi(one().scaled_by(Rational(5))).is_zero());
        P p = one() + word({1, 2, 2});
        CHECK(pi(pi(p)) == pi(p));
        CHECK(sigma_inverse(sigma(pi(p))) == pi(p));
    }

    TEST_CASE("norm_A examples") {
        CHECK(norm_A(x(1), 2.0) == doctest::Approx(2.0));
        CHECK(norm_A(one(), 2.0) == doctest::Approx(0.0));
        CHECK(norm_A(word({1, 1}).scaled_by(Rational(2)) - x(2), 2.0) == doctest::Approx(10.0));
        CHECK_THROWS_AS(norm_A(x(1), 1.0), std::domain_error);
        CHECK_THROWS_AS(norm_A(x(1), 0.5), std::domain_error);
    }

    TEST_CASE("cyclic canonical examples") {
        CHECK(cyclic_canonical(Monomial{1, 0}) == Monomial{0, 1});
        CHECK(cyclic_canonical(Monomial{0, 1, 0, 1}) == Monomial{0, 1, 0, 1});
        CHECK(cyclic_canonical(Monomial()) == Monomial());
        Monomial w{1, 0, 2, 0, 0};
        for (std::size_t k = 0; k < w.degree(); ++k) CHECK(cyclic_canonical(w.rotated(k)) == cyclic_canonical(w));
        CHECK(canonical_words(2, 4).size() == 6);
        CHECK(all_words(3, 3).size() == 27);
    }

    TEST_CASE("Leibniz rule") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 40; ++trial) {
            P p = random_poly(rng, 3, 3, 4), q = random_poly(rng, 3, 3, 4);
            for (int i = 0; i < 3; ++i) {
                T lhs = partial(i, p * q);
                T rhs = right_multiply(partial(i, p), q) + left_multiply(p, partial(i, q));
                CHECK(lhs == rhs);
            }
        }
    }

    TEST_CASE("involution is anti-multiplicative") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 40; ++trial) {
            Polynomial<GaussianRational> p, q;
            std::uniform_int_distribution<int> c(-2, 2);
            for (int t = 0; t < 4; ++t) {
                p.add(Monomial{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)}, GaussianRational(c(rng), c(rng)));
                q.add(Monomial{static_cast<int>(rng() % 3)}, GaussianRational(c(rng), c(rng)));
            }
            p += gx(1);
            CHECK(involution(p * q) == involution(q) * involution(p));
        }
    }

    TEST_CASE("mixed partial symmetry") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 40; ++trial) {
            P p = random_poly(rng, 3, 6, 5);
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    CHECK(partial(k, cyclic_derivative(l, p)) == transpose(partial(l, cyclic_derivative(k, p))));
        }
    }

    TEST_CASE("Euler identity") {
        std::mt19937_64 rng(14);
        for (int trial = 0; trial < 40; ++trial) {
            P p = random_poly(rng, 3, 6, 5, false);
            P sum;
            for (int k = 0; k < 3; ++k) sum += sharp(partial(k, sigma(p)), x(k + 1));
            CHECK(sum == p);
        }
    }

    TEST_CASE("exact and floating backends agree") {
        std::mt19937_64 rng(15);
        for (int trial = 0; trial < 30; ++trial) {
            P p = random_poly(rng, 2, 6, 5), q = random_poly(rng, 2, 6, 5);
            P exact = sigma(p * involution(q));
            for (int k = 0; k < 2; ++k) exact += cyclic_derivative(k, p * q);
            auto pf = convert_poly<double>(p), qf = convert_poly<double>(q);
            Polynomial<double> fl = sigma(pf * involution(qf));
            for (int k = 0; k < 2; ++k) fl += cyclic_derivative(k, pf * qf);
            auto back = convert_poly<double>(exact);
            std::set<Monomial> keys;
            for (const auto& [k, c] : back) keys.insert(k);
            for (const auto& [k, c] : fl) keys.insert(k);
            for (const auto& k : keys) CHECK(std::abs(back.coefficient(k) - fl.coefficient(k)) <= 1e-12);
        }
    }

    TEST_CASE("polynomial parser") {
        auto p = parse_polynomial("0.5*x1^4 + x1*x2 - 3/2 x2^2");
        CHECK(p.coefficient(Monomial::power(0, 4)) == GaussianRational(Rational(1, 2)));
        CHECK(p.coefficient(Monomial{0, 1}) == GaussianRational(1));
        CHECK(p.coefficient(Monomial::power(1, 2)) == GaussianRational(Rational(-3, 2)));
        CHECK(parse_monomial("x2*x1^2") == Monomial{1, 0, 0});
        CHECK(parse_polynomial("0").is_zero());
    }

    TEST_CASE("potential parsing and self-adjointness") {
        Potential v = parse_potential("0.5*x1^4");
        CHECK(v.colors() == 1);
        CHECK(v.size() == 1);
        CHECK(v.degree() == 4);
        CHECK(v.max_coupling() == doctest::Approx(0.5));
        CHECK_NOTHROW(parse_potential("x1*x2"));
        CHECK(parse_potential("x1*x2").colors() == 2);
        CHECK_THROWS_AS(parse_potential("(1+i)*x1*x2"), SelfAdjointnessError);
        CHECK_NOTHROW(parse_potential("(1+i)*x1*x2*x3 + (1-i)*x3*x2*x1"));
        CHECK(parse_potential("x1^2", 3).colors() == 3);
        CHECK_THROWS_AS(parse_potential("x3^2", 2), ColorError);
    }

    TEST_CASE("parse errors carry a position") {
        try {
            parse_potential("x1^2 + * x2");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() == 7);
        }
        CHECK_THROWS_AS(parse_polynomial("x1^"), ParseError);
        CHECK_THROWS_AS(parse_polynomial("y2"), ParseError);
    }

    TEST_CASE("rational arithmetic overflows into big integers") {
        Rational a(1);
        for (int k = 0; k < 40; ++k) a *= Rational(1000003);
        Rational b = a / Rational(1000003);
        CHECK(b * Rational(1000003) == a);
        CHECK(Rational::parse("6/4") == Rational(3, 2));
        CHECK(Rational::parse("-0.25") == Rational(-1, 4));
        CHECK(Rational::parse("0.125") == Rational(1, 8));
        CHECK(Rational::parse("010") == Rational(10));
        CHECK(Rational::parse("08/012") == Rational(2, 3));
        CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
        CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
    }
}
