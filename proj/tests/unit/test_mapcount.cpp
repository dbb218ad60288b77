#include <functional>
#include <vector>

#include <doctest.h>

#include "mmwb/mapcount.hpp"
#include "mmwb/recursions.hpp"

using namespace mmwb;

namespace {

std::vector<Star> stars_of(std::initializer_list<Monomial> types) {
    std::vector<Star> out;
    for (const auto& q : types) out.push_back(star_from_monomial(q));
    return out;
}

Monomial xk(int k) { return Monomial::power(0, k); }

// Number of non-crossing perfect matchings of 2k points on a line, by direct
// enumeration.
std::uint64_t noncrossing_pairings(int n) {
    std::vector<int> partner(static_cast<std::size_t>(n), -1);
    std::uint64_t count = 0;
    std::function<void()> rec = [&] {
        int first = -1;
        for (int s = 0; s < n; ++s)
            if (partner[s] < 0) {
                first = s;
                break;
            }
        if (first < 0) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    int c = partner[a], d = partner[b];
                    if (a < b && b < c && c < d) return;
                }
            ++count;
            return;
        }
        for (int s = first + 1; s < n; ++s) {
            if (partner[s] >= 0) continue;
            partner[first] = s;
            partner[s] = first;
            rec();
            partner[first] = partner[s] = -1;
        }
    };
    rec();
    return count;
}

// Harer-Zagier: (k+1) e_g(k) = 2(2k-1) e_g(k-1) + (k-1)(2k-1)(2k-3) e_{g-1}(k-2).
std::int64_t harer_zagier(int g, int k) {
    if (g < 0 || k < 0) return 0;
    if (k == 0) return g == 0 ? 1 : 0;
    std::int64_t rhs = 2 * (2 * k - 1) * harer_zagier(g, k - 1);
    if (k >= 2) rhs += static_cast<std::int64_t>(k - 1) * (2 * k - 1) * (2 * k - 3) * harer_zagier(g - 1, k - 2);
    return rhs / (k + 1);
}

Rational sign_over_factorial(int k) {
    Rational r = Rational(1) / factorial_exact(k);
    return k % 2 ? -r : r;
}

}  // namespace

TEST_SUITE("mapcount") {
    TEST_CASE("stars from monomials") {
        Star s = star_from_monomial(Monomial{0, 1});
        REQUIRE(s.half_edges.size() == 2);
        CHECK(s.half_edges[0].slot == 0);
        CHECK(s.half_edges[0].color == 0);
        CHECK(s.half_edges[1].color == 1);
        Star f = star_from_monomial(xk(4));
        CHECK(f.half_edges.size() == 4);
        for (const auto& h : f.half_edges) CHECK(h.color == 0);
        Star t = star_from_monomial(Monomial{1, 0, 1});
        CHECK(t.half_edges[0].color == 1);
        CHECK(t.half_edges[1].color == 0);
        CHECK(t.half_edges[2].color == 1);
        CHECK(t.half_edges[2].slot == 2);
        CHECK_THROWS(star_from_monomial(Monomial()));
    }

    TEST_CASE("genus examples") {
        CHECK(genus({stars_of({xk(2)}), {1, 0}}) == 0);
        CHECK(face_count({stars_of({xk(2)}), {1, 0}}) == 2);
        PairedDiagram crossing{stars_of({xk(4)}), {2, 3, 0, 1}};
        CHECK(face_count(crossing) == 1);
        CHECK(genus(crossing) == 1);
        CHECK(genus({stars_of({xk(4)}), {1, 0, 3, 2}}) == 0);
        // Two 2-stars joined by two edges, slot 0-3 and 1-2.
        CHECK(genus({stars_of({xk(2), xk(2)}), {3, 2, 1, 0}}) == 0);
        CHECK_THROWS_AS(genus({stars_of({xk(2), xk(2)}), {1, 0, 3, 2}}), DiagramError);
    }

    TEST_CASE("connectivity examples") {
        CHECK(is_connected({stars_of({xk(4)}), {2, 3, 0, 1}}));
        CHECK_FALSE(is_connected({stars_of({xk(2), xk(2)}), {1, 0, 3, 2}}));
        CHECK(is_connected({stars_of({xk(2), xk(2)}), {2, 3, 0, 1}}));
    }

    TEST_CASE("census examples") {
        GenusCensus c = census(stars_of({xk(4)}));
        CHECK(c.at(0) == 2);
        CHECK(c.at(1) == 1);
        CHECK(c.total() == 3);
        CHECK(census(stars_of({Monomial{0, 1}})).counts.empty());
        CHECK(census(stars_of({xk(3)})).total() == 0);
    }

    TEST_CASE("planar one-star counts match non-crossing pairings") {
        for (int k = 1; k <= 6; ++k) {
            auto expected = noncrossing_pairings(2 * k);
            CHECK(census(stars_of({xk(2 * k)})).at(0) == expected);
        }
        CHECK(noncrossing_pairings(12) == 132);
    }

    TEST_CASE("one-star census follows the Harer-Zagier recursion") {
        for (int k = 1; k <= 6; ++k) {
            GenusCensus c = census(stars_of({xk(2 * k)}));
            for (int g = 0; 2 * g <= k; ++g)
                CHECK(c.at(g) == static_cast<std::uint64_t>(harer_zagier(g, k)));
        }
    }

    TEST_CASE("Wick polynomial equals genus-weighted census") {
        for (int k = 1; k <= 5; ++k) {
            WickPolynomial w = wick_finite_N(xk(2 * k));
            GenusCensus c = census(stars_of({xk(2 * k)}));
            for (int g = 0; g < static_cast<int>(w.coeffs.size()); ++g)
                CHECK(w.coeffs[static_cast<std::size_t>(g)] == Rational(static_cast<long long>(harer_zagier(g, k))));
            CHECK(w.evaluate(Rational(3)) == [&] {
                Rational s;
                Rational x(1, 9), p(1);
                for (int g = 0; g <= k; ++g, p *= x) s += p * Rational(static_cast<long long>(c.at(g)));
                return s;
            }());
        }
        WickPolynomial x4 = wick_finite_N(xk(4));
        CHECK(x4.evaluate(Rational(2)) == Rational(9, 4));
        CHECK(wick_finite_N(Monomial{0, 1}).evaluate(Rational(5)) == Rational(0));
    }

    TEST_CASE("census totals equal connected matching counts") {
        // A single star is always connected, so every matching is counted.
        for (int k = 1; k <= 5; ++k) {
            std::uint64_t dfact = 1;
            for (int j = 2 * k - 1; j > 0; j -= 2) dfact *= static_cast<std::uint64_t>(j);
            CHECK(matching_count(stars_of({xk(2 * k)})) == dfact);
            CHECK(census(stars_of({xk(2 * k)})).total() == dfact);
        }
        // Two 2-stars: 3 matchings, 1 disconnected.
        CHECK(matching_count(stars_of({xk(2), xk(2)})) == 3);
        CHECK(census(stars_of({xk(2), xk(2)})).total() == 2);
        CHECK(matching_count(stars_of({xk(4), xk(2), xk(2)})) == 105);
    }

    TEST_CASE("census is invariant under color permutation") {
        auto swap = [](const Monomial& q) {
            std::string s = q.letters();
            for (auto& ch : s) ch = static_cast<char>(1 - ch);
            return Monomial(s);
        };
        std::vector<Monomial> types = {Monomial{0, 1, 0, 1}, Monomial{0, 0, 1, 1}, Monomial{0, 1, 1, 0}};
        std::vector<Star> a, b;
        for (const auto& q : types) {
            a.push_back(star_from_monomial(q));
            b.push_back(star_from_monomial(swap(q)));
        }
        GenusCensus ca = census(a), cb = census(b);
        CHECK(ca.counts == cb.counts);
        CHECK(ca.total() > 0);
    }

    TEST_CASE("census is independent of the worker count") {
        auto stars = stars_of({xk(4), xk(4), xk(4)});
        CensusOptions one;
        one.threads = 1;
        CensusOptions many;
        many.threads = 4;
        CHECK(census(stars, one).counts == census(stars, many).counts);
    }

    TEST_CASE("census cap") {
        CensusOptions opt;
        opt.cap = 8;
        CHECK_THROWS_AS(census(stars_of({xk(6), xk(4)}), opt), CapExceeded);
        CHECK_NOTHROW(census(stars_of({xk(4), xk(4)}), opt));
    }

    TEST_CASE("two-star planar examples") {
        Potential zero(1, {});
        CHECK(two_star_planar(xk(2), xk(2), zero, 0).constant() == Rational(2));
        CHECK(two_star_planar(xk(4), xk(4), zero, 0).constant() == Rational(36));
        Potential zero2(2, {});
        CHECK(two_star_planar(Monomial{0}, Monomial{1}, zero2, 0).is_zero());
        CHECK(census(stars_of({xk(4), xk(4)})).at(0) == 36);
    }

    TEST_CASE("two-star recursion matches brute force") {
        Potential v = parse_potential("x1^4");
        for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {1, 1}, {1, 3}, {2, 4}}) {
            Series<Rational> s = two_star_planar(xk(p), xk(q), v, 2);
            for (int k = 0; k <= 2; ++k) {
                if (4 * k + p + q > 16) continue;
                std::vector<Star> stars;
                for (int j = 0; j < k; ++j) stars.push_back(star_from_monomial(xk(4)));
                stars.push_back(star_from_monomial(xk(p)));
                stars.push_back(star_from_monomial(xk(q)));
                Rational expected = sign_over_factorial(k) * Rational(static_cast<long long>(census(stars).at(0)));
                CHECK(s.coefficient({k}) == expected);
            }
        }
    }

    TEST_CASE("genus-one examples") {
        Potential zero(1, {});
        CHECK(one_star_genus1(xk(4), zero, 0).constant() == Rational(1));
        CHECK(one_star_genus1(xk(2), zero, 0).is_zero());
        Potential v = parse_potential("x1^4");
        Series<Rational> s = one_star_genus1(xk(2), v, 1);
        CHECK(s.coefficient({1}) == -Rational(static_cast<long long>(census(stars_of({xk(4), xk(2)})).at(1))));
    }

    TEST_CASE("genus-one recursion matches brute force") {
        Potential v = parse_potential("x1^4");
        for (int p : {2, 4, 6}) {
            Series<Rational> s = one_star_genus1(xk(p), v, 2);
            for (int k = 0; k <= 2; ++k) {
                if (4 * k + p > 16) continue;
                std::vector<Star> stars;
                for (int j = 0; j < k; ++j) stars.push_back(star_from_monomial(xk(4)));
                stars.push_back(star_from_monomial(xk(p)));
                Rational expected = sign_over_factorial(k) * Rational(static_cast<long long>(census(stars).at(1)));
                CHECK(s.coefficient({k}) == expected);
            }
        }
    }

    TEST_CASE("generating functions by genus") {
        Potential v = parse_potential("x1^4");
        auto by_genus = map_generating_functions(v, 2, {xk(2)});
        CHECK(by_genus.at(0) == map_series(v, 2, {xk(2)}, 0));
        CHECK(by_genus.at(0).coefficient({0}) == Rational(1));
        CHECK(by_genus.at(0).coefficient({1}) == Rational(-8));
    }
}
