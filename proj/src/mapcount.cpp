#include "mmwb/mapcount.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace mmwb {

Star star_from_monomial(const Monomial& q) {
    if (q.empty()) throw DiagramError("the unit monomial has no star");
    Star s{q, {}};
    for (std::size_t k = 0; k < q.degree(); ++k) s.half_edges.push_back({static_cast<int>(k), q[k]});
    return s;
}

namespace {

struct Layout {
    std::vector<int> star_of;  // slot -> star
    std::vector<int> next;     // slot -> next slot in cyclic order of its star
    std::vector<int> color;
    int stars = 0;
};

Layout layout(const std::vector<Star>& stars) {
    Layout L;
    L.stars = static_cast<int>(stars.size());
    int base = 0;
    for (int s = 0; s < L.stars; ++s) {
        int deg = static_cast<int>(stars[s].half_edges.size());
        for (int k = 0; k < deg; ++k) {
            L.star_of.push_back(s);
            L.next.push_back(base + (k + 1) % deg);
            L.color.push_back(stars[s].half_edges[k].color);
        }
        base += deg;
    }
    return L;
}

int find(std::vector<int>& p, int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
}

bool connected(const Layout& L, const std::vector<int>& match) {
    if (L.stars <= 1) return true;
    std::vector<int> p(L.stars);
    std::iota(p.begin(), p.end(), 0);
    int comps = L.stars;
    for (std::size_t s = 0; s < match.size(); ++s) {
        int a = find(p, L.star_of[s]), b = find(p, L.star_of[match[s]]);
        if (a != b) {
            p[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

int faces(const Layout& L, const std::vector<int>& match, std::vector<char>& seen) {
    std::fill(seen.begin(), seen.end(), 0);
    int f = 0;
    for (std::size_t h = 0; h < match.size(); ++h) {
        if (seen[h]) continue;
        ++f;
        int x = static_cast<int>(h);
        while (!seen[x]) {
            seen[x] = 1;
            x = L.next[match[x]];
        }
    }
    return f;
}

void validate(const PairedDiagram& d, const Layout& L) {
    if (d.matching.size() != L.next.size()) throw DiagramError("matching size differs from slot count");
    for (std::size_t s = 0; s < d.matching.size(); ++s) {
        int t = d.matching[s];
        if (t < 0 || t >= static_cast<int>(d.matching.size()) || t == static_cast<int>(s) || d.matching[t] != static_cast<int>(s))
            throw DiagramError("matching is not a perfect matching");
        if (L.color[s] != L.color[t]) throw DiagramError("matching glues half-edges of different colors");
    }
}

struct Enumerator {
    const Layout& L;
    bool connected_only;
    std::vector<int> match;
    std::vector<char> seen;
    std::map<int, std::uint64_t> counts;

    Enumerator(const Layout& l, bool c) : L(l), connected_only(c), match(l.next.size(), -1), seen(l.next.size(), 0) {}

    void leaf() {
        if (connected_only && !connected(L, match)) return;
        int v = L.stars;
        int e = static_cast<int>(match.size()) / 2;
        int f = faces(L, match, seen);
        int chi2 = 2 - v + e - f;
        ++counts[chi2 / 2];
    }

    void run(int from) {
        int n = static_cast<int>(match.size());
        while (from < n && match[from] >= 0) ++from;
        if (from == n) {
            leaf();
            return;
        }
        for (int t = from + 1; t < n; ++t) {
            if (match[t] >= 0 || L.color[t] != L.color[from]) continue;
            match[from] = t;
            match[t] = from;
            run(from + 1);
            match[t] = -1;
        }
        match[from] = -1;
    }
};

bool parity_ok(const Layout& L) {
    std::map<int, int> c;
    for (int x : L.color) ++c[x];
    return std::all_of(c.begin(), c.end(), [](auto& kv) { return kv.second % 2 == 0; });
}

}  // namespace

bool is_connected(const PairedDiagram& d) {
    Layout L = layout(d.stars);
    validate(d, L);
    return connected(L, d.matching);
}

int face_count(const PairedDiagram& d) {
    Layout L = layout(d.stars);
    validate(d, L);
    std::vector<char> seen(d.matching.size());
    return faces(L, d.matching, seen);
}

int genus(const PairedDiagram& d) {
    Layout L = layout(d.stars);
    validate(d, L);
    if (!connected(L, d.matching)) throw DiagramError("genus requires a connected diagram");
    std::vector<char> seen(d.matching.size());
    int chi2 = 2 - L.stars + static_cast<int>(d.matching.size()) / 2 - faces(L, d.matching, seen);
    return chi2 / 2;
}

GenusCensus census(const std::vector<Star>& stars, const CensusOptions& opt) {
    Layout L = layout(stars);
    int n = static_cast<int>(L.next.size());
    if (n > opt.cap) throw CapExceeded("census of " + std::to_string(n) + " half-edges exceeds the cap of " + std::to_string(opt.cap));
    GenusCensus out;
    if (n == 0 || !parity_ok(L)) return out;

    // Partition the search on the partner of slot 0.
    std::vector<int> partners;
    for (int t = 1; t < n; ++t)
        if (L.color[t] == L.color[0]) partners.push_back(t);
    unsigned hw = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::max(1u, std::thread::hardware_concurrency());
    unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(partners.size()));
    if (n < 14) workers = 1;

    std::vector<std::map<int, std::uint64_t>> parts(partners.size());
    auto job = [&](std::size_t idx) {
        Enumerator e(L, opt.connected_only);
        e.match[0] = partners[idx];
        e.match[partners[idx]] = 0;
        e.run(1);
        parts[idx] = std::move(e.counts);
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < partners.size(); ++i) job(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mu;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i;
                    {
                        std::lock_guard lock(mu);
                        if (next >= partners.size()) return;
                        i = next++;
                    }
                    job(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& p : parts)
        for (auto [g, c] : p) out.counts[g] += c;
    return out;
}

std::uint64_t matching_count(const std::vector<Star>& stars) {
    std::map<int, std::uint64_t> per_color;
    for (const auto& s : stars)
        for (const auto& h : s.half_edges) ++per_color[h.color];
    std::uint64_t total = 1;
    for (auto [c, k] : per_color) {
        if (k % 2) return 0;
        for (std::uint64_t j = k - 1; j > 1; j -= 2) total *= j;
    }
    return total;
}

namespace {

void for_each_index(int n, int K, MultiIndex& cur, int var, int left, const std::function<void(const MultiIndex&)>& fn) {
    if (var == n) {
        fn(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[var] = k;
        for_each_index(n, K, cur, var + 1, left - k, fn);
    }
    cur[var] = 0;
}

}  // namespace

std::map<int, Series<Rational>> map_generating_functions(const Potential& V, int K, const std::vector<Monomial>& extra,
                                                         const CensusOptions& opt) {
    int n = V.size();
    auto shape = SeriesShape::get(n, K);
    std::map<int, Series<Rational>> out;
    MultiIndex cur(static_cast<std::size_t>(n), 0);
    for_each_index(n, K, cur, 0, K, [&](const MultiIndex& k) {
        int tot = 0;
        for (int x : k) tot += x;
        if (tot == 0 && extra.empty()) return;
        std::vector<Star> stars;
        Rational weight(1);
        for (int j = 0; j < n; ++j) {
            for (int r = 0; r < k[j]; ++r) stars.push_back(star_from_monomial(V.term(j).q));
            weight /= factorial_exact(k[j]);
        }
        if (tot % 2) weight = -weight;
        for (const auto& q : extra) stars.push_back(star_from_monomial(q));
        GenusCensus c = census(stars, opt);
        for (auto [g, cnt] : c.counts) {
            auto& s = out.try_emplace(g, Series<Rational>(shape)).first->second;
            s[shape->position(k)] += weight * Rational(static_cast<long long>(cnt));
        }
    });
    return out;
}

Series<Rational> map_series(const Potential& V, int K, const std::vector<Monomial>& extra, int g, const CensusOptions& opt) {
    auto all = map_generating_functions(V, K, extra, opt);
    auto it = all.find(g);
    if (it == all.end()) return Series<Rational>(SeriesShape::get(V.size(), K));
    return it->second;
}

}  // namespace mmwb
