#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "mmwb/potential.hpp"
#include "mmwb/series.hpp"

namespace mmwb {

/// A vertex whose half-edges are colored by the letters of its type, read in
/// cyclic order from the distinguished first slot.
struct Star {
    Monomial type;
    struct HalfEdge {
        int slot;
        int color;
    };
    std::vector<HalfEdge> half_edges;
};

Star star_from_monomial(const Monomial& q);

/// Stars plus a perfect matching of their half-edges. Global slot numbering
/// concatenates the stars in order; matching[s] is the partner of slot s.
struct PairedDiagram {
    std::vector<Star> stars;
    std::vector<int> matching;
};

class DiagramError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

bool is_connected(const PairedDiagram& d);
/// g = (2 - V + E - F) / 2 with faces traced through the rotation system.
int genus(const PairedDiagram& d);
int face_count(const PairedDiagram& d);

struct GenusCensus {
    std::map<int, std::uint64_t> counts;

    std::uint64_t at(int g) const {
        auto it = counts.find(g);
        return it == counts.end() ? 0 : it->second;
    }
    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto [g, c] : counts) s += c;
        return s;
    }
};

struct CensusOptions {
    int cap = 20;
    int threads = 0;  // 0: hardware concurrency
    bool connected_only = true;
};

/// Enumerates all color-respecting perfect matchings of the labeled stars and
/// buckets the connected ones by genus.
GenusCensus census(const std::vector<Star>& stars, const CensusOptions& opt = {});

/// Number of color-respecting perfect matchings, connected or not.
std::uint64_t matching_count(const std::vector<Star>& stars);

/// Map generating functions by genus:
///   sum_k prod_j (-t_j)^{k_j} / k_j! * census(k_j stars of type q_j + extra).g
/// truncated at total order K. With no extra stars the k = 0 term is omitted.
std::map<int, Series<Rational>> map_generating_functions(const Potential& V, int K, const std::vector<Monomial>& extra,
                                                         const CensusOptions& opt = {});

/// Single-genus convenience wrapper.
Series<Rational> map_series(const Potential& V, int K, const std::vector<Monomial>& extra, int genus,
                            const CensusOptions& opt = {});

}  // namespace mmwb
