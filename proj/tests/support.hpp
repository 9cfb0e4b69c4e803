#pragma once

#include <fel/lattice.hpp>

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace fel::testing {

/// Random lattice measure: `atoms` cells drawn uniformly in [0, 2^span)^d, scaled to level L.
inline LatticeMeasure random_measure(std::mt19937_64& rng, int d, int L, int atoms, int span = -1) {
    if (span < 0) span = L;
    std::uniform_int_distribution<std::int64_t> coord(0, (std::int64_t{1} << span) - 1);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<LatticeMeasure::Cell> cells;
    for (int a = 0; a < atoms; ++a) {
        LatticeMeasure::Cell c;
        c.key.fill(0);
        for (int j = 0; j < d; ++j) c.key[static_cast<std::size_t>(j)] = coord(rng) << (L - span);
        c.weight = w(rng);
        cells.push_back(c);
    }
    return LatticeMeasure(d, L, std::move(cells));
}

/// Reference entropy: groups cells by floor(k / 2^(L-n)) in a std::map, sums p log2(1/p).
template <class Coord>
double oracle_entropy(const BasicLatticeMeasure<Coord>& mu, int n) {
    std::map<std::vector<Coord>, double> mass;
    const int s = mu.level() - n;
    for (const auto& c : mu.cells()) {
        std::vector<Coord> k;
        for (int j = 0; j < mu.dim(); ++j) {
            Coord v = c.key[static_cast<std::size_t>(j)];
            // floor division by 2^s, valid for negative values
            Coord q = v >> s;
            k.push_back(q);
        }
        mass[k] += c.weight;
    }
    double h = 0.0;
    for (const auto& [k, p] : mass)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

/// Reference convolution by a std::map over all pairs.
inline std::map<std::vector<std::int64_t>, double> oracle_convolve(const LatticeMeasure& a, const LatticeMeasure& b) {
    std::map<std::vector<std::int64_t>, double> out;
    for (const auto& x : a.cells())
        for (const auto& y : b.cells()) {
            std::vector<std::int64_t> k;
            for (int j = 0; j < a.dim(); ++j)
                k.push_back(x.key[static_cast<std::size_t>(j)] + y.key[static_cast<std::size_t>(j)]);
            out[k] += x.weight * y.weight;
        }
    return out;
}

}  // namespace fel::testing
