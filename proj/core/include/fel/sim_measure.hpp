#pragma once

#include "fel/lattice.hpp"
#include "fel/similitude.hpp"

#include <vector>

namespace fel {

/// Finitely supported probability measure on the similarity group.
struct SimMeasure {
    struct Atom {
        Similitude g;
        double weight;
    };
    std::vector<Atom> atoms;

    int dim() const { return atoms.empty() ? 0 : atoms.front().g.dim(); }
    double total_mass() const;
    /// Rescales weights to sum 1; throws when there is no mass.
    void normalize();
    bool all_isometries(double tol = 1e-12) const;
};

/// H(nu, D_n^G), or H(nu, D_n^G | E_{n_cond}^G) when conditional is set.
double entropy_on_G(const SimMeasure& nu, int n, bool conditional_on_translation = false, int n_cond = -1);

/// H(nu, E_n^G).
double translation_entropy(const SimMeasure& nu, int n);

/// nu.mu = sum_g nu(g) g mu, re-snapped at L_out.
LatticeMeasure group_action(const SimMeasure& nu, const LatticeMeasure& mu, int L_out);

/// nu.x, the push-forward of nu under g -> g(x).
LatticeMeasure orbit(const SimMeasure& nu, const Vec& x, int L_out);

}  // namespace fel
