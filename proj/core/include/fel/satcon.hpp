#pragma once

#include "fel/lattice.hpp"
#include "fel/sim_measure.hpp"
#include "fel/subspace.hpp"

#include <cstddef>
#include <vector>

namespace fel {

/// Cell-center atomization of a lattice measure: points as columns.
struct Atoms {
    Mat points;  ///< d x N
    Vec weights;
};
Atoms atoms_of(const LatticeMeasure& mu);

struct ConcentrationCheck {
    bool holds = false;
    Vec witness;        ///< W = witness + V
    double mass = 0.0;  ///< best mu(W^(eps)) found
};

/// Some translate W of V with mu(W^(eps)) >= 1 - eps. Codimension 0 and 1 are
/// decided exactly; higher codimension uses a heuristic ball search.
ConcentrationCheck is_concentrated(const LatticeMeasure& mu, const Subspace& V, double eps);

/// (V, 2^-m)-concentrated and H_m(mu) > dim V - eps.
bool is_uniform(const LatticeMeasure& mu, const Subspace& V, double eps, int m);

/// H_m(pi_{V^perp} mu) / m, with cells taken in the frame coordinates of V^perp.
double projection_entropy(const LatticeMeasure& mu, const Subspace& V, int m);

/// dim V + H_m(pi mu) - H_m(mu); the least eps for which mu is (V, eps, m)-saturated.
double saturation_defect(const LatticeMeasure& mu, const Subspace& V, int m);

bool is_saturated(const LatticeMeasure& mu, const Subspace& V, double eps, int m);

struct SubspaceChoice {
    Subspace V;
    double achieved = 0.0;
};

/// Least-dimensional V (eigen, coordinate, extra and, for d <= 3, grid candidates)
/// such that mu is (V, eps_{d - dim V})-concentrated, eps_k = 4^k eps^{1/2^k}.
/// grid = 0 disables direction grids; grid < 0 picks a default.
SubspaceChoice concentration_subspace(const LatticeMeasure& mu, double eps, const std::vector<Subspace>& extra = {},
                                      int grid = -1);

/// Same candidates, no cascade: least-dimensional V with mu (V, eps)-concentrated.
SubspaceChoice minimal_concentration(const LatticeMeasure& mu, double eps, const std::vector<Subspace>& extra = {});

/// Saturation constant in delta_k = C 2^k k log2(m) / m.
inline constexpr double kSaturationC = 0.25;

/// Largest-dimensional candidate V with mu (V, delta_{dim V}, m)-saturated.
SubspaceChoice saturation_subspace(const LatticeMeasure& mu, int m, const std::vector<Subspace>& extra = {},
                                   int grid = -1, double C = kSaturationC);

struct KVResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::vector<double> deltas;  ///< H(mu*nu^{*(j+1)}) - H(mu*nu^{*j}) at full resolution
    bool monotone = true;
};

/// Default C_kv = 4d when C < 0.
template <class Coord>
KVResult kv_check(const BasicLatticeMeasure<Coord>& mu, const BasicLatticeMeasure<Coord>& nu, int k, int n,
                  double C = -1.0);

struct CovarianceCheck {
    bool holds = false;
    Subspace V;
    double eps = 0.0;
    double mass = 0.0;
};

/// is_concentrated(mu, eigen_{1..r}(mu), lambda_{r+1}^{1/3}).
CovarianceCheck covariance_concentration_check(const LatticeMeasure& mu, int r);

struct AffineSubspace {
    Vec point;
    Subspace direction;
};

struct NonAffineCheck {
    bool holds = true;
    AffineSubspace worst;
    double worst_mass = 0.0;
};

/// mu(A^(sigma)) < eps over affine spans of support tuples and eigen translates.
/// Failure is certified exactly; success only over the candidate family.
NonAffineCheck non_affine_check(const LatticeMeasure& mu, double eps, double sigma, int max_anchors = 48);

/// Each point at distance >= sigma from the affine span of the others.
bool sigma_independent(const std::vector<Vec>& points, double sigma);

double affine_distance(const Vec& x, const AffineSubspace& A);

struct Verdict {
    double entropy_before = 0.0;
    double entropy_after = 0.0;
    double growth = 0.0;
    std::vector<Subspace> subspaces;  ///< V_0 .. V_n
    std::vector<double> sat_by_level;
    std::vector<double> conc_by_level;
    double sat_fraction = 0.0;
    double conc_fraction = 0.0;
    double mean_dim = 0.0;
    bool passed = false;
};

/// Checks the conclusion of the Euclidean inverse theorem. Requires n + m <= L.
Verdict inverse_verdict(const LatticeMeasure& mu, const LatticeMeasure& nu, int n, double eps, int m);

struct PairVerdict {
    GCellId g_cell;
    LatticeMeasure::Key mu_cell;
    double weight = 0.0;
    Verdict verdict;
};

struct IsometryVerdict {
    double entropy_before = 0.0;
    double entropy_after = 0.0;
    double growth = 0.0;
    double nu_entropy = 0.0;  ///< H(nu, D_n^G) / n
    std::vector<PairVerdict> pairs;
    double pass_rate = 0.0;   ///< mass-weighted
    double mean_dim = 0.0;    ///< mass-weighted
    double c_bound = 0.0;     ///< c * nu_entropy, reported only
};

/// Linearizes the action on level-k component pairs and runs inverse_verdict on
/// (component of mu, S_k U_0^{-1}(component of nu . x_0)). Requires k + n + m <= L.
IsometryVerdict isometry_verdict(const SimMeasure& nu, const LatticeMeasure& mu, int k, int n, double eps, int m,
                                 double c = 0.5);

}  // namespace fel
