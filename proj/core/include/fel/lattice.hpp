#pragma once

#include "fel/similitude.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace fel {

inline constexpr int kMaxDim = 4;

/// Cell coordinate for lattices finer than 2^-62 (e.g. L = 264).
using DeepCoord = boost::multiprecision::int512_t;

/// Probability measure on the dyadic lattice 2^{-L} Z^d. Cell k is the half-open
/// cube prod [k_j 2^{-L}, (k_j + 1) 2^{-L}). Cells are kept in Z-order (bit
/// interleaving), so every dyadic cell of every level is a contiguous run.
template <class Coord>
class BasicLatticeMeasure {
public:
    using coord_type = Coord;
    using Key = std::array<Coord, kMaxDim>;
    struct Cell {
        Key key;
        double weight;
    };

    BasicLatticeMeasure() = default;
    /// Merges duplicate keys, drops non-positive weights and normalizes.
    BasicLatticeMeasure(int d, int L, std::vector<Cell> cells);

    static BasicLatticeMeasure dirac(int d, int L, const Key& key);

    int dim() const { return d_; }
    int level() const { return L_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }

    double weight_of(const Key& key) const;
    double total_mass() const;

private:
    int d_ = 0;
    int L_ = 0;
    std::vector<Cell> cells_;
};

using LatticeMeasure = BasicLatticeMeasure<std::int64_t>;
using DeepLatticeMeasure = BasicLatticeMeasure<DeepCoord>;

/// Z-order comparison of cell keys in dimension d.
template <class Coord>
bool zorder_less(const std::array<Coord, kMaxDim>& a, const std::array<Coord, kMaxDim>& b, int d);

/// Cell of level L - s containing the level-L cell k (floor division by 2^s).
template <class Coord>
std::array<Coord, kMaxDim> shift_key(const std::array<Coord, kMaxDim>& k, int d, int s);

/// Cell center in R^d.
template <class Coord>
Vec cell_center(const std::array<Coord, kMaxDim>& k, int d, int L);

struct EntropySuite {
    double H = 0.0;       ///< H(mu, D_n) in bits
    double H_n = 0.0;     ///< H / n (0 when n = 0)
    double H_cond = 0.0;  ///< H(mu, D_n | D_m), equal to H when m is absent
};

/// H(mu, D_n). Requires 0 <= n <= L.
template <class Coord>
double entropy(const BasicLatticeMeasure<Coord>& mu, int n);

/// H(mu, D_n) / n.
template <class Coord>
double normalized_entropy(const BasicLatticeMeasure<Coord>& mu, int n);

template <class Coord>
EntropySuite entropy_suite(const BasicLatticeMeasure<Coord>& mu, int n, std::optional<int> m = std::nullopt);

/// Image of mu on the coarser lattice of level n <= L.
template <class Coord>
BasicLatticeMeasure<Coord> coarsen(const BasicLatticeMeasure<Coord>& mu, int n);

/// Conditional measure on the level-i cell `cell`. Raw components stay on the
/// lattice of mu; rescaled ones are pushed through the homothety mapping the cell
/// onto [0,1)^d and live at level L - i.
template <class Coord>
BasicLatticeMeasure<Coord> component(const BasicLatticeMeasure<Coord>& mu, const std::array<Coord, kMaxDim>& cell, int i,
                                     bool rescaled);

template <class Coord>
struct ComponentView {
    std::array<Coord, kMaxDim> cell;  ///< level-i cell index
    double weight;                    ///< mu(cell)
    BasicLatticeMeasure<Coord> measure;
};

/// All level-i components, in Z-order of their cells.
template <class Coord>
std::vector<ComponentView<Coord>> components(const BasicLatticeMeasure<Coord>& mu, int i, bool rescaled);

/// (1/|I|) sum_{i in I} sum_D mu(D) f(mu_D). Exact enumeration; components are
/// evaluated in parallel and summed in a fixed order.
template <class Coord>
double component_expectation(const BasicLatticeMeasure<Coord>& mu, const std::vector<int>& levels,
                             const std::function<double(const BasicLatticeMeasure<Coord>&)>& f, bool rescaled = true);

template <class Coord>
double component_probability(const BasicLatticeMeasure<Coord>& mu, const std::vector<int>& levels,
                             const std::function<bool(const BasicLatticeMeasure<Coord>&)>& pred, bool rescaled = true);

/// E_{0<=i<=n} H_m(mu^{x,i}) computed by enumerating rescaled components.
template <class Coord>
double local_entropy_average(const BasicLatticeMeasure<Coord>& mu, int n, int m);

/// Convolution on cell indices: (mu * nu)(c) = sum_{a+b=c} mu(a) nu(b).
template <class Coord>
BasicLatticeMeasure<Coord> convolve(const BasicLatticeMeasure<Coord>& mu, const BasicLatticeMeasure<Coord>& nu);

/// mu^{*k}; mu^{*0} is the unit mass at cell 0.
template <class Coord>
BasicLatticeMeasure<Coord> self_convolve(const BasicLatticeMeasure<Coord>& mu, int k);

template <class Coord>
BasicLatticeMeasure<Coord> translate(const BasicLatticeMeasure<Coord>& mu, const std::array<Coord, kMaxDim>& offset);

struct CovSummary {
    Vec mean;
    Mat Sigma;
    Vec eigenvalues;   ///< descending, clamped at 0
    Mat eigenvectors;  ///< columns, orthonormal

    /// lambda_k with lambda_0 = d and lambda_k = 0 for k > d.
    double lambda(int k) const;
};

CovSummary cov_summary(const Vec& mean, const Mat& Sigma);

/// Moments of the cell-center atomization.
template <class Coord>
CovSummary mean_cov(const BasicLatticeMeasure<Coord>& mu);

DeepLatticeMeasure to_deep(const LatticeMeasure& mu);

// --- double-coordinate operations on the int64 lattice ---

/// floor(2^L x) with range checking.
std::int64_t snap_coordinate(double x, int L);

/// Snaps weighted points to cells floor(2^L x).
LatticeMeasure make_lattice(const std::vector<Vec>& points, const std::vector<double>& weights, int L);

/// Maps each cell center by g and re-snaps at L_out.
LatticeMeasure pushforward(const Similitude& g, const LatticeMeasure& mu, int L_out);

/// Dense self-convolution by FFT (used by self_convolve when it pays off).
LatticeMeasure self_convolve_fft(const LatticeMeasure& mu, int k);

/// Uniform measure on all cells of [0,1)^d at level L.
LatticeMeasure uniform_cube(int d, int L);

extern template class BasicLatticeMeasure<std::int64_t>;
extern template class BasicLatticeMeasure<DeepCoord>;

}  // namespace fel
