#pragma once

#include "fel/lattice.hpp"

#include <cstddef>
#include <vector>

namespace fel {

/// Tolerance added to every containment test so that exact relations survive round-off.
inline constexpr double kSubspaceTol = 1e-12;

/// Linear subspace of R^d given by an orthonormal frame (d x k).
class Subspace {
public:
    Subspace() = default;
    static Subspace zero(int d);
    static Subspace full(int d);
    /// Span of the columns; directions with singular value <= tol * max are dropped.
    static Subspace span(const Mat& vectors, double tol = 1e-10);
    static Subspace line(const Vec& direction);
    /// Coordinate subspace spanned by e_i for i in idx.
    static Subspace axes(int d, const std::vector<int>& idx);

    int ambient() const { return d_; }
    int dim() const { return static_cast<int>(frame_.cols()); }
    const Mat& frame() const { return frame_; }

    Mat projector() const;
    Subspace complement() const;
    Vec project(const Vec& x) const;
    /// Euclidean distance from x to the subspace.
    double distance(const Vec& x) const;

private:
    int d_ = 0;
    Mat frame_;
};

/// Directed deviation sup{d(v, W) : v in V, |v| <= 1} = ||P_{W^perp} Q_V||.
double deviation(const Subspace& V, const Subspace& W);

/// Hausdorff distance of the unit-ball sections.
double sub_distance(const Subspace& V, const Subspace& W);

/// 0 when nested; otherwise the least distance of unit vectors of V and W
/// orthogonal to V cap W.
double angle(const Subspace& V, const Subspace& W);

/// V cap B_1(0) contained in the eps-neighborhood of W.
bool in_neighborhood(const Subspace& V, const Subspace& W, double eps);

Subspace intersection(const Subspace& V, const Subspace& W, double tol = 1e-10);
Subspace sum(const Subspace& V, const Subspace& W);

/// Span of the eigenvectors with eigenvalue >= lambda_r (ties widen the span).
Subspace top_eigenspace(const CovSummary& c, int r, double tol = 1e-12);

/// eps_k = 2^k eps^{1/2^k}, in log2 form to survive tiny eps.
double cascade_log2(double log2_eps, int k);

struct IntersectionCover {
    Subspace E;
    int k = 0;               ///< dim E
    double eps_k = 0.0;      ///< E is within eps_k of V and of W
    double eps_next = 0.0;   ///< neighborhood intersection lies within eps_{k+1} of E
};

/// Greedy construction of the subspace of the intersection corollary: grows E by
/// unit vectors orthogonal to E that are closest to both V and W while
/// E stays in V^(eps_k) cap W^(eps_k).
IntersectionCover intersection_cover(const Subspace& V, const Subspace& W, double log2_eps);

struct EngulfResult {
    Subspace V;
    double eps_d = 0.0;     ///< every W lies in V^(eps_d)
    double achieved = 0.0;  ///< max_W deviation(W, V)
    bool degenerate = false;
};

/// Subspace of least dimension j with W in V^(eps_{d-j}) for every W.
EngulfResult minimal_engulfing(const std::vector<Subspace>& Ws, double eps);

struct CommonResult {
    Subspace V;
    std::vector<std::size_t> witnesses;  ///< indices into the input list
    double log2_delta = 0.0;             ///< delta = 2^{(d+1)^2} eps^{1/2^{d^2}}
    double achieved = 0.0;               ///< max_W deviation(V, W)
    bool degenerate = false;
};

/// Iterative refinement from R^d, intersecting with violating members.
CommonResult maximal_common(const std::vector<Subspace>& Ws, double eps);
CommonResult maximal_common_log2(const std::vector<Subspace>& Ws, double log2_eps);

/// Unit vectors approximately uniform on S^{d-1} (d <= 3), one per antipodal pair.
std::vector<Vec> sphere_directions(int d, int count);

}  // namespace fel
