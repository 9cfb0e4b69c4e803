#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace fel {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Similarity x -> 2^{-t} U x + a of R^d. U is orthogonal, t = log2(1/r).
struct Similitude {
    double t = 0.0;
    Mat U;
    Vec a;

    Similitude() = default;
    Similitude(double t_, Mat U_, Vec a_);

    int dim() const { return static_cast<int>(a.size()); }
    double ratio() const;
    bool is_isometry(double tol = 1e-12) const;
    bool is_orthogonal(double tol = 1e-10) const;

    Vec apply(const Vec& x) const;
    Similitude inverse() const;

    static Similitude identity(int d);
    /// S_t x = 2^t x.
    static Similitude scale_map(double t, int d);
    static Similitude translation(const Vec& a);
    static Similitude from_ratio(double r, Mat U, Vec a);
};

/// g o h.
Similitude compose(const Similitude& g, const Similitude& h);

/// Largest singular value.
double op_norm(const Mat& A);

/// |t_g - t_h| + ||U_g - U_h||_op + ||a_g - a_h||_2.
double sim_distance(const Similitude& g, const Similitude& h);

struct GCellId {
    int level = 0;
    std::vector<std::int64_t> coords;

    bool operator==(const GCellId&) const = default;
    auto operator<=>(const GCellId&) const = default;
};

struct GCells {
    GCellId full;
    GCellId translation_only;
};

/// D_n^G cell from floor(2^n (t, U row-major, a)) and the E_n^G cell from a alone.
GCells dyadic_cells_G(const Similitude& g, int n);
GCellId translation_cell(const Similitude& g, int n);
GCellId full_cell(const Similitude& g, int n);

/// Rotation of the plane by angle theta.
Mat rotation2(double theta);

}  // namespace fel
