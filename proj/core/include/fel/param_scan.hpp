#pragma once

#include "fel/ifs.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fel {

/// Registered parametrized family t -> Phi_t over an axis-aligned box in R^m.
class ParamFamily {
public:
    enum class Kind { bernoulli, fat_sierpinski, translation, interpolation };

    /// (beta, gamma) -> {beta x, gamma x + 1}.
    static ParamFamily bernoulli(std::vector<double> lo = {0.5, 0.5}, std::vector<double> hi = {0.7, 0.7});
    static ParamFamily fat_sierpinski(double lo = 0.34, double hi = 0.99);
    /// Fixed r_i U_i; the parameter is the concatenation of the translations a_i.
    static ParamFamily translation(std::vector<double> ratios, std::vector<Mat> rotations, std::vector<double> lo,
                                   std::vector<double> hi);
    /// t in [0,1]: r and a interpolated linearly between A and B. Orthogonal parts
    /// must agree, since a convex combination of rotations is not a rotation.
    static ParamFamily interpolation(IFSSystem A, IFSSystem B);

    Kind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    int param_dim() const { return static_cast<int>(lo_.size()); }
    int dim() const;
    std::size_t alphabet() const;
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

    bool contains(const std::vector<double>& t, double margin = 0.0) const;
    /// Throws std::domain_error outside the box.
    IFSSystem eval(const std::vector<double>& t) const;

    /// Parses "bernoulli", "fat-sierpinski", optionally followed by a box such as "[0.5,0.7]x[0.5,0.7]".
    static ParamFamily parse(const std::string& spec);

private:
    Kind kind_ = Kind::bernoulli;
    std::string id_;
    std::vector<double> lo_, hi_;
    std::vector<double> ratios_;
    std::vector<Mat> rotations_;
    std::optional<IFSSystem> A_, B_;
};

/// phi_i(0) - phi_j(0) at parameter t.
Vec delta_ij_t(const ParamFamily& F, const Word& i, const Word& j, const std::vector<double>& t);

struct RankResult {
    int rank = 0;
    Vec singular_values;  ///< descending
    Mat jacobian;         ///< d x m
};

/// Central differences per parameter axis; rank counts singular values above tol * sigma_max.
RankResult jacobian_rank(const ParamFamily& F, const Word& i, const Word& j, const std::vector<double>& t,
                         double h = 1e-5, double tol = 1e-6);

/// min over distinct words of ||phi_i(0) - phi_j(0)||_inf at level n.
double min_image_gap(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

struct CoverCell {
    std::vector<double> center;
    double gap = 0.0;  ///< min_image_gap at the center
    bool hit = false;
};

struct CoverResult {
    std::size_t hit_count = 0;
    std::size_t cells = 0;
    double threshold = 0.0;  ///< eps^n
    double bound = 0.0;      ///< |Lambda|^{2n} times the reference covering count
    std::vector<CoverCell> rows;
};

/// Grid cells of side grid_step tiling the box, each tested at its center. The
/// reference covering count is (cells per axis)^{m - r}, r the assumed rank.
CoverResult exceptional_cover(const ParamFamily& F, int n, double eps, double grid_step, int rank = -1,
                              std::uint64_t budget = kDefaultBudget);

/// Inclusive regular grid with counts[k] points on axis k (a single point sits at the midpoint).
std::vector<std::vector<double>> grid_points(const std::vector<double>& lo, const std::vector<double>& hi,
                                             const std::vector<int>& counts);

struct ScanDiagnostics {
    bool sdim = true;
    std::optional<int> dim_estimate_n;
    int dim_estimate_L = -1;
    std::optional<int> delta_n;
    std::optional<int> diagnostics_n;
    double diagnostics_q = 2.0;
};

struct ScanRow {
    std::vector<double> t;
    std::vector<std::pair<std::string, double>> values;
    std::string error;  ///< empty on success
};

/// One row per grid point, in grid order. A failing point records its error and the scan continues.
std::vector<ScanRow> scan(const ParamFamily& F, const std::vector<std::vector<double>>& grid,
                          const ScanDiagnostics& diag, std::uint64_t budget = kDefaultBudget);

/// Column names in row order for the given diagnostics.
std::vector<std::string> scan_columns(const ScanDiagnostics& diag);

}  // namespace fel
