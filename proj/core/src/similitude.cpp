#include "fel/similitude.hpp"

#include <cmath>
#include <stdexcept>

namespace fel {

Similitude::Similitude(double t_, Mat U_, Vec a_) : t(t_), U(std::move(U_)), a(std::move(a_)) {
    if (U.rows() != U.cols() || U.rows() != a.size()) {
        throw std::invalid_argument("similitude: U must be d x d with d = size of a");
    }
}

double Similitude::ratio() const { return std::exp2(-t); }

bool Similitude::is_isometry(double tol) const { return std::abs(t) <= tol; }

bool Similitude::is_orthogonal(double tol) const {
    const int d = dim();
    return (U.transpose() * U - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

Vec Similitude::apply(const Vec& x) const {
    if (x.size() != a.size()) throw std::invalid_argument("apply: dimension mismatch");
    return std::exp2(-t) * (U * x) + a;
}

Similitude Similitude::inverse() const {
    Mat Ut = U.transpose();
    Vec b = -std::exp2(t) * (Ut * a);
    return {-t, std::move(Ut), std::move(b)};
}

Similitude Similitude::identity(int d) { return {0.0, Mat::Identity(d, d), Vec::Zero(d)}; }

Similitude Similitude::scale_map(double t, int d) { return {-t, Mat::Identity(d, d), Vec::Zero(d)}; }

Similitude Similitude::translation(const Vec& a) {
    const auto d = a.size();
    return {0.0, Mat::Identity(d, d), a};
}

Similitude Similitude::from_ratio(double r, Mat U, Vec a) {
    if (!(r > 0.0)) throw std::invalid_argument("similitude: ratio must be positive");
    return {-std::log2(r), std::move(U), std::move(a)};
}

Similitude compose(const Similitude& g, const Similitude& h) {
    if (g.dim() != h.dim()) throw std::invalid_argument("compose: dimension mismatch");
    Similitude out;
    out.t = g.t + h.t;
    out.U = g.U * h.U;
    out.a = g.a + std::exp2(-g.t) * (g.U * h.a);
    return out;
}

double op_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    if (A.rows() == 1 && A.cols() == 1) return std::abs(A(0, 0));
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues()(0);
}

double sim_distance(const Similitude& g, const Similitude& h) {
    if (g.dim() != h.dim()) throw std::invalid_argument("sim_distance: dimension mismatch");
    return std::abs(g.t - h.t) + op_norm(g.U - h.U) + (g.a - h.a).norm();
}

namespace {

std::int64_t dyadic_floor(double x, int n) {
    const double v = std::floor(std::ldexp(x, n));
    if (!std::isfinite(v) || std::abs(v) >= 4.6e18) {
        throw std::overflow_error("dyadic cell coordinate out of range");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

GCellId translation_cell(const Similitude& g, int n) {
    GCellId c{n, {}};
    c.coords.reserve(g.a.size());
    for (Eigen::Index i = 0; i < g.a.size(); ++i) c.coords.push_back(dyadic_floor(g.a(i), n));
    return c;
}

GCellId full_cell(const Similitude& g, int n) {
    const int d = g.dim();
    GCellId c{n, {}};
    c.coords.reserve(1 + d * d + d);
    c.coords.push_back(dyadic_floor(g.t, n));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c.coords.push_back(dyadic_floor(g.U(i, j), n));
    for (int i = 0; i < d; ++i) c.coords.push_back(dyadic_floor(g.a(i), n));
    return c;
}

GCells dyadic_cells_G(const Similitude& g, int n) {
    if (n < 0) throw std::invalid_argument("dyadic_cells_G: level must be nonnegative");
    return {full_cell(g, n), translation_cell(g, n)};
}

Mat rotation2(double theta) {
    Mat R(2, 2);
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return R;
}

}  // namespace fel
