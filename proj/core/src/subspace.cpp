#include "fel/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fel {

Subspace Subspace::zero(int d) {
    Subspace s;
    s.d_ = d;
    s.frame_ = Mat(d, 0);
    return s;
}

Subspace Subspace::full(int d) {
    Subspace s;
    s.d_ = d;
    s.frame_ = Mat::Identity(d, d);
    return s;
}

Subspace Subspace::span(const Mat& vectors, double tol) {
    const int d = static_cast<int>(vectors.rows());
    if (vectors.cols() == 0) return zero(d);
    Eigen::JacobiSVD<Mat> svd(vectors, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * std::max(smax, 1e-300) && sv(i) > 0.0) ++rank;
    Subspace s;
    s.d_ = d;
    s.frame_ = svd.matrixU().leftCols(rank);
    return s;
}

Subspace Subspace::line(const Vec& direction) {
    Mat m(direction.size(), 1);
    m.col(0) = direction;
    return span(m);
}

Subspace Subspace::axes(int d, const std::vector<int>& idx) {
    Mat m = Mat::Zero(d, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) m(idx[c], static_cast<Eigen::Index>(c)) = 1.0;
    Subspace s;
    s.d_ = d;
    s.frame_ = m;
    return s;
}

Mat Subspace::projector() const { return frame_ * frame_.transpose(); }

Subspace Subspace::complement() const {
    if (dim() == 0) return full(d_);
    if (dim() == d_) return zero(d_);
    Eigen::JacobiSVD<Mat> svd(frame_, Eigen::ComputeFullU);
    Subspace s;
    s.d_ = d_;
    s.frame_ = svd.matrixU().rightCols(d_ - dim());
    return s;
}

Vec Subspace::project(const Vec& x) const {
    if (dim() == 0) return Vec::Zero(d_);
    return frame_ * (frame_.transpose() * x);
}

double Subspace::distance(const Vec& x) const { return (x - project(x)).norm(); }

double deviation(const Subspace& V, const Subspace& W) {
    if (V.ambient() != W.ambient()) throw std::invalid_argument("subspace: dimension mismatch");
    if (V.dim() == 0) return 0.0;
    if (W.dim() == 0) return 1.0;
    const Mat R = V.frame() - W.frame() * (W.frame().transpose() * V.frame());
    return std::min(1.0, op_norm(R));
}

double sub_distance(const Subspace& V, const Subspace& W) { return std::max(deviation(V, W), deviation(W, V)); }

bool in_neighborhood(const Subspace& V, const Subspace& W, double eps) {
    if (eps < 0.0) throw std::invalid_argument("in_neighborhood: eps must be nonnegative");
    return deviation(V, W) <= eps + kSubspaceTol;
}

Subspace intersection(const Subspace& V, const Subspace& W, double tol) {
    if (V.ambient() != W.ambient()) throw std::invalid_argument("subspace: dimension mismatch");
    const int d = V.ambient();
    if (V.dim() == 0 || W.dim() == 0) return Subspace::zero(d);
    Eigen::JacobiSVD<Mat> svd(V.frame().transpose() * W.frame(), Eigen::ComputeFullU);
    const Mat P = V.frame() * svd.matrixU();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < P.cols(); ++i)
        if (W.distance(P.col(i)) <= tol) keep.push_back(i);
    Mat B(d, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) B.col(static_cast<Eigen::Index>(c)) = P.col(keep[c]);
    return Subspace::span(B);
}

Subspace sum(const Subspace& V, const Subspace& W) {
    Mat B(V.ambient(), V.dim() + W.dim());
    B << V.frame(), W.frame();
    return Subspace::span(B);
}

namespace {

/// Orthogonal complement of A inside V.
Subspace relative_complement(const Subspace& V, const Subspace& A) {
    if (A.dim() == 0) return V;
    Mat B = V.frame() - A.frame() * (A.frame().transpose() * V.frame());
    Subspace s = Subspace::span(B, 1e-8);
    return s;
}

}  // namespace

double angle(const Subspace& V, const Subspace& W) {
    if (deviation(V, W) <= kSubspaceTol || deviation(W, V) <= kSubspaceTol) return 0.0;
    const Subspace W0 = intersection(V, W);
    const Subspace V1 = relative_complement(V, W0);
    const Subspace W1 = relative_complement(W, W0);
    if (V1.dim() == 0 || W1.dim() == 0) return 0.0;
    const double s = op_norm(V1.frame().transpose() * W1.frame());
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, s)));
}

Subspace top_eigenspace(const CovSummary& c, int r, double tol) {
    const int d = static_cast<int>(c.eigenvalues.size());
    if (r < 0 || r > d) throw std::invalid_argument("top_eigenspace: r out of range");
    if (r == 0) return Subspace::zero(d);
    const double lr = c.eigenvalues(r - 1);
    const double slack = tol * std::max(1.0, c.eigenvalues(0));
    int k = r;
    while (k < d && c.eigenvalues(k) >= lr - slack) ++k;
    return Subspace::span(c.eigenvectors.leftCols(k));
}

double cascade_log2(double log2_eps, int k) { return k + std::ldexp(log2_eps, -k); }

std::vector<Vec> sphere_directions(int d, int count) {
    std::vector<Vec> out;
    if (d == 1) {
        out.push_back(Vec::Ones(1));
        return out;
    }
    if (d == 2) {
        for (int i = 0; i < count; ++i) {
            const double th = std::numbers::pi * i / count;
            Vec v(2);
            v << std::cos(th), std::sin(th);
            out.push_back(v);
        }
        return out;
    }
    if (d == 3) {
        // Fibonacci lattice on the upper hemisphere.
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (i + 0.5) / count;
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            Vec v(3);
            v << rad * std::cos(phi), rad * std::sin(phi), z;
            out.push_back(v);
        }
        return out;
    }
    throw std::invalid_argument("sphere_directions: only d <= 3");
}

}  // namespace fel
