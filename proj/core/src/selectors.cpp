#include "fel/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fel {

namespace {

double norm_max(const Mat& A, const Mat& B, const Vec& u) {
    return std::max((A * u).norm(), (B * u).norm());
}

/// Unit u in R^p minimizing max(|Au|, |Bu|). Norms rather than quadratic forms,
/// so deviations far below 1e-8 stay resolvable.
Vec best_direction(const Mat& A, const Mat& B) {
    const int p = static_cast<int>(A.cols());
    if (p == 1) return Vec::Ones(1);
    const Mat AA = A.transpose() * A, BB = B.transpose() * B;
    std::vector<Vec> cands;
    const int steps = 64;
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        Eigen::SelfAdjointEigenSolver<Mat> es(t * AA + (1.0 - t) * BB);
        cands.push_back(es.eigenvectors().col(0));
    }
    if (p <= 3)
        for (auto& v : sphere_directions(p, p == 2 ? 720 : 2000)) cands.push_back(v);
    Vec best = cands.front();
    double fb = norm_max(A, B, best);
    for (const auto& c : cands) {
        const double f = norm_max(A, B, c);
        if (f < fb) {
            fb = f;
            best = c;
        }
    }
    // Pattern search on the sphere.
    for (double step = 0.02; step > 1e-12; step *= 0.5) {
        for (int iter = 0; iter < 200; ++iter) {
            bool moved = false;
            for (int i = 0; i < p; ++i)
                for (double sgn : {1.0, -1.0}) {
                    Vec u = best;
                    u(i) += sgn * step;
                    u.normalize();
                    const double f = norm_max(A, B, u);
                    if (f < fb) {
                        fb = f;
                        best = u;
                        moved = true;
                    }
                }
            if (!moved) break;
        }
    }
    return best;
}

void check_list(const std::vector<Subspace>& Ws) {
    if (Ws.empty()) throw std::invalid_argument("subspace list is empty");
    for (const auto& W : Ws)
        if (W.ambient() != Ws.front().ambient()) throw std::invalid_argument("subspace: dimension mismatch");
}

std::vector<Subspace> dedupe(const std::vector<Subspace>& Ws) {
    std::vector<Subspace> out;
    for (const auto& W : Ws) {
        bool seen = false;
        for (const auto& U : out)
            if (U.dim() == W.dim() && sub_distance(U, W) <= kSubspaceTol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(W);
    }
    return out;
}

double engulf_objective(const std::vector<Subspace>& Ws, const Subspace& V) {
    double f = 0.0;
    for (const auto& W : Ws) f = std::max(f, deviation(W, V));
    return f;
}

Subspace orth(const Mat& M) {
    Eigen::HouseholderQR<Mat> qr(M);
    Mat Q = qr.householderQ() * Mat::Identity(M.rows(), M.cols());
    return Subspace::span(Q);
}

/// Best j-dimensional subspace V for max_W deviation(W, V).
Subspace best_engulfer(const std::vector<Subspace>& Ws, int d, int j) {
    if (j == 0) return Subspace::zero(d);
    if (j == d) return Subspace::full(d);
    std::vector<Subspace> cands;
    Mat M = Mat::Zero(d, d);
    for (const auto& W : Ws) M += W.projector();
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    cands.push_back(Subspace::span(es.eigenvectors().rightCols(j)));
    for (const auto& W : Ws)
        if (W.dim() == j) cands.push_back(W);
    if (d <= 3) {
        const auto dirs = sphere_directions(d, d == 2 ? 1800 : 4000);
        for (const auto& u : dirs) {
            if (j == 1) cands.push_back(Subspace::line(u));
            if (j == d - 1) cands.push_back(Subspace::line(u).complement());
        }
    }
    std::size_t bi = 0;
    double fb = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cands.size(); ++c) {
        const double f = engulf_objective(Ws, cands[c]);
        if (f < fb) {
            fb = f;
            bi = c;
        }
    }
    // Local search on the Grassmannian chart V(X) = span(Q + C X).
    Subspace best = cands[bi];
    for (double step = 0.02; step > 1e-10; step *= 0.5) {
        for (int iter = 0; iter < 100; ++iter) {
            const Mat Q = best.frame();
            const Mat C = best.complement().frame();
            bool moved = false;
            for (int r = 0; r < d - j && !moved; ++r)
                for (int c = 0; c < j && !moved; ++c)
                    for (double sgn : {1.0, -1.0}) {
                        Mat X = Mat::Zero(d - j, j);
                        X(r, c) = sgn * step;
                        Subspace trial = orth(Q + C * X);
                        if (trial.dim() != j) continue;
                        const double f = engulf_objective(Ws, trial);
                        if (f < fb) {
                            fb = f;
                            best = trial;
                            moved = true;
                            break;
                        }
                    }
            if (!moved) break;
        }
    }
    return best;
}

}  // namespace

IntersectionCover intersection_cover(const Subspace& V, const Subspace& W, double log2_eps) {
    if (V.ambient() != W.ambient()) throw std::invalid_argument("subspace: dimension mismatch");
    const int d = V.ambient();
    const auto eps_at = [&](int k) { return std::exp2(cascade_log2(log2_eps, k)); };
    const Mat PVc = Mat::Identity(d, d) - V.projector();
    const Mat PWc = Mat::Identity(d, d) - W.projector();
    Subspace E = Subspace::zero(d);
    int k = 0;
    while (k < d) {
        const Mat F = E.complement().frame();
        const Mat A = PVc * F;
        const Mat B = PWc * F;
        const Vec v = F * best_direction(A, B);
        Mat G(d, k + 1);
        G << E.frame(), v;
        Subspace next = Subspace::span(G);
        if (next.dim() != k + 1) break;
        const double thr = eps_at(k + 1) + kSubspaceTol;
        if (deviation(next, V) > thr || deviation(next, W) > thr) break;
        E = next;
        ++k;
    }
    IntersectionCover out;
    out.E = E;
    out.k = k;
    out.eps_k = eps_at(k);
    out.eps_next = k < d ? eps_at(k + 1) : eps_at(k);
    return out;
}

EngulfResult minimal_engulfing(const std::vector<Subspace>& Ws, double eps) {
    check_list(Ws);
    const int d = Ws.front().ambient();
    if (!(eps > 0.0)) throw std::invalid_argument("minimal_engulfing: eps must be positive");
    EngulfResult out;
    const double l2 = std::log2(eps);
    out.eps_d = std::exp2(cascade_log2(l2, d));
    if (eps >= 1.0) {
        out.V = Subspace::full(d);
        out.degenerate = true;
        return out;
    }
    const auto U = dedupe(Ws);
    int maxdim = 0;
    for (const auto& W : U) maxdim = std::max(maxdim, W.dim());
    for (int j = 0; j <= d; ++j) {
        const double thr = std::exp2(cascade_log2(l2, d - j)) + kSubspaceTol;
        if (j < maxdim && thr < 1.0) continue;
        Subspace V = best_engulfer(U, d, j);
        const double f = engulf_objective(U, V);
        if (f <= thr) {
            out.V = V;
            out.achieved = f;
            return out;
        }
    }
    out.V = Subspace::full(d);
    return out;
}

CommonResult maximal_common_log2(const std::vector<Subspace>& Ws, double log2_eps) {
    check_list(Ws);
    const int d = Ws.front().ambient();
    CommonResult out;
    out.log2_delta = (d + 1) * (d + 1) + std::ldexp(log2_eps, -d * d);
    Subspace V = Subspace::full(d);
    const auto achieved = [&](const Subspace& S) {
        double f = 0.0;
        for (const auto& W : Ws) f = std::max(f, deviation(S, W));
        return f;
    };
    if (out.log2_delta >= 0.0) {
        out.V = V;
        out.achieved = achieved(V);
        out.degenerate = true;
        return out;
    }
    double prev = log2_eps;
    for (int iter = 0; iter <= d; ++iter) {
        const double star = (d + 1) + std::ldexp(prev, -d);
        const double thr = std::exp2(star) + kSubspaceTol;
        std::size_t worst = 0;
        double dw = -1.0;
        for (std::size_t i = 0; i < Ws.size(); ++i) {
            const double dv = deviation(V, Ws[i]);
            if (dv > dw) {
                dw = dv;
                worst = i;
            }
        }
        if (dw <= thr) break;
        const auto cover = intersection_cover(V, Ws[worst], prev);
        out.witnesses.push_back(worst);
        const bool shrank = cover.E.dim() < V.dim();
        V = cover.E;
        prev = cascade_log2(prev, std::min(cover.k + 1, d));
        if (!shrank) break;
    }
    out.V = V;
    out.achieved = achieved(V);
    return out;
}

CommonResult maximal_common(const std::vector<Subspace>& Ws, double eps) {
    if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("maximal_common: eps must lie in (0,1)");
    return maximal_common_log2(Ws, std::log2(eps));
}

}  // namespace fel
