#include "fel/satcon.hpp"

#include "fel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fel {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kDistTol = 1e-12;

/// Best open interval of half-width r for points s (sliding window).
double best_window(const Vec& s, const Vec& w, double r, double& center) {
    const auto N = static_cast<std::size_t>(s.size());
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s(a) < s(b); });
    double best = -1.0;
    double mass = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (j < i) {
            j = i;
            mass = 0.0;
        }
        while (j < N && s(idx[j]) - s(idx[i]) < 2.0 * r + 2.0 * kDistTol) mass += w(idx[j++]);
        if (mass > best) {
            best = mass;
            center = 0.5 * (s(idx[i]) + s(idx[j - 1]));
        }
        mass -= w(idx[i]);
    }
    return best;
}

/// Heuristic maximization of the mass of an open ball of radius r.
double best_ball(const Mat& P, const Vec& w, double r, const Vec& hint, Vec& center) {
    const int c = static_cast<int>(P.rows());
    const Eigen::Index N = P.cols();
    const double side = std::max(r, 1e-300);
    using K = std::array<std::int64_t, kMaxDim>;
    std::map<K, std::vector<Eigen::Index>> buckets;
    for (Eigen::Index i = 0; i < N; ++i) {
        K k{};
        for (int j = 0; j < c; ++j) {
            const double v = std::floor(P(j, i) / side);
            k[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::clamp(v, -4e18, 4e18));
        }
        buckets[k].push_back(i);
    }
    auto local_mass = [&](const Vec& x) {
        K base{};
        for (int j = 0; j < c; ++j)
            base[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::clamp(std::floor(x(j) / side), -4e18, 4e18));
        double m = 0.0;
        int total = 1;
        for (int j = 0; j < c; ++j) total *= 3;
        for (int code = 0; code < total; ++code) {
            K k = base;
            int t = code;
            for (int j = 0; j < c; ++j) {
                k[static_cast<std::size_t>(j)] += t % 3 - 1;
                t /= 3;
            }
            auto it = buckets.find(k);
            if (it == buckets.end()) continue;
            for (auto i : it->second)
                if ((P.col(i) - x).norm() < r + kDistTol) m += w(i);
        }
        return m;
    };
    std::vector<Vec> cands;
    cands.push_back(hint);
    {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w(a) > w(b); });
        for (std::size_t q = 0; q < std::min<std::size_t>(32, order.size()); ++q) cands.push_back(P.col(order[q]));
    }
    for (const auto& [k, ids] : buckets) {
        Vec m = Vec::Zero(c);
        double s = 0.0;
        for (auto i : ids) {
            m += w(i) * P.col(i);
            s += w(i);
        }
        cands.push_back(m / s);
    }
    std::vector<double> mass(cands.size());
    for (std::size_t q = 0; q < cands.size(); ++q) mass[q] = local_mass(cands[q]);
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mass[a] > mass[b]; });
    double best = mass[order[0]];
    center = cands[order[0]];
    for (std::size_t q = 0; q < std::min<std::size_t>(8, order.size()); ++q) {
        Vec x = cands[order[q]];
        double fx = mass[order[q]];
        // Mean shift toward the mass inside the ball.
        for (int it = 0; it < 20; ++it) {
            Vec m = Vec::Zero(c);
            double s = 0.0;
            for (Eigen::Index i = 0; i < N; ++i)
                if ((P.col(i) - x).norm() < r + kDistTol) {
                    m += w(i) * P.col(i);
                    s += w(i);
                }
            if (s <= 0.0) break;
            const Vec y = m / s;
            const double fy = local_mass(y);
            if (fy < fx || (y - x).norm() < 1e-15) break;
            x = y;
            fx = fy;
        }
        for (double step = r / 4; step > r * 1e-3; step *= 0.5) {
            bool moved = true;
            for (int it = 0; it < 50 && moved; ++it) {
                moved = false;
                for (int j = 0; j < c; ++j)
                    for (double sgn : {1.0, -1.0}) {
                        Vec y = x;
                        y(j) += sgn * step;
                        const double fy = local_mass(y);
                        if (fy > fx) {
                            x = y;
                            fx = fy;
                            moved = true;
                        }
                    }
            }
        }
        if (fx > best) {
            best = fx;
            center = x;
        }
    }
    return best;
}

std::vector<std::vector<int>> combinations(int d, int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == j) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < d; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<Subspace> candidates(const CovSummary& cs, int d, int j, const std::vector<Subspace>& extra, int grid) {
    if (j == 0) return {Subspace::zero(d)};
    if (j == d) return {Subspace::full(d)};
    std::vector<Subspace> out;
    const Subspace eig = top_eigenspace(cs, j);
    if (eig.dim() == j) out.push_back(eig);
    for (const auto& idx : combinations(d, j)) out.push_back(Subspace::axes(d, idx));
    for (const auto& V : extra)
        if (V.ambient() == d && V.dim() == j) out.push_back(V);
    if (grid != 0 && d <= 3 && (j == 1 || j == d - 1)) {
        const int count = grid > 0 ? grid : (d == 2 ? 180 : 400);
        for (const auto& u : sphere_directions(d, count))
            out.push_back(j == 1 ? Subspace::line(u) : Subspace::line(u).complement());
    }
    return out;
}

double conc_eps(double eps, int k) { return std::pow(4.0, k) * std::pow(eps, std::ldexp(1.0, -k)); }

}  // namespace

Atoms atoms_of(const LatticeMeasure& mu) {
    Atoms a;
    const int d = mu.dim();
    a.points.resize(d, static_cast<Eigen::Index>(mu.size()));
    a.weights.resize(static_cast<Eigen::Index>(mu.size()));
    Eigen::Index i = 0;
    for (const auto& c : mu.cells()) {
        a.points.col(i) = cell_center<std::int64_t>(c.key, d, mu.level());
        a.weights(i) = c.weight;
        ++i;
    }
    return a;
}

ConcentrationCheck is_concentrated(const LatticeMeasure& mu, const Subspace& V, double eps) {
    if (V.ambient() != mu.dim()) throw std::invalid_argument("is_concentrated: dimension mismatch");
    if (eps < 0.0) throw std::invalid_argument("is_concentrated: eps must be nonnegative");
    const int d = mu.dim();
    ConcentrationCheck out;
    out.witness = Vec::Zero(d);
    if (V.dim() == d) {
        out.holds = true;
        out.mass = 1.0;
        return out;
    }
    const Atoms a = atoms_of(mu);
    const Mat F = V.complement().frame();
    const Mat P = F.transpose() * a.points;
    Vec center;
    if (F.cols() == 1) {
        double c0 = 0.0;
        out.mass = best_window(P.row(0).transpose(), a.weights, eps, c0);
        center = Vec::Constant(1, c0);
    } else {
        const Vec hint = P * a.weights;
        out.mass = best_ball(P, a.weights, eps, hint, center);
    }
    out.witness = F * center;
    out.holds = out.mass >= 1.0 - eps - kMassTol;
    return out;
}

bool is_uniform(const LatticeMeasure& mu, const Subspace& V, double eps, int m) {
    if (m > mu.level()) throw std::invalid_argument("is_uniform: m exceeds lattice level");
    if (!is_concentrated(mu, V, std::ldexp(1.0, -m)).holds) return false;
    return normalized_entropy(mu, m) > V.dim() - eps;
}

double projection_entropy(const LatticeMeasure& mu, const Subspace& V, int m) {
    if (m < 1) throw std::invalid_argument("projection_entropy: m must be positive");
    if (m > mu.level()) throw std::invalid_argument("projection_entropy: m exceeds lattice level");
    const Subspace W = V.complement();
    if (W.dim() == 0) return 0.0;
    const Atoms a = atoms_of(mu);
    const Mat P = W.frame().transpose() * a.points;
    std::vector<Vec> pts;
    std::vector<double> w;
    pts.reserve(static_cast<std::size_t>(P.cols()));
    for (Eigen::Index i = 0; i < P.cols(); ++i) {
        pts.emplace_back(P.col(i));
        w.push_back(a.weights(i));
    }
    return normalized_entropy(make_lattice(pts, w, m), m);
}

double saturation_defect(const LatticeMeasure& mu, const Subspace& V, int m) {
    return V.dim() + projection_entropy(mu, V, m) - normalized_entropy(mu, m);
}

bool is_saturated(const LatticeMeasure& mu, const Subspace& V, double eps, int m) {
    return saturation_defect(mu, V, m) <= eps + kMassTol;
}

SubspaceChoice concentration_subspace(const LatticeMeasure& mu, double eps, const std::vector<Subspace>& extra,
                                      int grid) {
    const int d = mu.dim();
    if (!(eps > 0.0)) throw std::invalid_argument("concentration_subspace: eps must be positive");
    if (conc_eps(eps, d) >= 0.5) throw std::domain_error("concentration_subspace: cascade degenerate (eps_d >= 1/2)");
    const CovSummary cs = mean_cov(mu);
    for (int j = 0; j <= d; ++j) {
        const double e = conc_eps(eps, d - j);
        const auto cands = candidates(cs, d, j, extra, grid);
        std::vector<ConcentrationCheck> res(cands.size());
        parallel_for(cands.size(), [&](std::size_t q) { res[q] = is_concentrated(mu, cands[q], e); });
        std::size_t best = cands.size();
        for (std::size_t q = 0; q < cands.size(); ++q)
            if (res[q].holds && (best == cands.size() || res[q].mass > res[best].mass)) best = q;
        if (best < cands.size()) return {cands[best], e};
    }
    return {Subspace::full(d), conc_eps(eps, 0)};
}

SubspaceChoice minimal_concentration(const LatticeMeasure& mu, double eps, const std::vector<Subspace>& extra) {
    const int d = mu.dim();
    const CovSummary cs = mean_cov(mu);
    for (int j = 0; j <= d; ++j) {
        const auto cands = candidates(cs, d, j, extra, 0);
        std::size_t best = cands.size();
        double bm = -1.0;
        for (std::size_t q = 0; q < cands.size(); ++q) {
            const auto r = is_concentrated(mu, cands[q], eps);
            if (r.holds && r.mass > bm) {
                bm = r.mass;
                best = q;
            }
        }
        if (best < cands.size()) return {cands[best], eps};
    }
    return {Subspace::full(d), eps};
}

SubspaceChoice saturation_subspace(const LatticeMeasure& mu, int m, const std::vector<Subspace>& extra, int grid,
                                   double C) {
    const int d = mu.dim();
    if (m < 1) throw std::invalid_argument("saturation_subspace: m must be positive");
    if (m > mu.level()) throw std::invalid_argument("saturation_subspace: m exceeds lattice level");
    const CovSummary cs = mean_cov(mu);
    for (int j = d; j >= 0; --j) {
        const double delta = C * std::ldexp(1.0, j) * j * std::log2(static_cast<double>(m)) / m;
        const auto cands = candidates(cs, d, j, extra, grid);
        std::vector<double> defect(cands.size());
        parallel_for(cands.size(), [&](std::size_t q) { defect[q] = saturation_defect(mu, cands[q], m); });
        std::size_t best = cands.size();
        for (std::size_t q = 0; q < cands.size(); ++q)
            if (defect[q] <= delta + kMassTol && (best == cands.size() || defect[q] < defect[best])) best = q;
        if (best < cands.size()) return {cands[best], std::max(0.0, defect[best])};
    }
    return {Subspace::zero(d), 0.0};
}

template <class Coord>
KVResult kv_check(const BasicLatticeMeasure<Coord>& mu, const BasicLatticeMeasure<Coord>& nu, int k, int n, double C) {
    if (k < 1) throw std::invalid_argument("kv_check: k must be at least 1");
    if (n < 1 || n > mu.level() || n > nu.level()) throw std::invalid_argument("kv_check: n must lie in 1..L");
    if (C < 0.0) C = 4.0 * mu.dim();
    KVResult r;
    auto cur = mu;
    const double h0 = normalized_entropy(mu, n);
    double prev_full = entropy(mu, mu.level());
    double h1 = 0.0;
    for (int j = 1; j <= k; ++j) {
        cur = convolve(cur, nu);
        if (j == 1) h1 = normalized_entropy(cur, n);
        const double full = entropy(cur, cur.level());
        r.deltas.push_back(full - prev_full);
        prev_full = full;
    }
    r.lhs = normalized_entropy(cur, n);
    r.rhs = h0 + k * (h1 - h0) + C * k / n;
    r.slack = r.rhs - r.lhs;
    for (std::size_t j = 1; j < r.deltas.size(); ++j)
        if (r.deltas[j] > r.deltas[j - 1] + 1e-10) r.monotone = false;
    return r;
}

template KVResult kv_check<std::int64_t>(const LatticeMeasure&, const LatticeMeasure&, int, int, double);
template KVResult kv_check<DeepCoord>(const DeepLatticeMeasure&, const DeepLatticeMeasure&, int, int, double);

CovarianceCheck covariance_concentration_check(const LatticeMeasure& mu, int r) {
    const int d = mu.dim();
    if (r < 0 || r > d) throw std::invalid_argument("covariance_concentration_check: r out of range");
    const CovSummary cs = mean_cov(mu);
    CovarianceCheck out;
    out.V = top_eigenspace(cs, r);
    out.eps = std::cbrt(std::max(0.0, cs.lambda(r + 1)));
    const auto c = is_concentrated(mu, out.V, out.eps);
    out.holds = c.holds;
    out.mass = c.mass;
    return out;
}

double affine_distance(const Vec& x, const AffineSubspace& A) { return A.direction.distance(x - A.point); }

namespace {

double tube_mass(const Atoms& a, const AffineSubspace& A, double sigma) {
    const Mat F = A.direction.complement().frame();
    double m = 0.0;
    const Vec base = F.transpose() * A.point;
    for (Eigen::Index i = 0; i < a.points.cols(); ++i)
        if ((F.transpose() * a.points.col(i) - base).norm() < sigma) m += a.weights(i);
    return m;
}

}  // namespace

NonAffineCheck non_affine_check(const LatticeMeasure& mu, double eps, double sigma, int max_anchors) {
    const int d = mu.dim();
    const Atoms a = atoms_of(mu);
    const auto N = static_cast<std::size_t>(a.points.cols());
    std::vector<Vec> anchors;
    const std::size_t A = std::min<std::size_t>(N, static_cast<std::size_t>(std::max(1, max_anchors)));
    for (std::size_t q = 0; q < A; ++q) anchors.push_back(a.points.col(static_cast<Eigen::Index>(q * N / A)));

    std::vector<AffineSubspace> cands;
    for (const auto& p : anchors) cands.push_back({p, Subspace::zero(d)});
    if (d >= 2)
        for (std::size_t i = 0; i < anchors.size(); ++i)
            for (std::size_t j = i + 1; j < anchors.size(); ++j) {
                Subspace L = Subspace::line(anchors[j] - anchors[i]);
                if (L.dim() == 1) cands.push_back({anchors[i], L});
            }
    if (d >= 3) {
        const std::size_t T = std::min<std::size_t>(anchors.size(), 20);
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = i + 1; j < T; ++j)
                for (std::size_t l = j + 1; l < T; ++l) {
                    Mat B(d, 2);
                    B << anchors[j] - anchors[i], anchors[l] - anchors[i];
                    Subspace S = Subspace::span(B);
                    if (S.dim() == 2) cands.push_back({anchors[i], S});
                }
    }
    const CovSummary cs = mean_cov(mu);
    for (int r = 0; r < d; ++r) {
        Subspace E = top_eigenspace(cs, r);
        if (E.dim() < d) cands.push_back({cs.mean, E});
    }
    std::vector<double> mass(cands.size());
    parallel_for(cands.size(), [&](std::size_t q) { mass[q] = tube_mass(a, cands[q], sigma); });
    NonAffineCheck out;
    std::size_t worst = 0;
    for (std::size_t q = 1; q < cands.size(); ++q)
        if (mass[q] > mass[worst]) worst = q;
    out.worst = cands[worst];
    out.worst_mass = mass[worst];
    out.holds = out.worst_mass < eps;
    return out;
}

bool sigma_independent(const std::vector<Vec>& points, double sigma) {
    if (points.size() < 2) return true;
    const auto d = points.front().size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<Vec> others;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) others.push_back(points[j]);
        Mat B(d, static_cast<Eigen::Index>(others.size() - 1));
        for (std::size_t j = 1; j < others.size(); ++j) B.col(static_cast<Eigen::Index>(j - 1)) = others[j] - others[0];
        const AffineSubspace A{others[0], Subspace::span(B)};
        if (affine_distance(points[i], A) < sigma - kDistTol) return false;
    }
    return true;
}

}  // namespace fel
