#include "fel/param_scan.hpp"
#include "fel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <regex>
#include <stdexcept>

namespace fel {

namespace {

void check_box(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("param family: malformed box");
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] <= hi[k])) throw std::invalid_argument("param family: empty box");
}

}  // namespace

ParamFamily ParamFamily::bernoulli(std::vector<double> lo, std::vector<double> hi) {
    check_box(lo, hi);
    if (lo.size() != 2) throw std::invalid_argument("bernoulli family has two parameters");
    for (std::size_t k = 0; k < 2; ++k)
        if (lo[k] <= 0.0 || hi[k] >= 1.0) throw std::invalid_argument("bernoulli family: box must lie in (0,1)^2");
    ParamFamily F;
    F.kind_ = Kind::bernoulli;
    F.id_ = "bernoulli";
    F.lo_ = std::move(lo);
    F.hi_ = std::move(hi);
    return F;
}

ParamFamily ParamFamily::fat_sierpinski(double lo, double hi) {
    check_box({lo}, {hi});
    if (lo <= 0.0 || hi >= 1.0) throw std::invalid_argument("fat-sierpinski family: box must lie in (0,1)");
    ParamFamily F;
    F.kind_ = Kind::fat_sierpinski;
    F.id_ = "fat-sierpinski";
    F.lo_ = {lo};
    F.hi_ = {hi};
    return F;
}

ParamFamily ParamFamily::translation(std::vector<double> ratios, std::vector<Mat> rotations, std::vector<double> lo,
                                     std::vector<double> hi) {
    if (ratios.empty() || ratios.size() != rotations.size())
        throw std::invalid_argument("translation family: ratios and rotations must match");
    const auto d = rotations.front().rows();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 0.0 && ratios[i] < 1.0)) throw std::invalid_argument("translation family: ratio outside (0,1)");
        if (rotations[i].rows() != d || rotations[i].cols() != d)
            throw std::invalid_argument("translation family: inconsistent dimension");
    }
    check_box(lo, hi);
    if (lo.size() != ratios.size() * static_cast<std::size_t>(d))
        throw std::invalid_argument("translation family: box must have one axis per translation coordinate");
    ParamFamily F;
    F.kind_ = Kind::translation;
    F.id_ = "translation-family";
    F.lo_ = std::move(lo);
    F.hi_ = std::move(hi);
    F.ratios_ = std::move(ratios);
    F.rotations_ = std::move(rotations);
    return F;
}

ParamFamily ParamFamily::interpolation(IFSSystem A, IFSSystem B) {
    A.validate();
    B.validate();
    if (A.size() != B.size() || A.dim() != B.dim())
        throw std::invalid_argument("interpolation family: systems differ in size or dimension");
    for (std::size_t i = 0; i < A.size(); ++i)
        if ((A.maps[i].U - B.maps[i].U).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("interpolation family: orthogonal parts must agree");
    ParamFamily F;
    F.kind_ = Kind::interpolation;
    F.id_ = "interpolation";
    F.lo_ = {0.0};
    F.hi_ = {1.0};
    A.exact.reset();
    B.exact.reset();
    F.A_ = std::move(A);
    F.B_ = std::move(B);
    return F;
}

int ParamFamily::dim() const {
    switch (kind_) {
        case Kind::bernoulli: return 1;
        case Kind::fat_sierpinski: return 2;
        case Kind::translation: return static_cast<int>(rotations_.front().rows());
        case Kind::interpolation: return A_->dim();
    }
    return 0;
}

std::size_t ParamFamily::alphabet() const {
    switch (kind_) {
        case Kind::bernoulli: return 2;
        case Kind::fat_sierpinski: return 3;
        case Kind::translation: return ratios_.size();
        case Kind::interpolation: return A_->size();
    }
    return 0;
}

bool ParamFamily::contains(const std::vector<double>& t, double margin) const {
    if (t.size() != lo_.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!(t[k] >= lo_[k] + margin && t[k] <= hi_[k] - margin)) return false;
    return true;
}

IFSSystem ParamFamily::eval(const std::vector<double>& t) const {
    if (!contains(t)) throw std::domain_error("parameter outside the family's domain");
    switch (kind_) {
        case Kind::bernoulli: return fel::bernoulli(t[0], t[1]);
        case Kind::fat_sierpinski: return fel::fat_sierpinski(t[0]);
        case Kind::translation: {
            const auto d = rotations_.front().rows();
            std::vector<Similitude> maps;
            for (std::size_t i = 0; i < ratios_.size(); ++i) {
                Vec a(d);
                for (Eigen::Index q = 0; q < d; ++q) a(q) = t[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(q)];
                maps.push_back(Similitude::from_ratio(ratios_[i], rotations_[i], a));
            }
            return IFSSystem::uniform(std::move(maps));
        }
        case Kind::interpolation: {
            const double s = t[0];
            IFSSystem out = *A_;
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double r = (1.0 - s) * A_->maps[i].ratio() + s * B_->maps[i].ratio();
                const Vec a = (1.0 - s) * A_->maps[i].a + s * B_->maps[i].a;
                out.maps[i] = Similitude::from_ratio(r, A_->maps[i].U, a);
                out.probs[i] = (1.0 - s) * A_->probs[i] + s * B_->probs[i];
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

ParamFamily ParamFamily::parse(const std::string& spec) {
    static const std::regex head(R"(^\s*([a-z\-]+)\s*(.*)$)");
    static const std::regex axis(R"(\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\])");
    std::smatch m;
    if (!std::regex_match(spec, m, head)) throw std::invalid_argument("unknown family: " + spec);
    const std::string name = m[1];
    const std::string rest = m[2];
    std::vector<double> lo, hi;
    for (auto it = std::sregex_iterator(rest.begin(), rest.end(), axis); it != std::sregex_iterator(); ++it) {
        lo.push_back(std::stod((*it)[1].str()));
        hi.push_back(std::stod((*it)[2].str()));
    }
    if (name == "bernoulli") return lo.empty() ? bernoulli() : bernoulli(lo, hi);
    if (name == "fat-sierpinski") {
        if (lo.empty()) return fat_sierpinski();
        if (lo.size() != 1) throw std::invalid_argument("fat-sierpinski family has one parameter");
        return fat_sierpinski(lo[0], hi[0]);
    }
    throw std::invalid_argument("unknown family: " + spec);
}

Vec delta_ij_t(const ParamFamily& F, const Word& i, const Word& j, const std::vector<double>& t) {
    if (i.size() != j.size()) throw std::invalid_argument("delta_ij_t: words must have equal length");
    const IFSSystem ifs = F.eval(t);
    const auto image0 = [&](const Word& w) {
        Vec x = Vec::Zero(ifs.dim());
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            if (*it < 0 || static_cast<std::size_t>(*it) >= ifs.size())
                throw std::invalid_argument("delta_ij_t: symbol outside alphabet");
            x = ifs.maps[static_cast<std::size_t>(*it)].apply(x);
        }
        return x;
    };
    return image0(i) - image0(j);
}

RankResult jacobian_rank(const ParamFamily& F, const Word& i, const Word& j, const std::vector<double>& t, double h,
                         double tol) {
    if (!(h > 0.0)) throw std::invalid_argument("jacobian_rank: step must be positive");
    if (!F.contains(t, h)) throw std::domain_error("jacobian_rank: parameter closer than h to the boundary");
    const int m = F.param_dim();
    RankResult r;
    r.jacobian = Mat::Zero(F.dim(), m);
    for (int k = 0; k < m; ++k) {
        auto tp = t, tm = t;
        tp[static_cast<std::size_t>(k)] += h;
        tm[static_cast<std::size_t>(k)] -= h;
        r.jacobian.col(k) = (delta_ij_t(F, i, j, tp) - delta_ij_t(F, i, j, tm)) / (2.0 * h);
    }
    Eigen::JacobiSVD<Mat> svd(r.jacobian);
    r.singular_values = svd.singularValues();
    const double smax = r.singular_values.size() ? r.singular_values(0) : 0.0;
    // A constant family has a Jacobian of pure rounding noise; an absolute floor keeps it at rank 0.
    const double cut = std::max(tol * smax, tol);
    for (Eigen::Index q = 0; q < r.singular_values.size(); ++q)
        if (r.singular_values(q) > cut) ++r.rank;
    return r;
}

double min_image_gap(const IFSSystem& ifs, int n, std::uint64_t budget) {
    const auto T = enumerate(ifs, n, budget);
    const std::size_t N = T.size();
    const auto d = static_cast<std::size_t>(T.d);
    if (N < 2) return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return T.a[x * d] != T.a[y * d] ? T.a[x * d] < T.a[y * d] : x < y;
    });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = p + 1; q < N; ++q) {
            const std::size_t x = idx[p], y = idx[q];
            if (T.a[y * d] - T.a[x * d] >= best) break;
            double g = 0.0;
            for (std::size_t c = 0; c < d; ++c) g = std::max(g, std::abs(T.a[x * d + c] - T.a[y * d + c]));
            best = std::min(best, g);
        }
    return best;
}

CoverResult exceptional_cover(const ParamFamily& F, int n, double eps, double grid_step, int rank,
                              std::uint64_t budget) {
    if (n < 1) throw std::invalid_argument("exceptional_cover: n must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("exceptional_cover: eps must lie in (0,1)");
    if (!(grid_step > 0.0)) throw std::invalid_argument("exceptional_cover: grid step must be positive");
    const int m = F.param_dim();
    if (rank < 0) rank = std::min(m, F.dim());
    std::vector<std::size_t> per_axis(static_cast<std::size_t>(m));
    std::size_t cells = 1;
    for (int k = 0; k < m; ++k) {
        const double w = F.hi()[static_cast<std::size_t>(k)] - F.lo()[static_cast<std::size_t>(k)];
        per_axis[static_cast<std::size_t>(k)] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w / grid_step - 1e-9)));
        cells *= per_axis[static_cast<std::size_t>(k)];
    }
    const double words = std::pow(static_cast<double>(F.alphabet()), n);
    if (words * static_cast<double>(cells) > static_cast<double>(budget))
        throw BudgetExceeded("exceptional_cover: |Lambda|^n times grid size exceeds budget");

    CoverResult out;
    out.cells = cells;
    out.threshold = std::pow(eps, n);
    out.rows.resize(cells);
    parallel_for(cells, [&](std::size_t c) {
        CoverCell cell;
        std::size_t rem = c;
        cell.center.resize(static_cast<std::size_t>(m));
        // Last axis varies fastest.
        for (int k = m - 1; k >= 0; --k) {
            const auto K = static_cast<std::size_t>(k);
            const std::size_t q = rem % per_axis[K];
            rem /= per_axis[K];
            const double hi = std::min(F.hi()[K], F.lo()[K] + (static_cast<double>(q) + 1.0) * grid_step);
            cell.center[K] = 0.5 * (F.lo()[K] + static_cast<double>(q) * grid_step + hi);
        }
        cell.gap = min_image_gap(F.eval(cell.center), n);
        cell.hit = cell.gap < out.threshold;
        out.rows[c] = std::move(cell);
    });
    for (const auto& r : out.rows) out.hit_count += r.hit;
    const double reference = std::pow(static_cast<double>(cells), static_cast<double>(m - rank) / m);
    out.bound = words * words * std::max(1.0, reference);
    return out;
}

std::vector<std::vector<double>> grid_points(const std::vector<double>& lo, const std::vector<double>& hi,
                                             const std::vector<int>& counts) {
    if (lo.size() != hi.size() || lo.size() != counts.size()) throw std::invalid_argument("grid_points: size mismatch");
    std::vector<std::vector<double>> out{{}};
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (counts[k] < 1) throw std::invalid_argument("grid_points: counts must be positive");
        std::vector<std::vector<double>> next;
        for (const auto& p : out)
            for (int q = 0; q < counts[k]; ++q) {
                auto e = p;
                e.push_back(counts[k] == 1 ? 0.5 * (lo[k] + hi[k])
                                           : lo[k] + (hi[k] - lo[k]) * q / static_cast<double>(counts[k] - 1));
                next.push_back(std::move(e));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<std::string> scan_columns(const ScanDiagnostics& diag) {
    std::vector<std::string> c;
    if (diag.sdim) c.push_back("sdim");
    if (diag.dim_estimate_n) c.push_back("dim_estimate");
    if (diag.delta_n) c.push_back("delta_n");
    if (diag.diagnostics_n) {
        c.push_back("n_prime");
        c.push_back("A");
        c.push_back("B");
        c.push_back("C");
    }
    return c;
}

std::vector<ScanRow> scan(const ParamFamily& F, const std::vector<std::vector<double>>& grid,
                          const ScanDiagnostics& diag, std::uint64_t budget) {
    std::vector<ScanRow> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t g) {
        ScanRow row;
        row.t = grid[g];
        try {
            const IFSSystem ifs = F.eval(row.t);
            if (diag.sdim) row.values.emplace_back("sdim", sdim(ifs));
            if (diag.dim_estimate_n)
                row.values.emplace_back("dim_estimate", dim_estimate(ifs, *diag.dim_estimate_n, diag.dim_estimate_L, budget));
            if (diag.delta_n) row.values.emplace_back("delta_n", delta_n(ifs, *diag.delta_n, budget).delta);
            if (diag.diagnostics_n) {
                const auto e = entropy_diagnostics(ifs, *diag.diagnostics_n, diag.diagnostics_q, budget);
                row.values.emplace_back("n_prime", e.n_prime);
                row.values.emplace_back("A", e.A);
                row.values.emplace_back("B", e.B);
                row.values.emplace_back("C", e.C);
            }
        } catch (const std::exception& ex) {
            row.values.clear();
            row.error = ex.what();
        }
        rows[g] = std::move(row);
    });
    return rows;
}

}  // namespace fel
