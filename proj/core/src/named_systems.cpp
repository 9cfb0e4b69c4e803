#include "fel/ifs.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

namespace fel {

namespace {

/// Root of a strictly increasing f on [lo, hi] by bisection, polished by Newton.
template <class F, class DF>
double increasing_root(F f, DF df, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) x -= f(x) / df(x);
    return x;
}

Similitude line_map(double r, double a) {
    Mat U = Mat::Identity(1, 1);
    Vec v(1);
    v << a;
    return Similitude::from_ratio(r, U, v);
}

ExactSimilitude exact_line_map(const Rational& r, const Rational& a) {
    ExactSimilitude g;
    g.d = 1;
    g.r = r;
    g.U = {Rational(1)};
    g.a = {a};
    return g;
}

}  // namespace

IFSSystem cantor3() {
    return IFSSystem::from_exact({exact_line_map(Rational(1, 3), Rational(0)), exact_line_map(Rational(1, 3), Rational(2, 3))});
}

double garsia_lambda() {
    return increasing_root([](double t) { return t * t * t - t * t - 2.0; },
                           [](double t) { return 3.0 * t * t - 2.0 * t; }, 1.0, 2.0);
}

IFSSystem garsia() {
    const double r = 1.0 / garsia_lambda();
    return IFSSystem::uniform({line_map(r, -1.0), line_map(r, 1.0)});
}

IFSSystem garsia_product() {
    const double lam = garsia_lambda();
    const double r3 = std::pow(lam, -3.0);
    // phi_s1 o phi_s2 o phi_s3 (0) = s1 + s2 / lambda + s3 / lambda^2.
    const auto image0 = [&](int s1, int s2, int s3) { return s1 + s2 / lam + s3 / (lam * lam); };
    std::vector<Similitude> maps;
    for (int psi : {-1, 1})
        for (int w = 0; w < 8; ++w) {
            const int s1 = (w & 4) ? 1 : -1, s2 = (w & 2) ? 1 : -1, s3 = (w & 1) ? 1 : -1;
            Vec a(2);
            a << image0(psi, psi, psi), image0(s1, s2, s3);
            maps.push_back(Similitude::from_ratio(r3, Mat::Identity(2, 2), a));
        }
    return IFSSystem::uniform(std::move(maps));
}

IFSSystem fat_sierpinski(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("fat-sierpinski: lambda must lie in (0,1)");
    const std::vector<Vec> u = {Vec::Zero(2), (Vec(2) << 1.0, 0.0).finished(),
                                (Vec(2) << 0.5, std::sqrt(3.0) / 2.0).finished()};
    const Mat R = rotation2(2.0 * std::numbers::pi / 3.0);
    const Vec c = (u[0] + u[1] + u[2]) / 3.0 / (1.0 - lambda);
    std::vector<Similitude> maps;
    for (const auto& ui : u) maps.push_back(Similitude::from_ratio(lambda, R, ui + lambda * (c - R * c)));
    return IFSSystem::uniform(std::move(maps));
}

double fat_sierpinski_threshold() {
    return increasing_root([](double x) { return x * x * x - x * x + x - 0.5; },
                           [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, 0.0, 1.0);
}

IFSSystem bernoulli(double beta, double gamma, std::optional<std::vector<double>> probs) {
    if (!(beta > 0.0 && beta < 1.0 && gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("bernoulli: contractions must lie in (0,1)");
    IFSSystem s = IFSSystem::uniform({line_map(beta, 0.0), line_map(gamma, 1.0)});
    if (probs) s.probs = *probs;
    return s;
}

IFSSystem named_system(const std::string& spec) {
    static const std::regex one(R"(^\s*([a-z0-9\-]+)\s*(?:\(\s*([^,\)]+)\s*(?:,\s*([^,\)]+)\s*)?\))?\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, one)) throw std::invalid_argument("unknown system: " + spec);
    const std::string name = m[1];
    const auto num = [&](int k) {
        if (!m[k].matched) throw std::invalid_argument("system " + name + " needs a parameter");
        return std::stod(m[k].str());
    };
    if (name == "cantor3") return cantor3();
    if (name == "garsia") return garsia();
    if (name == "garsia-product") return garsia_product();
    if (name == "fat-sierpinski") return fat_sierpinski(num(2));
    if (name == "bernoulli") return bernoulli(num(2), num(3));
    throw std::invalid_argument("unknown system: " + spec);
}

LatticeMeasure ap_cascade(const std::vector<int>& lengths, const std::vector<int>& gap_log2, int L) {
    if (lengths.empty() || lengths.size() != gap_log2.size())
        throw std::invalid_argument("ap_cascade: lengths and gaps must match");
    std::vector<std::int64_t> pts{0};
    for (std::size_t s = 0; s < lengths.size(); ++s) {
        if (gap_log2[s] > L || gap_log2[s] < 0) throw std::invalid_argument("ap_cascade: gap finer than lattice");
        const std::int64_t step = std::int64_t{1} << (L - gap_log2[s]);
        std::vector<std::int64_t> next;
        next.reserve(pts.size() * static_cast<std::size_t>(lengths[s]));
        for (auto p : pts)
            for (int j = 0; j < lengths[s]; ++j) next.push_back(p + j * step);
        pts = std::move(next);
    }
    std::vector<LatticeMeasure::Cell> cells;
    cells.reserve(pts.size());
    for (auto p : pts) {
        LatticeMeasure::Cell c;
        c.key.fill(0);
        c.key[0] = p;
        c.weight = 1.0;
        cells.push_back(c);
    }
    return LatticeMeasure(1, L, std::move(cells));
}

}  // namespace fel
