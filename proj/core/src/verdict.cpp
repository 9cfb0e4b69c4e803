#include "fel/parallel.hpp"
#include "fel/satcon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fel {

namespace {

struct LevelResult {
    Subspace V;
    double sat = 0.0;
    double conc = 0.0;
};

LevelResult evaluate_level(const LatticeMeasure& mu, const LatticeMeasure& nu, int i, double eps, int m) {
    const int d = mu.dim();
    const auto mc = components(mu, i, true);
    const auto nc = components(nu, i, true);

    // Concentration subspaces of the heaviest nu-components, up to mass 1 - eps/2.
    std::vector<std::size_t> order(nc.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return nc[a].weight > nc[b].weight; });
    std::vector<Subspace> Ws;
    double covered = 0.0;
    for (auto q : order) {
        if (covered >= 1.0 - eps / 2) break;
        Ws.push_back(minimal_concentration(nc[q].measure, eps).V);
        covered += nc[q].weight;
    }
    std::vector<Subspace> cands;
    cands.push_back(minimal_engulfing(Ws, 1e-12).V);
    for (const auto& S : {Subspace::zero(d), Subspace::full(d)})
        if (S.dim() != cands.front().dim() || sub_distance(S, cands.front()) > kSubspaceTol) cands.push_back(S);

    LevelResult best;
    bool have = false;
    for (const auto& V : cands) {
        LevelResult r;
        r.V = V;
        for (const auto& c : mc)
            if (is_saturated(c.measure, V, eps, m)) r.sat += c.weight;
        for (const auto& c : nc)
            if (is_concentrated(c.measure, V, eps).holds) r.conc += c.weight;
        r.sat = std::min(1.0, r.sat);
        r.conc = std::min(1.0, r.conc);
        const auto score = [](const LevelResult& x) { return std::min(x.sat, x.conc); };
        bool better = !have;
        if (have) {
            const double a = score(r), b = score(best);
            if (a > b + 1e-12) better = true;
            else if (std::abs(a - b) <= 1e-12) {
                const double sa = r.sat + r.conc, sb = best.sat + best.conc;
                if (sa > sb + 1e-12) better = true;
                else if (std::abs(sa - sb) <= 1e-12 && r.V.dim() > best.V.dim()) better = true;
            }
        }
        if (better) {
            best = r;
            have = true;
        }
    }
    return best;
}

}  // namespace

Verdict inverse_verdict(const LatticeMeasure& mu, const LatticeMeasure& nu, int n, double eps, int m) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("inverse_verdict: dimension mismatch");
    if (mu.level() != nu.level()) throw std::invalid_argument("inverse_verdict: lattice levels differ");
    if (n < 1 || m < 1) throw std::invalid_argument("inverse_verdict: n and m must be positive");
    if (n + m > mu.level()) throw std::invalid_argument("inverse_verdict: requires n + m <= L");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("inverse_verdict: eps must lie in (0,1)");
    Verdict v;
    v.entropy_before = normalized_entropy(mu, n);
    v.entropy_after = normalized_entropy(convolve(mu, nu), n);
    v.growth = v.entropy_after - v.entropy_before;
    std::vector<LevelResult> levels(static_cast<std::size_t>(n) + 1);
    parallel_for(levels.size(), [&](std::size_t i) { levels[i] = evaluate_level(mu, nu, static_cast<int>(i), eps, m); });
    double dims = 0.0;
    for (const auto& r : levels) {
        v.subspaces.push_back(r.V);
        v.sat_by_level.push_back(r.sat);
        v.conc_by_level.push_back(r.conc);
        v.sat_fraction += r.sat;
        v.conc_fraction += r.conc;
        dims += r.V.dim();
    }
    const double cnt = static_cast<double>(levels.size());
    v.sat_fraction /= cnt;
    v.conc_fraction /= cnt;
    v.mean_dim = dims / cnt;
    v.passed = v.sat_fraction > 1.0 - eps && v.conc_fraction > 1.0 - eps;
    return v;
}

IsometryVerdict isometry_verdict(const SimMeasure& nu, const LatticeMeasure& mu, int k, int n, double eps, int m,
                                 double c) {
    if (nu.atoms.empty()) throw std::invalid_argument("isometry_verdict: empty measure on G");
    if (!nu.all_isometries()) throw std::invalid_argument("isometry_verdict: non-isometry atom");
    if (nu.dim() != mu.dim()) throw std::invalid_argument("isometry_verdict: dimension mismatch");
    const int d = mu.dim();
    const int L = mu.level();
    if (k < 0 || k + n + m > L) throw std::invalid_argument("isometry_verdict: requires k + n + m <= L");

    IsometryVerdict out;
    out.entropy_before = normalized_entropy(mu, n);
    out.entropy_after = normalized_entropy(group_action(nu, mu, L), n);
    out.growth = out.entropy_after - out.entropy_before;
    out.nu_entropy = entropy_on_G(nu, n) / n;
    out.c_bound = c * out.nu_entropy;

    // Group atoms of nu by level-k G-cell.
    std::vector<std::pair<GCellId, std::size_t>> tagged;
    for (std::size_t a = 0; a < nu.atoms.size(); ++a) tagged.emplace_back(full_cell(nu.atoms[a].g, k), a);
    std::stable_sort(tagged.begin(), tagged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::vector<std::size_t>> groups;
    std::vector<GCellId> group_cells;
    for (std::size_t q = 0; q < tagged.size(); ++q) {
        if (q == 0 || !(tagged[q].first == tagged[q - 1].first)) {
            groups.emplace_back();
            group_cells.push_back(tagged[q].first);
        }
        groups.back().push_back(tagged[q].second);
    }
    const auto mcs = components(mu, k, false);
    const double total = nu.total_mass();

    struct Task {
        std::size_t g, c;
    };
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t q = 0; q < mcs.size(); ++q) tasks.push_back({g, q});
    out.pairs.resize(tasks.size());

    parallel_for(tasks.size(), [&](std::size_t t) {
        const auto& grp = groups[tasks[t].g];
        const auto& mc = mcs[tasks[t].c];
        double gmass = 0.0;
        std::size_t heavy = grp.front();
        for (auto a : grp) {
            gmass += nu.atoms[a].weight;
            if (nu.atoms[a].weight > nu.atoms[heavy].weight) heavy = a;
        }
        const auto& cells = mc.measure.cells();
        std::size_t hc = 0;
        for (std::size_t q = 1; q < cells.size(); ++q)
            if (cells[q].weight > cells[hc].weight) hc = q;
        const Vec x0 = cell_center<std::int64_t>(cells[hc].key, d, L);
        const Similitude& g0 = nu.atoms[heavy].g;
        const Mat Uinv = g0.U.transpose();
        const Vec base = g0.apply(x0);
        std::vector<Vec> pts;
        std::vector<double> w;
        for (auto a : grp) {
            pts.push_back(std::ldexp(1.0, k) * (Uinv * (nu.atoms[a].g.apply(x0) - base)));
            w.push_back(nu.atoms[a].weight);
        }
        const LatticeMeasure nu_pair = make_lattice(pts, w, L - k);
        const LatticeMeasure mu_pair = component(mu, mc.cell, k, true);
        PairVerdict pv;
        pv.g_cell = group_cells[tasks[t].g];
        pv.mu_cell = mc.cell;
        pv.weight = gmass / total * mc.weight;
        pv.verdict = inverse_verdict(mu_pair, nu_pair, n, eps, m);
        out.pairs[t] = std::move(pv);
    });

    double wsum = 0.0;
    for (const auto& p : out.pairs) {
        wsum += p.weight;
        if (p.verdict.passed) out.pass_rate += p.weight;
        out.mean_dim += p.weight * p.verdict.mean_dim;
    }
    if (wsum > 0.0) {
        out.pass_rate /= wsum;
        out.mean_dim /= wsum;
    }
    return out;
}

}  // namespace fel
