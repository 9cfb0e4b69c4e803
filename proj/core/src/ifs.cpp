#include "fel/ifs.hpp"

#include "fel/parallel.hpp"
#include "fel/satcon.hpp"
#include "ifs_internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fel {

void IFSSystem::validate() const {
    if (maps.empty()) throw std::invalid_argument("ifs: no maps");
    if (probs.size() != maps.size()) throw std::invalid_argument("ifs: probability vector has wrong length");
    const int d = dim();
    if (d < 1) throw std::invalid_argument("ifs: dimension must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto& g = maps[i];
        if (g.dim() != d || g.U.rows() != d || g.U.cols() != d) throw std::invalid_argument("ifs: mixed dimensions");
        if (!(g.t > 0.0) || !std::isfinite(g.t)) throw std::invalid_argument("ifs: every map must contract (0 < r < 1)");
        if (!g.is_orthogonal()) throw std::invalid_argument("ifs: linear part is not orthogonal");
        if (!(probs[i] > 0.0)) throw std::invalid_argument("ifs: probabilities must be positive");
        s += probs[i];
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("ifs: probabilities must sum to 1");
    if (exact && exact->size() != maps.size()) throw std::invalid_argument("ifs: exact data has wrong length");
}

IFSSystem IFSSystem::uniform(std::vector<Similitude> maps) {
    IFSSystem s;
    const double p = 1.0 / static_cast<double>(maps.size());
    s.probs.assign(maps.size(), p);
    s.maps = std::move(maps);
    return s;
}

IFSSystem IFSSystem::from_exact(std::vector<ExactSimilitude> maps, std::vector<double> probs) {
    IFSSystem s;
    for (const auto& m : maps) s.maps.push_back(m.to_double());
    if (probs.empty()) probs.assign(maps.size(), 1.0 / static_cast<double>(maps.size()));
    s.probs = std::move(probs);
    s.exact = std::move(maps);
    return s;
}

std::string format_word(const Word& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i] + 1);
    }
    return s + ")";
}

double sdim(const IFSSystem& ifs, SdimMode mode) {
    ifs.validate();
    if (mode == SdimMode::measure) {
        double H = 0.0, T = 0.0;
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            H -= ifs.probs[i] * std::log2(ifs.probs[i]);
            T += ifs.probs[i] * ifs.maps[i].t;
        }
        return H / T;
    }
    const auto f = [&](double s) {
        double acc = 0.0;
        for (const auto& g : ifs.maps) acc += std::exp2(-g.t * s);
        return acc - 1.0;
    };
    if (f(0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::uint64_t composition_count(const IFSSystem& ifs, int n, std::uint64_t budget) {
    if (n < 0) throw std::invalid_argument("composition level must be nonnegative");
    std::uint64_t N = 1;
    for (int k = 0; k < n; ++k) {
        if (N > budget / ifs.size()) throw BudgetExceeded("composition budget exceeded");
        N *= ifs.size();
    }
    if (N > budget) throw BudgetExceeded("composition budget exceeded");
    return N;
}

Word word_at(std::uint64_t index, int n, std::size_t alphabet) {
    Word w(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        w[static_cast<std::size_t>(k)] = static_cast<int>(index % alphabet);
        index /= alphabet;
    }
    return w;
}

Similitude CompositionTable::map(std::size_t i) const {
    Mat Um(d, d);
    Vec av(d);
    for (int r = 0; r < d; ++r) {
        av(r) = a[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(r)];
        for (int c = 0; c < d; ++c)
            Um(r, c) = U[i * static_cast<std::size_t>(d * d) + static_cast<std::size_t>(r * d + c)];
    }
    return {t[i], std::move(Um), std::move(av)};
}

namespace {

/// Odometer over words in [begin, end) of Lambda^n, keeping prefix compositions.
template <class F>
void walk(const IFSSystem& ifs, int n, std::uint64_t begin, std::uint64_t end, F&& f) {
    const int d = ifs.dim();
    const std::size_t A = ifs.size();
    if (n == 0) {
        if (begin == 0 && end > 0) f(std::uint64_t{0}, Word{}, Similitude::identity(d), 1.0);
        return;
    }
    Word w = word_at(begin, n, A);
    std::vector<Similitude> pre(static_cast<std::size_t>(n) + 1);
    std::vector<double> pw(static_cast<std::size_t>(n) + 1);
    pre[0] = Similitude::identity(d);
    pw[0] = 1.0;
    int from = 0;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        for (int k = from; k < n; ++k) {
            const auto s = static_cast<std::size_t>(w[static_cast<std::size_t>(k)]);
            pre[static_cast<std::size_t>(k) + 1] = compose(pre[static_cast<std::size_t>(k)], ifs.maps[s]);
            pw[static_cast<std::size_t>(k) + 1] = pw[static_cast<std::size_t>(k)] * ifs.probs[s];
        }
        f(idx, w, pre[static_cast<std::size_t>(n)], pw[static_cast<std::size_t>(n)]);
        int k = n - 1;
        while (k >= 0 && static_cast<std::size_t>(++w[static_cast<std::size_t>(k)]) == A) {
            w[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        from = std::max(k, 0);
    }
}

/// Splits Lambda^n into contiguous blocks for parallel enumeration.
std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks(std::uint64_t N) {
    const std::uint64_t B = std::max<std::uint64_t>(1, std::min<std::uint64_t>(256, N / 4096 + 1));
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t b = 0; b < B; ++b) out.emplace_back(N * b / B, N * (b + 1) / B);
    return out;
}

}  // namespace

namespace detail {

std::vector<std::pair<std::string, std::uint64_t>> exact_keys(const IFSSystem& ifs, int n) {
    const auto& E = *ifs.exact;
    const int d = ifs.dim();
    const std::size_t A = ifs.size();
    const std::uint64_t N = composition_count(ifs, n, ~std::uint64_t{0});
    std::vector<std::pair<std::string, std::uint64_t>> out;
    out.reserve(N);
    if (n == 0) {
        out.emplace_back(ExactSimilitude::identity(d).key(), 0);
        return out;
    }
    Word w(static_cast<std::size_t>(n), 0);
    std::vector<ExactSimilitude> pre(static_cast<std::size_t>(n) + 1);
    pre[0] = ExactSimilitude::identity(d);
    int from = 0;
    for (std::uint64_t idx = 0; idx < N; ++idx) {
        for (int k = from; k < n; ++k)
            pre[static_cast<std::size_t>(k) + 1] =
                compose(pre[static_cast<std::size_t>(k)], E[static_cast<std::size_t>(w[static_cast<std::size_t>(k)])]);
        out.emplace_back(pre[static_cast<std::size_t>(n)].key(), idx);
        int k = n - 1;
        while (k >= 0 && static_cast<std::size_t>(++w[static_cast<std::size_t>(k)]) == A) {
            w[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        from = std::max(k, 0);
    }
    return out;
}

}  // namespace detail

CompositionTable enumerate(const IFSSystem& ifs, int n, std::uint64_t budget) {
    ifs.validate();
    const std::uint64_t N = composition_count(ifs, n, budget);
    CompositionTable T;
    T.n = n;
    T.d = ifs.dim();
    T.alphabet = ifs.size();
    const auto d = static_cast<std::size_t>(T.d);
    T.t.resize(N);
    T.U.resize(N * d * d);
    T.a.resize(N * d);
    T.weight.resize(N);
    const auto bl = blocks(N);
    parallel_for(bl.size(), [&](std::size_t b) {
        walk(ifs, n, bl[b].first, bl[b].second, [&](std::uint64_t i, const Word&, const Similitude& g, double p) {
            T.t[i] = g.t;
            for (std::size_t r = 0; r < d; ++r) {
                T.a[i * d + r] = g.a(static_cast<Eigen::Index>(r));
                for (std::size_t c = 0; c < d; ++c)
                    T.U[i * d * d + r * d + c] = g.U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
            T.weight[i] = p;
        });
    });
    return T;
}

void for_each_composition(const IFSSystem& ifs, int n, const std::function<void(const Composition&)>& f,
                          std::uint64_t budget) {
    ifs.validate();
    const std::uint64_t N = composition_count(ifs, n, budget);
    walk(ifs, n, 0, N, [&](std::uint64_t, const Word& w, const Similitude& g, double p) { f(Composition{w, g, p}); });
}

std::vector<Composition> compositions(const IFSSystem& ifs, int n, std::uint64_t budget) {
    std::vector<Composition> out;
    for_each_composition(ifs, n, [&](const Composition& c) { out.push_back(c); }, budget);
    return out;
}

SimMeasure nu_n(const IFSSystem& ifs, int n, std::uint64_t budget) {
    ifs.validate();
    const std::uint64_t N = composition_count(ifs, n, budget);
    SimMeasure nu;
    if (!ifs.exact) {
        const auto T = enumerate(ifs, n, budget);
        nu.atoms.reserve(N);
        for (std::size_t i = 0; i < T.size(); ++i) nu.atoms.push_back({T.map(i), T.weight[i]});
        return nu;
    }
    // Merge exactly equal maps, keeping first-occurrence order.
    const auto keys = detail::exact_keys(ifs, n);
    std::map<std::string, std::size_t> slot;
    const auto T = enumerate(ifs, n, budget);
    for (const auto& [key, idx] : keys) {
        auto [it, fresh] = slot.emplace(key, nu.atoms.size());
        if (fresh) nu.atoms.push_back({T.map(idx), 0.0});
        nu.atoms[it->second].weight += T.weight[idx];
    }
    return nu;
}

double mean_contraction(const IFSSystem& ifs) {
    double T = 0.0;
    for (std::size_t i = 0; i < ifs.size(); ++i) T += ifs.probs[i] * ifs.maps[i].t;
    return std::exp2(-T);
}

int n_prime(const IFSSystem& ifs, int n) {
    double T = 0.0;
    for (std::size_t i = 0; i < ifs.size(); ++i) T += ifs.probs[i] * ifs.maps[i].t;
    return static_cast<int>(std::floor(n * T + 1e-9));
}

Vec fixed_point(const Similitude& g) {
    const int d = g.dim();
    const Mat A = Mat::Identity(d, d) - std::exp2(-g.t) * g.U;
    return A.partialPivLu().solve(g.a);
}

LatticeMeasure nu_tilde(const IFSSystem& ifs, int n, int L_out, std::optional<Vec> x, std::uint64_t budget,
                        bool unit_cube) {
    ifs.validate();
    const Vec base = x ? *x : fixed_point(ifs.maps.front());
    if (base.size() != ifs.dim()) throw std::invalid_argument("nu_tilde: base point has wrong dimension");
    const std::uint64_t N = composition_count(ifs, n, budget);
    const auto d = static_cast<std::size_t>(ifs.dim());
    std::vector<double> pts(N * d), w(N);
    const auto bl = blocks(N);
    parallel_for(bl.size(), [&](std::size_t b) {
        walk(ifs, n, bl[b].first, bl[b].second, [&](std::uint64_t i, const Word&, const Similitude& g, double p) {
            const Vec y = g.apply(base);
            for (std::size_t j = 0; j < d; ++j) pts[i * d + j] = y(static_cast<Eigen::Index>(j));
            w[i] = p;
        });
    });
    std::vector<double> lo(d, 0.0);
    double scale = 1.0;
    if (unit_cube) {
        std::vector<double> hi(d);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = hi[j] = pts[j];
            for (std::uint64_t i = 1; i < N; ++i) {
                lo[j] = std::min(lo[j], pts[i * d + j]);
                hi[j] = std::max(hi[j], pts[i * d + j]);
            }
        }
        double extent = 0.0;
        for (std::size_t j = 0; j < d; ++j) extent = std::max(extent, hi[j] - lo[j]);
        if (extent > 0.0) scale = 1.0 / (extent * (1.0 + 1e-12));
    }
    std::vector<LatticeMeasure::Cell> cells(N);
    for (std::uint64_t i = 0; i < N; ++i) {
        auto& c = cells[i];
        c.key.fill(0);
        for (std::size_t j = 0; j < d; ++j) c.key[j] = snap_coordinate((pts[i * d + j] - lo[j]) * scale, L_out);
        c.weight = w[i];
    }
    return LatticeMeasure(static_cast<int>(d), L_out, std::move(cells));
}

EntropyDiagnostics entropy_diagnostics(const IFSSystem& ifs, int n, double q, std::uint64_t budget) {
    if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
    EntropyDiagnostics D;
    D.n_prime = n_prime(ifs, n);
    if (D.n_prime < 1) throw std::invalid_argument("entropy_diagnostics: n' must be positive");
    D.q_level = static_cast<int>(std::ceil(q * D.n_prime - 1e-9));
    const SimMeasure nu = nu_n(ifs, n, budget);
    const double np = D.n_prime;
    D.A = translation_entropy(nu, D.n_prime) / np;
    D.B = entropy_on_G(nu, D.q_level, true, D.n_prime) / np;
    D.C = entropy(nu_tilde(ifs, n, D.n_prime, std::nullopt, budget), D.n_prime) / np;
    return D;
}

double dim_estimate(const IFSSystem& ifs, int n, int L_out, std::uint64_t budget) {
    const int np = n_prime(ifs, n);
    if (np < 1) throw std::invalid_argument("dim_estimate: n' must be positive");
    if (L_out < 0) L_out = np + 4;
    if (L_out < np) throw std::invalid_argument("dim_estimate: L_out below n'");
    return entropy(nu_tilde(ifs, n, L_out, std::nullopt, budget, true), np) / np;
}

SliceEntropy slice_entropy(const LatticeMeasure& mu, const Subspace& V, int p) {
    if (V.ambient() != mu.dim()) throw std::invalid_argument("slice_entropy: dimension mismatch");
    if (p < 1 || p > mu.level()) throw std::invalid_argument("slice_entropy: resolution insufficient");
    const int top = mu.level() - p;
    std::vector<double> proj(static_cast<std::size_t>(top) + 1), cond(proj.size());
    parallel_for(proj.size(), [&](std::size_t i) {
        const auto comps = components(mu, static_cast<int>(i), true);
        double sp = 0.0, sc = 0.0;
        for (const auto& c : comps) {
            const double full = entropy(c.measure, p);
            const double pr = projection_entropy(c.measure, V, p) * p;
            sp += c.weight * pr;
            sc += c.weight * (full - pr);
        }
        proj[i] = sp / p;
        cond[i] = sc / p;
    });
    SliceEntropy s;
    s.levels = top + 1;
    for (std::size_t i = 0; i < proj.size(); ++i) {
        s.proj_avg += proj[i];
        s.cond_avg += cond[i];
    }
    s.proj_avg /= s.levels;
    s.cond_avg /= s.levels;
    s.total = s.proj_avg + s.cond_avg;
    return s;
}

SliceEntropy slice_entropy(const IFSSystem& ifs, const Subspace& V, int n, int p_scale, std::uint64_t budget) {
    const int np = n_prime(ifs, n);
    if (np < p_scale) throw std::invalid_argument("slice_entropy: resolution insufficient");
    return slice_entropy(nu_tilde(ifs, n, np, std::nullopt, budget), V, p_scale);
}

}  // namespace fel
