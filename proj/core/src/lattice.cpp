#include "fel/lattice.hpp"

#include "fel/parallel.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <iterator>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace fel {

namespace {

int msb_of_xor(std::int64_t a, std::int64_t b) {
    const auto x = static_cast<std::uint64_t>(a) ^ static_cast<std::uint64_t>(b);
    if (x == 0) return -1;
    return std::bit_width(x) - 1;
}

int msb_of_xor(const DeepCoord& a, const DeepCoord& b) {
    if (a == b) return -1;
    if ((a < 0) != (b < 0)) return INT_MAX;
    return static_cast<int>(boost::multiprecision::msb(DeepCoord(a ^ b)));
}

std::int64_t floor_shift(std::int64_t c, int s) {
    if (s <= 0) return c;
    if (s >= 63) return c < 0 ? -1 : 0;
    return c >> s;
}

DeepCoord floor_shift(const DeepCoord& c, int s) {
    if (s <= 0) return c;
    return c >> s;  // arithmetic shift: rounds toward -infinity
}

std::int64_t lift(std::int64_t c, int s) {
    if (s >= 63 || std::abs(c) > (std::int64_t{1} << (62 - s))) throw std::overflow_error("lattice: cell index overflow");
    return c * (std::int64_t{1} << s);
}

DeepCoord lift(const DeepCoord& c, int s) { return c << s; }

std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("lattice: cell index overflow");
    return r;
}

DeepCoord add(const DeepCoord& a, const DeepCoord& b) { return a + b; }

double coord_to_double(std::int64_t c) { return static_cast<double>(c); }
double coord_to_double(const DeepCoord& c) { return c.convert_to<double>(); }

template <class Coord>
using KeyOf = std::array<Coord, kMaxDim>;

template <class Coord>
KeyOf<Coord> zero_key() {
    KeyOf<Coord> k;
    k.fill(Coord(0));
    return k;
}

/// Sorts and merges raw cells in place. Duplicate keys are summed in input order.
template <class Coord>
void canonicalize(std::vector<typename BasicLatticeMeasure<Coord>::Cell>& cells, int d) {
    using Cell = typename BasicLatticeMeasure<Coord>::Cell;
    auto less = [d](const Cell& x, const Cell& y) { return zorder_less<Coord>(x.key, y.key, d); };
    if (!std::is_sorted(cells.begin(), cells.end(), less)) std::stable_sort(cells.begin(), cells.end(), less);
    std::size_t out = 0;
    for (std::size_t i = 0; i < cells.size();) {
        Cell c = std::move(cells[i]);
        std::size_t j = i + 1;
        while (j < cells.size() && cells[j].key == c.key) c.weight += cells[j++].weight;
        if (c.weight > 0.0) cells[out++] = std::move(c);
        i = j;
    }
    cells.resize(out);
}

/// Runs of cells sharing the same level-(L - s) ancestor: calls f(begin, end, ancestor).
template <class Coord, class F>
void for_each_run(const std::vector<typename BasicLatticeMeasure<Coord>::Cell>& cells, int d, int s, F&& f) {
    std::size_t i = 0;
    while (i < cells.size()) {
        const auto anc = shift_key<Coord>(cells[i].key, d, s);
        std::size_t j = i + 1;
        while (j < cells.size() && shift_key<Coord>(cells[j].key, d, s) == anc) ++j;
        f(i, j, anc);
        i = j;
    }
}

/// Entropy (bits) of cells[b, e) normalized by their mass, pooled by shift s.
template <class Coord>
double range_entropy(const std::vector<typename BasicLatticeMeasure<Coord>::Cell>& cells, std::size_t b, std::size_t e,
                     int d, int s) {
    double mass = 0.0;
    for (std::size_t i = b; i < e; ++i) mass += cells[i].weight;
    double H = 0.0;
    std::size_t i = b;
    while (i < e) {
        const auto anc = shift_key<Coord>(cells[i].key, d, s);
        double p = cells[i].weight;
        std::size_t j = i + 1;
        while (j < e && shift_key<Coord>(cells[j].key, d, s) == anc) p += cells[j++].weight;
        const double q = p / mass;
        if (q > 0.0) H -= q * std::log2(q);
        i = j;
    }
    return H;
}

void check_level(int n, int L, const char* what) {
    if (n < 0) throw std::invalid_argument(std::string(what) + ": level must be nonnegative");
    if (n > L) throw std::invalid_argument(std::string(what) + ": insufficient resolution (n > L)");
}

}  // namespace

template <class Coord>
bool zorder_less(const std::array<Coord, kMaxDim>& a, const std::array<Coord, kMaxDim>& b, int d) {
    int best = -1;
    int best_j = -1;
    for (int j = 0; j < d; ++j) {
        const int m = msb_of_xor(a[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(j)]);
        if (m > best) {
            best = m;
            best_j = j;
        }
    }
    if (best_j < 0) return false;
    return a[static_cast<std::size_t>(best_j)] < b[static_cast<std::size_t>(best_j)];
}

template <class Coord>
std::array<Coord, kMaxDim> shift_key(const std::array<Coord, kMaxDim>& k, int d, int s) {
    auto out = k;
    for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(j)] = floor_shift(k[static_cast<std::size_t>(j)], s);
    return out;
}

template <class Coord>
Vec cell_center(const std::array<Coord, kMaxDim>& k, int d, int L) {
    Vec x(d);
    for (int j = 0; j < d; ++j) x(j) = std::ldexp(coord_to_double(k[static_cast<std::size_t>(j)]) + 0.5, -L);
    return x;
}

template <class Coord>
BasicLatticeMeasure<Coord>::BasicLatticeMeasure(int d, int L, std::vector<Cell> cells) : d_(d), L_(L) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("lattice: dimension must be in 1..4");
    if (L < 0) throw std::invalid_argument("lattice: level must be nonnegative");
    for (auto& c : cells) {
        if (!std::isfinite(c.weight) || c.weight < 0.0) throw std::invalid_argument("lattice: weights must be finite and nonnegative");
        for (int j = d; j < kMaxDim; ++j) c.key[static_cast<std::size_t>(j)] = Coord(0);
    }
    canonicalize<Coord>(cells, d);
    if (cells.empty()) throw std::invalid_argument("lattice: measure has no mass");
    double total = 0.0;
    for (const auto& c : cells) total += c.weight;
    for (auto& c : cells) c.weight /= total;
    cells_ = std::move(cells);
}

template <class Coord>
BasicLatticeMeasure<Coord> BasicLatticeMeasure<Coord>::dirac(int d, int L, const Key& key) {
    return BasicLatticeMeasure(d, L, {Cell{key, 1.0}});
}

template <class Coord>
double BasicLatticeMeasure<Coord>::weight_of(const Key& key) const {
    auto k = key;
    for (int j = d_; j < kMaxDim; ++j) k[static_cast<std::size_t>(j)] = Coord(0);
    auto it = std::lower_bound(cells_.begin(), cells_.end(), k,
                               [this](const Cell& c, const Key& x) { return zorder_less<Coord>(c.key, x, d_); });
    if (it != cells_.end() && it->key == k) return it->weight;
    return 0.0;
}

template <class Coord>
double BasicLatticeMeasure<Coord>::total_mass() const {
    double s = 0.0;
    for (const auto& c : cells_) s += c.weight;
    return s;
}

template <class Coord>
double entropy(const BasicLatticeMeasure<Coord>& mu, int n) {
    check_level(n, mu.level(), "entropy");
    return range_entropy<Coord>(mu.cells(), 0, mu.size(), mu.dim(), mu.level() - n);
}

template <class Coord>
double normalized_entropy(const BasicLatticeMeasure<Coord>& mu, int n) {
    const double H = entropy(mu, n);
    return n > 0 ? H / n : 0.0;
}

template <class Coord>
EntropySuite entropy_suite(const BasicLatticeMeasure<Coord>& mu, int n, std::optional<int> m) {
    EntropySuite s;
    s.H = entropy(mu, n);
    s.H_n = n > 0 ? s.H / n : 0.0;
    s.H_cond = s.H;
    if (m) {
        if (*m > n) throw std::invalid_argument("entropy_suite: m must not exceed n");
        s.H_cond = s.H - entropy(mu, *m);
    }
    return s;
}

template <class Coord>
BasicLatticeMeasure<Coord> coarsen(const BasicLatticeMeasure<Coord>& mu, int n) {
    check_level(n, mu.level(), "coarsen");
    using Cell = typename BasicLatticeMeasure<Coord>::Cell;
    std::vector<Cell> out;
    const auto& cells = mu.cells();
    for_each_run<Coord>(cells, mu.dim(), mu.level() - n, [&](std::size_t b, std::size_t e, const auto& anc) {
        double w = 0.0;
        for (std::size_t i = b; i < e; ++i) w += cells[i].weight;
        out.push_back(Cell{anc, w});
    });
    return BasicLatticeMeasure<Coord>(mu.dim(), n, std::move(out));
}

namespace {

template <class Coord>
BasicLatticeMeasure<Coord> make_component(const BasicLatticeMeasure<Coord>& mu, std::size_t b, std::size_t e,
                                          const KeyOf<Coord>& anc, int i, bool rescaled) {
    using Cell = typename BasicLatticeMeasure<Coord>::Cell;
    const int d = mu.dim();
    const int s = mu.level() - i;
    std::vector<Cell> cells(mu.cells().begin() + static_cast<std::ptrdiff_t>(b), mu.cells().begin() + static_cast<std::ptrdiff_t>(e));
    if (!rescaled) return BasicLatticeMeasure<Coord>(d, mu.level(), std::move(cells));
    KeyOf<Coord> base = zero_key<Coord>();
    for (int j = 0; j < d; ++j) base[static_cast<std::size_t>(j)] = lift(anc[static_cast<std::size_t>(j)], s);
    for (auto& c : cells)
        for (int j = 0; j < d; ++j) c.key[static_cast<std::size_t>(j)] -= base[static_cast<std::size_t>(j)];
    return BasicLatticeMeasure<Coord>(d, s, std::move(cells));
}

}  // namespace

template <class Coord>
BasicLatticeMeasure<Coord> component(const BasicLatticeMeasure<Coord>& mu, const std::array<Coord, kMaxDim>& cell, int i,
                                     bool rescaled) {
    check_level(i, mu.level(), "component");
    const int d = mu.dim();
    const int s = mu.level() - i;
    auto target = cell;
    for (int j = d; j < kMaxDim; ++j) target[static_cast<std::size_t>(j)] = Coord(0);
    const auto& cells = mu.cells();
    // Cells of one dyadic ancestor are contiguous in Z-order.
    auto lo = std::partition_point(cells.begin(), cells.end(), [&](const auto& c) {
        return zorder_less<Coord>(shift_key<Coord>(c.key, d, s), target, d);
    });
    auto hi = lo;
    while (hi != cells.end() && shift_key<Coord>(hi->key, d, s) == target) ++hi;
    if (lo == hi) throw std::invalid_argument("component: cell has zero mass");
    return make_component(mu, static_cast<std::size_t>(lo - cells.begin()), static_cast<std::size_t>(hi - cells.begin()),
                          target, i, rescaled);
}

template <class Coord>
std::vector<ComponentView<Coord>> components(const BasicLatticeMeasure<Coord>& mu, int i, bool rescaled) {
    check_level(i, mu.level(), "components");
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::vector<KeyOf<Coord>> ancestors;
    for_each_run<Coord>(mu.cells(), mu.dim(), mu.level() - i, [&](std::size_t b, std::size_t e, const auto& anc) {
        runs.emplace_back(b, e);
        ancestors.push_back(anc);
    });
    std::vector<ComponentView<Coord>> out;
    out.reserve(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        double w = 0.0;
        for (std::size_t c = runs[r].first; c < runs[r].second; ++c) w += mu.cells()[c].weight;
        out.push_back({ancestors[r], w, make_component(mu, runs[r].first, runs[r].second, ancestors[r], i, rescaled)});
    }
    return out;
}

template <class Coord>
double component_expectation(const BasicLatticeMeasure<Coord>& mu, const std::vector<int>& levels,
                             const std::function<double(const BasicLatticeMeasure<Coord>&)>& f, bool rescaled) {
    if (levels.empty()) throw std::invalid_argument("component_expectation: empty level set");
    double total = 0.0;
    for (int i : levels) {
        auto comps = components(mu, i, rescaled);
        std::vector<double> vals(comps.size());
        parallel_for(comps.size(), [&](std::size_t c) { vals[c] = f(comps[c].measure); });
        double level_sum = 0.0;
        for (std::size_t c = 0; c < comps.size(); ++c) level_sum += comps[c].weight * vals[c];
        total += level_sum;
    }
    return total / static_cast<double>(levels.size());
}

template <class Coord>
double component_probability(const BasicLatticeMeasure<Coord>& mu, const std::vector<int>& levels,
                             const std::function<bool(const BasicLatticeMeasure<Coord>&)>& pred, bool rescaled) {
    return component_expectation<Coord>(
        mu, levels, [&](const BasicLatticeMeasure<Coord>& c) { return pred(c) ? 1.0 : 0.0; }, rescaled);
}

template <class Coord>
double local_entropy_average(const BasicLatticeMeasure<Coord>& mu, int n, int m) {
    if (m < 1) throw std::invalid_argument("local_entropy_average: m must be positive");
    check_level(n + m, mu.level(), "local_entropy_average");
    const int d = mu.dim();
    const int L = mu.level();
    std::vector<double> per_level(static_cast<std::size_t>(n + 1), 0.0);
    parallel_for(per_level.size(), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        double acc = 0.0;
        for_each_run<Coord>(mu.cells(), d, L - i, [&](std::size_t b, std::size_t e, const auto&) {
            double w = 0.0;
            for (std::size_t c = b; c < e; ++c) w += mu.cells()[c].weight;
            acc += w * range_entropy<Coord>(mu.cells(), b, e, d, L - i - m) / m;
        });
        per_level[ii] = acc;
    });
    double total = 0.0;
    for (double v : per_level) total += v;
    return total / static_cast<double>(n + 1);
}

template <class Coord>
BasicLatticeMeasure<Coord> convolve(const BasicLatticeMeasure<Coord>& mu, const BasicLatticeMeasure<Coord>& nu) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("convolve: dimension mismatch");
    if (mu.level() != nu.level()) throw std::invalid_argument("convolve: lattices differ; coarsen first");
    using Cell = typename BasicLatticeMeasure<Coord>::Cell;
    const int d = mu.dim();
    const auto& A = mu.cells();
    const auto& B = nu.cells();
    constexpr std::size_t kPairsPerBlock = std::size_t{1} << 18;
    const std::size_t rows = std::max<std::size_t>(1, kPairsPerBlock / std::max<std::size_t>(1, B.size()));
    const std::size_t blocks = (A.size() + rows - 1) / rows;
    std::vector<std::vector<Cell>> partial(blocks);
    parallel_for(blocks, [&](std::size_t blk) {
        auto& out = partial[blk];
        const std::size_t lo = blk * rows;
        const std::size_t hi = std::min(A.size(), lo + rows);
        out.reserve((hi - lo) * B.size());
        for (std::size_t a = lo; a < hi; ++a)
            for (const auto& b : B) {
                Cell c{zero_key<Coord>(), A[a].weight * b.weight};
                for (int j = 0; j < d; ++j)
                    c.key[static_cast<std::size_t>(j)] = add(A[a].key[static_cast<std::size_t>(j)], b.key[static_cast<std::size_t>(j)]);
                out.push_back(std::move(c));
            }
        canonicalize<Coord>(out, d);
    });
    std::vector<Cell> all;
    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    all.reserve(total);
    for (auto& p : partial) {
        std::move(p.begin(), p.end(), std::back_inserter(all));
        std::vector<Cell>().swap(p);
    }
    return BasicLatticeMeasure<Coord>(d, mu.level(), std::move(all));
}

template <class Coord>
BasicLatticeMeasure<Coord> self_convolve(const BasicLatticeMeasure<Coord>& mu, int k) {
    if (k < 0) throw std::invalid_argument("self_convolve: k must be nonnegative");
    if constexpr (std::is_same_v<Coord, std::int64_t>) {
        // Dense transform pays off for many folds of a large support.
        if (k >= 8 && mu.size() >= 4096) {
            try {
                return self_convolve_fft(mu, k);
            } catch (const std::length_error&) {
                // bounding box too large for the dense path
            }
        }
    }
    BasicLatticeMeasure<Coord> result = BasicLatticeMeasure<Coord>::dirac(mu.dim(), mu.level(), zero_key<Coord>());
    if (k == 0) return result;
    BasicLatticeMeasure<Coord> base = mu;
    bool have = false;
    while (k > 0) {
        if (k & 1) {
            result = have ? convolve(result, base) : base;
            have = true;
        }
        k >>= 1;
        if (k > 0) base = convolve(base, base);
    }
    return result;
}

template <class Coord>
BasicLatticeMeasure<Coord> translate(const BasicLatticeMeasure<Coord>& mu, const std::array<Coord, kMaxDim>& offset) {
    auto cells = mu.cells();
    for (auto& c : cells)
        for (int j = 0; j < mu.dim(); ++j)
            c.key[static_cast<std::size_t>(j)] = add(c.key[static_cast<std::size_t>(j)], offset[static_cast<std::size_t>(j)]);
    return BasicLatticeMeasure<Coord>(mu.dim(), mu.level(), std::move(cells));
}

double CovSummary::lambda(int k) const {
    const int d = static_cast<int>(eigenvalues.size());
    if (k <= 0) return static_cast<double>(d);
    if (k > d) return 0.0;
    return eigenvalues(k - 1);
}

CovSummary cov_summary(const Vec& mean, const Mat& Sigma) {
    const int d = static_cast<int>(mean.size());
    CovSummary s;
    s.mean = mean;
    s.Sigma = 0.5 * (Sigma + Sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(s.Sigma);
    s.eigenvalues.resize(d);
    s.eigenvectors.resize(d, d);
    for (int i = 0; i < d; ++i) {
        s.eigenvalues(i) = std::max(0.0, es.eigenvalues()(d - 1 - i));
        Vec v = es.eigenvectors().col(d - 1 - i);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        s.eigenvectors.col(i) = v;
    }
    return s;
}

template <class Coord>
CovSummary mean_cov(const BasicLatticeMeasure<Coord>& mu) {
    const int d = mu.dim();
    Vec m = Vec::Zero(d);
    for (const auto& c : mu.cells()) m += c.weight * cell_center<Coord>(c.key, d, mu.level());
    Mat S = Mat::Zero(d, d);
    for (const auto& c : mu.cells()) {
        const Vec x = cell_center<Coord>(c.key, d, mu.level()) - m;
        S.noalias() += c.weight * (x * x.transpose());
    }
    return cov_summary(m, S);
}

DeepLatticeMeasure to_deep(const LatticeMeasure& mu) {
    std::vector<DeepLatticeMeasure::Cell> cells;
    cells.reserve(mu.size());
    for (const auto& c : mu.cells()) {
        DeepLatticeMeasure::Cell dc{KeyOf<DeepCoord>{}, c.weight};
        for (int j = 0; j < kMaxDim; ++j) dc.key[static_cast<std::size_t>(j)] = DeepCoord(c.key[static_cast<std::size_t>(j)]);
        cells.push_back(std::move(dc));
    }
    return DeepLatticeMeasure(mu.dim(), mu.level(), std::move(cells));
}

std::int64_t snap_coordinate(double x, int L) {
    if (!std::isfinite(x)) throw std::invalid_argument("lattice: non-finite coordinate");
    const double v = std::floor(std::ldexp(x, L));
    if (std::abs(v) >= 4.6e18) throw std::overflow_error("lattice: coordinate out of range for level");
    return static_cast<std::int64_t>(v);
}

LatticeMeasure make_lattice(const std::vector<Vec>& points, const std::vector<double>& weights, int L) {
    if (points.empty()) throw std::invalid_argument("make_lattice: empty atom list");
    if (points.size() != weights.size()) throw std::invalid_argument("make_lattice: weight count mismatch");
    const int d = static_cast<int>(points.front().size());
    std::vector<LatticeMeasure::Cell> cells;
    cells.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) throw std::invalid_argument("make_lattice: mixed dimensions");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("make_lattice: weights must be positive");
        LatticeMeasure::Cell c{zero_key<std::int64_t>(), weights[i]};
        for (int j = 0; j < d; ++j) c.key[static_cast<std::size_t>(j)] = snap_coordinate(points[i](j), L);
        cells.push_back(c);
    }
    return LatticeMeasure(d, L, std::move(cells));
}

LatticeMeasure pushforward(const Similitude& g, const LatticeMeasure& mu, int L_out) {
    if (g.dim() != mu.dim()) throw std::invalid_argument("pushforward: dimension mismatch");
    const int d = mu.dim();
    std::vector<LatticeMeasure::Cell> cells;
    cells.reserve(mu.size());
    for (const auto& c : mu.cells()) {
        const Vec y = g.apply(cell_center<std::int64_t>(c.key, d, mu.level()));
        LatticeMeasure::Cell o{zero_key<std::int64_t>(), c.weight};
        for (int j = 0; j < d; ++j) o.key[static_cast<std::size_t>(j)] = snap_coordinate(y(j), L_out);
        cells.push_back(o);
    }
    return LatticeMeasure(d, L_out, std::move(cells));
}

LatticeMeasure uniform_cube(int d, int L) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("uniform_cube: bad dimension");
    if (static_cast<long>(d) * L > 26) throw std::length_error("uniform_cube: too many cells");
    const std::int64_t side = std::int64_t{1} << L;
    std::int64_t count = 1;
    for (int j = 0; j < d; ++j) count *= side;
    std::vector<LatticeMeasure::Cell> cells;
    cells.reserve(static_cast<std::size_t>(count));
    for (std::int64_t idx = 0; idx < count; ++idx) {
        LatticeMeasure::Cell c{zero_key<std::int64_t>(), 1.0};
        std::int64_t r = idx;
        for (int j = 0; j < d; ++j) {
            c.key[static_cast<std::size_t>(j)] = r % side;
            r /= side;
        }
        cells.push_back(c);
    }
    return LatticeMeasure(d, L, std::move(cells));
}

#define FEL_INSTANTIATE(C)                                                                                               \
    template class BasicLatticeMeasure<C>;                                                                               \
    template bool zorder_less<C>(const std::array<C, kMaxDim>&, const std::array<C, kMaxDim>&, int);                     \
    template std::array<C, kMaxDim> shift_key<C>(const std::array<C, kMaxDim>&, int, int);                               \
    template Vec cell_center<C>(const std::array<C, kMaxDim>&, int, int);                                                \
    template double entropy<C>(const BasicLatticeMeasure<C>&, int);                                                      \
    template double normalized_entropy<C>(const BasicLatticeMeasure<C>&, int);                                           \
    template EntropySuite entropy_suite<C>(const BasicLatticeMeasure<C>&, int, std::optional<int>);                      \
    template BasicLatticeMeasure<C> coarsen<C>(const BasicLatticeMeasure<C>&, int);                                      \
    template BasicLatticeMeasure<C> component<C>(const BasicLatticeMeasure<C>&, const std::array<C, kMaxDim>&, int, bool); \
    template std::vector<ComponentView<C>> components<C>(const BasicLatticeMeasure<C>&, int, bool);                     \
    template double component_expectation<C>(const BasicLatticeMeasure<C>&, const std::vector<int>&,                     \
                                             const std::function<double(const BasicLatticeMeasure<C>&)>&, bool);         \
    template double component_probability<C>(const BasicLatticeMeasure<C>&, const std::vector<int>&,                     \
                                             const std::function<bool(const BasicLatticeMeasure<C>&)>&, bool);           \
    template double local_entropy_average<C>(const BasicLatticeMeasure<C>&, int, int);                                   \
    template BasicLatticeMeasure<C> convolve<C>(const BasicLatticeMeasure<C>&, const BasicLatticeMeasure<C>&);           \
    template BasicLatticeMeasure<C> self_convolve<C>(const BasicLatticeMeasure<C>&, int);                                \
    template BasicLatticeMeasure<C> translate<C>(const BasicLatticeMeasure<C>&, const std::array<C, kMaxDim>&);          \
    template CovSummary mean_cov<C>(const BasicLatticeMeasure<C>&);

FEL_INSTANTIATE(std::int64_t)
FEL_INSTANTIATE(DeepCoord)

#undef FEL_INSTANTIATE

}  // namespace fel
