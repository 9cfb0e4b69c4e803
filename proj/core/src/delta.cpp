#include "fel/ifs.hpp"
#include "fel/parallel.hpp"
#include "ifs_internal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace fel {

namespace {

struct Best {
    double dist = std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
    bool operator<(const Best& o) const { return std::tie(dist, i, j) < std::tie(o.dist, o.i, o.j); }
};

double small_op_norm(const double* A, int d) {
    if (d == 1) return std::abs(A[0]);
    if (d == 2) {
        const double f = A[0] * A[0] + A[1] * A[1] + A[2] * A[2] + A[3] * A[3];
        const double det = A[0] * A[3] - A[1] * A[2];
        const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
        return std::sqrt(std::max(0.0, 0.5 * (f + disc)));
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(A, d, d);
    return op_norm(Mat(M));
}

double table_distance(const CompositionTable& T, std::size_t i, std::size_t j) {
    const auto d = static_cast<std::size_t>(T.d);
    std::array<double, kMaxDim * kMaxDim> dU{};
    std::vector<double> big;
    double* diff = dU.data();
    if (d > kMaxDim) {
        big.resize(d * d);
        diff = big.data();
    }
    for (std::size_t q = 0; q < d * d; ++q) diff[q] = T.U[i * d * d + q] - T.U[j * d * d + q];
    double da = 0.0;
    for (std::size_t q = 0; q < d; ++q) {
        const double v = T.a[i * d + q] - T.a[j * d + q];
        da += v * v;
    }
    return std::abs(T.t[i] - T.t[j]) + small_op_norm(diff, T.d) + std::sqrt(da);
}

DeltaResult finish(const CompositionTable& T, const Best& b) {
    DeltaResult r;
    r.delta = b.dist;
    if (std::isfinite(b.dist)) {
        r.i = word_at(b.i, T.n, T.alphabet);
        r.j = word_at(b.j, T.n, T.alphabet);
    }
    return r;
}

double tie_threshold(double best) { return best * (1.0 + 1e-9); }

std::int64_t bucket(double x, double side) {
    const double v = std::floor(x / side);
    if (!(std::abs(v) < 4e18)) throw std::overflow_error("delta_n: separation below hash resolution");
    return static_cast<std::int64_t>(v);
}

/// Lexicographically least pair among identical tuples, if any.
std::optional<Best> zero_pair(const CompositionTable& T) {
    const auto N = T.size();
    const auto d = static_cast<std::size_t>(T.d);
    const auto value_less = [&](std::size_t x, std::size_t y) {
        if (T.t[x] != T.t[y]) return T.t[x] < T.t[y];
        for (std::size_t q = 0; q < d * d; ++q)
            if (T.U[x * d * d + q] != T.U[y * d * d + q]) return T.U[x * d * d + q] < T.U[y * d * d + q];
        for (std::size_t q = 0; q < d; ++q)
            if (T.a[x * d + q] != T.a[y * d + q]) return T.a[x * d + q] < T.a[y * d + q];
        return false;
    };
    const auto same = [&](std::size_t x, std::size_t y) { return !value_less(x, y) && !value_less(y, x); };
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return value_less(x, y) || (same(x, y) && x < y);
    });
    std::optional<Best> best;
    for (std::size_t q = 0; q + 1 < N; ++q) {
        // Indices ascend within a run of equal tuples; its first two give the run's least pair.
        if (same(idx[q], idx[q + 1]) && (q == 0 || !same(idx[q - 1], idx[q]))) {
            Best b{0.0, idx[q], idx[q + 1]};
            if (!best || b < *best) best = b;
        }
    }
    return best;
}

/// Least pair of words with rationally equal maps at level n.
std::optional<std::pair<std::uint64_t, std::uint64_t>> exact_pair(const IFSSystem& ifs, int n) {
    const auto keys = detail::exact_keys(ifs, n);
    std::map<std::string, std::uint64_t> first;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
    for (const auto& [key, idx] : keys) {
        auto [it, fresh] = first.emplace(key, idx);
        if (fresh) continue;
        const std::pair<std::uint64_t, std::uint64_t> p{it->second, idx};
        if (!best || p < *best) best = p;
    }
    return best;
}

}  // namespace

DeltaResult delta_n(const IFSSystem& ifs, int n, std::uint64_t budget) {
    const auto T = enumerate(ifs, n, budget);
    const std::size_t N = T.size();
    if (N < 2) return finish(T, Best{});
    const auto d = static_cast<std::size_t>(T.d);

    if (ifs.exact) {
        if (auto p = exact_pair(ifs, n)) return finish(T, Best{0.0, p->first, p->second});
    }

    // Upper bound from neighbours in the first translation coordinate.
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return T.a[x * d] != T.a[y * d] ? T.a[x * d] < T.a[y * d] : x < y;
    });
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q + 1 < N; ++q) w = std::min(w, table_distance(T, idx[q], idx[q + 1]));

    if (w == 0.0) return finish(T, *zero_pair(T));

    // Buckets of side w on (t, a). sim_distance dominates each coordinate gap, so
    // every pair at distance <= w lies in adjacent buckets.
    const double side = w * (1.0 + 1e-9);
    const std::size_t D = 1 + d;
    std::vector<std::array<std::int64_t, kMaxDim + 1>> key(N);
    for (std::size_t i = 0; i < N; ++i) {
        key[i].fill(0);
        key[i][0] = bucket(T.t[i], side);
        for (std::size_t q = 0; q < d; ++q) key[i][q + 1] = bucket(T.a[i * d + q], side);
    }
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return key[x] != key[y] ? key[x] < key[y] : x < y;
    });
    std::size_t neighbours = 1;
    for (std::size_t q = 0; q < D; ++q) neighbours *= 3;

    // Pass one finds the minimum; pass two takes the least pair within rounding of it,
    // so that geometrically tied pairs resolve by word order.
    const std::size_t chunks = std::min<std::size_t>(N, 256);
    const auto sweep = [&](double thr) {
        std::vector<Best> part(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            Best b;
            if (thr >= 0.0) b.i = b.j = N;
            for (std::size_t i = N * c / chunks; i < N * (c + 1) / chunks; ++i) {
                for (std::size_t code = 0; code < neighbours; ++code) {
                    auto k = key[i];
                    std::size_t t = code;
                    for (std::size_t q = 0; q < D; ++q) {
                        k[q] += static_cast<std::int64_t>(t % 3) - 1;
                        t /= 3;
                    }
                    auto lo = std::lower_bound(order.begin(), order.end(), k,
                                               [&](std::size_t x, const auto& kk) { return key[x] < kk; });
                    for (auto it = lo; it != order.end() && key[*it] == k; ++it) {
                        const std::size_t j = *it;
                        if (j <= i) continue;
                        const double dist = table_distance(T, i, j);
                        if (thr < 0.0) {
                            if (dist < b.dist) b = Best{dist, i, j};
                        } else if (dist <= thr && Best{0.0, i, j} < Best{0.0, b.i, b.j}) {
                            b = Best{dist, i, j};
                        }
                    }
                }
            }
            part[c] = b;
        });
        Best best;
        if (thr >= 0.0) best.i = best.j = N;
        for (const auto& b : part) {
            if (thr < 0.0 ? b.dist < best.dist : Best{0.0, b.i, b.j} < Best{0.0, best.i, best.j}) best = b;
        }
        return best;
    };
    const Best first = sweep(-1.0);
    if (!std::isfinite(first.dist)) return finish(T, first);
    return finish(T, sweep(tie_threshold(first.dist)));
}

std::optional<Overlap> exact_overlaps(const IFSSystem& ifs, int n_max, std::uint64_t budget) {
    ifs.validate();
    for (int n = 1; n <= n_max; ++n) {
        (void)composition_count(ifs, n, budget);
        if (ifs.exact) {
            if (auto p = exact_pair(ifs, n))
                return Overlap{n, word_at(p->first, n, ifs.size()), word_at(p->second, n, ifs.size()), true};
        } else {
            const auto r = delta_n(ifs, n, budget);
            if (r.delta <= 1e-12) return Overlap{n, r.i, r.j, false};
        }
    }
    return std::nullopt;
}

DeltaResult delta_n_bruteforce(const IFSSystem& ifs, int n, std::uint64_t budget) {
    const auto T = enumerate(ifs, n, budget);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) m = std::min(m, table_distance(T, i, j));
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) {
            const double dist = table_distance(T, i, j);
            if (dist <= tie_threshold(m)) return finish(T, Best{dist, i, j});
        }
    return finish(T, Best{});
}

}  // namespace fel
