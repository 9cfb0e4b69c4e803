#include "fel/lattice.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fel {

namespace {

// fftw planning is not thread safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t smooth_size(std::size_t n) {
    for (std::size_t s = n;; ++s) {
        std::size_t r = s;
        for (std::size_t p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return s;
    }
}

std::complex<double> ipow(std::complex<double> z, int k) {
    std::complex<double> r{1.0, 0.0};
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

}  // namespace

LatticeMeasure self_convolve_fft(const LatticeMeasure& mu, int k) {
    if (k < 1) throw std::invalid_argument("self_convolve_fft: k must be positive");
    constexpr std::size_t kMaxDense = std::size_t{1} << 27;
    const int d = mu.dim();
    std::array<std::int64_t, kMaxDim> lo{}, hi{};
    for (int j = 0; j < d; ++j) {
        lo[j] = hi[j] = mu.cells().front().key[j];
        for (const auto& c : mu.cells()) {
            lo[j] = std::min(lo[j], c.key[j]);
            hi[j] = std::max(hi[j], c.key[j]);
        }
    }
    // Kronecker substitution: flatten the result box so that index sums never carry.
    std::array<std::size_t, kMaxDim> ext{}, stride{};
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        const auto e = static_cast<std::size_t>(hi[j] - lo[j]);
        ext[j] = e * static_cast<std::size_t>(k) + 1;
        stride[j] = total;
        if (ext[j] > kMaxDense || total > kMaxDense / ext[j]) throw std::length_error("self_convolve_fft: support box too large");
        total *= ext[j];
    }
    const std::size_t N = smooth_size(total);
    const std::size_t Nc = N / 2 + 1;
    double* in = fftw_alloc_real(N);
    fftw_complex* spec = fftw_alloc_complex(Nc);
    if (!in || !spec) throw std::bad_alloc();
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(N), in, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(N), spec, in, FFTW_ESTIMATE);
    }
    std::memset(in, 0, sizeof(double) * N);
    for (const auto& c : mu.cells()) {
        std::size_t idx = 0;
        for (int j = 0; j < d; ++j) idx += static_cast<std::size_t>(c.key[j] - lo[j]) * stride[j];
        in[idx] += c.weight;
    }
    fftw_execute(fwd);
    for (std::size_t i = 0; i < Nc; ++i) {
        const auto z = ipow({spec[i][0], spec[i][1]}, k);
        spec[i][0] = z.real();
        spec[i][1] = z.imag();
    }
    fftw_execute(bwd);
    // Round-off floor of the transform; smaller values are noise.
    const double floor_tol = 1e-14;
    std::vector<LatticeMeasure::Cell> cells;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const double w = in[idx] / static_cast<double>(N);
        if (w <= floor_tol) continue;
        LatticeMeasure::Cell c{{}, w};
        std::size_t r = idx;
        for (int j = d - 1; j >= 0; --j) {
            c.key[j] = static_cast<std::int64_t>(r / stride[j]) + static_cast<std::int64_t>(k) * lo[j];
            r %= stride[j];
        }
        cells.push_back(c);
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(in);
    fftw_free(spec);
    return LatticeMeasure(d, mu.level(), std::move(cells));
}

}  // namespace fel
