#pragma once

#include "fel/exact.hpp"
#include "fel/lattice.hpp"
#include "fel/sim_measure.hpp"
#include "fel/subspace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fel {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Contracting similitudes with a probability vector. When `exact` is present it
/// holds the same maps with rational data and enables exact overlap detection.
struct IFSSystem {
    std::vector<Similitude> maps;
    std::vector<double> probs;
    std::optional<std::vector<ExactSimilitude>> exact;

    int dim() const { return maps.empty() ? 0 : maps.front().dim(); }
    std::size_t size() const { return maps.size(); }
    /// Throws std::invalid_argument on a broken invariant.
    void validate() const;

    static IFSSystem uniform(std::vector<Similitude> maps);
    static IFSSystem from_exact(std::vector<ExactSimilitude> maps, std::vector<double> probs = {});
};

/// Alphabet indices, 0-based. Printed 1-based.
using Word = std::vector<int>;

std::string format_word(const Word& w);

enum class SdimMode { set, measure };

double sdim(const IFSSystem& ifs, SdimMode mode = SdimMode::set);

/// |Lambda|^n, throwing BudgetExceeded when above budget.
std::uint64_t composition_count(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

/// Word with the given lexicographic index among Lambda^n.
Word word_at(std::uint64_t index, int n, std::size_t alphabet);

struct Composition {
    Word word;
    Similitude g;
    double weight;
};

/// All level-n compositions phi_{i_1} o ... o phi_{i_n}, in lexicographic word order.
struct CompositionTable {
    int n = 0;
    int d = 0;
    std::size_t alphabet = 0;
    std::vector<double> t;       ///< per word
    std::vector<double> U;       ///< d*d per word, row-major
    std::vector<double> a;       ///< d per word
    std::vector<double> weight;  ///< p_word

    std::size_t size() const { return weight.size(); }
    Similitude map(std::size_t i) const;
};

CompositionTable enumerate(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

/// Streams compositions depth-first without storing them.
void for_each_composition(const IFSSystem& ifs, int n, const std::function<void(const Composition&)>& f,
                          std::uint64_t budget = kDefaultBudget);

std::vector<Composition> compositions(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

/// nu^(n); equal maps are merged when the system carries exact data.
SimMeasure nu_n(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

struct DeltaResult {
    double delta = 0.0;
    Word i, j;  ///< i < j lexicographically
};

/// min over distinct words of sim_distance, with the lexicographically least
/// pair among minimizers. Uses a spatial hash on (t, a).
DeltaResult delta_n(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

/// Reference O(N^2) version, for tests.
DeltaResult delta_n_bruteforce(const IFSSystem& ifs, int n, std::uint64_t budget = kDefaultBudget);

struct Overlap {
    int n = 0;
    Word i, j;
    bool exact = true;  ///< false: numerically coincident within 1e-12
};

std::optional<Overlap> exact_overlaps(const IFSSystem& ifs, int n_max, std::uint64_t budget = kDefaultBudget);

/// r = prod r_i^{p_i}.
double mean_contraction(const IFSSystem& ifs);

/// floor(n log2(1/r)), so that 2^{-n'} ~ r^n.
int n_prime(const IFSSystem& ifs, int n);

Vec fixed_point(const Similitude& g);

/// sum_word p_word delta_{phi_word(x)}; x defaults to the fixed point of phi_1.
/// With unit_cube the atoms are first moved into [0,1)^d by x -> (x - lo) / extent.
LatticeMeasure nu_tilde(const IFSSystem& ifs, int n, int L_out, std::optional<Vec> x = std::nullopt,
                        std::uint64_t budget = kDefaultBudget, bool unit_cube = false);

struct EntropyDiagnostics {
    int n_prime = 0;
    int q_level = 0;  ///< ceil(q n')
    double A = 0.0;   ///< H(nu^(n), E_{n'}^G) / n'
    double B = 0.0;   ///< H(nu^(n), D_{qn'}^G | E_{n'}^G) / n'
    double C = 0.0;   ///< H(nu~^(n), D_{n'}) / n'
};

EntropyDiagnostics entropy_diagnostics(const IFSSystem& ifs, int n, double q, std::uint64_t budget = kDefaultBudget);

/// H(nu~^(n), D_{n'}) / n' with nu~ moved into the unit cube and snapped at L_out (default n' + 4).
double dim_estimate(const IFSSystem& ifs, int n, int L_out = -1, std::uint64_t budget = kDefaultBudget);

struct SliceEntropy {
    double proj_avg = 0.0;
    double cond_avg = 0.0;
    double total = 0.0;
    int levels = 0;
};

/// Averages over components of (1/p) H(mu^{x,i}, pi^{-1} D_p) and of the
/// conditional (1/p) H(mu^{x,i}, D_p | pi^{-1} D_p), pi the projection to V^perp,
/// mu = nu~^(n) at level n'.
SliceEntropy slice_entropy(const IFSSystem& ifs, const Subspace& V, int n, int p_scale,
                           std::uint64_t budget = kDefaultBudget);

/// Same averages for a given lattice measure, levels 0..L - p.
SliceEntropy slice_entropy(const LatticeMeasure& mu, const Subspace& V, int p_scale);

// --- named systems ---

IFSSystem cantor3();
/// Root in (1,2) of t^3 - t^2 - 2.
double garsia_lambda();
IFSSystem garsia();
/// (x, y) -> (psi x, phi y), psi in {phi_-^3, phi_+^3}, phi in the eight threefold compositions.
IFSSystem garsia_product();
/// x -> lambda R x + a_i, R rotation by 2 pi / 3, with the same attractor as the
/// unrotated gasket family.
IFSSystem fat_sierpinski(double lambda);
/// Real root of x^3 - x^2 + x - 1/2.
double fat_sierpinski_threshold();
/// {beta x, gamma x + 1}.
IFSSystem bernoulli(double beta, double gamma, std::optional<std::vector<double>> probs = std::nullopt);

/// Parses "cantor3", "garsia", "garsia-product", "fat-sierpinski(0.6)", "bernoulli(0.5,0.6)".
IFSSystem named_system(const std::string& spec);

/// Uniform measure on the cascade sum_i j_i 2^{-g_i}, 0 <= j_i < n_i, on [0,1) at level L.
LatticeMeasure ap_cascade(const std::vector<int>& lengths, const std::vector<int>& gap_log2, int L);

}  // namespace fel
