#include "fel/sim_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fel {

double SimMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

void SimMeasure::normalize() {
    const double s = total_mass();
    if (!(s > 0.0)) throw std::invalid_argument("sim measure: no mass");
    for (auto& a : atoms) a.weight /= s;
}

bool SimMeasure::all_isometries(double tol) const {
    return std::all_of(atoms.begin(), atoms.end(), [tol](const Atom& a) { return a.g.is_isometry(tol); });
}

namespace {

using Key = std::vector<std::int64_t>;

double entropy_of(const std::map<Key, double>& pooled) {
    double total = 0.0;
    for (const auto& [k, w] : pooled) total += w;
    double H = 0.0;
    for (const auto& [k, w] : pooled) {
        const double q = w / total;
        if (q > 0.0) H -= q * std::log2(q);
    }
    return H;
}

}  // namespace

double translation_entropy(const SimMeasure& nu, int n) {
    std::map<Key, double> pooled;
    for (const auto& a : nu.atoms) pooled[translation_cell(a.g, n).coords] += a.weight;
    return entropy_of(pooled);
}

double entropy_on_G(const SimMeasure& nu, int n, bool conditional_on_translation, int n_cond) {
    if (n < 0) throw std::invalid_argument("entropy_on_G: level must be nonnegative");
    if (nu.atoms.empty()) return 0.0;
    if (!conditional_on_translation) {
        std::map<Key, double> pooled;
        for (const auto& a : nu.atoms) pooled[full_cell(a.g, n).coords] += a.weight;
        return entropy_of(pooled);
    }
    if (n_cond < 0) n_cond = n;
    // H(D_n^G | E_n'^G) = H(D_n^G v E_n'^G) - H(E_n'^G)
    std::map<Key, double> joint;
    for (const auto& a : nu.atoms) {
        Key k = full_cell(a.g, n).coords;
        const auto t = translation_cell(a.g, n_cond).coords;
        k.insert(k.end(), t.begin(), t.end());
        joint[k] += a.weight;
    }
    return entropy_of(joint) - translation_entropy(nu, n_cond);
}

LatticeMeasure group_action(const SimMeasure& nu, const LatticeMeasure& mu, int L_out) {
    if (nu.atoms.empty()) throw std::invalid_argument("group_action: empty measure on G");
    const int d = mu.dim();
    std::vector<LatticeMeasure::Cell> cells;
    cells.reserve(nu.atoms.size() * mu.size());
    std::vector<Vec> centers;
    centers.reserve(mu.size());
    for (const auto& c : mu.cells()) centers.push_back(cell_center<std::int64_t>(c.key, d, mu.level()));
    for (const auto& a : nu.atoms) {
        if (a.g.dim() != d) throw std::invalid_argument("group_action: dimension mismatch");
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const Vec y = a.g.apply(centers[i]);
            LatticeMeasure::Cell o{{}, a.weight * mu.cells()[i].weight};
            for (int j = 0; j < d; ++j) o.key[static_cast<std::size_t>(j)] = snap_coordinate(y(j), L_out);
            cells.push_back(o);
        }
    }
    return LatticeMeasure(d, L_out, std::move(cells));
}

LatticeMeasure orbit(const SimMeasure& nu, const Vec& x, int L_out) {
    std::vector<Vec> pts;
    std::vector<double> w;
    pts.reserve(nu.atoms.size());
    for (const auto& a : nu.atoms) {
        pts.push_back(a.g.apply(x));
        w.push_back(a.weight);
    }
    return make_lattice(pts, w, L_out);
}

}  // namespace fel
