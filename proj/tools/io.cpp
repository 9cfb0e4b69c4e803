#include "io.hpp"

#include <fel/exact.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fel::io {

namespace {

double num(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    throw std::invalid_argument("expected a number, got " + v.dump());
}

Rational rat(const json& v) { return parse_rational(v.get<std::string>()); }

int int_field(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("measure spec needs '") + key + "'");
    return j.at(key).get<int>();
}

Vec vec(const json& v) {
    Vec x(static_cast<Eigen::Index>(v.size()));
    for (std::size_t q = 0; q < v.size(); ++q) x(static_cast<Eigen::Index>(q)) = num(v[q]);
    return x;
}

Mat rows_matrix(const json& v) {
    const auto r = static_cast<Eigen::Index>(v.size());
    const auto c = r ? static_cast<Eigen::Index>(v[0].size()) : 0;
    Mat M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(v[static_cast<std::size_t>(i)].size()) != c)
            throw std::invalid_argument("ragged matrix");
        for (Eigen::Index k = 0; k < c; ++k) M(i, k) = num(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
    return M;
}

bool all_strings(const json& v) {
    if (v.is_string()) return true;
    if (v.is_array()) {
        for (const auto& e : v)
            if (!all_strings(e)) return false;
        return true;
    }
    return false;
}

bool exact_map(const json& m) {
    return m.contains("r") && all_strings(m["r"]) && m.contains("a") && all_strings(m["a"]) && !m.contains("angle") &&
           (!m.contains("U") || all_strings(m["U"]));
}

Similitude double_map(const json& m) {
    if (!m.contains("a")) throw std::invalid_argument("map needs a translation 'a'");
    const Vec a = vec(m["a"]);
    const auto d = a.size();
    Mat U = Mat::Identity(d, d);
    if (m.contains("U")) U = rows_matrix(m["U"]);
    if (m.contains("angle")) {
        if (d != 2) throw std::invalid_argument("'angle' needs d = 2");
        U = rotation2(num(m["angle"]));
    }
    if (m.contains("t")) return Similitude(num(m["t"]), U, a);
    if (!m.contains("r")) throw std::invalid_argument("map needs 'r' or 't'");
    return Similitude::from_ratio(num(m["r"]), U, a);
}

ExactSimilitude rational_map(const json& m) {
    ExactSimilitude g;
    for (const auto& x : m["a"]) g.a.push_back(rat(x));
    g.d = static_cast<int>(g.a.size());
    g.r = rat(m["r"]);
    if (m.contains("U")) {
        for (const auto& row : m["U"])
            for (const auto& x : row) g.U.push_back(rat(x));
        if (g.U.size() != static_cast<std::size_t>(g.d * g.d)) throw std::invalid_argument("U has wrong shape");
    } else {
        g.U = ExactSimilitude::identity(g.d).U;
    }
    return g;
}

}  // namespace

json resolve(const json& spec) {
    if (!spec.is_string()) return spec;
    const auto s = spec.get<std::string>();
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) return json::parse(s);
    if (std::filesystem::is_regular_file(s)) {
        std::ifstream in(s);
        return json::parse(in);
    }
    return spec;
}

IFSSystem parse_ifs(const json& raw) {
    const json spec = resolve(raw);
    if (spec.is_string()) return named_system(spec.get<std::string>());
    if (!spec.contains("maps") || !spec["maps"].is_array() || spec["maps"].empty())
        throw std::invalid_argument("IFS spec needs a non-empty 'maps' array");
    std::vector<double> probs;
    if (spec.contains("probs"))
        for (const auto& p : spec["probs"]) probs.push_back(num(p));
    bool exact = true;
    for (const auto& m : spec["maps"]) exact = exact && exact_map(m);
    IFSSystem s;
    if (exact) {
        std::vector<ExactSimilitude> maps;
        for (const auto& m : spec["maps"]) maps.push_back(rational_map(m));
        s = IFSSystem::from_exact(std::move(maps), probs);
    } else {
        std::vector<Similitude> maps;
        for (const auto& m : spec["maps"]) maps.push_back(double_map(m));
        s = IFSSystem::uniform(std::move(maps));
        if (!probs.empty()) s.probs = probs;
    }
    s.validate();
    return s;
}

bool is_lattice_spec(const json& raw) {
    const json spec = resolve(raw);
    return spec.is_object() && spec.contains("type");
}

LatticeMeasure parse_measure(const json& raw) {
    const json spec = resolve(raw);
    if (!spec.is_object() || !spec.contains("type")) throw std::invalid_argument("measure spec needs a 'type'");
    const auto type = spec["type"].get<std::string>();
    if (type == "uniform") return uniform_cube(int_field(spec, "d"), int_field(spec, "L"));
    if (type == "ap-cascade")
        return ap_cascade(spec.at("lengths").get<std::vector<int>>(), spec.at("gaps").get<std::vector<int>>(),
                          int_field(spec, "L"));

    const int L = int_field(spec, "L");
    if (type == "points" || type == "segment" || type == "circle") {
        std::vector<Vec> pts;
        std::vector<double> w;
        if (type == "points") {
            for (const auto& p : spec.at("points")) pts.push_back(vec(p));
            if (spec.contains("weights"))
                for (const auto& x : spec["weights"]) w.push_back(num(x));
        } else {
            const int count = int_field(spec, "count");
            if (count < 1) throw std::invalid_argument("count must be positive");
            for (int j = 0; j < count; ++j) {
                if (type == "segment") {
                    const Vec a = vec(spec.at("from")), b = vec(spec.at("to"));
                    pts.push_back(a + (b - a) * (static_cast<double>(j) / count));
                } else {
                    const Vec c = spec.contains("center") ? vec(spec["center"]) : Vec::Constant(2, 0.5);
                    const double r = spec.contains("radius") ? num(spec["radius"]) : 0.25;
                    const double th = 2.0 * std::numbers::pi * j / count;
                    pts.push_back(c + r * Vec((Vec(2) << std::cos(th), std::sin(th)).finished()));
                }
            }
        }
        if (w.empty()) w.assign(pts.size(), 1.0);
        return make_lattice(pts, w, L);
    }

    const int d = int_field(spec, "d");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("measure dimension out of range");
    std::vector<LatticeMeasure::Cell> cells;
    if (type == "dirac") {
        LatticeMeasure::Cell c;
        c.key.fill(0);
        if (spec.contains("key"))
            for (std::size_t q = 0; q < spec["key"].size(); ++q) c.key[q] = spec["key"][q].get<std::int64_t>();
        c.weight = 1.0;
        cells.push_back(c);
    } else if (type == "cells") {
        for (const auto& e : spec.at("cells")) {
            if (e.size() != static_cast<std::size_t>(d) + 1) throw std::invalid_argument("cell entries are [k_1..k_d, w]");
            LatticeMeasure::Cell c;
            c.key.fill(0);
            for (int q = 0; q < d; ++q) c.key[static_cast<std::size_t>(q)] = e[static_cast<std::size_t>(q)].get<std::int64_t>();
            c.weight = num(e[static_cast<std::size_t>(d)]);
            cells.push_back(c);
        }
    } else if (type == "random") {
        std::mt19937_64 rng(spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : 1);
        const int atoms = int_field(spec, "atoms");
        const int span = spec.contains("support_level") ? spec["support_level"].get<int>() : L;
        if (span > L || span < 0) throw std::invalid_argument("support_level must lie in [0, L]");
        std::uniform_int_distribution<std::int64_t> coord(0, (std::int64_t{1} << span) - 1);
        std::uniform_real_distribution<double> weight(0.0, 1.0);
        for (int a = 0; a < atoms; ++a) {
            LatticeMeasure::Cell c;
            c.key.fill(0);
            for (int q = 0; q < d; ++q) c.key[static_cast<std::size_t>(q)] = coord(rng) << (L - span);
            c.weight = weight(rng) + 1e-3;
            cells.push_back(c);
        }
    } else {
        throw std::invalid_argument("unknown measure type: " + type);
    }
    return LatticeMeasure(d, L, std::move(cells));
}

SimMeasure parse_sim_measure(const json& raw) {
    const json spec = resolve(raw);
    if (!spec.is_object() || !spec.contains("type")) throw std::invalid_argument("G-measure spec needs a 'type'");
    const auto type = spec["type"].get<std::string>();
    SimMeasure nu;
    if (type == "identity") {
        nu.atoms.push_back({Similitude::identity(int_field(spec, "d")), 1.0});
    } else if (type == "rotations") {
        const int count = int_field(spec, "count");
        if (count < 1) throw std::invalid_argument("count must be positive");
        const Vec c = spec.contains("center") ? vec(spec["center"]) : Vec::Zero(2);
        for (int j = 0; j < count; ++j) {
            const Mat R = rotation2(2.0 * std::numbers::pi * j / count);
            nu.atoms.push_back({Similitude(0.0, R, c - R * c), 1.0});
        }
    } else if (type == "atoms") {
        for (const auto& a : spec.at("atoms")) {
            json m = a;
            if (!m.contains("t") && !m.contains("r")) m["t"] = 0.0;
            nu.atoms.push_back({double_map(m), a.contains("w") ? num(a["w"]) : 1.0});
        }
    } else if (type == "ifs-level") {
        nu = nu_n(parse_ifs(spec.at("system")), int_field(spec, "n"));
    } else {
        throw std::invalid_argument("unknown G-measure type: " + type);
    }
    nu.normalize();
    return nu;
}

Subspace parse_span(const json& raw, int d) {
    json spec = raw;
    if (spec.is_string()) {
        const auto s = spec.get<std::string>();
        spec = json::array();
        std::stringstream rows(s);
        std::string row;
        while (std::getline(rows, row, ';')) {
            if (row.find_first_not_of(" ") == std::string::npos) continue;
            json r = json::array();
            std::stringstream cols(row);
            std::string x;
            while (std::getline(cols, x, ',')) r.push_back(std::stod(x));
            spec.push_back(r);
        }
    }
    if (spec.is_null() || spec.empty()) return Subspace::zero(d);
    const Mat rows = rows_matrix(spec);
    if (rows.cols() != d) throw std::invalid_argument("span vectors have the wrong dimension");
    return Subspace::span(Mat(rows.transpose()));
}

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

std::string cell_text(const json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return number(v.get<double>());
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

std::string Table::csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + cell_text(columns[c]);
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + cell_text(r[c]);
        out += "\n";
    }
    return out;
}

json Table::to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
        json o = json::object();
        for (std::size_t c = 0; c < columns.size() && c < r.size(); ++c) o[columns[c]] = r[c];
        arr.push_back(o);
    }
    return arr;
}

json word_json(const Word& w) {
    json a = json::array();
    for (int x : w) a.push_back(x + 1);
    return a;
}

}  // namespace fel::io
