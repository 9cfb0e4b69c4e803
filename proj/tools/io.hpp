#pragma once

#include <fel/ifs.hpp>
#include <fel/lattice.hpp>
#include <fel/param_scan.hpp>
#include <fel/sim_measure.hpp>
#include <fel/subspace.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace fel::io {

using json = nlohmann::ordered_json;

/// A string names a file when one exists at that path; otherwise it is a
/// registered system or an inline JSON document.
json resolve(const json& spec);

/// {"maps": [{"r": "1/3", "a": ["0"]}, ...], "probs": [...]}. Maps may give "t"
/// instead of "r", and "U" (rows) or "angle" (d = 2); identity otherwise. When every
/// r, U and a entry is a string the system is rational and overlaps are exact.
IFSSystem parse_ifs(const json& spec);

/// Lattice measures by "type": cells, uniform, dirac, points, ap-cascade, random, segment, circle.
LatticeMeasure parse_measure(const json& spec);

/// Measures on G by "type": atoms, rotations, identity, ifs-level.
SimMeasure parse_sim_measure(const json& spec);

/// Rows of spanning vectors, e.g. [[1,0]] or "1,0;0,1". Empty means {0}.
Subspace parse_span(const json& spec, int d);

bool is_lattice_spec(const json& spec);

/// Fixed-format number text, shortest form that round-trips.
std::string number(double x);

/// Table with typed cells; CSV quoting follows RFC 4180.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    std::string csv() const;
    json to_json() const;
};

json word_json(const Word& w);

}  // namespace fel::io
