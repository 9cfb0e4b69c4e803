#include "run.hpp"

#include <fel/parallel.hpp>
#include <fel/satcon.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

namespace fel::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Output {
    io::Table table;
    json doc;      ///< JSON form; the table's rows when null
    json summary;  ///< copied into the manifest
};

json subspace_json(const Subspace& V) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < V.frame().cols(); ++c) {
        json v = json::array();
        for (Eigen::Index r = 0; r < V.frame().rows(); ++r) v.push_back(V.frame()(r, c));
        basis.push_back(v);
    }
    return json{{"dim", V.dim()}, {"basis", basis}};
}

json key_json(const LatticeMeasure::Key& k, int d) {
    json a = json::array();
    for (int q = 0; q < d; ++q) a.push_back(k[static_cast<std::size_t>(q)]);
    return a;
}

std::string gcell_text(const GCellId& g) {
    std::string s = std::to_string(g.level) + ":";
    for (std::size_t q = 0; q < g.coords.size(); ++q) s += (q ? " " : "") + std::to_string(g.coords[q]);
    return s;
}

ParamFamily family_of(const RunConfig& cfg) {
    const json& f = cfg.options.at("family");
    if (f.is_string()) return ParamFamily::parse(f.get<std::string>());
    const json spec = io::resolve(f);
    if (spec.is_string()) return ParamFamily::parse(spec.get<std::string>());
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "translation") {
        std::vector<double> ratios = spec.at("ratios").get<std::vector<double>>();
        const int d = spec.at("d").get<int>();
        std::vector<Mat> rots;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (spec.contains("angles")) rots.push_back(rotation2(spec["angles"][i].get<double>()));
            else rots.push_back(Mat::Identity(d, d));
        }
        return ParamFamily::translation(ratios, rots, spec.at("lo").get<std::vector<double>>(),
                                        spec.at("hi").get<std::vector<double>>());
    }
    if (kind == "interpolation") return ParamFamily::interpolation(io::parse_ifs(spec.at("from")), io::parse_ifs(spec.at("to")));
    if (kind == "bernoulli")
        return ParamFamily::bernoulli(spec.at("lo").get<std::vector<double>>(), spec.at("hi").get<std::vector<double>>());
    if (kind == "fat-sierpinski") return ParamFamily::fat_sierpinski(spec.at("lo")[0].get<double>(), spec.at("hi")[0].get<double>());
    throw std::invalid_argument("unknown family kind: " + kind);
}

Output cmd_analyze(const RunConfig& cfg) {
    const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
    Output o;
    o.table.columns = {"maps", "dim", "exact", "sdim", "sdim_measure", "mean_contraction"};
    std::vector<json> row{ifs.size(), ifs.dim(), ifs.exact.has_value(), sdim(ifs, SdimMode::set),
                          sdim(ifs, SdimMode::measure), mean_contraction(ifs)};
    if (cfg.has("n")) {
        o.table.columns.push_back("n");
        o.table.columns.push_back("n_prime");
        row.push_back(cfg.geti("n"));
        row.push_back(n_prime(ifs, cfg.geti("n")));
    }
    o.table.rows.push_back(row);
    return o;
}

Output cmd_delta(const RunConfig& cfg) {
    const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
    const int lo = cfg.has("n") ? cfg.geti("n") : cfg.geti("n_min");
    const int hi = cfg.has("n") ? cfg.geti("n") : cfg.geti("n_max");
    Output o;
    o.table.columns = {"n", "delta", "log2_delta_over_n", "i", "j", "error"};
    for (int n = lo; n <= hi; ++n) {
        std::vector<json> row{n};
        try {
            const auto r = delta_n(ifs, n, cfg.effective_budget());
            row.insert(row.end(), {r.delta, r.delta > 0 ? std::log2(r.delta) / n : -INFINITY, format_word(r.i),
                                   format_word(r.j), ""});
        } catch (const BudgetExceeded&) {
            throw;
        } catch (const std::exception& e) {
            row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr, e.what()});
        }
        o.table.rows.push_back(row);
    }
    return o;
}

Output cmd_overlaps(const RunConfig& cfg) {
    const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
    const auto r = exact_overlaps(ifs, cfg.geti("n_max"), cfg.effective_budget());
    Output o;
    o.table.columns = {"n", "i", "j", "exact"};
    if (r) {
        o.table.rows.push_back({r->n, format_word(r->i), format_word(r->j), r->exact});
        o.doc = json{{"n", r->n}, {"words", json::array({io::word_json(r->i), io::word_json(r->j)})}, {"exact", r->exact}};
    } else {
        o.doc = json{{"n", nullptr}, {"words", json::array()}, {"exact", ifs.exact.has_value()}};
    }
    return o;
}

Output cmd_dim_estimate(const RunConfig& cfg) {
    const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
    const int n = cfg.geti("n");
    const int np = n_prime(ifs, n);
    const int L = cfg.has("L") ? cfg.geti("L") : np + 4;
    Output o;
    o.table.columns = {"n", "n_prime", "L_out", "sdim", "estimate"};
    o.table.rows.push_back({n, np, L, sdim(ifs, SdimMode::measure), dim_estimate(ifs, n, L, cfg.effective_budget())});
    return o;
}

Output cmd_diagnostics(const RunConfig& cfg) {
    const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
    const auto e = entropy_diagnostics(ifs, cfg.geti("n"), cfg.get("q"), cfg.effective_budget());
    Output o;
    o.table.columns = {"n", "q", "n_prime", "q_level", "A", "B", "C"};
    o.table.rows.push_back({cfg.geti("n"), cfg.get("q"), e.n_prime, e.q_level, e.A, e.B, e.C});
    return o;
}

Output cmd_conv_entropy(const RunConfig& cfg) {
    const LatticeMeasure mu = io::parse_measure(cfg.inputs.at(0));
    const int n = cfg.geti("n");
    Output o;
    if (cfg.inputs.size() == 1) {
        const int k = cfg.has("k") ? cfg.geti("k") : 2;
        const LatticeMeasure conv = self_convolve(mu, k);
        const double a = normalized_entropy(mu, n), b = normalized_entropy(conv, n);
        o.table.columns = {"n", "k", "H_mu", "H_conv", "growth"};
        o.table.rows.push_back({n, k, a, b, b - a});
    } else {
        const LatticeMeasure nu = io::parse_measure(cfg.inputs.at(1));
        const double a = normalized_entropy(mu, n), b = normalized_entropy(nu, n);
        const double c = normalized_entropy(convolve(mu, nu), n);
        o.table.columns = {"n", "H_mu", "H_nu", "H_conv", "growth"};
        o.table.rows.push_back({n, a, b, c, c - a});
    }
    return o;
}

Output cmd_kv(const RunConfig& cfg) {
    const LatticeMeasure mu = io::parse_measure(cfg.inputs.at(0));
    const LatticeMeasure nu = io::parse_measure(cfg.inputs.at(1));
    const auto r = kv_check(mu, nu, cfg.geti("k"), cfg.geti("n"), cfg.has("C") ? cfg.get("C") : -1.0);
    Output o;
    o.table.columns = {"k", "n", "lhs", "rhs", "slack", "monotone"};
    o.table.rows.push_back({cfg.geti("k"), cfg.geti("n"), r.lhs, r.rhs, r.slack, r.monotone});
    o.doc = o.table.to_json()[0];
    o.doc["deltas"] = r.deltas;
    return o;
}

json verdict_json(const Verdict& v, int d) {
    json levels = json::array();
    for (std::size_t i = 0; i < v.subspaces.size(); ++i)
        levels.push_back({{"level", i}, {"V", subspace_json(v.subspaces[i])}, {"sat", v.sat_by_level[i]},
                          {"conc", v.conc_by_level[i]}});
    (void)d;
    return json{{"entropy_before", v.entropy_before}, {"entropy_after", v.entropy_after}, {"growth", v.growth},
                {"sat_fraction", v.sat_fraction},     {"conc_fraction", v.conc_fraction}, {"mean_dim", v.mean_dim},
                {"passed", v.passed},                 {"levels", levels}};
}

Output cmd_inverse(const RunConfig& cfg) {
    const LatticeMeasure mu = io::parse_measure(cfg.inputs.at(0));
    const LatticeMeasure nu = io::parse_measure(cfg.inputs.at(1));
    const int n = cfg.geti("n");
    const auto v = inverse_verdict(mu, nu, n, cfg.get("eps"), cfg.geti("m"));
    Output o;
    std::string dims;
    for (const auto& V : v.subspaces) dims += std::to_string(V.dim());
    o.table.columns = {"n", "growth", "sat_fraction", "conc_fraction", "mean_dim", "passed", "dims"};
    o.table.rows.push_back({n, v.growth, v.sat_fraction, v.conc_fraction, v.mean_dim, v.passed, dims});
    o.doc = verdict_json(v, mu.dim());
    o.doc["n"] = n;
    return o;
}

Output cmd_isometry(const RunConfig& cfg) {
    const SimMeasure nu = io::parse_sim_measure(cfg.inputs.at(0));
    const LatticeMeasure mu = io::parse_measure(cfg.inputs.at(1));
    const auto v = isometry_verdict(nu, mu, cfg.geti("k"), cfg.geti("n"), cfg.get("eps"), cfg.geti("m"),
                                    cfg.has("c") ? cfg.get("c") : 0.5);
    Output o;
    o.table.columns = {"g_cell", "mu_cell", "weight", "growth", "sat_fraction", "conc_fraction", "mean_dim", "passed"};
    json pairs = json::array();
    for (const auto& p : v.pairs) {
        const json cell = key_json(p.mu_cell, mu.dim());
        o.table.rows.push_back({gcell_text(p.g_cell), cell.dump(), p.weight, p.verdict.growth, p.verdict.sat_fraction,
                                p.verdict.conc_fraction, p.verdict.mean_dim, p.verdict.passed});
        json pj = verdict_json(p.verdict, mu.dim());
        pj["g_cell"] = gcell_text(p.g_cell);
        pj["mu_cell"] = cell;
        pj["weight"] = p.weight;
        pairs.push_back(pj);
    }
    o.summary = json{{"entropy_before", v.entropy_before}, {"entropy_after", v.entropy_after}, {"growth", v.growth},
                     {"nu_entropy", v.nu_entropy},         {"pass_rate", v.pass_rate},         {"mean_dim", v.mean_dim},
                     {"c_bound", v.c_bound}};
    o.doc = o.summary;
    o.doc["pairs"] = pairs;
    return o;
}

Output cmd_slice(const RunConfig& cfg) {
    const json span = cfg.options.count("span") ? cfg.options.at("span") : json();
    const int p = cfg.geti("p");
    SliceEntropy s;
    if (io::is_lattice_spec(cfg.inputs.at(0))) {
        const LatticeMeasure mu = io::parse_measure(cfg.inputs.at(0));
        s = slice_entropy(mu, io::parse_span(span, mu.dim()), p);
    } else {
        const IFSSystem ifs = io::parse_ifs(cfg.inputs.at(0));
        s = slice_entropy(ifs, io::parse_span(span, ifs.dim()), cfg.geti("n"), p, cfg.effective_budget());
    }
    Output o;
    o.table.columns = {"p", "levels", "proj_avg", "cond_avg", "total"};
    o.table.rows.push_back({p, s.levels, s.proj_avg, s.cond_avg, s.total});
    return o;
}

ScanDiagnostics scan_diagnostics(const RunConfig& cfg) {
    ScanDiagnostics d;
    std::vector<std::string> names{"sdim"};
    if (cfg.options.count("diagnostics")) names = cfg.options.at("diagnostics").get<std::vector<std::string>>();
    d.sdim = false;
    for (const auto& s : names) {
        if (s == "sdim") d.sdim = true;
        else if (s == "dim_estimate") {
            d.dim_estimate_n = cfg.geti("n");
            if (cfg.has("L")) d.dim_estimate_L = cfg.geti("L");
        } else if (s == "delta") d.delta_n = cfg.geti("n");
        else if (s == "diagnostics") {
            d.diagnostics_n = cfg.geti("n");
            d.diagnostics_q = cfg.get("q");
        } else throw std::invalid_argument("unknown diagnostic: " + s);
    }
    return d;
}

Output cmd_scan(const RunConfig& cfg) {
    const ParamFamily F = family_of(cfg);
    const auto counts = cfg.options.at("grid").get<std::vector<int>>();
    const auto grid = grid_points(F.lo(), F.hi(), counts);
    const auto diag = scan_diagnostics(cfg);
    const auto rows = scan(F, grid, diag, cfg.effective_budget());
    Output o;
    for (int k = 0; k < F.param_dim(); ++k) o.table.columns.push_back("t" + std::to_string(k + 1));
    const auto cols = scan_columns(diag);
    o.table.columns.insert(o.table.columns.end(), cols.begin(), cols.end());
    o.table.columns.push_back("error");
    for (const auto& r : rows) {
        std::vector<json> row(r.t.begin(), r.t.end());
        for (const auto& c : cols) {
            auto it = std::find_if(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.first == c; });
            row.push_back(it == r.values.end() ? json() : json(it->second));
        }
        row.push_back(r.error);
        o.table.rows.push_back(row);
    }
    o.summary = json{{"family", F.id()}, {"points", grid.size()}};
    return o;
}

Output cmd_cover(const RunConfig& cfg) {
    const ParamFamily F = family_of(cfg);
    const auto r = exceptional_cover(F, cfg.geti("n"), cfg.get("eps"), cfg.get("grid_step"),
                                     cfg.has("rank") ? cfg.geti("rank") : -1, cfg.effective_budget());
    Output o;
    for (int k = 0; k < F.param_dim(); ++k) o.table.columns.push_back("t" + std::to_string(k + 1));
    o.table.columns.push_back("gap");
    o.table.columns.push_back("hit");
    for (const auto& c : r.rows) {
        std::vector<json> row(c.center.begin(), c.center.end());
        row.push_back(c.gap);
        row.push_back(c.hit);
        o.table.rows.push_back(row);
    }
    o.summary = json{{"family", F.id()},           {"hit_count", r.hit_count}, {"cells", r.cells},
                     {"threshold", r.threshold},   {"bound", r.bound}};
    o.doc = o.summary;
    o.doc["cells_detail"] = o.table.to_json();
    return o;
}

using Handler = Output (*)(const RunConfig&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"analyze-ifs", cmd_analyze},   {"delta", cmd_delta},
        {"overlaps", cmd_overlaps},     {"dim-estimate", cmd_dim_estimate},
        {"diagnostics", cmd_diagnostics}, {"conv-entropy", cmd_conv_entropy},
        {"kv-check", cmd_kv},           {"inverse-verdict", cmd_inverse},
        {"isometry-verdict", cmd_isometry}, {"slice", cmd_slice},
        {"scan", cmd_scan},             {"cover", cmd_cover}};
    return h;
}

struct Requirement {
    std::size_t min_inputs, max_inputs;
    std::vector<std::string> params;
    std::vector<std::string> options;
};

const std::map<std::string, Requirement>& requirements() {
    static const std::map<std::string, Requirement> r{
        {"analyze-ifs", {1, 1, {}, {}}},
        {"delta", {1, 1, {}, {}}},
        {"overlaps", {1, 1, {"n_max"}, {}}},
        {"dim-estimate", {1, 1, {"n"}, {}}},
        {"diagnostics", {1, 1, {"n", "q"}, {}}},
        {"conv-entropy", {1, 2, {"n"}, {}}},
        {"kv-check", {2, 2, {"k", "n"}, {}}},
        {"inverse-verdict", {2, 2, {"n", "eps", "m"}, {}}},
        {"isometry-verdict", {2, 2, {"k", "n", "eps", "m"}, {}}},
        {"slice", {1, 1, {"p"}, {}}},
        {"scan", {0, 0, {}, {"family", "grid"}}},
        {"cover", {0, 0, {"n", "eps", "grid_step"}, {"family"}}}};
    return r;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : handlers()) v.push_back(k);
        return v;
    }();
    return c;
}

std::uint64_t RunConfig::effective_budget() const {
    if (budget > 0) return budget;
    if (const char* env = std::getenv("FEL_BUDGET")) {
        try {
            const auto b = std::stoull(env);
            if (b > 0) return b;
        } catch (const std::exception&) {
        }
    }
    return kDefaultBudget;
}

json RunConfig::to_json() const {
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    json opt = json::object();
    for (const auto& [k, v] : options) opt[k] = v;
    return json{{"command", command}, {"inputs", inputs},   {"params", p},
                {"options", opt},     {"format", format},   {"budget", effective_budget()}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    const json j = json::parse(in);
    RunConfig c;
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("inputs")) {
        if (j["inputs"].is_array())
            for (const auto& x : j["inputs"]) c.inputs.push_back(x);
        else
            c.inputs.push_back(j["inputs"]);
    }
    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items()) {
            if (!v.is_number()) throw std::invalid_argument("param " + k + " must be numeric");
            c.params[k] = v.get<double>();
        }
    if (j.contains("options"))
        for (const auto& [k, v] : j["options"].items()) c.options[k] = v;
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("budget")) c.budget = j["budget"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    return c;
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errs;
    if (cfg.command.empty()) {
        errs.push_back("missing command");
        return errs;
    }
    const auto it = requirements().find(cfg.command);
    if (it == requirements().end()) {
        errs.push_back("unknown command: " + cfg.command);
        return errs;
    }
    const auto& req = it->second;
    if (cfg.inputs.size() < req.min_inputs || cfg.inputs.size() > req.max_inputs) {
        errs.push_back(req.min_inputs == req.max_inputs
                           ? "expected " + std::to_string(req.min_inputs) + " input(s)"
                           : "expected " + std::to_string(req.min_inputs) + " to " + std::to_string(req.max_inputs) +
                                 " inputs");
    }
    for (const auto& p : req.params)
        if (!cfg.has(p)) errs.push_back("missing parameter: " + p);
    for (const auto& o : req.options)
        if (!cfg.options.count(o)) errs.push_back("missing option: " + o);
    if (cfg.command == "delta" && !cfg.has("n") && !(cfg.has("n_min") && cfg.has("n_max")))
        errs.push_back("missing parameter: n (or n_min and n_max)");
    if (cfg.command == "slice" && !cfg.inputs.empty() && !cfg.has("n")) {
        bool lattice = false;
        try {
            lattice = io::is_lattice_spec(cfg.inputs[0]);
        } catch (const std::exception&) {
        }
        if (!lattice) errs.push_back("missing parameter: n");
    }
    if (cfg.command == "scan" && cfg.options.count("diagnostics")) {
        const auto& d = cfg.options.at("diagnostics");
        for (const auto& s : d) {
            const auto name = s.is_string() ? s.get<std::string>() : s.dump();
            if (name != "sdim" && !cfg.has("n")) errs.push_back("missing parameter: n (needed by " + name + ")");
            if (name == "diagnostics" && !cfg.has("q")) errs.push_back("missing parameter: q");
        }
    }

    const auto positive_int = [&](const char* k) {
        if (cfg.has(k) && (cfg.get(k) < 1 || cfg.get(k) != std::floor(cfg.get(k))))
            errs.push_back(std::string(k) + " must be a positive integer");
    };
    for (const char* k : {"n", "m", "n_min", "n_max", "p", "L"}) positive_int(k);
    if (cfg.has("k") && (cfg.get("k") < 0 || cfg.get("k") != std::floor(cfg.get("k"))))
        errs.push_back("k must be a non-negative integer");
    if (cfg.has("q") && !(cfg.get("q") > 1.0)) errs.push_back("q must exceed 1");
    if (cfg.has("eps") && !(cfg.get("eps") > 0.0 && cfg.get("eps") < 1.0)) errs.push_back("eps must lie in (0,1)");
    if (cfg.has("grid_step") && !(cfg.get("grid_step") > 0.0)) errs.push_back("grid_step must be positive");
    if (cfg.has("n_min") && cfg.has("n_max") && cfg.get("n_min") > cfg.get("n_max"))
        errs.push_back("n_min must not exceed n_max");
    if (cfg.has("m") && cfg.has("n") && cfg.get("m") > cfg.get("n")) errs.push_back("m must not exceed n");
    if (cfg.has("n") && cfg.has("L") && cfg.get("n") > cfg.get("L") && cfg.command != "dim-estimate" &&
        cfg.command != "scan")
        errs.push_back("n must not exceed L");
    if (cfg.format != "csv" && cfg.format != "json") errs.push_back("format must be csv or json");
    if (cfg.threads < 1) errs.push_back("threads must be positive");
    if (cfg.effective_budget() == 0) errs.push_back("budget must be positive");
    return errs;
}

RunResult run(const RunConfig& cfg) {
    RunResult res;
    const auto errs = validate(cfg);
    if (!errs.empty()) {
        res.status = kExitValidation;
        for (const auto& e : errs) res.message += e + "\n";
        return res;
    }
    set_num_threads(cfg.threads);
    Output o;
    try {
        o = handlers().at(cfg.command)(cfg);
    } catch (const BudgetExceeded& e) {
        res.status = kExitBudget;
        res.message = std::string(e.what()) + "\n";
        return res;
    } catch (const std::exception& e) {
        res.status = kExitValidation;
        res.message = std::string(e.what()) + "\n";
        return res;
    }
    if (cfg.format == "json") {
        json doc = o.doc.is_null() ? json{{"rows", o.table.to_json()}} : o.doc;
        if (o.doc.is_null() && !o.summary.is_null()) doc["summary"] = o.summary;
        res.body = doc.dump(2) + "\n";
    } else {
        res.body = o.table.csv();
    }
    res.manifest = json{{"tool", "fel"}, {"version", kVersion}, {"config", cfg.to_json()}};
    if (!o.summary.is_null()) res.manifest["summary"] = o.summary;
    return res;
}

int execute(const RunConfig& cfg) {
    const RunResult r = run(cfg);
    if (r.status != kExitOk) {
        std::cerr << r.message;
        return r.status;
    }
    if (cfg.out.empty()) {
        std::cout << r.body;
        return kExitOk;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    std::ofstream man(cfg.out + ".manifest.json", std::ios::binary);
    if (!out || !man) {
        std::cerr << "cannot write " << cfg.out << "\n";
        return kExitValidation;
    }
    out << r.body;
    man << r.manifest.dump(2) << "\n";
    return kExitOk;
}

}  // namespace fel::cli
