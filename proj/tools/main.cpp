#include "run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    using fel::cli::json;
    CLI::App app{"fel: entropy, overlap and inverse-theorem diagnostics for self-similar systems"};
    app.set_version_flag("--version", "0.1.0");

    std::string positional, command, config, out, format, family, span, grid, diagnostics;
    std::vector<std::string> inputs;
    int threads = 0;
    std::uint64_t budget = 0;
    app.add_option("command_pos", positional, "command (same as --command)");
    app.add_option("--command", command, "analyze-ifs, delta, overlaps, dim-estimate, diagnostics, conv-entropy, "
                                         "kv-check, inverse-verdict, isometry-verdict, slice, scan, cover");
    app.add_option("--config", config, "JSON run file; flags override it")->check(CLI::ExistingFile);
    app.add_option("-i,--input", inputs, "named system, file path or inline JSON; repeatable");
    app.add_option("-o,--out", out, "output path (stdout when absent)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--threads", threads, "worker count");
    app.add_option("--budget", budget, "maximum number of compositions");
    app.add_option("--family", family, "parameter family, e.g. bernoulli[0.5,0.7]x[0.5,0.7]");
    app.add_option("--span", span, "subspace rows, e.g. \"1,0\"");
    app.add_option("--grid", grid, "points per axis, e.g. 8,8");
    app.add_option("--diagnostics", diagnostics, "sdim,dim_estimate,delta,diagnostics");

    const std::vector<std::pair<std::string, std::string>> numeric{
        {"n", "level"}, {"m", "scale"}, {"q", "refinement ratio"}, {"eps", "epsilon"}, {"sigma", "sigma"},
        {"L", "lattice level"}, {"k", "component level or convolution power"}, {"n-min", "first level"},
        {"n-max", "last level"}, {"p", "slice scale"}, {"c", "dimension constant"}, {"C", "KV constant"},
        {"grid-step", "cover cell side"}, {"rank", "assumed Jacobian rank"}};
    std::map<std::string, double> values;
    for (const auto& [name, help] : numeric) {
        auto key = name;
        std::replace(key.begin(), key.end(), '-', '_');
        app.add_option_function<double>("--" + name, [&values, key](double v) { values[key] = v; }, help);
    }
    CLI11_PARSE(app, argc, argv);

    fel::cli::RunConfig cfg;
    try {
        if (!config.empty()) cfg = fel::cli::load_config(config);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return fel::cli::kExitValidation;
    }
    if (!positional.empty()) cfg.command = positional;
    if (!command.empty()) cfg.command = command;
    if (!inputs.empty()) {
        cfg.inputs.clear();
        for (const auto& s : inputs) cfg.inputs.emplace_back(s);
    }
    for (const auto& [k, v] : values) cfg.params[k] = v;
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = format;
    if (threads) cfg.threads = threads;
    if (budget) cfg.budget = budget;
    if (!family.empty()) cfg.options["family"] = family;
    if (!span.empty()) cfg.options["span"] = span;
    const auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string x; std::getline(ss, x, ',');) parts.push_back(x);
        return parts;
    };
    try {
        if (!grid.empty()) {
            json g = json::array();
            for (const auto& x : split(grid)) g.push_back(std::stoi(x));
            cfg.options["grid"] = g;
        }
    } catch (const std::exception&) {
        std::cerr << "grid must be a comma-separated list of integers\n";
        return fel::cli::kExitValidation;
    }
    if (!diagnostics.empty()) cfg.options["diagnostics"] = split(diagnostics);
    return fel::cli::execute(cfg);
}
