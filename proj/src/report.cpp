#include "klab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "klab/errors.hpp"
#include "klab/field_io.hpp"
#include "klab/pipeline.hpp"

namespace klab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace

nlohmann::json make_report(const std::string& dir) {
    if (!std::filesystem::exists(dir + "/manifest.json"))
        throw ConfigError("missing manifest in " + dir);
    const nlohmann::json manifest = read_json(dir + "/manifest.json");
    const nlohmann::json classification = read_json(dir + "/classification.json");
    const nlohmann::json kw = read_json(dir + "/kw_report.json");

    // the plot table comes from the manifest entries (inf_T lives only there)
    std::string csv = "epsilon,mass,cohomological_mass,sup_u,inf_T\n";
    nlohmann::json table = nlohmann::json::array();
    for (const auto& e : manifest.at("entries")) {
        csv += fmt(e.at("epsilon").get<double>()) + ',' +
               fmt(e.at("mass").get<double>()) + ',' +
               fmt(e.at("cohomological_mass").get<double>()) + ',' +
               fmt(e.at("sup_u").get<double>()) + ',' +
               fmt(e.at("inf_t").get<double>()) + '\n';
        table.push_back(e);
    }
    {
        std::ofstream out(dir + "/plot.csv", std::ios::binary);
        out << csv;
    }

    // sweep.csv carries the trace margins; take the minimum across the sweep
    double min_trace_margin = std::numeric_limits<double>::infinity();
    {
        std::ifstream in(dir + "/sweep.csv");
        if (!in) throw ConfigError("missing " + dir + "/sweep.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string cell;
            for (int col = 0; std::getline(ss, cell, ','); ++col)
                if (col == 7) min_trace_margin = std::min(min_trace_margin,
                                                          std::stod(cell));
        }
    }

    // independent recomputation of the final mass from the dumped potential
    const ScenarioConfig cfg = scenario_from_json(manifest.at("config"));
    ModelObjects model = build_model(cfg);
    RealField u_last = load_real_field(dir, "u_last");
    const double recomputed = mass_integral(u_last, model.g);

    nlohmann::json j;
    j["config_hash"] = manifest.at("config_hash");
    j["classification"] = classification;
    j["kw"] = kw;
    j["entries"] = table;
    j["min_trace_margin"] = min_trace_margin;
    j["recomputed_last_mass"] = recomputed;
    j["last_mass"] = manifest.at("entries").back().at("mass");
    {
        std::ofstream out(dir + "/summary.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }
    return j;
}

}  // namespace klab
