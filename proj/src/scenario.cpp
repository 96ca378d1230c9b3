#include "klab/scenario.hpp"

#include <cstdio>
#include <fstream>

#include "klab/errors.hpp"
#include "klab/sweep.hpp"

namespace klab {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

BackgroundSpec background_from_json(const nlohmann::json& j) {
    check_keys(j, {"h00", "h11", "h01"}, "background");
    BackgroundSpec b;
    b.h00 = j.value("h00", 1.0);
    b.h11 = j.value("h11", 1.0);
    if (j.contains("h01")) {
        const auto& p = j.at("h01");
        if (!p.is_array() || p.size() != 2)
            throw ConfigError("background h01 must be [re, im]");
        b.h01_re = p[0].get<double>();
        b.h01_im = p[1].get<double>();
    }
    if (!(b.h00 > 0) || !(b.h11 > 0))
        throw ConfigError("background diagonal must be positive");
    return b;
}

nlohmann::json background_to_json(const BackgroundSpec& b) {
    nlohmann::json j;
    j["h00"] = b.h00;
    j["h11"] = b.h11;
    j["h01"] = {b.h01_re, b.h01_im};
    return j;
}

ModelSpec model_from_json(const nlohmann::json& j, bool is_factor) {
    check_keys(j, {"type", "n", "background", "f", "phi", "factors"}, "model");
    ModelSpec m;
    m.type = j.value("type", std::string("flat_torus"));
    if (m.type == "flat_torus" || m.type == "potential_metric") {
        m.n = j.value("n", is_factor ? 1 : 1);
    } else if (m.type == "conformal_torus") {
        m.n = 1;
        if (j.contains("n") && j.at("n").get<int>() != 1)
            throw ConfigError("conformal_torus requires n = 1");
    } else if (m.type == "product") {
        m.n = 2;
        if (is_factor) throw ConfigError("product factors must be n = 1 models");
    } else {
        throw ConfigError("unknown model type '" + m.type + "'");
    }
    if (m.n != 1 && m.n != 2) throw ConfigError("model n must be 1 or 2");
    if (j.contains("background"))
        m.background = background_from_json(j.at("background"));
    if (j.contains("f")) {
        if (m.type != "conformal_torus")
            throw ConfigError("model field 'f' only applies to conformal_torus");
        m.f = trigpoly_from_json(j.at("f"));
    }
    if (j.contains("phi")) {
        if (m.type != "potential_metric")
            throw ConfigError("model field 'phi' only applies to potential_metric");
        m.phi = trigpoly_from_json(j.at("phi"));
    }
    if (m.type == "product") {
        if (!j.contains("factors") || !j.at("factors").is_array() ||
            j.at("factors").size() != 2)
            throw ConfigError("product model needs exactly two factors");
        for (const auto& jf : j.at("factors"))
            m.factors.push_back(model_from_json(jf, true));
        for (const auto& f : m.factors)
            if (f.n != 1) throw ConfigError("product factors must be n = 1 models");
    } else if (j.contains("factors")) {
        throw ConfigError("model field 'factors' only applies to product");
    }
    return m;
}

nlohmann::json model_to_json(const ModelSpec& m) {
    nlohmann::json j;
    j["type"] = m.type;
    if (m.type == "product") {
        j["factors"] = nlohmann::json::array();
        for (const auto& f : m.factors) j["factors"].push_back(model_to_json(f));
    } else {
        j["n"] = m.n;
        j["background"] = background_to_json(m.background);
        if (m.type == "conformal_torus") j["f"] = trigpoly_to_json(m.f);
        if (m.type == "potential_metric") j["phi"] = trigpoly_to_json(m.phi);
    }
    return j;
}

TwistSpec twist_from_json(const nlohmann::json& j) {
    check_keys(j, {"type", "lambda", "psi"}, "twist");
    TwistSpec t;
    t.type = j.value("type", std::string("geometric"));
    if (t.type == "geometric") {
        if (j.contains("lambda") || j.contains("psi"))
            throw ConfigError("geometric twist takes no parameters");
    } else if (t.type == "synthetic") {
        t.lambda = j.value("lambda", 0.0);
        if (j.contains("psi")) t.psi = trigpoly_from_json(j.at("psi"));
    } else {
        throw ConfigError("unknown twist type '" + t.type + "'");
    }
    return t;
}

nlohmann::json twist_to_json(const TwistSpec& t) {
    nlohmann::json j;
    j["type"] = t.type;
    if (t.type == "synthetic") {
        j["lambda"] = t.lambda;
        if (t.psi) j["psi"] = trigpoly_to_json(*t.psi);
    }
    return j;
}

ScheduleSpec schedule_from_json(const nlohmann::json& j) {
    check_keys(j, {"type", "first", "ratio", "count", "values"}, "schedule");
    ScheduleSpec s;
    s.type = j.value("type", std::string("geometric"));
    if (s.type == "geometric") {
        s.first = j.value("first", 1.0);
        s.ratio = j.value("ratio", 0.5);
        s.count = j.value("count", 20);
        if (j.contains("values"))
            throw ConfigError("geometric schedule takes no explicit values");
    } else if (s.type == "explicit") {
        if (!j.contains("values")) throw ConfigError("explicit schedule needs values");
        s.values = j.at("values").get<std::vector<double>>();
    } else {
        throw ConfigError("unknown schedule type '" + s.type + "'");
    }
    s.make();  // validate eagerly
    return s;
}

nlohmann::json schedule_to_json(const ScheduleSpec& s) {
    nlohmann::json j;
    j["type"] = s.type;
    if (s.type == "geometric") {
        j["first"] = s.first;
        j["ratio"] = s.ratio;
        j["count"] = s.count;
    } else {
        j["values"] = s.values;
    }
    return j;
}

SyntheticMSpec synthetic_m_from_json(const nlohmann::json& j, int real_dim) {
    check_keys(j, {"field", "offset", "basepoint"}, "synthetic_M");
    SyntheticMSpec m;
    m.field = trigpoly_from_json(j.at("field"));
    m.offset = j.value("offset", 0.0);
    if (j.contains("basepoint")) {
        m.basepoint = j.at("basepoint").get<std::vector<int>>();
        if (static_cast<int>(m.basepoint.size()) != real_dim)
            throw ConfigError("synthetic_M basepoint needs one entry per real axis");
    } else {
        m.basepoint.assign(real_dim, 0);
    }
    return m;
}

nlohmann::json synthetic_m_to_json(const SyntheticMSpec& m) {
    nlohmann::json j;
    j["field"] = trigpoly_to_json(m.field);
    j["offset"] = m.offset;
    j["basepoint"] = m.basepoint;
    return j;
}

}  // namespace

std::vector<double> ScheduleSpec::make() const {
    if (type == "geometric") return geometric_schedule(first, ratio, count);
    if (values.empty() || !(values.back() > 0))
        throw ConfigError("schedule values must be positive");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] > values[i + 1]))
            throw ConfigError("schedule values must be strictly decreasing");
    return values;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    check_keys(j,
               {"model", "twist", "synthetic_M", "periods", "resolution", "schedule",
                "solver", "classify_threshold", "output", "seed"},
               "scenario");
    ScenarioConfig c;
    if (j.contains("model")) c.model = model_from_json(j.at("model"), false);
    if (j.contains("twist")) c.twist = twist_from_json(j.at("twist"));
    if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));

    const int rd = 2 * c.model.n;
    if (j.contains("periods")) {
        c.periods = j.at("periods").get<std::vector<double>>();
        if (static_cast<int>(c.periods.size()) != rd)
            throw ConfigError("periods needs one entry per real axis");
    } else {
        c.periods.assign(rd, 1.0);
    }
    if (j.contains("resolution")) {
        c.resolution = j.at("resolution").get<std::vector<int>>();
        if (static_cast<int>(c.resolution.size()) != rd)
            throw ConfigError("resolution needs one entry per real axis");
    } else {
        c.resolution.assign(rd, c.model.n == 1 ? 64 : 16);
    }
    if (j.contains("synthetic_M"))
        c.synthetic_m = synthetic_m_from_json(j.at("synthetic_M"), rd);
    if (j.contains("solver")) {
        const auto& js = j.at("solver");
        check_keys(js, {"tolerance", "max_newton", "max_krylov", "positivity_tol"},
                   "solver");
        c.solver.tolerance = js.value("tolerance", c.solver.tolerance);
        c.solver.max_newton = js.value("max_newton", c.solver.max_newton);
        c.solver.max_krylov = js.value("max_krylov", c.solver.max_krylov);
        c.solver.positivity_tol = js.value("positivity_tol", c.solver.positivity_tol);
    }
    c.classify_threshold = j.value("classify_threshold", -1.0);
    c.output = j.value("output", std::string("out"));
    c.seed = j.value("seed", std::uint64_t{1});
    Lattice::make(c.model.n, c.periods, c.resolution);  // validate eagerly
    return c;
}

nlohmann::json scenario_to_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["model"] = model_to_json(c.model);
    j["twist"] = twist_to_json(c.twist);
    if (c.synthetic_m) j["synthetic_M"] = synthetic_m_to_json(*c.synthetic_m);
    j["periods"] = c.periods;
    j["resolution"] = c.resolution;
    j["schedule"] = schedule_to_json(c.schedule);
    j["solver"] = {{"tolerance", c.solver.tolerance},
                   {"max_newton", c.solver.max_newton},
                   {"max_krylov", c.solver.max_krylov},
                   {"positivity_tol", c.solver.positivity_tol}};
    j["classify_threshold"] = c.classify_threshold;
    j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid scenario in " + path + ": " + e.what());
    }
}

std::string config_hash(const ScenarioConfig& c) {
    const std::string s = scenario_to_json(c).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

MetricField build_metric(const ModelSpec& m, const LatticePtr& lat) {
    if (m.type == "flat_torus") return flat_metric(lat, m.background.to_herm());
    if (m.type == "conformal_torus") return conformal_metric(evaluate(m.f, lat));
    if (m.type == "potential_metric")
        return metric_from_potential(lat, m.background.to_herm(), evaluate(m.phi, lat));
    // product: build the factors on their own lattices, then assemble
    const auto& p = *lat;
    auto lat1 = Lattice::make(1, {p.period(0), p.period(1)},
                              {p.resolution(0), p.resolution(1)});
    auto lat2 = Lattice::make(1, {p.period(2), p.period(3)},
                              {p.resolution(2), p.resolution(3)});
    return product_metric(build_metric(m.factors[0], lat1),
                          build_metric(m.factors[1], lat2), lat);
}

}  // namespace

ModelObjects build_model(const ScenarioConfig& c) {
    ModelObjects out;
    out.lat = Lattice::make(c.model.n, c.periods, c.resolution);
    out.g = build_metric(c.model, out.lat);
    return out;
}

TwistField build_twist(const ScenarioConfig& c, const MetricField& g) {
    if (c.twist.type == "geometric") return geometric_twist(g);
    std::optional<RealField> psi;
    if (c.twist.psi) psi = evaluate(*c.twist.psi, g.lat());
    return synthetic_twist(g, c.twist.lambda, psi);
}

}  // namespace klab
