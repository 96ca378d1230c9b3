#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "klab/ma_solver.hpp"
#include "klab/trigpoly.hpp"

namespace klab {

// constant Hermitian background matrix in config form
struct BackgroundSpec {
    double h00 = 1, h11 = 1;
    double h01_re = 0, h01_im = 0;
    Herm2 to_herm() const { return Herm2{h00, h11, cdouble(h01_re, h01_im)}; }
};

struct ModelSpec {
    std::string type = "flat_torus";  // flat_torus | conformal_torus | product | potential_metric
    int n = 1;
    BackgroundSpec background;
    TrigPoly f;                    // conformal_torus log-density
    TrigPoly phi;                  // potential_metric potential
    std::vector<ModelSpec> factors;  // product: exactly two n = 1 factors
};

struct TwistSpec {
    std::string type = "geometric";  // geometric | synthetic
    double lambda = 0;
    std::optional<TrigPoly> psi;
};

struct SyntheticMSpec {
    TrigPoly field;
    double offset = 0;             // added constant (synthetic M is often a shifted bump)
    std::vector<int> basepoint;    // per-axis node coordinates of x0
};

struct ScheduleSpec {
    std::string type = "geometric";  // geometric | explicit
    double first = 1.0;
    double ratio = 0.5;
    int count = 20;
    std::vector<double> values;  // explicit
    std::vector<double> make() const;
};

struct ScenarioConfig {
    ModelSpec model;
    TwistSpec twist;
    std::optional<SyntheticMSpec> synthetic_m;
    std::vector<double> periods;   // defaulted from model.n
    std::vector<int> resolution;   // defaulted from model.n (64^2 or 16^4)
    ScheduleSpec schedule;
    SolverOptions solver;
    double classify_threshold = -1;  // <= 0 means 1e-6 * volume
    std::string output = "out";
    std::uint64_t seed = 1;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& c);  // canonical, defaults filled
ScenarioConfig load_scenario(const std::string& path);
std::string config_hash(const ScenarioConfig& c);  // FNV-1a over the canonical JSON

// materialized model-manifold objects
struct ModelObjects {
    LatticePtr lat;
    MetricField g;
};
ModelObjects build_model(const ScenarioConfig& c);
TwistField build_twist(const ScenarioConfig& c, const MetricField& g);

}  // namespace klab
