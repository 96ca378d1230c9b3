#pragma once

#include <string>

#include "klab/curvature.hpp"
#include "klab/scenario.hpp"
#include "klab/sweep.hpp"

namespace klab {

// the section-3 machinery evaluated on the last sweep solution
struct KwChain {
    bool applicable = false;     // mbar0 > 0
    std::string skip_reason;     // set when not applicable
    double mbar_eps = 0;
    double mbar0 = 0;
    bool cauchy_ok = false;
    WeightedPoissonResult f;
    double a = 0, b = 0;
    RealField phi_plus;
    double comparison_margin = 0;   // min over nodes of phi_plus - T_eps
    bool eq4_asserted = false;      // only flat / synthetic kappa >= 0
    double eq4_min_residual = 0;
    GuenanciaReport guenancia;
};

struct RunResult {
    ModelObjects model;
    TwistField twist;
    CurvatureField curv;
    CurvatureReport curvature;
    bool kappa_shortcut = false;  // curvature identically zero, extremizer skipped
    RealField m_field;            // weight used for mbar: synthetic_M or (n+1)/(2n) kappa
    bool kappa_nonnegative = false;
    SweepRecord sweep;
    KwChain kw;
};

RunResult run_pipeline(const ScenarioConfig& c);

// writes sweep.csv, classification.json, kw_report.json, field dumps and
// manifest.json into dir (created if missing)
void write_outputs(const ScenarioConfig& c, const RunResult& r, const std::string& dir);

std::string format_sweep_csv(const std::vector<SweepEntry>& entries);
extern const char* kSweepCsvHeader;

}  // namespace klab
