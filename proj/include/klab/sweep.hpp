#pragma once

#include <optional>

#include "klab/diagnostics.hpp"
#include "klab/kw.hpp"

namespace klab {

struct SweepEntry {
    double epsilon = 0;
    double sup_u = 0, inf_u = 0;
    double residual_sup = 0;
    int newton_iterations = 0;
    double mass = 0;
    double cohomological_mass = 0;
    double min_trace_margin = 0;  // min over nodes of T + u/n
    double lambda_min_global = 0;
    double mbar_eps = 0;  // 0 when no M field is attached
    double inf_t = 0;
};

struct SweepRecord {
    std::vector<double> schedule;
    std::vector<SweepEntry> entries;
    std::vector<Solution> solutions;       // in schedule order
    std::vector<TraceDiagnostics> traces;  // parallel to solutions
    std::vector<double> mass_poly;         // cohomological polynomial coefficients
    ClassifyResult classify;
};

std::vector<double> geometric_schedule(double first = 1.0, double ratio = 0.5,
                                       int count = 20);

// warm-started continuation in decreasing epsilon; diagnostics per entry.
// m_weight, when present, feeds the mbar column.
SweepRecord epsilon_sweep(const MetricField& g, const TwistField& rho,
                          const std::vector<double>& schedule, const SolverOptions& opts,
                          const RealField* m_weight = nullptr,
                          double classify_threshold = -1 /* default 1e-6 * Vol */);

// stabilized tail value of mbar over the sweep, with a Cauchy check;
// nullopt when the machinery is inapplicable (estimate <= 0)
struct MbarLimit {
    double value = 0;
    bool cauchy_ok = false;
};
std::optional<MbarLimit> mbar_limit(const SweepRecord& sweep);

}  // namespace klab
