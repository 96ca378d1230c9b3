#include "klab/sweep.hpp"

#include <cmath>
#include <limits>

#include "klab/errors.hpp"

namespace klab {

std::vector<double> geometric_schedule(double first, double ratio, int count) {
    if (!(first > 0) || !(ratio > 0) || !(ratio < 1) || count < 1)
        throw ConfigError("geometric_schedule: need first > 0, 0 < ratio < 1, count >= 1");
    std::vector<double> s(count);
    double e = first;
    for (int i = 0; i < count; ++i, e *= ratio) s[i] = e;
    return s;
}

SweepRecord epsilon_sweep(const MetricField& g, const TwistField& rho,
                          const std::vector<double>& schedule, const SolverOptions& opts,
                          const RealField* m_weight, double classify_threshold) {
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i + 1]))
            throw ConfigError("epsilon_sweep: schedule must be strictly decreasing");
    if (schedule.empty() || !(schedule.back() > 0))
        throw ConfigError("epsilon_sweep: schedule must be positive");

    SweepRecord rec;
    rec.schedule = schedule;
    rec.mass_poly = mass_polynomial(g, rho);
    const int n = g.n();

    const RealField* warm = nullptr;
    for (double eps : schedule) {
        Solution sol = solve_ma(g, rho, eps, opts, warm);
        TraceDiagnostics tr = trace_diagnostics(sol.omega_eps, g);

        SweepEntry e;
        e.epsilon = eps;
        e.sup_u = sol.sup_u;
        e.inf_u = sol.inf_u;
        e.residual_sup = sol.residual_sup;
        e.newton_iterations = sol.newton_iterations;
        e.mass = mass_integral(sol.u, g);
        e.cohomological_mass = eval_polynomial(rec.mass_poly, eps);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t node = 0; node < tr.t.size(); ++node)
            margin = std::min(margin, tr.t[node] + sol.u[node] / n);
        e.min_trace_margin = margin;
        e.lambda_min_global = extrema(tr.lambda_min).min;
        e.inf_t = extrema(tr.t).min;
        if (m_weight) e.mbar_eps = mbar(sol, *m_weight, g);

        rec.solutions.push_back(std::move(sol));
        rec.traces.push_back(std::move(tr));
        rec.entries.push_back(e);
        warm = &rec.solutions.back().u;
    }

    const double threshold =
        classify_threshold > 0 ? classify_threshold : 1e-6 * g.lat()->volume();
    std::vector<double> eps_list, masses;
    for (const auto& e : rec.entries) {
        eps_list.push_back(e.epsilon);
        masses.push_back(e.mass);
    }
    rec.classify = classify_sweep(eps_list, masses, n, threshold);
    return rec;
}

std::optional<MbarLimit> mbar_limit(const SweepRecord& sweep) {
    if (sweep.entries.size() < 4)
        throw ConfigError("mbar_limit: need at least 4 sweep entries");
    const std::size_t k = sweep.entries.size();
    MbarLimit lim;
    lim.value = sweep.entries[k - 1].mbar_eps;
    lim.cauchy_ok =
        std::abs(sweep.entries[k - 1].mbar_eps - sweep.entries[k - 2].mbar_eps) < 1e-4;
    if (lim.value <= 0) return std::nullopt;
    return lim;
}

}  // namespace klab
