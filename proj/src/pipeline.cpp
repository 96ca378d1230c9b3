#include "klab/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "klab/errors.hpp"
#include "klab/field_io.hpp"

namespace klab {

namespace {

// all external scalars go through one formatter so reruns are byte-identical
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double curvature_sup(const CurvatureField& c) {
    double s = 0;
    for (const cdouble& v : c.r) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

const char* kSweepCsvHeader =
    "epsilon,sup_u,inf_u,residual_sup,newton_iterations,mass,cohomological_mass,"
    "min_trace_margin,lambda_min_global,mbar_eps";

std::string format_sweep_csv(const std::vector<SweepEntry>& entries) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const SweepEntry& e : entries) {
        out += fmt(e.epsilon) + ',' + fmt(e.sup_u) + ',' + fmt(e.inf_u) + ',' +
               fmt(e.residual_sup) + ',' + std::to_string(e.newton_iterations) + ',' +
               fmt(e.mass) + ',' + fmt(e.cohomological_mass) + ',' +
               fmt(e.min_trace_margin) + ',' + fmt(e.lambda_min_global) + ',' +
               fmt(e.mbar_eps) + '\n';
    }
    return out;
}

RunResult run_pipeline(const ScenarioConfig& c) {
    RunResult r;
    r.model = build_model(c);
    r.twist = build_twist(c, r.model.g);
    const int n = r.model.g.n();

    r.curv = chern_curvature(r.model.g);
    if (curvature_sup(r.curv) < 1e-12) {
        // flat geometry: kappa vanishes, skip the direction extremizer
        r.kappa_shortcut = true;
        r.curvature.kappa = RealField(r.model.lat);
        r.curvature.m = RealField(r.model.lat);
        r.curvature.lipschitz = 0;
    } else {
        r.curvature = kappa_field(r.curv, r.model.g);
    }
    r.kappa_nonnegative = extrema(r.curvature.kappa).min >= -1e-10;

    if (c.synthetic_m) {
        r.m_field = evaluate(c.synthetic_m->field, r.model.lat);
        for (auto& v : r.m_field.v) v += c.synthetic_m->offset;
    } else {
        r.m_field = r.curvature.m;
    }

    r.sweep = epsilon_sweep(r.model.g, r.twist, c.schedule.make(), c.solver, &r.m_field,
                            c.classify_threshold);

    const Solution& last = r.sweep.solutions.back();
    const TraceDiagnostics& tr = r.sweep.traces.back();
    r.kw.mbar_eps = r.sweep.entries.back().mbar_eps;
    const auto lim = mbar_limit(r.sweep);
    if (!lim) {
        r.kw.applicable = false;
        r.kw.skip_reason = "mbar0 <= 0: the section-3 machinery needs a positive limit";
    } else {
        r.kw.applicable = true;
        r.kw.mbar0 = lim->value;
        r.kw.cauchy_ok = lim->cauchy_ok;
        r.kw.f = solve_weighted_poisson(last.omega_eps, r.m_field, r.kw.mbar_eps,
                                        std::max(1e-9, 10 * c.solver.tolerance),
                                        c.solver.max_krylov);
        Supersolution s = supersolution(r.kw.f.f, r.kw.mbar0);
        r.kw.a = s.a;
        r.kw.b = s.b;
        r.kw.phi_plus = std::move(s.phi_plus);
        double margin = tr.t.size() ? r.kw.phi_plus[0] - tr.t[0] : 0;
        for (std::size_t i = 1; i < tr.t.size(); ++i)
            margin = std::min(margin, r.kw.phi_plus[i] - tr.t[i]);
        r.kw.comparison_margin = margin;
        r.kw.guenancia = guenancia_check(last, tr.t, r.m_field, r.model.g);
    }
    // Eq. (4) residual is always reported; asserted only under the paper's
    // curvature-sign hypotheses
    r.kw.eq4_min_residual = check_diff_inequality(last, tr.t, r.curvature.kappa, r.model.g);
    r.kw.eq4_asserted = r.kappa_nonnegative;
    return r;
}

void write_outputs(const ScenarioConfig& c, const RunResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    {
        std::ofstream out(dir + "/sweep.csv", std::ios::binary);
        out << format_sweep_csv(r.sweep.entries);
    }
    {
        nlohmann::json j;
        j["classification"] = classification_name(r.sweep.classify.classification);
        j["extrapolated_mass0"] = r.sweep.classify.extrapolated_mass0;
        j["threshold"] = r.sweep.classify.threshold;
        j["fit_coefficients"] = r.sweep.classify.fit_coefficients;
        std::ofstream out(dir + "/classification.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }

    const Solution& last = r.sweep.solutions.back();
    dump_field(last.u, dir, "u_last");
    dump_field(r.sweep.traces.back().t, dir, "t_last");
    dump_field(r.curvature.kappa, dir, "kappa");
    dump_field(r.m_field, dir, "m");
    std::vector<std::string> dumps = {"u_last", "t_last", "kappa", "m"};

    {
        nlohmann::json j;
        j["applicable"] = r.kw.applicable;
        if (!r.kw.applicable) {
            j["skip_reason"] = r.kw.skip_reason;
        } else {
            j["mbar0"] = r.kw.mbar0;
            j["mbar0_cauchy_ok"] = r.kw.cauchy_ok;
            j["A"] = r.kw.a;
            j["B"] = r.kw.b;
            j["f_residual_sup"] = r.kw.f.residual_sup;
            j["f_projected_mean"] = r.kw.f.projected_mean;
            j["comparison_margin"] = r.kw.comparison_margin;
            j["guenancia"] = {{"lhs", r.kw.guenancia.lhs},
                              {"rhs", r.kw.guenancia.rhs},
                              {"C_eps", r.kw.guenancia.c_eps},
                              {"holds", r.kw.guenancia.holds}};
            dump_field(r.kw.f.f, dir, "f_eps");
            dump_field(r.kw.phi_plus, dir, "phi_plus");
            dumps.push_back("f_eps");
            dumps.push_back("phi_plus");
            j["f_dump"] = "f_eps";
            j["phi_plus_dump"] = "phi_plus";
        }
        j["mbar_eps"] = r.kw.mbar_eps;
        j["eq4_min_residual"] = r.kw.eq4_min_residual;
        j["eq4_asserted"] = r.kw.eq4_asserted;
        std::ofstream out(dir + "/kw_report.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }
    {
        nlohmann::json j;
        j["config"] = scenario_to_json(c);
        j["config_hash"] = config_hash(c);
        j["format_version"] = 1;
        j["epsilon"] = last.epsilon;
        j["dumps"] = dumps;
        j["classification"] = classification_name(r.sweep.classify.classification);
        j["kappa_shortcut"] = r.kappa_shortcut;
        j["kappa_nonnegative"] = r.kappa_nonnegative;
        nlohmann::json entries = nlohmann::json::array();
        for (const SweepEntry& e : r.sweep.entries)
            entries.push_back({{"epsilon", e.epsilon},
                               {"inf_t", e.inf_t},
                               {"mass", e.mass},
                               {"cohomological_mass", e.cohomological_mass},
                               {"sup_u", e.sup_u}});
        j["entries"] = entries;
        std::ofstream out(dir + "/manifest.json", std::ios::binary);
        out << j.dump(2) << '\n';
    }
}

}  // namespace klab
