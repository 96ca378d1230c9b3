#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "klab/errors.hpp"
#include "klab/report.hpp"
#include "klab/verify.hpp"

namespace {

// exit codes: 0 success, 1 verification failure, 2 usage/config, 3 solver
constexpr int kOk = 0, kVerifyFail = 1, kConfigError = 2, kSolverError = 3;

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("KLAB_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

void print_entry(const klab::VerifyEntry& e) {
    const char* s = e.status == klab::VerifyStatus::Pass
                        ? "pass"
                        : e.status == klab::VerifyStatus::Fail ? "FAIL" : "skip";
    std::printf("%-40s %s", e.name.c_str(), s);
    if (e.status == klab::VerifyStatus::Skipped)
        std::printf("  (%s)", e.reason.c_str());
    else
        std::printf("  margin=%.3g", e.margin);
    if (e.status == klab::VerifyStatus::Fail) std::printf("  [%s]", e.reason.c_str());
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kahlerlab: continuity-family Monge-Ampere laboratory on periodic grids"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_dir;
    double epsilon = -1, tolerance = -1;
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario JSON")->required();
        sub->add_option("--out", out_dir, "output directory (default from config)");
        sub->add_option("--tolerance", tolerance, "override solver tolerance");
    };
    CLI::App* solve = app.add_subcommand("solve", "single solve at one epsilon");
    add_common(solve);
    solve->add_option("--epsilon", epsilon, "epsilon (default: largest in schedule)");
    CLI::App* sweep = app.add_subcommand("sweep", "full epsilon sweep with outputs");
    add_common(sweep);
    CLI::App* verify = app.add_subcommand("verify", "run all applicable invariants");
    add_common(verify);
    CLI::App* curvature = app.add_subcommand("curvature", "curvature report only");
    add_common(curvature);
    CLI::App* report = app.add_subcommand("report", "summarize a run directory");
    report->add_option("dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    (void)resolve_threads(threads);  // reserved; kernels are single-threaded today

    try {
        if (report->parsed()) {
            nlohmann::json j = klab::make_report(report_dir);
            std::cout << j.dump(2) << '\n';
            return kOk;
        }

        klab::ScenarioConfig cfg = klab::load_scenario(config_path);
        if (tolerance > 0) cfg.solver.tolerance = tolerance;
        const std::string dir = out_dir.empty() ? cfg.output : out_dir;

        if (solve->parsed()) {
            klab::ModelObjects model = klab::build_model(cfg);
            klab::TwistField twist = klab::build_twist(cfg, model.g);
            const double eps = epsilon > 0 ? epsilon : cfg.schedule.make().front();
            klab::Solution sol = klab::solve_ma(model.g, twist, eps, cfg.solver);
            std::printf("epsilon=%.17g sup_u=%.17g inf_u=%.17g residual=%.3g newton=%d\n",
                        sol.epsilon, sol.sup_u, sol.inf_u, sol.residual_sup,
                        sol.newton_iterations);
            return kOk;
        }
        if (sweep->parsed()) {
            klab::RunResult r = klab::run_pipeline(cfg);
            klab::write_outputs(cfg, r, dir);
            std::printf("classification=%s entries=%zu out=%s\n",
                        klab::classification_name(r.sweep.classify.classification),
                        r.sweep.entries.size(), dir.c_str());
            return kOk;
        }
        if (curvature->parsed()) {
            klab::ModelObjects model = klab::build_model(cfg);
            klab::CurvatureField curv = klab::chern_curvature(model.g);
            klab::CurvatureSymmetry sym = klab::curvature_symmetry_defect(curv);
            klab::CurvatureReport rep = klab::kappa_field(curv, model.g);
            const klab::Extrema ke = klab::extrema(rep.kappa);
            std::printf("kappa_min=%.17g kappa_max=%.17g lipschitz=%.3g "
                        "sym_hermitian=%.3g sym_kahler=%.3g\n",
                        ke.min, ke.max, rep.lipschitz, sym.hermitian, sym.kahler);
            return kOk;
        }
        // verify
        klab::VerifyReport rep = klab::run_verify(cfg, dir);
        for (const auto& e : rep.entries) print_entry(e);
        if (!out_dir.empty()) {
            std::ofstream out(dir + "/verify_report.json", std::ios::binary);
            out << klab::verify_to_json(rep).dump(2) << '\n';
        }
        std::printf("verify: %s\n", rep.ok() ? "ok" : "FAILED");
        return rep.ok() ? kOk : kVerifyFail;
    } catch (const klab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const klab::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kSolverError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
}
