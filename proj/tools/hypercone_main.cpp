// Command-line front end: eigenvalue queries, cone projections, general
// quadratic conic solves, and the benchmark harness.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure,
//             4 budget exhausted without a feasible iterate.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hypercone/agm.hpp"
#include "hypercone/dfw.hpp"
#include "hypercone/harness.hpp"
#include "hypercone/json_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoFeasible = 4;

hypercone::Vec parse_csv_vector(const std::string& text) {
    std::string clean = text;
    std::replace(clean.begin(), clean.end(), ',', ' ');
    std::istringstream is(clean);
    std::vector<double> vals;
    double v;
    while (is >> v) vals.push_back(v);
    if (vals.empty()) throw std::invalid_argument("empty vector '" + text + "'");
    hypercone::Vec out(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

void print_csv(const hypercone::Vec& v, std::ostream& out) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    out << '\n';
}

hypercone::StepRule parse_step_rule(const std::string& name) {
    if (name == "diminishing") return hypercone::StepRule::Diminishing;
    if (name == "exact") return hypercone::StepRule::ExactLineSearch;
    if (name == "lipschitz") return hypercone::StepRule::Lipschitz;
    throw std::invalid_argument("unknown step rule '" + name + "'");
}

struct SolverOptions {
    std::string cd = "";
    std::string step = "exact";
    double tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iters = 100000;
    double max_seconds = 60.0;
    std::string trace_path;
    std::string solver = "dfw";
    double mu = 1e-3;
};

void add_solver_options(CLI::App* cmd, SolverOptions& opt) {
    cmd->add_option("--cd", opt.cd, "c_D: 'auto' or a positive value (default: projection formula)");
    cmd->add_option("--step", opt.step, "step rule: diminishing|exact|lipschitz")
        ->check(CLI::IsMember({"diminishing", "exact", "lipschitz"}));
    cmd->add_option("--tol", opt.tol, "FW gap tolerance");
    cmd->add_option("--feas-tol", opt.feas_tol, "primal feasibility tolerance");
    cmd->add_option("--max-iters", opt.max_iters, "iteration budget");
    cmd->add_option("--max-seconds", opt.max_seconds, "wall-clock budget");
    cmd->add_option("--trace", opt.trace_path, "write per-iteration trace CSV here");
    cmd->add_option("--solver", opt.solver, "dfw (default) or agm")
        ->check(CLI::IsMember({"dfw", "agm"}));
    cmd->add_option("--mu", opt.mu, "smoothing parameter for --solver agm");
}

hypercone::DFWConfig make_config(const SolverOptions& opt) {
    hypercone::DFWConfig cfg;
    cfg.step_rule = parse_step_rule(opt.step);
    cfg.fw_gap_tol = opt.tol;
    cfg.feas_tol = opt.feas_tol;
    cfg.max_iters = opt.max_iters;
    cfg.max_seconds = opt.max_seconds;
    cfg.record_trace = !opt.trace_path.empty();
    return cfg;
}

int finish_solve(const hypercone::SolveResult& res, const SolverOptions& opt) {
    if (!opt.trace_path.empty()) {
        std::ofstream out(opt.trace_path);
        hypercone::write_trace_csv(res.trace, out);
    }
    std::cerr << "status=" << (res.status == hypercone::SolveStatus::Converged ? "converged"
                               : res.status == hypercone::SolveStatus::TimeBudget ? "time-budget"
                               : res.status == hypercone::SolveStatus::Stalled    ? "stalled"
                                                                                  : "iteration-budget")
              << " iterations=" << res.iterations << " fw_gap=" << res.fw_gap_last
              << " lambda_min=" << res.lambda_min_last << " c_d=" << res.c_d_used
              << " seconds=" << res.solve_seconds << '\n';
    if (!res.feasible_found) {
        std::cerr << "no feasible iterate found within budget\n";
        return kExitNoFeasible;
    }
    print_csv(res.x_best, std::cout);
    if (res.status == hypercone::SolveStatus::Stalled) return kExitNumerical;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypercone: conic projection and strongly convex conic optimization "
                 "via a dual Frank-Wolfe method"};
    app.require_subcommand(1);

    // --- eig
    std::string eig_poly_path, eig_x, eig_e;
    auto* eig = app.add_subcommand("eig", "eigenvalues of x for a hyperbolic polynomial");
    eig->add_option("--poly", eig_poly_path, "polynomial JSON file")->required();
    eig->add_option("--x", eig_x, "point, comma separated")->required();
    eig->add_option("--e", eig_e, "hyperbolicity direction (default all ones)");

    // --- project
    std::string proj_cone_path, proj_point;
    SolverOptions proj_opt;
    auto* project = app.add_subcommand("project", "Euclidean projection onto a cone");
    project->add_option("--cone", proj_cone_path, "cone spec JSON file")->required();
    project->add_option("--point", proj_point, "point to project, comma separated")->required();
    add_solver_options(project, proj_opt);

    // --- solve
    std::string solve_problem_path;
    SolverOptions solve_opt;
    solve_opt.cd = "auto";
    auto* solve_cmd = app.add_subcommand("solve", "minimize a positive definite quadratic over a cone");
    solve_cmd->add_option("--problem", solve_problem_path, "problem JSON file")->required();
    add_solver_options(solve_cmd, solve_opt);

    // --- bench
    std::string bench_instances_path, bench_reference_path, bench_errors = "10,1,0.5,0.1";
    std::string bench_out = "report.csv";
    SolverOptions bench_opt;
    double bench_cd_mult = 1.0;
    auto* bench = app.add_subcommand("bench", "seeded projection benchmark with error targets");
    bench->add_option("--instances", bench_instances_path, "instance spec JSON file")->required();
    bench->add_option("--reference", bench_reference_path,
                      "reference CSV (instance_id,objective,seconds); omit for self-reference");
    bench->add_option("--errors", bench_errors, "error levels in percent, comma separated");
    bench->add_option("--out", bench_out, "aggregate report CSV (raw rows go to <out>.raw.csv)");
    bench->add_option("--cd-mult", bench_cd_mult, "multiplier on the projection c_D");
    add_solver_options(bench, bench_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eig) {
            const auto poly = hypercone::polynomial_from_json(load_json(eig_poly_path));
            const hypercone::Vec x = parse_csv_vector(eig_x);
            const hypercone::Vec e =
                eig_e.empty() ? hypercone::Vec(hypercone::Vec::Ones(poly.n())) : parse_csv_vector(eig_e);
            const hypercone::HyperbolicForm hp(poly, e);
            const auto spectrum = hypercone::eigenvalues(hp, x);
            print_csv(spectrum.values, std::cout);
            return kExitOk;
        }

        if (*project) {
            auto cone = hypercone::cone_from_json(load_json(proj_cone_path));
            const hypercone::Vec x0 = parse_csv_vector(proj_point);

            if (proj_opt.solver == "agm") {
                const auto* hyp = dynamic_cast<const hypercone::HyperbolicityCone*>(cone.get());
                if (!hyp) throw std::invalid_argument("--solver agm requires a hyperbolicity cone");
                hypercone::AgmConfig cfg;
                cfg.smoothing.mu = proj_opt.mu;
                cfg.max_iters = proj_opt.max_iters;
                cfg.max_seconds = proj_opt.max_seconds;
                cfg.record_trace = !proj_opt.trace_path.empty();
                const auto res = hypercone::agm_baseline(hyp->form(), x0, cfg);
                if (!proj_opt.trace_path.empty()) {
                    std::ofstream out(proj_opt.trace_path);
                    hypercone::write_trace_csv(res.trace, out);
                }
                std::cerr << "solver=" << res.solver_label << " iterations=" << res.iterations
                          << " objective=" << res.objective << " seconds=" << res.solve_seconds << '\n';
                if (!res.feasible_found) return kExitNoFeasible;
                print_csv(res.x, std::cout);
                return kExitOk;
            }

            auto program = hypercone::make_projection_program(cone, x0);
            hypercone::DFWConfig cfg = make_config(proj_opt);
            if (proj_opt.cd == "auto") {
                const auto res = hypercone::auto_cd(program, cfg);
                if (!res.certified) {
                    std::cerr << "auto_cd: no certificate after " << (res.doublings + 1)
                              << " guesses (last c_D " << res.c_d_used << ")\n";
                    return res.result.feasible_found ? kExitNumerical : kExitNoFeasible;
                }
                std::cerr << "auto_cd: certified with c_D=" << res.c_d_used << '\n';
                return finish_solve(res.result, proj_opt);
            }
            cfg.c_d = proj_opt.cd.empty()
                          ? hypercone::compute_cd_projection(cone->interior_point(), x0)
                          : std::stod(proj_opt.cd);
            return finish_solve(hypercone::solve(program, cfg), proj_opt);
        }

        if (*solve_cmd) {
            auto program = hypercone::program_from_json(load_json(solve_problem_path));
            hypercone::DFWConfig cfg = make_config(solve_opt);
            if (solve_opt.cd.empty() || solve_opt.cd == "auto") {
                const auto res = hypercone::auto_cd(program, cfg);
                if (!res.certified) {
                    std::cerr << "auto_cd: no certificate after " << (res.doublings + 1)
                              << " guesses (last c_D " << res.c_d_used << ")\n";
                    return res.result.feasible_found ? kExitNumerical : kExitNoFeasible;
                }
                std::cerr << "auto_cd: certified with c_D=" << res.c_d_used << '\n';
                return finish_solve(res.result, solve_opt);
            }
            cfg.c_d = std::stod(solve_opt.cd);
            return finish_solve(hypercone::solve(program, cfg), solve_opt);
        }

        if (*bench) {
            const auto spec = hypercone::instance_spec_from_json(load_json(bench_instances_path));
            const auto points = hypercone::gen_instances(spec);

            hypercone::BenchConfig cfg;
            cfg.solver = make_config(bench_opt);
            cfg.solver.max_iters = bench_opt.max_iters;
            cfg.cd_multiplier = bench_cd_mult;
            {
                const hypercone::Vec levels = parse_csv_vector(bench_errors);
                cfg.error_levels.assign(levels.data(), levels.data() + levels.size());
            }
            std::vector<hypercone::ReferenceEntry> reference;
            const bool have_ref = !bench_reference_path.empty();
            if (have_ref) {
                std::ifstream in(bench_reference_path);
                if (!in) throw std::invalid_argument("cannot open '" + bench_reference_path + "'");
                reference = hypercone::read_reference_csv(in);
            }
            const auto report =
                hypercone::run_bench(spec.cone, points, cfg, have_ref ? &reference : nullptr);

            std::ofstream agg(bench_out);
            std::ofstream raw(bench_out + ".raw.csv");
            hypercone::write_bench_report_csv(report, agg, &raw);
            for (const auto& lvl : report.levels)
                std::cerr << "E=" << lvl.error_pct << "%: success " << lvl.success_pct
                          << "%, rel time " << lvl.mean_rel_time << " +- " << lvl.std_rel_time << '\n';
            return kExitOk;
        }
    } catch (const hypercone::NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::cerr << "invalid input: " << err.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitOk;
}
