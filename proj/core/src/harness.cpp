#include "hypercone/harness.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace hypercone {

double SplitMix64::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Vec standard_normal_vector(SplitMix64& gen, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gen.next_normal();
    return v;
}

std::vector<Vec> gen_instances(const InstanceSpec& spec) {
    if (!spec.cone) throw std::invalid_argument("gen_instances: missing cone");
    if (spec.count < 0) throw std::invalid_argument("gen_instances: negative count");
    std::vector<Vec> out;
    out.reserve(spec.count);
    const int m = spec.cone->dim();
    for (int i = 0; i < spec.count; ++i) {
        SplitMix64 stream(instance_stream_seed(spec.seed, i));
        bool accepted = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            Vec x = standard_normal_vector(stream, m);
            if (spec.cone->lambda_min(x) <= spec.reject_threshold) {
                out.push_back(std::move(x));
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw NumericalError("gen_instances: 1000 consecutive rejections for instance " +
                                 std::to_string(i) + " (degenerate cone/config)");
    }
    return out;
}

std::vector<ReferenceEntry> read_reference_csv(std::istream& in) {
    std::vector<ReferenceEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        ReferenceEntry e;
        std::string first;
        ls >> first;
        if (first == "instance_id") continue; // header
        try {
            e.instance_id = std::stoi(first);
        } catch (const std::exception&) {
            throw std::invalid_argument("reference file: malformed row '" + line + "'");
        }
        if (!(ls >> e.objective >> e.seconds))
            throw std::invalid_argument("reference file: malformed row '" + line + "'");
        out.push_back(e);
    }
    return out;
}

int harness_thread_cap() {
    if (const char* env = std::getenv("HYPERCONE_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

struct InstanceOutcome {
    double ref_objective = 0.0;
    double ref_seconds = 0.0;
    SolveTrace trace;
    double offset = 0.0; // 1/2 ||x0||^2
};

void mean_std(const std::vector<double>& xs, double& mean, double& std_out) {
    mean = 0.0;
    std_out = 0.0;
    if (xs.empty()) return;
    for (double v : xs) mean += v;
    mean /= xs.size();
    if (xs.size() < 2) return;
    double acc = 0.0;
    for (double v : xs) acc += (v - mean) * (v - mean);
    std_out = std::sqrt(acc / (xs.size() - 1)); // sample std (n-1)
}

} // namespace

BenchReport run_bench(const std::shared_ptr<const ConeOracle>& cone,
                      const std::vector<Vec>& points, const BenchConfig& config,
                      const std::vector<ReferenceEntry>* reference) {
    if (!cone) throw std::invalid_argument("run_bench: missing cone");
    const int count = static_cast<int>(points.size());
    if (reference) {
        for (int i = 0; i < count; ++i) {
            const bool found = std::any_of(reference->begin(), reference->end(),
                                           [i](const ReferenceEntry& e) { return e.instance_id == i; });
            if (!found)
                throw std::invalid_argument("run_bench: reference file missing instance " +
                                            std::to_string(i));
        }
    }

    std::vector<InstanceOutcome> outcomes(count);
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min({harness_thread_cap(),
                                              config.threads > 0 ? config.threads : count, count}));

    auto solve_instance = [&](int i) {
        const Vec& x0 = points[i];
        InstanceOutcome& out = outcomes[i];
        out.offset = 0.5 * x0.squaredNorm();
        ConicProgram program = make_projection_program(cone, x0);
        const double cd =
            config.cd_multiplier * compute_cd_projection(cone->interior_point(), x0);

        if (reference) {
            auto it = std::find_if(reference->begin(), reference->end(),
                                   [i](const ReferenceEntry& e) { return e.instance_id == i; });
            out.ref_objective = it->objective;
            out.ref_seconds = it->seconds;
        } else {
            DFWConfig ref_cfg = config.solver;
            ref_cfg.c_d = cd;
            ref_cfg.record_trace = false;
            ref_cfg.fw_gap_tol = std::min(config.solver.fw_gap_tol, 1e-10);
            ref_cfg.max_iters = std::max(config.solver.max_iters, 200000);
            ref_cfg.max_seconds = config.self_reference_seconds;
            const SolveResult ref = solve(program, ref_cfg);
            out.ref_objective = ref.feasible_found
                                    ? ref.objective_best + out.offset
                                    : std::numeric_limits<double>::infinity();
            out.ref_seconds = ref.solve_seconds;
        }

        DFWConfig run_cfg = config.solver;
        run_cfg.c_d = cd;
        run_cfg.record_trace = true;
        run_cfg.max_seconds = std::min(run_cfg.max_seconds, out.ref_seconds); // budget rule
        const SolveResult run = solve(program, run_cfg);
        out.trace = std::move(run.trace);
    };

    std::exception_ptr worker_error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                solve_instance(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!worker_error) worker_error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    BenchReport report;
    for (const auto& out : outcomes) {
        report.reference_objectives.push_back(out.ref_objective);
        report.reference_seconds.push_back(out.ref_seconds);
    }
    for (double level : config.error_levels) {
        LevelStats stats;
        stats.error_pct = level;
        std::vector<double> rel_times, iters;
        for (int i = 0; i < count; ++i) {
            const InstanceOutcome& out = outcomes[i];
            InstanceLevelRow row;
            row.instance_id = i;
            row.error_pct = level;
            const double target = out.ref_objective * (100.0 + level) / 100.0;
            for (const TraceRecord& rec : out.trace.records) {
                const double full_obj = rec.primal_obj + out.offset;
                if (full_obj <= target && rec.lambda_min >= -1e-8) {
                    row.success = true;
                    row.iterations = rec.k + 1;
                    row.abs_seconds = rec.elapsed_s;
                    row.rel_time = out.ref_seconds > 0.0 ? rec.elapsed_s / out.ref_seconds : 0.0;
                    break;
                }
            }
            if (row.success) {
                rel_times.push_back(row.rel_time);
                iters.push_back(row.iterations);
                ++stats.successes;
            }
            report.rows.push_back(row);
        }
        stats.success_pct = count > 0 ? 100.0 * stats.successes / count : 0.0;
        mean_std(rel_times, stats.mean_rel_time, stats.std_rel_time);
        mean_std(iters, stats.mean_iterations, stats.std_iterations);
        report.levels.push_back(stats);
    }
    return report;
}

void write_bench_report_csv(const BenchReport& report, std::ostream& aggregate,
                            std::ostream* raw_rows) {
    aggregate << "# aggregates over successful instances only; std is the sample estimator (n-1)\n";
    aggregate << "error_pct,success_pct,successes,mean_rel_time,std_rel_time,mean_iterations,std_iterations\n";
    for (const LevelStats& s : report.levels) {
        aggregate << s.error_pct << ',' << s.success_pct << ',' << s.successes << ','
                  << s.mean_rel_time << ',' << s.std_rel_time << ',' << s.mean_iterations << ','
                  << s.std_iterations << '\n';
    }
    if (raw_rows) {
        *raw_rows << "instance_id,error_pct,success,rel_time,iterations,abs_seconds\n";
        for (const InstanceLevelRow& r : report.rows) {
            *raw_rows << r.instance_id << ',' << r.error_pct << ',' << (r.success ? 1 : 0) << ','
                      << r.rel_time << ',' << r.iterations << ',' << r.abs_seconds << '\n';
        }
    }
}

void write_trace_csv(const SolveTrace& trace, std::ostream& out) {
    out << "k,fw_gap,primal_obj,lambda_min,alpha,elapsed_s\n";
    for (const TraceRecord& r : trace.records) {
        out << r.k << ',' << r.fw_gap << ',' << r.primal_obj << ',' << r.lambda_min << ','
            << r.alpha << ',' << r.elapsed_s << '\n';
    }
}

bool export_convergence(const SolveTrace& trace, double objective_offset, std::ostream& out) {
    double f_opt = std::numeric_limits<double>::infinity();
    bool any_feasible = false;
    for (const TraceRecord& r : trace.records) {
        if (r.lambda_min >= -1e-8) {
            any_feasible = true;
            f_opt = std::min(f_opt, r.primal_obj + objective_offset);
        }
    }
    out << "k,fw_gap,rel_obj\n";
    double best_so_far = std::numeric_limits<double>::infinity();
    for (const TraceRecord& r : trace.records) {
        out << r.k << ',' << r.fw_gap << ',';
        if (r.lambda_min >= -1e-8) best_so_far = std::min(best_so_far, r.primal_obj + objective_offset);
        if (any_feasible && best_so_far < std::numeric_limits<double>::infinity() && f_opt != 0.0)
            out << (best_so_far - f_opt) / f_opt;
        out << '\n';
    }
    return any_feasible;
}

std::vector<std::pair<double, BenchReport>> run_cd_sensitivity(
    const std::shared_ptr<const ConeOracle>& cone, const std::vector<Vec>& points,
    const BenchConfig& config, const std::vector<double>& multipliers,
    const std::vector<ReferenceEntry>* reference) {
    std::vector<std::pair<double, BenchReport>> out;
    for (double mult : multipliers) {
        BenchConfig c = config;
        c.cd_multiplier = config.cd_multiplier * mult;
        out.emplace_back(mult, run_bench(cone, points, c, reference));
    }
    return out;
}

} // namespace hypercone
