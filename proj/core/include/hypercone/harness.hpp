#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "hypercone/cones.hpp"
#include "hypercone/dfw.hpp"
#include "hypercone/rng.hpp"

namespace hypercone {

/// Seeded projection-instance generator: standard normal draws, rejecting
/// points whose minimum eigenvalue exceeds the threshold (too close to the
/// cone). Instance i draws from its own SplitMix64 stream
/// (instance_stream_seed(seed, i)), so sets reproduce exactly per seed.
struct InstanceSpec {
    std::shared_ptr<const ConeOracle> cone;
    std::uint64_t seed = 0;
    int count = 0;
    double reject_threshold = -1e-4;
};

std::vector<Vec> gen_instances(const InstanceSpec& spec);

/// Reference solver values supplied from file: id, objective (1/2||x-x0||^2
/// form), wall seconds.
struct ReferenceEntry {
    int instance_id = 0;
    double objective = 0.0;
    double seconds = 0.0;
};

std::vector<ReferenceEntry> read_reference_csv(std::istream& in);

struct BenchConfig {
    std::vector<double> error_levels; ///< percentages, e.g. {10, 1, 0.5, 0.1}
    DFWConfig solver;                 ///< base solver configuration
    double cd_multiplier = 1.0;       ///< scales the projection c_D
    double self_reference_seconds = 10.0;
    int threads = 0;                  ///< 0 -> HYPERCONE_THREADS / hardware
};

struct InstanceLevelRow {
    int instance_id = 0;
    double error_pct = 0.0;
    bool success = false;
    double rel_time = 0.0;
    int iterations = 0;
    double abs_seconds = 0.0;
};

struct LevelStats {
    double error_pct = 0.0;
    double success_pct = 0.0;
    int successes = 0;
    double mean_rel_time = 0.0;
    double std_rel_time = 0.0; ///< sample standard deviation (n-1)
    double mean_iterations = 0.0;
    double std_iterations = 0.0;
};

struct BenchReport {
    std::vector<InstanceLevelRow> rows;
    std::vector<LevelStats> levels;
    std::vector<double> reference_objectives;
    std::vector<double> reference_seconds;
};

/// Benchmark protocol: per instance, solve the projection with the measured
/// run capped at the reference time; per error level E, find the first
/// iteration whose 1/2||x_k - x0||^2 value is within (100+E)/100 of the
/// reference objective while lambda_min(x_k) >= -1e-8. Without a reference
/// file, a long high-accuracy run of the same solver provides it.
/// Aggregates (mean +- sample std) use successful instances only.
BenchReport run_bench(const std::shared_ptr<const ConeOracle>& cone,
                      const std::vector<Vec>& points, const BenchConfig& config,
                      const std::vector<ReferenceEntry>* reference);

void write_bench_report_csv(const BenchReport& report, std::ostream& aggregate,
                            std::ostream* raw_rows);

/// Trace CSV: header `k,fw_gap,primal_obj,lambda_min,alpha,elapsed_s`.
void write_trace_csv(const SolveTrace& trace, std::ostream& out);

/// Convergence CSV `k,fw_gap,rel_obj` for log-log plots: rel_obj is the
/// feasibility-filtered min-so-far objective relative to the best feasible
/// value in the trace; rows before the first feasible iterate leave it empty.
/// Returns false (and leaves the column empty) when no iterate was feasible.
/// `objective_offset` converts stored objectives to the comparable form
/// (1/2||x0||^2 for projection instances).
bool export_convergence(const SolveTrace& trace, double objective_offset, std::ostream& out);

/// Appendix-C style sweep: run_bench at c_D multiplied by each factor.
std::vector<std::pair<double, BenchReport>> run_cd_sensitivity(
    const std::shared_ptr<const ConeOracle>& cone, const std::vector<Vec>& points,
    const BenchConfig& config, const std::vector<double>& multipliers,
    const std::vector<ReferenceEntry>* reference);

/// Worker-thread cap: HYPERCONE_THREADS when set, else hardware concurrency.
int harness_thread_cap();

} // namespace hypercone
