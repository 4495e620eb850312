#pragma once

#include <vector>

#include "hypercone/types.hpp"

namespace hypercone {

/// One solver iteration as recorded in a trace.
struct TraceRecord {
    int k = 0;
    double fw_gap = 0.0;
    double primal_obj = 0.0;
    double lambda_min = 0.0;
    double alpha = 0.0;
    double elapsed_s = 0.0;
};

struct BestFeasible {
    bool present = false;
    int iteration = -1;
    Vec x;
    double objective = 0.0;
};

/// Per-iteration records plus best-feasible bookkeeping. Iterate storage is
/// opt-in (memory heavy) and used by diagnostics that need x_k / y_k.
struct SolveTrace {
    std::vector<TraceRecord> records;
    BestFeasible best_feasible;
    std::vector<Vec> iterates_x;
    std::vector<Vec> iterates_y;
};

} // namespace hypercone
