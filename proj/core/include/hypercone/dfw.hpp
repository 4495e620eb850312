#pragma once

#include <Eigen/Cholesky>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

#include "hypercone/cones.hpp"
#include "hypercone/trace.hpp"
#include "hypercone/types.hpp"

namespace hypercone {

/// f(x) = 1/2 <x, Qx> + <c, x> with Q symmetric positive definite.
/// The identity shortcut skips the factorization entirely (projection case).
class QuadraticObjective {
public:
    QuadraticObjective() = default; ///< empty identity objective; fill via assignment
    static QuadraticObjective identity(Vec c);
    QuadraticObjective(Mat Q, Vec c);

    int n() const { return static_cast<int>(c_.size()); }
    bool is_identity() const { return identity_; }
    const Vec& linear_term() const { return c_; }

    double value(const Vec& x) const;
    Vec apply_Q(const Vec& x) const;
    Vec solve_Q(const Vec& r) const;

    /// grad f*(s) = Q^{-1}(s - c), the primal-recovery map.
    Vec grad_conjugate(const Vec& s) const { return solve_Q(s - c_); }

    double lambda_min_Q() const { return q_min_; }
    double lambda_max_Q() const { return q_max_; }

private:
    bool identity_ = true;
    Mat q_;
    Vec c_;
    Eigen::LLT<Mat> llt_;
    double q_min_ = 1.0;
    double q_max_ = 1.0;
};

/// min f(x) s.t. Tx + b in K. Projection instances use both identity
/// shortcuts with c = -x0 and b = 0.
struct ConicProgram {
    QuadraticObjective objective;
    bool T_identity = true;
    Mat T;
    Vec b;
    std::shared_ptr<const ConeOracle> cone;

    int n() const { return objective.n(); }
    int m() const { return static_cast<int>(b.size()); }
    Vec apply_T(const Vec& x) const { return T_identity ? x : Vec(T * x); }
    Vec apply_T_adjoint(const Vec& y) const { return T_identity ? y : Vec(T.transpose() * y); }
    double operator_norm_T() const;
    void validate() const;
};

ConicProgram make_projection_program(std::shared_ptr<const ConeOracle> cone, const Vec& x0);

enum class StepRule { Diminishing, ExactLineSearch, Lipschitz };

struct DFWConfig {
    double c_d = 0.0;      ///< > 0: explicit; <= 0 with auto_cd: resolved by doubling
    StepRule step_rule = StepRule::ExactLineSearch;
    double lipschitz_L = 0.0; ///< 0 -> derived as ||T||_op^2 / lambda_min(Q)
    double fw_gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iters = 100000;
    double max_seconds = std::numeric_limits<double>::infinity();
    bool record_trace = false;
    bool record_iterates = false;

    void validate() const;
};

enum class SolveStatus { Converged, IterationBudget, TimeBudget, Stalled };

struct SolveResult {
    SolveStatus status = SolveStatus::IterationBudget;
    bool feasible_found = false;
    Vec x_best;            ///< best-objective iterate with lambda_min >= -feas_tol
    double objective_best = 0.0;
    Vec y_last;
    Vec x_last;
    int iterations = 0;
    double fw_gap_last = 0.0;
    double lambda_min_last = 0.0;
    double c_d_used = 0.0;
    double solve_seconds = 0.0;
    SolveTrace trace;
};

/// c_D for projection instances: ||e|| ||e - x0|| (floored away from zero for
/// the degenerate x0 = e case).
double compute_cd_projection(const Vec& e, const Vec& x0);

/// c_D for a general positive definite quadratic: requires e_hat with
/// T e_hat = e in ri K and epsilon > 0 with T(e_hat/epsilon) + b in K.
double compute_cd_quadratic(const ConicProgram& program, const Vec& e_hat, double epsilon);

/// Closed-form FW subproblem over {s in K* : <e, s> <= c_D}:
/// t_opt = min(0, lambda_min(v)); s = 0 when t_opt = 0, otherwise a conjugate
/// vector at z = v - t_opt e rescaled so <e, s> = c_D.
std::pair<Vec, double> fw_subproblem(const ConeOracle& cone, const Vec& v, double c_d);

/// G = <-grad_h, s - y> >= 0; upper bound on the dual suboptimality.
inline double fw_gap(const Vec& grad_h, const Vec& y, const Vec& s) {
    return -grad_h.dot(s - y);
}

struct StepContext {
    const ConicProgram* program = nullptr;
    double lipschitz_L = 0.0;
};

double step_size(StepRule rule, int k, const Vec& grad_h, const Vec& d, const StepContext& ctx);

/// Dual objective h(y) = f*(T* y) + <b, y> of the compactified dual.
double dual_objective(const ConicProgram& program, const Vec& y);

/// The dual Frank-Wolfe loop. Starts at y0 = 0, maintains dual feasibility by
/// convex combinations, recovers primal iterates via grad f*, and stops when
/// the FW gap and primal feasibility tolerances hold simultaneously.
SolveResult solve(const ConicProgram& program, const DFWConfig& config);

struct AutoCdResult {
    SolveResult result;
    double c_d_used = 0.0;
    int doublings = 0;
    bool certified = false;
};

/// Runs solve with c_D = 1, 2, 4, ... until the returned pair carries a
/// zero-duality-gap certificate |f(x) + h(y)| <= cert_tol (1 + |f(x)|) with a
/// feasible x; gives up after 30 doublings.
AutoCdResult auto_cd(const ConicProgram& program, DFWConfig config, double cert_tol = 1e-6);

} // namespace hypercone
