#include "hypercone/dfw.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <sstream>

namespace hypercone {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}
} // namespace

// ---------------------------------------------------------------------------
// QuadraticObjective

QuadraticObjective QuadraticObjective::identity(Vec c) {
    QuadraticObjective o;
    o.identity_ = true;
    o.c_ = std::move(c);
    return o;
}

QuadraticObjective::QuadraticObjective(Mat Q, Vec c) : identity_(false), q_(std::move(Q)), c_(std::move(c)) {
    if (q_.rows() != q_.cols()) throw std::invalid_argument("QuadraticObjective: Q not square");
    if (q_.rows() != c_.size()) throw std::invalid_argument("QuadraticObjective: Q/c dimension mismatch");
    const double asym = (q_ - q_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, q_.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("QuadraticObjective: Q not symmetric within 1e-12");
    Eigen::SelfAdjointEigenSolver<Mat> es(q_, Eigen::EigenvaluesOnly);
    q_min_ = es.eigenvalues().minCoeff();
    q_max_ = es.eigenvalues().maxCoeff();
    if (!(q_min_ > 0.0))
        throw std::invalid_argument("QuadraticObjective: Q not positive definite (lambda_min = " +
                                    std::to_string(q_min_) + ")");
    llt_.compute(q_);
    if (llt_.info() != Eigen::Success)
        throw std::invalid_argument("QuadraticObjective: Cholesky factorization failed");
}

double QuadraticObjective::value(const Vec& x) const {
    return identity_ ? 0.5 * x.squaredNorm() + c_.dot(x) : 0.5 * x.dot(q_ * x) + c_.dot(x);
}

Vec QuadraticObjective::apply_Q(const Vec& x) const { return identity_ ? x : Vec(q_ * x); }

Vec QuadraticObjective::solve_Q(const Vec& r) const { return identity_ ? r : Vec(llt_.solve(r)); }

// ---------------------------------------------------------------------------
// ConicProgram

double ConicProgram::operator_norm_T() const {
    if (T_identity) return 1.0;
    Eigen::JacobiSVD<Mat> svd(T);
    return svd.singularValues()[0];
}

void ConicProgram::validate() const {
    if (!cone) throw std::invalid_argument("ConicProgram: missing cone");
    if (b.size() != cone->dim()) throw std::invalid_argument("ConicProgram: b dimension mismatch");
    if (T_identity) {
        if (objective.n() != cone->dim())
            throw std::invalid_argument("ConicProgram: identity T requires n == m");
    } else {
        if (T.rows() != cone->dim() || T.cols() != objective.n())
            throw std::invalid_argument("ConicProgram: T dimension mismatch");
    }
}

ConicProgram make_projection_program(std::shared_ptr<const ConeOracle> cone, const Vec& x0) {
    if (!cone) throw std::invalid_argument("make_projection_program: missing cone");
    if (x0.size() != cone->dim())
        throw std::invalid_argument("make_projection_program: point dimension mismatch");
    ConicProgram p;
    p.objective = QuadraticObjective::identity(-x0);
    p.T_identity = true;
    p.b = Vec::Zero(cone->dim());
    p.cone = std::move(cone);
    return p;
}

void DFWConfig::validate() const {
    if (!(fw_gap_tol > 0.0)) throw std::invalid_argument("DFWConfig: fw_gap_tol must be positive");
    if (!(feas_tol > 0.0)) throw std::invalid_argument("DFWConfig: feas_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("DFWConfig: max_iters must be >= 1");
}

// ---------------------------------------------------------------------------
// c_D

double compute_cd_projection(const Vec& e, const Vec& x0) {
    if (e.size() != x0.size()) throw std::invalid_argument("compute_cd_projection: dimension mismatch");
    return std::max(e.norm() * (e - x0).norm(), 1e-12);
}

double compute_cd_quadratic(const ConicProgram& program, const Vec& e_hat, double epsilon) {
    program.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("compute_cd_quadratic: epsilon must be positive");
    if (e_hat.size() != program.n())
        throw std::invalid_argument("compute_cd_quadratic: e_hat dimension mismatch");
    const Vec feas_point = e_hat / epsilon;
    const double lam = program.cone->lambda_min(program.apply_T(feas_point) + program.b);
    if (lam < -1e-8)
        throw std::invalid_argument("compute_cd_quadratic: e_hat/epsilon infeasible (lambda_min = " +
                                    std::to_string(lam) + ")");
    const Vec& c = program.objective.linear_term();
    const double cQc = c.dot(program.objective.solve_Q(c));
    const double radicand = (2.0 * program.objective.value(feas_point) + cQc) *
                            program.objective.lambda_max_Q();
    return e_hat.norm() * std::sqrt(std::max(radicand, 0.0));
}

// ---------------------------------------------------------------------------
// subproblem, gap, step

std::pair<Vec, double> fw_subproblem(const ConeOracle& cone, const Vec& v, double c_d) {
    if (!(c_d > 0.0)) throw std::invalid_argument("fw_subproblem: c_D must be positive");
    const double lam = cone.lambda_min(v);
    const double t_opt = std::min(0.0, lam);
    if (t_opt == 0.0) return {Vec::Zero(v.size()), 0.0};

    const Vec z = v - t_opt * cone.interior_point();
    const auto candidates = cone.conjugate_candidates(z);
    // all candidates solve the subproblem in exact arithmetic; pick the best
    // linear objective among them
    const Vec& e = cone.interior_point();
    double best_val = std::numeric_limits<double>::infinity();
    Vec best;
    for (const Vec& s_hat : candidates) {
        const double es = e.dot(s_hat);
        if (es <= 0.0) continue;
        const double val = v.dot(s_hat) / es;
        if (val < best_val) {
            best_val = val;
            best = s_hat * (c_d / es);
        }
    }
    if (best.size() == 0)
        throw NumericalError("fw_subproblem: oracle violation, <e, s> <= 0 for every candidate");
    return {std::move(best), t_opt};
}

double step_size(StepRule rule, int k, const Vec& grad_h, const Vec& d, const StepContext& ctx) {
    switch (rule) {
        case StepRule::Diminishing:
            return 2.0 / (k + 2);
        case StepRule::ExactLineSearch: {
            const double num = -grad_h.dot(d);
            if (!ctx.program) throw std::invalid_argument("step_size: exact rule needs a program");
            const Vec w = ctx.program->apply_T_adjoint(d);
            const double curv = w.dot(ctx.program->objective.solve_Q(w));
            if (curv <= 0.0) return 1.0; // zero curvature along d
            return std::clamp(num / curv, 0.0, 1.0);
        }
        case StepRule::Lipschitz: {
            const double num = -grad_h.dot(d);
            const double dn2 = d.squaredNorm();
            if (dn2 == 0.0) return 0.0;
            double L = ctx.lipschitz_L;
            if (L <= 0.0) {
                if (!ctx.program) throw std::invalid_argument("step_size: lipschitz rule needs L or a program");
                const double tn = ctx.program->operator_norm_T();
                L = tn * tn / ctx.program->objective.lambda_min_Q();
            }
            return std::clamp(num / (L * dn2), 0.0, 1.0);
        }
    }
    return 1.0;
}

double dual_objective(const ConicProgram& program, const Vec& y) {
    const Vec s = program.apply_T_adjoint(y) - program.objective.linear_term();
    return 0.5 * s.dot(program.objective.solve_Q(s)) + program.b.dot(y);
}

// ---------------------------------------------------------------------------
// solve

SolveResult solve(const ConicProgram& program, const DFWConfig& config) {
    program.validate();
    config.validate();
    if (!(config.c_d > 0.0))
        throw std::invalid_argument("solve: c_D must be resolved (> 0); use auto_cd or compute_cd_*");

    const auto t0 = Clock::now();
    const int m = program.m();

    StepContext ctx{&program, config.lipschitz_L};
    if (config.step_rule == StepRule::Lipschitz && ctx.lipschitz_L <= 0.0) {
        const double tn = program.operator_norm_T();
        ctx.lipschitz_L = tn * tn / program.objective.lambda_min_Q();
    }

    SolveResult res;
    res.c_d_used = config.c_d;
    Vec y = Vec::Zero(m);

    int zero_steps = 0;
    Vec x, v, s;
    double gap = 0.0, lam = 0.0;
    int k = 0;
    for (; k < config.max_iters; ++k) {
        x = program.objective.grad_conjugate(program.apply_T_adjoint(y));
        v = program.apply_T(x) + program.b;
        lam = program.cone->lambda_min(v);

        double t_opt;
        if (lam >= 0.0) {
            s = Vec::Zero(m);
            t_opt = 0.0;
        } else {
            try {
                std::tie(s, t_opt) = fw_subproblem(*program.cone, v, config.c_d);
            } catch (const NumericalError& err) {
                std::ostringstream os;
                os << "solve: subproblem failure at iteration " << k << ": " << err.what();
                throw NumericalError(os.str());
            }
        }

        gap = fw_gap(v, y, s);
        const double obj = program.objective.value(x);
        const bool feasible = lam >= -config.feas_tol;
        if (feasible && (!res.trace.best_feasible.present || obj < res.trace.best_feasible.objective)) {
            res.trace.best_feasible.present = true;
            res.trace.best_feasible.iteration = k;
            res.trace.best_feasible.x = x;
            res.trace.best_feasible.objective = obj;
        }
        if (config.record_iterates) {
            res.trace.iterates_x.push_back(x);
            res.trace.iterates_y.push_back(y);
        }

        const bool converged = gap <= config.fw_gap_tol && feasible;
        const bool out_of_time = seconds_since(t0) > config.max_seconds;

        double alpha = 0.0;
        if (!converged && !out_of_time) {
            const Vec d = s - y;
            alpha = step_size(config.step_rule, k, v, d, ctx);
            if (alpha == 0.0 && !feasible) {
                if (++zero_steps > 500) {
                    if (config.record_trace)
                        res.trace.records.push_back({k, gap, obj, lam, alpha, seconds_since(t0)});
                    res.status = SolveStatus::Stalled;
                    ++k;
                    break;
                }
            } else {
                zero_steps = 0;
            }
            y += alpha * d;
        }

        if (config.record_trace)
            res.trace.records.push_back({k, gap, obj, lam, alpha, seconds_since(t0)});

        if (converged) {
            res.status = SolveStatus::Converged;
            ++k;
            break;
        }
        if (out_of_time) {
            res.status = SolveStatus::TimeBudget;
            ++k;
            break;
        }
    }
    if (res.status != SolveStatus::Converged && res.status != SolveStatus::TimeBudget &&
        res.status != SolveStatus::Stalled)
        res.status = SolveStatus::IterationBudget;

    res.iterations = k;
    res.fw_gap_last = gap;
    res.lambda_min_last = lam;
    res.y_last = y;
    res.x_last = x;
    res.feasible_found = res.trace.best_feasible.present;
    if (res.feasible_found) {
        res.x_best = res.trace.best_feasible.x;
        res.objective_best = res.trace.best_feasible.objective;
    } else {
        res.x_best = x;
        res.objective_best = program.objective.value(x);
    }
    res.solve_seconds = seconds_since(t0);
    return res;
}

AutoCdResult auto_cd(const ConicProgram& program, DFWConfig config, double cert_tol) {
    AutoCdResult out;
    double c_d = 1.0;
    for (int i = 0; i < 30; ++i) {
        config.c_d = c_d;
        out.result = solve(program, config);
        out.c_d_used = c_d;
        out.doublings = i;
        if (out.result.feasible_found) {
            const double f = out.result.objective_best;
            const double h = dual_objective(program, out.result.y_last);
            if (std::abs(f + h) <= cert_tol * (1.0 + std::abs(f))) {
                out.certified = true;
                return out;
            }
        }
        c_d *= 2.0;
    }
    return out; // certified stays false; caller decides how to surface it
}

} // namespace hypercone
