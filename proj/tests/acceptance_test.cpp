// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hypercone/agm.hpp"
#include "hypercone/cones.hpp"
#include "hypercone/dfw.hpp"
#include "hypercone/harness.hpp"
#include "oracles.hpp"

using namespace hypercone;
namespace oracle = hypercone::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    std::string label;
    std::function<std::string()> run; // empty string = pass, otherwise failure detail
};

std::shared_ptr<HyperbolicityCone> prop36_cone(bool isometric = false) {
    std::vector<Vec> factors(4, Vec(3));
    factors[0] << 1, 1, 1;
    factors[1] << 1, -1, 1;
    factors[2] << 2, -1, -1;
    factors[3] << 1, 2, -1;
    Vec e(3);
    e << 0, 0, 1;
    return std::make_shared<HyperbolicityCone>(
        HyperbolicForm(PolynomialForm::linear_factors(factors), e, isometric));
}

std::string check_spectrum(const HyperbolicForm& hp, const Vec& z, const Vec& expected,
                           double tol) {
    const EigenSpectrum s = eigenvalues(hp, z);
    for (int i = 0; i < expected.size(); ++i) {
        if (std::abs(s.values[i] - expected[i]) > tol) {
            std::ostringstream os;
            os << "eigenvalue " << i << " = " << s.values[i] << ", expected " << expected[i];
            return os.str();
        }
    }
    return "";
}

double binom(int n, int k) {
    double b = 1.0;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::round(b);
}

Vec well_separated_point(const HyperbolicForm& hp, SplitMix64& gen, double min_gap) {
    while (true) {
        const Vec x = standard_normal_vector(gen, hp.n());
        const Vec lam = eigenvalues(hp, x).values;
        bool ok = true;
        for (int i = 0; i + 1 < lam.size(); ++i)
            if (lam[i] - lam[i + 1] < min_gap) ok = false;
        if (ok) return x;
    }
}

// ---------------------------------------------------------------------------

std::string criterion1() {
    const auto cone = prop36_cone();
    Vec z(3), expected(4);
    z << 3, 1, 0;
    expected << 4, 2, -5, -5;
    std::string err = check_spectrum(cone->form(), z, expected, 1e-9);
    if (!err.empty()) return "z=(3,1,0): " + err;

    Vec zy(3), expected2(4);
    zy << 2, 1, 0;
    expected2 << 3, 1, -3, -4;
    err = check_spectrum(cone->form(), zy, expected2, 1e-9);
    if (!err.empty()) return "z+y=(2,1,0): " + err;

    const auto t0 = Clock::now();
    (void)eigenvalues(cone->form(), z);
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms >= 1.0) return "eigenvalue call took " + std::to_string(ms) + " ms (>= 1 ms)";
    return "";
}

std::string criterion2() {
    const auto t0 = Clock::now();
    const auto cone = prop36_cone();
    Vec x0(3);
    x0 << 1, 1, 0;

    auto program = make_projection_program(cone, x0);
    DFWConfig cfg;
    cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
    cfg.fw_gap_tol = 1e-12;
    const SolveResult res = solve(program, cfg);
    const double dist = (res.x_best - x0).norm();
    if (std::abs(dist - 1.2421) > 1e-3)
        return "Euclidean distance " + std::to_string(dist) + " not within 1e-3 of 1.2421";

    const auto iso = prop36_cone(/*isometric=*/true); // caller-asserted for the demonstration
    const double f3 = isometric_dist(iso->form(), x0);
    if (std::abs(f3 - std::sqrt(10.0)) > 1e-6)
        return "formula value " + std::to_string(f3) + " not within 1e-6 of sqrt(10)";

    const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
    if (sec >= 1.0) return "runtime " + std::to_string(sec) + " s (>= 1 s)";
    return "";
}

std::string criterion3() {
    auto cone = orthant_as_hyperbolicity_cone(10);
    InstanceSpec spec{cone, 2024, 100, -1e-4};
    const auto points = gen_instances(spec);

    for (std::size_t i = 0; i < points.size(); ++i) {
        auto program = make_projection_program(cone, points[i]);
        DFWConfig cfg;
        cfg.c_d = compute_cd_projection(cone->interior_point(), points[i]);
        cfg.fw_gap_tol = 1e-9; // margin under the required 1e-8
        cfg.max_iters = 500000;
        cfg.max_seconds = 2.0;
        const SolveResult res = solve(program, cfg);
        std::ostringstream os;
        os << "instance " << i << ": ";
        if (res.solve_seconds > 2.0) {
            os << "solve took " << res.solve_seconds << " s (> 2 s)";
            return os.str();
        }
        if (res.status != SolveStatus::Converged || res.fw_gap_last > 1e-8) {
            os << "terminated with gap " << res.fw_gap_last;
            return os.str();
        }
        const Vec closed = points[i].cwiseMax(0.0);
        const double err = (res.x_best - closed).cwiseAbs().maxCoeff();
        if (err > 1e-4) {
            os << "inf-norm error " << err << " vs closed form";
            return os.str();
        }
    }
    return "";
}

std::string criterion4() {
    const PolynomialForm p = PolynomialForm::sparse(3, {{{1, 1, 1}, 1.0}});
    const Vec e = Vec::Ones(3);
    SplitMix64 gen(404);
    for (int rep = 0; rep < 50; ++rep) {
        const Vec x = standard_normal_vector(gen, 3);
        const DirDerivCoeffs c = dir_deriv_coeffs(p, e, x);
        const double expected = x[0] * x[1] + x[0] * x[2] + x[1] * x[2];
        if (std::abs(c.values[1] - expected) > 1e-10 * std::max(1.0, std::abs(expected)))
            return "p^(1) mismatch at repetition " + std::to_string(rep);

        for (int i = 1; i <= 2; ++i) {
            double ifact = i == 2 ? 2.0 : 1.0;
            const Vec g = grad_dir_deriv(p, e, x, i) / ifact;
            const Vec fd = oracle::finite_diff_gradient(
                [&](const Vec& y) { return dir_deriv_coeffs(p, e, y).values[i]; }, x, 1e-6);
            if ((g - fd).norm() > 1e-5 * (1.0 + g.norm()))
                return "coefficient-map gradient mismatch at order " + std::to_string(i);
        }
    }
    return "";
}

std::string criterion5() {
    SplitMix64 gen(505);
    for (int n = 1; n <= 8; ++n) {
        for (int k = 1; k <= n; ++k) {
            const PolynomialForm expanded = expand_elesym_sparse(n, k);
            for (int rep = 0; rep < 100; ++rep) {
                const Vec x = standard_normal_vector(gen, n);
                const double a = elesym_eval(n, k, x);
                const double b = expanded.eval(x);
                if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(b))) {
                    std::ostringstream os;
                    os << "value mismatch at n=" << n << " k=" << k;
                    return os.str();
                }
                const Vec ga = elesym_grad(n, k, x);
                const Vec gb = expanded.grad(x);
                if ((ga - gb).norm() > 1e-10 * (1.0 + gb.norm())) {
                    std::ostringstream os;
                    os << "gradient mismatch at n=" << n << " k=" << k;
                    return os.str();
                }
            }
        }
    }
    for (int n = 1; n <= 30; ++n)
        for (int k = 1; k <= n; ++k)
            if (elesym_eval(n, k, Vec::Ones(n)) != binom(n, k)) {
                std::ostringstream os;
                os << "sigma_{" << n << "," << k << "}(1) != C(n,k) exactly";
                return os.str();
            }
    return "";
}

std::string criterion6() {
    auto cone = derivative_relaxation(10, 1); // sigma_{10,9}
    InstanceSpec spec{cone, 606, 10, -1e-4};
    const auto points = gen_instances(spec);

    std::ostringstream detail;
    bool ok = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto program = make_projection_program(cone, points[i]);
        DFWConfig cfg;
        cfg.c_d = compute_cd_projection(cone->interior_point(), points[i]);
        cfg.fw_gap_tol = 1e-4;
        cfg.feas_tol = 1e-8;
        cfg.max_iters = 5000;
        cfg.max_seconds = 10.0;
        cfg.record_trace = true;
        cfg.record_iterates = true;
        const SolveResult res = solve(program, cfg);

        if (res.status != SolveStatus::Converged) {
            ok = false;
            detail << "instance " << i << ": gap " << res.fw_gap_last << " after "
                   << res.iterations << " iterations (needs <= 1e-4 within 5000); ";
            continue;
        }

        // high-accuracy proxy for the optimum
        DFWConfig hi = cfg;
        hi.fw_gap_tol = 1e-9;
        hi.max_iters = 200000;
        hi.max_seconds = 20.0;
        hi.record_trace = false;
        hi.record_iterates = false;
        const SolveResult ref = solve(program, hi);
        const Vec& x_final = ref.x_best;

        for (std::size_t k = 0; k < res.trace.iterates_x.size(); ++k) {
            const double gap = std::max(res.trace.records[k].fw_gap, 0.0);
            const double lhs = (res.trace.iterates_x[k] - x_final).norm();
            if (lhs > std::sqrt(2.0) * std::sqrt(gap) + 1e-6) {
                ok = false;
                detail << "instance " << i << ": distance bound violated at k=" << k << "; ";
                break;
            }
        }
    }
    return ok ? "" : detail.str();
}

std::string criterion7() {
    auto cone = derivative_relaxation(20, 10); // sigma_{20,10}
    InstanceSpec spec{cone, 707, 1, -1e-4};
    const auto points = gen_instances(spec);
    const Vec& x0 = points[0];

    const EigenSpectrum s0 = eigenvalues(cone->form(), x0);
    if (s0.scale_used <= 1.0)
        return "scaling guard not exercised (||x0|| = " + std::to_string(x0.norm()) + ")";

    auto program = make_projection_program(cone, x0);
    DFWConfig cfg;
    cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
    cfg.fw_gap_tol = 1e-14; // run the full budget
    cfg.max_iters = 50000000;
    cfg.max_seconds = 10.0;
    cfg.record_trace = true;
    const SolveResult res = solve(program, cfg);

    for (const auto& rec : res.trace.records)
        if (!std::isfinite(rec.fw_gap) || !std::isfinite(rec.primal_obj) ||
            !std::isfinite(rec.lambda_min))
            return "non-finite trace entry at k=" + std::to_string(rec.k);

    // min-so-far gap at log-spaced checkpoints must strictly decrease
    const int total = static_cast<int>(res.trace.records.size());
    if (total < 100) return "only " + std::to_string(total) + " iterations recorded";
    std::vector<double> min_gap(total);
    double running = std::numeric_limits<double>::infinity();
    for (int k = 0; k < total; ++k) {
        running = std::min(running, res.trace.records[k].fw_gap);
        min_gap[k] = running;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double frac : {0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0}) {
        const int k = std::min(total - 1, static_cast<int>(frac * total));
        if (min_gap[k] >= prev) {
            std::ostringstream os;
            os << "min-so-far gap not strictly decreasing at checkpoint k=" << k << " ("
               << min_gap[k] << " vs " << prev << ")";
            return os.str();
        }
        prev = min_gap[k];
    }

    std::ostringstream csv;
    const bool has_feasible = export_convergence(res.trace, 0.5 * x0.squaredNorm(), csv);
    if (!has_feasible) return "no feasible iterate in the trace";
    std::istringstream in(csv.str());
    std::string line, last;
    std::getline(in, line);
    if (line != "k,fw_gap,rel_obj") return "unexpected convergence header";
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    const auto pos = last.rfind(',');
    if (pos == std::string::npos || pos + 1 >= last.size())
        return "rel_obj column empty on the final row";
    return "";
}

std::string criterion8() {
    for (double p : {1.3, 3.0}) {
        PCone cone(p, 100);
        auto shared_cone = std::make_shared<PCone>(cone);
        InstanceSpec spec{shared_cone, 808, 30, -1e-4};
        const auto points = gen_instances(spec);

        for (std::size_t i = 0; i < points.size(); ++i) {
            // conjugate-vector identities at the shifted boundary point
            const Vec& x = points[i];
            const Vec z = x - cone.lambda_min(x) * cone.interior_point();
            const Vec s = cone.conjugate_vector(z);
            if (std::abs(s.dot(z)) > 1e-8 * std::max(1.0, s.norm() * z.norm()))
                return "orthogonality failure at p=" + std::to_string(p);
            if (cone.dual_lambda_min(s) < -1e-10)
                return "dual membership failure at p=" + std::to_string(p);

            auto program = make_projection_program(shared_cone, x);
            DFWConfig cfg;
            cfg.c_d = compute_cd_projection(cone.interior_point(), x);
            cfg.fw_gap_tol = 1e-8;
            cfg.max_iters = 400000;
            cfg.max_seconds = 5.0;
            const SolveResult res = solve(program, cfg);
            if (res.solve_seconds > 5.0)
                return "solve exceeded 5 s at p=" + std::to_string(p);
            const Vec reference = oracle::pcone_project_oracle(x, p);
            const double err = (res.x_best - reference).cwiseAbs().maxCoeff();
            if (err > 1e-3) {
                std::ostringstream os;
                os << "p=" << p << " instance " << i << ": inf-norm error " << err
                   << " vs KKT-bisection oracle";
                return os.str();
            }
        }
    }
    return "";
}

std::string criterion9() {
    SplitMix64 gen(909);
    auto cone = std::make_shared<NonnegativeOrthant>(6);
    const Vec e = cone->interior_point();

    for (int inst = 0; inst < 20; ++inst) {
        // random SPD objective
        Mat a(6, 6);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) a(r, c) = gen.next_normal();
        Mat Q = a.transpose() * a / 6.0 + 0.5 * Mat::Identity(6, 6);
        const Vec lin = standard_normal_vector(gen, 6);

        ConicProgram program;
        program.objective = QuadraticObjective(Q, lin);
        program.b = Vec::Zero(6);
        program.cone = cone;
        Vec e_hat;
        if (inst % 2 == 0) {
            program.T_identity = true;
            e_hat = e;
        } else {
            Mat T = Mat::Identity(6, 6);
            for (int r = 0; r < 6; ++r)
                for (int c = 0; c < 6; ++c) T(r, c) += 0.2 * gen.next_normal();
            program.T_identity = false;
            program.T = T;
            e_hat = T.colPivHouseholderQr().solve(e);
        }

        const double cd = compute_cd_quadratic(program, e_hat, 1.0);
        DFWConfig cfg;
        cfg.c_d = cd;
        cfg.fw_gap_tol = 1e-9;
        cfg.feas_tol = 1e-9;
        cfg.max_iters = 300000;
        const SolveResult res = solve(program, cfg);
        if (!res.feasible_found)
            return "instance " + std::to_string(inst) + ": no feasible iterate";
        const double ey = e.dot(res.y_last);
        if (ey > cd + 1e-8) {
            std::ostringstream os;
            os << "instance " << inst << ": <e, y> = " << ey << " exceeds c_D = " << cd;
            return os.str();
        }

        DFWConfig auto_cfg = cfg;
        auto_cfg.c_d = 0.0;
        const AutoCdResult ac = auto_cd(program, auto_cfg, 1e-6);
        if (!ac.certified)
            return "instance " + std::to_string(inst) + ": auto_cd failed to certify";
        const double f = ac.result.objective_best;
        const double h = dual_objective(program, ac.result.y_last);
        if (std::abs(f + h) > 1e-6 * (1.0 + std::abs(f)))
            return "instance " + std::to_string(inst) + ": certificate residual " +
                   std::to_string(std::abs(f + h));
    }
    return "";
}

std::string criterion10() {
    SplitMix64 gen(1010);
    const HyperbolicForm product(PolynomialForm::elesym(10, 10), Vec::Ones(10));
    const HyperbolicForm sigma(PolynomialForm::elesym(10, 9), Vec::Ones(10));
    for (const HyperbolicForm* hp : {&product, &sigma}) {
        for (double mu : {1e-1, 1e-3}) {
            SmoothingConfig cfg;
            cfg.mu = mu;
            for (int rep = 0; rep < 50; ++rep) {
                const Vec x = well_separated_point(*hp, gen, 0.12);
                const Vec g = smoothed_grad(*hp, x, cfg);
                const Vec fd = oracle::finite_diff_gradient(
                    [&](const Vec& y) { return smoothed_value(*hp, y, cfg); }, x, 1e-6);
                if ((g - fd).norm() > 1e-4 * (1.0 + g.norm())) {
                    std::ostringstream os;
                    os << "mismatch at mu=" << mu << " rep=" << rep << " (err "
                       << (g - fd).norm() / (1.0 + g.norm()) << ")";
                    return os.str();
                }
            }
        }
    }
    return "";
}

std::string criterion11() {
    auto cone = orthant_as_hyperbolicity_cone(10);
    InstanceSpec spec{cone, 1111, 10, -1e-4};
    const auto points = gen_instances(spec);

    std::vector<ReferenceEntry> reference;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec proj = points[i].cwiseMax(0.0);
        reference.push_back({static_cast<int>(i), 0.5 * (proj - points[i]).squaredNorm(), 10.0});
    }
    BenchConfig cfg;
    cfg.error_levels = {1.0};
    cfg.solver.fw_gap_tol = 1e-9;
    cfg.solver.max_iters = 300000;
    const auto sweep = run_cd_sensitivity(cone, points, cfg, {1, 2, 4, 8, 16, 100}, &reference);
    for (const auto& [mult, report] : sweep) {
        if (report.levels.front().success_pct < 100.0) {
            std::ostringstream os;
            os << "multiplier " << mult << ": success " << report.levels.front().success_pct
               << "% at E=1%";
            return os.str();
        }
    }
    return "";
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "eigenvalue fixture (Prop. 3.6 polynomial)", criterion1},
        {2, "distance fixture (1.2421 / sqrt(10) divergence)", criterion2},
        {3, "orthant oracle equivalence, 100 instances", criterion3},
        {4, "directional-derivative correctness", criterion4},
        {5, "elementary-symmetric equivalence", criterion5},
        {6, "derivative-cone solve (sigma_{10,9})", criterion6},
        {7, "large-polynomial smoke (sigma_{20,10})", criterion7},
        {8, "p-cone correctness vs KKT oracle", criterion8},
        {9, "c_D validity and auto doubling", criterion9},
        {10, "smoothed gradient vs finite differences", criterion10},
        {11, "c_D sensitivity protocol", criterion11},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        if (detail.empty()) {
            std::printf("[PASS] criterion %2d: %s\n", c.id, c.label.c_str());
        } else {
            std::printf("[FAIL] criterion %2d: %s — %s\n", c.id, c.label.c_str(), detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
