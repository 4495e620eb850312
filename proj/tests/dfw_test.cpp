#include <doctest.h>

#include <cmath>

#include "hypercone/dfw.hpp"
#include "hypercone/rng.hpp"

using namespace hypercone;

namespace {

std::shared_ptr<HyperbolicityCone> prop36_cone() {
    std::vector<Vec> factors(4, Vec(3));
    factors[0] << 1, 1, 1;
    factors[1] << 1, -1, 1;
    factors[2] << 2, -1, -1;
    factors[3] << 1, 2, -1;
    Vec e(3);
    e << 0, 0, 1;
    return std::make_shared<HyperbolicityCone>(
        HyperbolicForm(PolynomialForm::linear_factors(factors), e));
}

Mat random_spd(int n, SplitMix64& gen, double shift = 0.5) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = gen.next_normal();
    return Mat(a.transpose() * a / n + shift * Mat::Identity(n, n));
}

} // namespace

TEST_CASE("QuadraticObjective validation and conjugate gradient") {
    SUBCASE("identity shortcut recovers x0 at y = 0") {
        Vec x0(2);
        x0 << 3, 1;
        auto obj = QuadraticObjective::identity(Vec(-x0));
        CHECK((obj.grad_conjugate(Vec::Zero(2)) - x0).norm() == 0.0);
    }
    SUBCASE("diagonal example") {
        Mat Q = Vec((Vec(2) << 2, 4).finished()).asDiagonal();
        QuadraticObjective obj(Q, Vec::Zero(2));
        const Vec x = obj.grad_conjugate((Vec(2) << 2, 4).finished());
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == doctest::Approx(1.0));
    }
    SUBCASE("residual identity for a random SPD matrix") {
        SplitMix64 gen(1);
        const Mat Q = random_spd(6, gen);
        QuadraticObjective obj(Q, standard_normal_vector(gen, 6));
        const Vec s = standard_normal_vector(gen, 6);
        const Vec x = obj.grad_conjugate(s);
        CHECK((obj.apply_Q(x) + obj.linear_term() - s).norm() <= 1e-10 * (1.0 + s.norm()));
    }
    SUBCASE("asymmetric and indefinite rejections") {
        Mat bad(2, 2);
        bad << 1, 0.5, 0, 1;
        CHECK_THROWS_AS(QuadraticObjective(bad, Vec::Zero(2)), std::invalid_argument);
        Mat indef(2, 2);
        indef << 1, 0, 0, -1;
        CHECK_THROWS_AS(QuadraticObjective(indef, Vec::Zero(2)), std::invalid_argument);
    }
}

TEST_CASE("compute_cd_projection") {
    Vec e(2), x0(2);
    e << 1, 1;
    x0 << 3, 1;
    CHECK(compute_cd_projection(e, x0) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(compute_cd_projection(e, e) == doctest::Approx(1e-12)); // degenerate floor
    SplitMix64 gen(2);
    const double cd = compute_cd_projection(Vec::Ones(10), standard_normal_vector(gen, 10));
    CHECK(cd > 0.0);
    CHECK(std::isfinite(cd));
}

TEST_CASE("compute_cd_quadratic") {
    auto cone = std::make_shared<NonnegativeOrthant>(4);
    const Vec e = cone->interior_point();

    SUBCASE("projection specialization") {
        SplitMix64 gen(3);
        const Vec x0 = standard_normal_vector(gen, 4);
        auto program = make_projection_program(cone, x0);
        const double got = compute_cd_quadratic(program, e, 1.0);
        const double expected =
            e.norm() * std::sqrt(2.0 * program.objective.value(e) + x0.squaredNorm());
        CHECK(got == doctest::Approx(expected));
        CHECK(got >= compute_cd_projection(e, x0) - 1e-12); // a bound at least as large
    }
    SUBCASE("zero linear term gives ||e||^2") {
        ConicProgram program;
        program.objective = QuadraticObjective::identity(Vec::Zero(4));
        program.b = Vec::Zero(4);
        program.cone = cone;
        CHECK(compute_cd_quadratic(program, e, 1.0) == doctest::Approx(e.squaredNorm()));
    }
    SUBCASE("infeasible anchor is rejected") {
        ConicProgram program;
        program.objective = QuadraticObjective::identity(Vec::Zero(4));
        program.b = Vec::Zero(4);
        program.cone = cone;
        Vec outside(4);
        outside << -1, 1, 1, 1;
        CHECK_THROWS_AS(compute_cd_quadratic(program, outside, 1.0), std::invalid_argument);
    }
}

TEST_CASE("fw_subproblem") {
    SUBCASE("feasible point returns zero") {
        NonnegativeOrthant orthant(2);
        const auto [s, t] = fw_subproblem(orthant, Vec::Ones(2), 3.0);
        CHECK(t == 0.0);
        CHECK(s.norm() == 0.0);
    }
    SUBCASE("orthant worked example") {
        NonnegativeOrthant orthant(2);
        Vec v(2);
        v << 1, -2;
        const auto [s, t] = fw_subproblem(orthant, v, 3.0);
        CHECK(t == doctest::Approx(-2.0));
        CHECK(s[0] == doctest::Approx(0.0));
        CHECK(s[1] == doctest::Approx(3.0));
    }
    SUBCASE("p-cone worked example") {
        PCone cone(2.0, 2);
        Vec v(3);
        v << 0, 3, 4;
        const auto [s, t] = fw_subproblem(cone, v, 1.0);
        CHECK(t == doctest::Approx(-5.0));
        CHECK(s.dot(cone.interior_point()) == doctest::Approx(1.0));
        const Vec z = v - t * cone.interior_point();
        CHECK(std::abs(s.dot(z)) <= 1e-10);
    }
    SUBCASE("complementarity on random infeasible points") {
        SplitMix64 gen(5);
        NonnegativeOrthant orthant(8);
        for (int rep = 0; rep < 50; ++rep) {
            Vec v = standard_normal_vector(gen, 8);
            if (orthant.lambda_min(v) >= 0.0) continue;
            const auto [s, t] = fw_subproblem(orthant, v, 2.5);
            const Vec z = v - t * orthant.interior_point();
            CHECK(std::abs(s.dot(z)) <= 1e-8 * std::max(1.0, s.norm() * z.norm()));
            CHECK(s.dot(orthant.interior_point()) == doctest::Approx(2.5));
        }
    }
}

TEST_CASE("step_size rules") {
    auto cone = std::make_shared<NonnegativeOrthant>(2);
    SplitMix64 gen(6);
    auto program = make_projection_program(cone, standard_normal_vector(gen, 2));
    StepContext ctx{&program, 0.0};
    Vec g(2), d(2);
    g << 1, 0;
    d << 0, 1;

    CHECK(step_size(StepRule::Diminishing, 0, g, d, ctx) == doctest::Approx(1.0));
    CHECK(step_size(StepRule::Diminishing, 2, g, d, ctx) == doctest::Approx(0.5));

    // nondescent direction clamps to zero under exact line search
    Vec ascent(2);
    ascent << 1, 0;
    CHECK(step_size(StepRule::ExactLineSearch, 0, g, ascent, ctx) == doctest::Approx(0.0));

    // lipschitz rule with identity data: L = 1, alpha = -<g,d>/||d||^2 clamped
    Vec descent(2);
    descent << -1, 0;
    CHECK(step_size(StepRule::Lipschitz, 0, g, descent, ctx) == doctest::Approx(1.0));
}

TEST_CASE("solve: projection fixtures") {
    SUBCASE("interior point converges immediately") {
        auto cone = std::make_shared<NonnegativeOrthant>(3);
        Vec x0(3);
        x0 << 1, 2, 3;
        auto program = make_projection_program(cone, x0);
        DFWConfig cfg;
        cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
        const SolveResult res = solve(program, cfg);
        CHECK(res.status == SolveStatus::Converged);
        CHECK(res.iterations == 1);
        CHECK((res.x_best - x0).norm() <= 1e-12);
    }
    SUBCASE("orthant via the hyperbolic product polynomial") {
        auto cone = orthant_as_hyperbolicity_cone(2);
        Vec x0(2);
        x0 << -1, 2;
        auto program = make_projection_program(cone, x0);
        DFWConfig cfg;
        cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
        cfg.fw_gap_tol = 1e-10;
        const SolveResult res = solve(program, cfg);
        CHECK(res.status == SolveStatus::Converged);
        CHECK((res.x_best - (Vec(2) << 0, 2).finished()).cwiseAbs().maxCoeff() <= 1e-4);
    }
    SUBCASE("distance fixture") {
        auto cone = prop36_cone();
        Vec x0(3);
        x0 << 1, 1, 0;
        auto program = make_projection_program(cone, x0);
        DFWConfig cfg;
        cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
        cfg.fw_gap_tol = 1e-12;
        const SolveResult res = solve(program, cfg);
        CHECK(res.status == SolveStatus::Converged);
        CHECK(std::abs((res.x_best - x0).norm() - 1.2421) <= 1e-3);
    }
}

TEST_CASE("solve: per-iteration invariants") {
    SplitMix64 gen(7);
    auto cone = std::make_shared<NonnegativeOrthant>(6);
    Vec x0 = standard_normal_vector(gen, 6);
    while (cone->lambda_min(x0) > -0.5) x0 = standard_normal_vector(gen, 6);
    auto program = make_projection_program(cone, x0);

    DFWConfig cfg;
    cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
    cfg.fw_gap_tol = 1e-10;
    cfg.record_trace = true;
    cfg.record_iterates = true;
    const SolveResult res = solve(program, cfg);
    CHECK(res.status == SolveStatus::Converged);

    SUBCASE("gap nonnegativity") {
        for (const auto& rec : res.trace.records) CHECK(rec.fw_gap >= -1e-12);
    }
    SUBCASE("dual feasibility of every iterate") {
        for (const Vec& y : res.trace.iterates_y) {
            CHECK(cone->dual_lambda_min(y) >= -1e-10);
            CHECK(y.dot(cone->interior_point()) <= cfg.c_d + 1e-10);
        }
    }
    SUBCASE("primal recovery identity") {
        for (std::size_t i = 0; i < res.trace.iterates_x.size(); ++i) {
            const Vec& x = res.trace.iterates_x[i];
            const Vec& y = res.trace.iterates_y[i];
            CHECK((x + program.objective.linear_term() - y).norm() <= 1e-10 * (1.0 + y.norm()));
        }
    }
    SUBCASE("best feasible objective is monotone along the trace") {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& rec : res.trace.records) {
            if (rec.lambda_min >= -cfg.feas_tol) best = std::min(best, rec.primal_obj);
        }
        CHECK(res.trace.best_feasible.present);
        CHECK(res.trace.best_feasible.objective == doctest::Approx(best));
    }
    SUBCASE("primal distance bound from the gap") {
        // against the final high-accuracy solution as the optimum proxy
        const Vec x_final = res.x_best;
        for (std::size_t i = 0; i < res.trace.iterates_x.size(); ++i) {
            const double gap = std::max(res.trace.records[i].fw_gap, 0.0);
            CHECK((res.trace.iterates_x[i] - x_final).norm() <=
                  std::sqrt(2.0) * std::sqrt(gap) + 1e-6);
        }
    }
}

TEST_CASE("solve: rate diagnostic with diminishing steps") {
    SplitMix64 gen(8);
    auto cone = std::make_shared<NonnegativeOrthant>(10);
    Vec x0 = standard_normal_vector(gen, 10);
    while (cone->lambda_min(x0) > -1e-4) x0 = standard_normal_vector(gen, 10);
    auto program = make_projection_program(cone, x0);
    DFWConfig cfg;
    cfg.c_d = compute_cd_projection(cone->interior_point(), x0);
    cfg.step_rule = StepRule::Diminishing;
    cfg.fw_gap_tol = 1e-16; // run the full horizon
    cfg.max_iters = 2001;
    cfg.record_trace = true;
    const SolveResult res = solve(program, cfg);
    REQUIRE(res.trace.records.size() >= 2001);
    const double gap20 = res.trace.records[20].fw_gap;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& rec : res.trace.records)
        if (rec.k <= 2000) min_gap = std::min(min_gap, rec.fw_gap);
    CHECK(min_gap <= 0.1 * gap20);
}

TEST_CASE("fw_gap identities") {
    SplitMix64 gen(9);
    auto cone = std::make_shared<NonnegativeOrthant>(5);
    Vec x0 = standard_normal_vector(gen, 5);
    while (cone->lambda_min(x0) > -1e-2) x0 = standard_normal_vector(gen, 5);
    const double cd = compute_cd_projection(cone->interior_point(), x0);

    // at y0 = 0 the gap equals c_D * (-t_opt) through complementarity
    const auto [s0, t0] = fw_subproblem(*cone, x0, cd);
    const double gap0 = fw_gap(x0, Vec::Zero(5), s0);
    CHECK(gap0 == doctest::Approx(cd * (-t0)).epsilon(1e-10));
    CHECK(gap0 > 0.0);

    // s = y gives zero
    CHECK(fw_gap(x0, s0, s0) == 0.0);
}

TEST_CASE("auto_cd") {
    SUBCASE("terminates at or below the projection bound") {
        Vec x0(2);
        // pick x0 with ||e|| ||e - x0|| = 3: e = (1,1), ||e - x0|| = 3/sqrt(2)
        x0 << 1.0 + 1.5, 1.0 - 1.5;
        auto cone = std::make_shared<NonnegativeOrthant>(2);
        CHECK(compute_cd_projection(cone->interior_point(), x0) == doctest::Approx(3.0));
        auto program = make_projection_program(cone, x0);
        DFWConfig cfg;
        cfg.fw_gap_tol = 1e-10;
        const AutoCdResult res = auto_cd(program, cfg);
        CHECK(res.certified);
        CHECK(res.c_d_used <= 4.0);
    }
    SUBCASE("interior instance certifies at the first guess") {
        auto cone = std::make_shared<NonnegativeOrthant>(3);
        auto program = make_projection_program(cone, Vec(Vec::Ones(3) * 2.0));
        const AutoCdResult res = auto_cd(program, DFWConfig{});
        CHECK(res.certified);
        CHECK(res.c_d_used == doctest::Approx(1.0));
    }
    SUBCASE("far point needs more doublings but still certifies") {
        SplitMix64 gen(10);
        auto cone = std::make_shared<NonnegativeOrthant>(4);
        const Vec x0 = Vec(-8.0 * Vec::Ones(4)) + standard_normal_vector(gen, 4);
        auto program = make_projection_program(cone, x0);
        DFWConfig cfg;
        cfg.fw_gap_tol = 1e-10;
        const AutoCdResult res = auto_cd(program, cfg);
        CHECK(res.certified);
        CHECK(res.doublings > 1);
        CHECK(res.c_d_used <= 2.0 * compute_cd_projection(cone->interior_point(), x0));
    }
}

TEST_CASE("solve rejects unresolved configuration") {
    auto cone = std::make_shared<NonnegativeOrthant>(2);
    auto program = make_projection_program(cone, Vec::Ones(2));
    DFWConfig cfg; // c_d left at 0
    CHECK_THROWS_AS(solve(program, cfg), std::invalid_argument);
    cfg.c_d = 1.0;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(solve(program, cfg), std::invalid_argument);
}
