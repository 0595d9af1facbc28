#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tdompc/benchmarks.hpp"
#include "tdompc/errors.hpp"
#include "tdompc/sim.hpp"
#include "tdompc/sweep.hpp"

using namespace tdompc;

namespace {

CondensedQp deadbeat_scalar() {
    OcpSpec spec;
    spec.Q = Matrix::Ones(1, 1);
    spec.R = Matrix::Ones(1, 1);
    spec.horizon = 3;
    spec.box = {Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
    return condense({Matrix::Zero(1, 1), Matrix::Ones(1, 1)}, spec);
}

CondensedQp scalar_chain() {
    OcpSpec spec;
    spec.Q = Matrix::Ones(1, 1);
    spec.R = Matrix::Ones(1, 1);
    spec.horizon = 2;
    spec.box = {Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
    return condense({Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1)}, spec);
}

CondensedQp jones_qp(bool precondition = false) {
    const auto c = bench::jones_system();
    return make_qp(c.plant, c.spec, precondition);
}

}  // namespace

TEST(SimulateTdo, DeadbeatPlantStopsAfterOneStep) {
    const auto qp = deadbeat_scalar();
    for (auto kind : {SolverKind::Pgm, SolverKind::Apgm}) {
        const auto log = simulate_tdo(qp, kind, 1, Vector::Constant(1, 3.0), Vector::Zero(qp.dim()), 5);
        for (const auto& u : log.u) EXPECT_EQ(u(0), 0.0);
        EXPECT_EQ(log.x[1](0), 0.0);
    }
}

TEST(SimulateTdo, LogShapesAndFeasibility) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp(true);
    const auto log = simulate_tdo(qp, SolverKind::Apgm, 4, c.x0, Vector::Zero(qp.dim()), 30);
    ASSERT_EQ(log.x.size(), 31u);
    EXPECT_EQ(log.u.size(), 30u);
    EXPECT_EQ(log.z.size(), 30u);
    EXPECT_EQ(log.e_norm.size(), 30u);
    EXPECT_EQ(log.psi.size(), 31u);
    EXPECT_EQ(log.ell, 4);
    EXPECT_EQ(*log.kind, SolverKind::Apgm);
    EXPECT_TRUE(log.preconditioned);
    for (const auto& u : log.u) {
        EXPECT_TRUE((u.array() >= -1.0).all());
        EXPECT_TRUE((u.array() <= 1.0).all());
    }
}

TEST(SimulateTdo, FollowsRecursion) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp();
    const auto log = simulate_tdo(qp, SolverKind::Pgm, 3, c.x0, Vector::Zero(qp.dim()), 10);
    Vector z = Vector::Zero(qp.dim());
    Vector x = c.x0;
    for (int k = 0; k < 10; ++k) {
        z = pgm_run(qp, z, x, 3).iterate;
        EXPECT_EQ(log.z[k], z);
        x = c.plant.A * x + c.plant.B * z.head(2);
        EXPECT_TRUE(log.x[k + 1].isApprox(x, 1e-15));
    }
}

TEST(SimulateTdo, ManyIterationsMatchOptimalLoop) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp();
    const auto tdo = simulate_tdo(qp, SolverKind::Pgm, 10000, c.x0, Vector::Zero(qp.dim()), 25);
    const auto opt = simulate_optimal(qp, c.x0, 25);
    for (std::size_t k = 0; k < opt.x.size(); ++k) EXPECT_LE((tdo.x[k] - opt.x[k]).norm(), 1e-6);
    for (double e : tdo.e_norm) EXPECT_LE(e, 1e-6);
}

TEST(SimulateTdo, RejectsBadArguments) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp();
    EXPECT_THROW(simulate_tdo(qp, SolverKind::Pgm, 0, c.x0, Vector::Zero(qp.dim()), 5), PreconditionError);
    EXPECT_THROW(simulate_tdo(qp, SolverKind::Pgm, 1, c.x0, Vector::Constant(qp.dim(), 3.0), 5), PreconditionError);
    EXPECT_THROW(simulate_tdo(qp, SolverKind::Pgm, 1, c.x0, Vector::Zero(qp.dim()), 0), PreconditionError);
    EXPECT_THROW(simulate_tdo(qp, SolverKind::Pgm, 1, Vector::Zero(2), Vector::Zero(qp.dim()), 5), DimensionError);
}

TEST(SimulateTdo, DivergenceStopsEarly) {
    const auto c = bench::pendulum_case();
    const auto qp = condense(c.plant, c.spec);
    SimOptions opts;
    opts.log_errors = false;
    const auto log = simulate_tdo(qp, SolverKind::Pgm, 1, c.x0, Vector::Zero(qp.dim()), 400, opts);
    EXPECT_LT(log.steps, 400);
    EXPECT_FALSE(passes(log, {}));
}

TEST(SimulateOptimal, ZeroStateStaysZero) {
    const auto qp = jones_qp();
    const auto log = simulate_optimal(qp, Vector::Zero(4), 10);
    for (const auto& x : log.x) EXPECT_EQ(x.norm(), 0.0);
    for (double p : log.psi) EXPECT_EQ(p, 0.0);
}

TEST(SimulateOptimal, ValueDecreasesInsideTerminalRegion) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp();
    const double beta = mpc_gain(qp).beta;
    const auto log = simulate_optimal(qp, c.x0, 40);
    int checked = 0;
    for (int k = 0; k < 40; ++k) {
        if (!in_terminal_region(qp, log.x[k], log.z[k])) continue;
        ++checked;
        EXPECT_LE(log.psi[k + 1], beta * log.psi[k] + 1e-6) << k;
    }
    EXPECT_GT(checked, 30);
}

TEST(SimulateOptimal, PendulumReachesOrigin) {
    const auto c = bench::pendulum_case();
    const auto qp = condense(c.plant, c.spec);
    SimOptions opts;
    opts.log_errors = false;
    const auto log = simulate_optimal(qp, c.x0, 400, opts);
    EXPECT_TRUE(passes(log, {}));
}

TEST(ValueFunction, ZeroState) {
    const auto v = evaluate_value_function(jones_qp(), Vector::Zero(4));
    EXPECT_EQ(v.V, 0.0);
    EXPECT_EQ(v.psi, 0.0);
}

TEST(ValueFunction, ScalarChainBetweenTerminalAndStageWeight) {
    const auto qp = scalar_chain();
    const auto v = evaluate_value_function(qp, Vector::Ones(1));
    EXPECT_TRUE((v.S.array().abs() < 1.0).all());
    const double p = (0.25 + std::sqrt(4.0625)) / 2.0;
    EXPECT_GE(v.V, p - 1e-9);
    EXPECT_LE(v.V, 1.25 + 0.0625 * p + 1e-9);
    // unconstrained: V = W - G'H^{-1}G = P exactly
    EXPECT_NEAR(v.V, p, 1e-9);
}

TEST(ValueFunction, SandwichAndLipschitzOnJones) {
    const auto qp = jones_qp();
    oracle::Generator gen(61);
    for (int s = 0; s < 50; ++s) {
        const Vector x = gen.vector(4, 5.0), y = gen.vector(4, 5.0);
        const auto vx = evaluate_value_function(qp, x);
        const auto vy = evaluate_value_function(qp, y);
        EXPECT_GE(vx.V, x.dot(qp.P * x) - 1e-7);
        EXPECT_LE(vx.V, x.dot(qp.W * x) - vx.S.dot(qp.H * vx.S) + 1e-7);
        const Vector d = x - y;
        EXPECT_LE(std::abs(vx.psi - vy.psi), std::sqrt(d.dot(qp.W * d)) + 1e-7);
    }
}

TEST(Stability, PassesUsesHorizonStep) {
    TrajectoryLog log;
    log.x = {Vector::Ones(1), Vector::Constant(1, 0.5), Vector::Constant(1, 1e-5)};
    EXPECT_TRUE(passes(log, {2, 1e-4}));
    EXPECT_FALSE(passes(log, {1, 1e-4}));
    EXPECT_FALSE(passes(log, {3, 1e-4}));
}

TEST(EmpiricalMin, DeadbeatNeedsOneIteration) {
    const auto qp = deadbeat_scalar();
    EXPECT_EQ(empirical_min_iterations(qp, SolverKind::Pgm, Vector::Constant(1, 3.0), 100), 1L);
}

TEST(EmpiricalMin, IsTheSmallestPassingBudget) {
    const auto c = bench::jones_system();
    const auto qp = jones_qp();
    SimOptions opts;
    opts.log_errors = false;
    for (auto kind : {SolverKind::Pgm, SolverKind::Apgm}) {
        const auto found = empirical_min_iterations(qp, kind, c.x0, 200);
        ASSERT_TRUE(found.has_value());
        auto run = [&](long ell) {
            return passes(simulate_tdo(qp, kind, ell, c.x0, Vector::Zero(qp.dim()), 400, opts), {});
        };
        EXPECT_TRUE(run(*found));
        if (*found > 1) {
            EXPECT_FALSE(run(*found - 1));
        }
    }
}

TEST(EmpiricalMin, JonesBelowTheoreticalBound) {
    const auto c = bench::jones_system();
    for (bool pre : {false, true}) {
        const auto qp = jones_qp(pre);
        for (auto kind : {SolverKind::Pgm, SolverKind::Apgm}) {
            const double bound = iteration_bound(qp, kind);
            const auto found = empirical_min_iterations(qp, kind, c.x0, certified_budget(bound));
            ASSERT_TRUE(found.has_value());
            EXPECT_LE(*found, static_cast<long>(std::ceil(bound)));
        }
    }
}

TEST(EmpiricalMin, NotFoundIsAValue) {
    const auto c = bench::pendulum_case();
    const auto qp = condense(c.plant, c.spec);
    EXPECT_FALSE(empirical_min_iterations(qp, SolverKind::Pgm, c.x0, 4).has_value());
    EXPECT_THROW(empirical_min_iterations(qp, SolverKind::Pgm, c.x0, 0), PreconditionError);
    EXPECT_THROW(empirical_min_iterations(qp, SolverKind::Pgm, c.x0, 5, {400, 1.5}), PreconditionError);
}

TEST(TerminalRegion, OriginIsInside) {
    const auto qp = jones_qp();
    EXPECT_TRUE(in_terminal_region(qp, Vector::Zero(4), Vector::Zero(qp.dim())));
    const Vector far = Vector::Constant(4, 1e3);
    EXPECT_FALSE(in_terminal_region(qp, far, oracle_solve(qp, far)));
}
