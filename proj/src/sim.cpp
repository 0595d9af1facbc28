#include "tdompc/sim.hpp"

#include <cmath>

#include "tdompc/errors.hpp"

namespace tdompc {

namespace {

void check_state(const CondensedQp& qp, const Vector& x0, int steps) {
    if (x0.size() != qp.plant.states()) throw DimensionError("simulation: x0 has the wrong dimension");
    if (steps < 1) throw PreconditionError("simulation: steps must be >= 1");
}

}  // namespace

ValueSample evaluate_value_function(const CondensedQp& qp, const Vector& x) {
    ValueSample s;
    s.S = oracle_solve(qp, x);
    s.V = std::max(cost(qp, s.S, x), 0.0);
    s.psi = std::sqrt(s.V);
    return s;
}

bool in_terminal_region(const CondensedQp& qp, const Vector& x, const Vector& solution) {
    const Index n = qp.plant.states();
    Matrix power = Matrix::Identity(n, n);
    for (int k = 0; k < qp.horizon; ++k) power = qp.plant.A * power;
    const Vector xi_n = power * x + qp.terminal_state_map * qp.to_inputs(solution);
    const Vector v = -qp.lqr_gain * xi_n;
    for (Index i = 0; i < v.size(); ++i)
        if (v(i) < qp.input_box.lower(i) || v(i) > qp.input_box.upper(i)) return false;
    return true;
}

TrajectoryLog simulate_tdo(const CondensedQp& qp, SolverKind kind, long ell, const Vector& x0, const Vector& z0,
                           int steps, const SimOptions& options) {
    check_state(qp, x0, steps);
    if (ell < 1) throw PreconditionError("simulate_tdo: ell must be >= 1");
    if (!qp.box.contains(z0)) throw PreconditionError("simulate_tdo: z0 must lie in the feasible box");

    TrajectoryLog log;
    log.ell = ell;
    log.kind = kind;
    log.steps = steps;
    log.preconditioned = qp.preconditioned();
    log.x.reserve(static_cast<std::size_t>(steps) + 1);
    log.x.push_back(x0);

    const double blowup = options.divergence_factor * std::max(x0.norm(), 1e-300);
    Vector z = z0;
    for (int k = 0; k < steps; ++k) {
        const Vector& xk = log.x.back();
        z = solver_run(kind, qp, z, xk, ell).iterate;
        const Vector u = qp.first_input(z);
        if (options.log_errors) {
            const ValueSample v = evaluate_value_function(qp, xk);
            log.e_norm.push_back((z - v.S).norm());
            log.psi.push_back(v.psi);
        }
        log.u.push_back(u);
        log.z.push_back(z);
        log.x.push_back(qp.plant.A * xk + qp.plant.B * u);
        if (!log.x.back().allFinite() || log.x.back().norm() > blowup) {
            log.steps = k + 1;
            break;
        }
    }
    if (options.log_errors) log.psi.push_back(evaluate_value_function(qp, log.x.back()).psi);
    return log;
}

TrajectoryLog simulate_optimal(const CondensedQp& qp, const Vector& x0, int steps, const SimOptions& options) {
    check_state(qp, x0, steps);
    TrajectoryLog log;
    log.steps = steps;
    log.preconditioned = qp.preconditioned();
    log.x.push_back(x0);
    for (int k = 0; k < steps; ++k) {
        const Vector& xk = log.x.back();
        const ValueSample v = evaluate_value_function(qp, xk);
        const Vector u = qp.first_input(v.S);
        if (options.log_errors) {
            log.e_norm.push_back(0.0);
            log.psi.push_back(v.psi);
        }
        log.u.push_back(u);
        log.z.push_back(v.S);
        log.x.push_back(qp.plant.A * xk + qp.plant.B * u);
    }
    if (options.log_errors) log.psi.push_back(evaluate_value_function(qp, log.x.back()).psi);
    return log;
}

bool passes(const TrajectoryLog& log, const StabilityTest& test) {
    if (static_cast<int>(log.x.size()) < test.horizon_steps + 1) return false;
    const Vector& xk = log.x[static_cast<std::size_t>(test.horizon_steps)];
    return xk.allFinite() && xk.norm() <= test.shrink_tolerance * log.x.front().norm();
}

std::optional<long> empirical_min_iterations(const CondensedQp& qp, SolverKind kind, const Vector& x0, long ell_max,
                                             const StabilityTest& test) {
    if (ell_max < 1) throw PreconditionError("empirical_min_iterations: ell_max must be >= 1");
    if (test.horizon_steps < 1 || !(test.shrink_tolerance > 0.0 && test.shrink_tolerance < 1.0))
        throw PreconditionError("empirical_min_iterations: invalid stability test");

    SimOptions opts;
    opts.log_errors = false;
    const Vector z0 = Vector::Zero(qp.dim());
    auto stable = [&](long ell) {
        return passes(simulate_tdo(qp, kind, ell, x0, project(z0, qp.box), test.horizon_steps, opts), test);
    };

    long failing = 0;  // largest budget known to fail (0 = none tried)
    long passing = 0;
    for (long ell = 1;; ell = std::min(2 * ell, ell_max)) {
        if (stable(ell)) {
            passing = ell;
            break;
        }
        failing = ell;
        if (ell == ell_max) return std::nullopt;
    }
    while (passing - failing > 1) {
        const long mid = failing + (passing - failing) / 2;
        if (stable(mid)) passing = mid;
        else failing = mid;
    }
    return passing;
}

}  // namespace tdompc
