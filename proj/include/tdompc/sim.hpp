#pragma once

#include <optional>
#include <vector>

#include "tdompc/certify.hpp"

namespace tdompc {

/// Per-step record of a closed-loop run. x has steps + 1 entries (x_0 .. x_steps); the
/// per-step quantities u, z, e_norm have `steps` entries. psi covers every recorded state.
/// z is kept in the solver's coordinates (scaled when the QP is preconditioned).
struct TrajectoryLog {
    std::vector<Vector> x;
    std::vector<Vector> u;
    std::vector<Vector> z;
    std::vector<double> e_norm;  // ||z_k - S(x_k)||, empty when error logging is off
    std::vector<double> psi;     // sqrt(V(x_k)), empty when error logging is off

    long ell = 0;
    std::optional<SolverKind> kind;  // unset for the optimal loop
    int steps = 0;
    bool preconditioned = false;
};

/// ||x_K|| <= shrink_tolerance * ||x_0|| at K = horizon_steps.
struct StabilityTest {
    int horizon_steps = 400;
    double shrink_tolerance = 1e-4;
};

struct SimOptions {
    bool log_errors = true;
    /// Stop early once ||x_k|| exceeds this multiple of ||x_0|| (the run is then reported unstable).
    double divergence_factor = 1e8;
};

struct ValueSample {
    double V = 0.0;
    double psi = 0.0;
    Vector S;
};

/// Coupled plant/optimizer loop: z_k = T^ell(z_{k-1}, x_k); u_k = Xi z_k; x_{k+1} = A x_k + B u_k.
TrajectoryLog simulate_tdo(const CondensedQp& qp, SolverKind kind, long ell, const Vector& x0, const Vector& z0,
                           int steps, const SimOptions& options = {});

/// Ideal MPC loop with u_k = Xi S(x_k).
TrajectoryLog simulate_optimal(const CondensedQp& qp, const Vector& x0, int steps, const SimOptions& options = {});

/// V(x) = S'HS + 2S'Gx + x'Wx, psi = sqrt(V).
ValueSample evaluate_value_function(const CondensedQp& qp, const Vector& x);

/// Gamma_N membership: -Kbar xi_N*(x) lies in the input box, given S = S(x).
bool in_terminal_region(const CondensedQp& qp, const Vector& x, const Vector& solution);

bool passes(const TrajectoryLog& log, const StabilityTest& test);

/// Smallest ell in [1, ell_max] whose TDO run passes `test`, found by doubling then bisection.
std::optional<long> empirical_min_iterations(const CondensedQp& qp, SolverKind kind, const Vector& x0, long ell_max,
                                             const StabilityTest& test = {});

}  // namespace tdompc
