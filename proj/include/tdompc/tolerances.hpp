#pragma once

#include <string_view>

namespace tdompc {

/// Numeric tolerance bundle shared by all modules.
///
/// The process-wide default can be overridden through the TDO_MPC_TOL environment
/// variable, a comma separated list of `key=value` pairs using the field names below,
/// e.g. `TDO_MPC_TOL=oracle=1e-10,fixed_point_iters=200000`.
struct Tolerances {
    double symmetry = 1e-12;           // relative to max |entry|
    double jacobi_offdiag = 1e-14;     // cyclic Jacobi stop, relative to ||M||_F
    double spd_ratio = 1e-12;          // lambda_min > spd_ratio * lambda_max
    double fixed_point = 1e-12;        // relative change stop for DARE / Lyapunov iterations
    long fixed_point_iters = 100000;
    double riccati_residual = 1e-9;    // accepted residual for user supplied P, relative to ||P||
    double oracle = 1e-12;             // fixed-point residual target of oracle_solve
    long oracle_iters = 10000000;
    double unit_kappa = 1e-12;         // kappa - 1 below this is treated as kappa == 1
};

/// Parses an override string onto `base`. Throws InvalidProblemError on unknown keys.
Tolerances parse_tolerances(std::string_view overrides, Tolerances base = {});

/// Defaults with TDO_MPC_TOL applied (read once, on first use).
const Tolerances& default_tolerances();

/// Replaces the process-wide defaults. Call before starting any computation.
void set_default_tolerances(const Tolerances& tol);

}  // namespace tdompc
