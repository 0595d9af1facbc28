#pragma once

#include <string>
#include <string_view>

#include "tdompc/ocp.hpp"

namespace tdompc {

enum class SolverKind { Pgm, Apgm };

std::string to_string(SolverKind kind);
/// Accepts "pgm" / "apgm" (case-insensitive).
SolverKind parse_solver_kind(std::string_view text);

struct SolveOutcome {
    Vector iterate;
    long iterations_used = 0;
    double fixed_point_residual = 0.0;
};

/// PGM step size 1/(lambda_max(H) + lambda_min(H)).
double pgm_step(const CondensedQp& qp);

/// ||z - Pi[z - alpha grad f(z, x)]|| with the PGM step. Zero exactly at S(x).
double fixed_point_residual(const CondensedQp& qp, const Vector& z, const Vector& x);

/// ell iterations of the projected gradient method from z0.
SolveOutcome pgm_run(const CondensedQp& qp, const Vector& z0, const Vector& x, long ell);

/// ell iterations of the constant-momentum accelerated projected gradient method.
/// z0 must lie in the box (PreconditionError otherwise).
SolveOutcome apgm_run(const CondensedQp& qp, const Vector& z0, const Vector& x, long ell);

/// Dispatches on kind. For APGM the starting point is projected onto the box first.
SolveOutcome solver_run(SolverKind kind, const CondensedQp& qp, const Vector& z0, const Vector& x, long ell);

/// High-accuracy S(x): accelerated iterations with restart plus active-set polishing,
/// until the fixed-point residual is <= tol. Throws OracleFailure past the iteration cap.
Vector oracle_solve(const CondensedQp& qp, const Vector& x, double tol, const Tolerances& tols = default_tolerances());

inline Vector oracle_solve(const CondensedQp& qp, const Vector& x) {
    return oracle_solve(qp, x, default_tolerances().oracle);
}

}  // namespace tdompc
