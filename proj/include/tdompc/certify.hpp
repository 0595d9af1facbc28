#pragma once

#include "tdompc/ocp.hpp"
#include "tdompc/solvers.hpp"

namespace tdompc {

/// Closed-form certification scalars for one condensed QP.
struct GainReport {
    double kappa = 1.0;       // condition number of H
    double eta = 0.0;         // PGM contraction factor
    double ell_bar = 1.0;     // APGM contractivity threshold (real valued)
    double b = 0.0;           // ||H^{-1/2}||
    double beta = 0.0;        // value-function decrease factor
    double gamma1 = 0.0;      // plant-side ISS gain
    double zeta = 0.0;        // PGM interconnection constant
    double zeta_a = 0.0;      // APGM interconnection constant
    double ell_star = 0.0;    // PGM iteration bound
    double ell_star_a = 0.0;  // max(APGM bound, ell_bar)
    bool unit_kappa = false;  // kappa == 1 within tolerance: both solvers are exact in one step

    double eta_a(long ell) const;
    double gamma2(long ell) const;
    /// +infinity when ell <= ell_bar (the accelerated method is not yet contractive).
    double gamma2a(long ell) const;
    double smallgain(long ell, SolverKind kind) const;
    /// ell_star or ell_star_a.
    double bound(SolverKind kind) const;
    bool contractive(long ell, SolverKind kind) const;
};

struct Certificate {
    GainReport report;
    SolverKind kind = SolverKind::Pgm;
    long ell = 1;
    double smallgain = 0.0;
    bool stable = false;
};

struct MpcGain {
    double beta = 0.0;
    double gamma1 = 0.0;
};

/// (kappa - 1) / (kappa + 1).
double pgm_rate(const CondensedQp& qp);
/// sqrt(kappa) (1 - kappa^{-1/2})^{(ell-1)/2}; zero for kappa == 1.
double apgm_rate(const CondensedQp& qp, long ell);
/// 1 - log(kappa) / log(1 - kappa^{-1/2}); 1 for kappa == 1.
double apgm_min_iters(const CondensedQp& qp);

/// beta = sqrt(1 - lambda_W^-(Q)), gamma1 = beta / (1 - beta).
/// Throws CertificationAssumptionError unless lambda_W^-(Q) lies in (0, 1].
MpcGain mpc_gain(const CondensedQp& qp, const Tolerances& tol = default_tolerances());

/// gamma2(ell) for PGM or gamma2^a(ell) for APGM. Throws NotContractiveError for APGM with ell <= ell_bar.
double optimizer_gain(const CondensedQp& qp, long ell, SolverKind kind);

/// zeta (PGM) or zeta_a (APGM).
double interconnection_gain(const CondensedQp& qp, SolverKind kind);

/// ell_star (PGM) or max(ell_star_a, ell_bar) (APGM), as a real number. Callers needing an
/// integer budget use ceil(bound) + 1.
double iteration_bound(const CondensedQp& qp, SolverKind kind);

GainReport gain_report(const CondensedQp& qp, const Tolerances& tol = default_tolerances());

/// Stable iff the small-gain product is < 1 and, for APGM, ell > ell_bar.
Certificate certify(const CondensedQp& qp, long ell, SolverKind kind, const Tolerances& tol = default_tolerances());

/// Smallest integer budget satisfying the strict bound: ceil(bound) + 1.
long certified_budget(double bound);

}  // namespace tdompc
