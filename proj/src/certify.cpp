#include "tdompc/certify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tdompc/errors.hpp"

namespace tdompc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_unit(double kappa, const Tolerances& tol) { return kappa - 1.0 <= tol.unit_kappa; }

double eta_from_kappa(double kappa, bool unit) { return unit ? 0.0 : (kappa - 1.0) / (kappa + 1.0); }

double eta_a_from_kappa(double kappa, bool unit, long ell) {
    if (unit) return 0.0;
    return std::sqrt(kappa) * std::pow(1.0 - 1.0 / std::sqrt(kappa), 0.5 * static_cast<double>(ell - 1));
}

double ell_bar_from_kappa(double kappa, bool unit) {
    if (unit) return 1.0;
    return 1.0 - std::log(kappa) / std::log(1.0 - 1.0 / std::sqrt(kappa));
}

}  // namespace

double GainReport::eta_a(long ell) const { return eta_a_from_kappa(kappa, unit_kappa, ell); }

double GainReport::gamma2(long ell) const {
    if (eta == 0.0) return 0.0;
    const double e = std::pow(eta, static_cast<double>(ell));
    return b * e / (1.0 - e);
}

double GainReport::gamma2a(long ell) const {
    if (!contractive(ell, SolverKind::Apgm)) return kInf;
    const double e = eta_a(ell);
    return e / (1.0 - e);
}

bool GainReport::contractive(long ell, SolverKind kind) const {
    if (ell < 1) return false;
    if (kind == SolverKind::Pgm || unit_kappa) return true;
    return static_cast<double>(ell) > ell_bar * (1.0 + 1e-12) && eta_a(ell) < 1.0;
}

double GainReport::smallgain(long ell, SolverKind kind) const {
    if (kind == SolverKind::Pgm) return zeta * gamma1 * gamma2(ell);
    const double g = gamma2a(ell);
    if (std::isinf(g)) return kInf;
    return zeta_a * gamma1 * g;
}

double GainReport::bound(SolverKind kind) const { return kind == SolverKind::Pgm ? ell_star : ell_star_a; }

double pgm_rate(const CondensedQp& qp) {
    const double kappa = qp.spectral.kappa;
    return eta_from_kappa(kappa, is_unit(kappa, default_tolerances()));
}

double apgm_rate(const CondensedQp& qp, long ell) {
    if (ell < 1) throw PreconditionError("apgm_rate: ell must be >= 1");
    const double kappa = qp.spectral.kappa;
    return eta_a_from_kappa(kappa, is_unit(kappa, default_tolerances()), ell);
}

double apgm_min_iters(const CondensedQp& qp) {
    const double kappa = qp.spectral.kappa;
    return ell_bar_from_kappa(kappa, is_unit(kappa, default_tolerances()));
}

MpcGain mpc_gain(const CondensedQp& qp, const Tolerances& tol) {
    double lam = linalg::weighted_eig_bounds(qp.Q, qp.W, tol).lower;
    if (!(lam > 0.0) || lam > 1.0 + 1e-10)
        throw CertificationAssumptionError("lambda_W^-(Q) = " + std::to_string(lam) + " is outside (0, 1]");
    lam = std::min(lam, 1.0);
    MpcGain g;
    g.beta = std::sqrt(1.0 - lam);
    // beta / (1 - beta), written without cancellation.
    g.gamma1 = g.beta * (1.0 + g.beta) / lam;
    return g;
}

double optimizer_gain(const CondensedQp& qp, long ell, SolverKind kind) {
    if (ell < 1) throw PreconditionError("optimizer_gain: ell must be >= 1");
    const GainReport r = gain_report(qp);
    if (kind == SolverKind::Pgm) return r.gamma2(ell);
    if (!r.contractive(ell, kind))
        throw NotContractiveError("optimizer_gain: APGM with ell = " + std::to_string(ell) +
                                  " does not exceed ell_bar = " + std::to_string(r.ell_bar));
    return r.gamma2a(ell);
}

namespace {

// 2 ||H^{-1/2} G P^{-1/2}||
double coupling_norm(const CondensedQp& qp) {
    return 2.0 * linalg::spectral_norm(qp.spectral.h.inv_sqrt * qp.G * qp.spectral.p.inv_sqrt);
}

}  // namespace

double interconnection_gain(const CondensedQp& qp, SolverKind kind) {
    const Matrix wb = qp.spectral.w.sqrt * qp.input_map();
    if (kind == SolverKind::Pgm) return coupling_norm(qp) * linalg::spectral_norm(wb);
    return coupling_norm(qp) * linalg::spectral_norm(wb * qp.spectral.h.inv_sqrt);
}

GainReport gain_report(const CondensedQp& qp, const Tolerances& tol) {
    GainReport r;
    r.kappa = qp.spectral.kappa;
    r.unit_kappa = is_unit(r.kappa, tol);
    r.eta = eta_from_kappa(r.kappa, r.unit_kappa);
    r.ell_bar = ell_bar_from_kappa(r.kappa, r.unit_kappa);
    r.b = linalg::spectral_norm(qp.spectral.h.inv_sqrt);

    const MpcGain mg = mpc_gain(qp, tol);
    r.beta = mg.beta;
    r.gamma1 = mg.gamma1;

    const double coupling = coupling_norm(qp);
    const Matrix wb = qp.spectral.w.sqrt * qp.input_map();
    r.zeta = coupling * linalg::spectral_norm(wb);
    r.zeta_a = coupling * linalg::spectral_norm(wb * qp.spectral.h.inv_sqrt);

    if (r.eta == 0.0) {
        r.ell_star = 0.0;
    } else {
        r.ell_star = -std::log(r.zeta * r.gamma1 * r.b + 1.0) / std::log(r.eta);
    }

    if (r.unit_kappa) {
        r.ell_star_a = r.ell_bar;
    } else {
        const double root = std::sqrt(r.kappa);
        const double raw = 1.0 - 2.0 * std::log(root * (1.0 + r.zeta_a * r.gamma1)) / std::log(1.0 - 1.0 / root);
        r.ell_star_a = std::max(raw, r.ell_bar);
    }
    return r;
}

double iteration_bound(const CondensedQp& qp, SolverKind kind) { return gain_report(qp).bound(kind); }

Certificate certify(const CondensedQp& qp, long ell, SolverKind kind, const Tolerances& tol) {
    if (ell < 1) throw PreconditionError("certify: ell must be >= 1");
    Certificate c;
    c.report = gain_report(qp, tol);
    c.kind = kind;
    c.ell = ell;
    c.smallgain = c.report.smallgain(ell, kind);
    c.stable = c.report.contractive(ell, kind) && c.smallgain < 1.0;
    return c;
}

long certified_budget(double bound) { return static_cast<long>(std::ceil(bound)) + 1; }

}  // namespace tdompc
