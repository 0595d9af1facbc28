#include "tdompc/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "tdompc/errors.hpp"

namespace tdompc {

std::string to_string(SolverKind kind) { return kind == SolverKind::Pgm ? "pgm" : "apgm"; }

SolverKind parse_solver_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "pgm") return SolverKind::Pgm;
    if (lower == "apgm") return SolverKind::Apgm;
    throw InvalidProblemError("unknown solver '" + std::string(text) + "' (expected pgm or apgm)");
}

namespace {

void check_dims(const CondensedQp& qp, const Vector& z0, const Vector& x, long ell) {
    if (z0.size() != qp.dim()) throw DimensionError("solver: initial iterate has the wrong dimension");
    if (x.size() != qp.plant.states()) throw DimensionError("solver: state has the wrong dimension");
    if (ell < 1) throw PreconditionError("solver: iteration budget must be >= 1");
}

inline void clamp_into(Vector& z, const BoxSet& box) { z = z.cwiseMax(box.lower).cwiseMin(box.upper); }

}  // namespace

double pgm_step(const CondensedQp& qp) { return 1.0 / (qp.spectral.lambda_max + qp.spectral.lambda_min); }

double fixed_point_residual(const CondensedQp& qp, const Vector& z, const Vector& x) {
    const Vector step = z - pgm_step(qp) * gradient(qp, z, x);
    return (z - project(step, qp.box)).norm();
}

SolveOutcome pgm_run(const CondensedQp& qp, const Vector& z0, const Vector& x, long ell) {
    check_dims(qp, z0, x, ell);
    const double alpha2 = 2.0 * pgm_step(qp);
    const Vector c = qp.G * x;
    Vector z = z0;
    Vector g(z.size());
    for (long j = 0; j < ell; ++j) {
        g.noalias() = qp.H * z;
        g += c;
        z -= alpha2 * g;
        clamp_into(z, qp.box);
    }
    return {z, ell, fixed_point_residual(qp, z, x)};
}

SolveOutcome apgm_run(const CondensedQp& qp, const Vector& z0, const Vector& x, long ell) {
    check_dims(qp, z0, x, ell);
    if (!qp.box.contains(z0)) throw PreconditionError("apgm_run: initial iterate must lie in the feasible box");

    // m = 2 lambda_min(H), L = 2 lambda_max(H); gradient 2(Hz + Gx) so y - grad/L = y - (Hy + Gx)/lambda_max.
    const double sqrt_kappa = std::sqrt(qp.spectral.kappa);
    const double momentum = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);
    const double inv_l = 1.0 / qp.spectral.lambda_max;
    const Vector c = qp.G * x;

    Vector z = z0;
    Vector z_prev = z0;
    Vector y(z.size());
    Vector g(z.size());
    for (long k = 0; k < ell; ++k) {
        y = z + momentum * (z - z_prev);
        g.noalias() = qp.H * y;
        g += c;
        z_prev = z;
        z = y - inv_l * g;
        clamp_into(z, qp.box);
    }
    return {z, ell, fixed_point_residual(qp, z, x)};
}

SolveOutcome solver_run(SolverKind kind, const CondensedQp& qp, const Vector& z0, const Vector& x, long ell) {
    if (kind == SolverKind::Pgm) return pgm_run(qp, z0, x, ell);
    return apgm_run(qp, project(z0, qp.box), x, ell);
}

namespace {

// Newton step on the guessed free set: solve H_FF z_F = -(Gx + H_FA z_A)_F with the active
// components pinned at their bounds, then clamp.
Vector active_set_polish(const CondensedQp& qp, const Vector& z, const Vector& c) {
    const Index n = z.size();
    const Vector g = qp.H * z + c;
    std::vector<Index> free;
    Vector out = z;
    for (Index i = 0; i < n; ++i) {
        const bool at_lower = z(i) <= qp.box.lower(i) && g(i) > 0.0;
        const bool at_upper = z(i) >= qp.box.upper(i) && g(i) < 0.0;
        if (at_lower) out(i) = qp.box.lower(i);
        else if (at_upper) out(i) = qp.box.upper(i);
        else free.push_back(i);
    }
    if (free.empty()) return out;

    const Index nf = static_cast<Index>(free.size());
    Matrix hff(nf, nf);
    Vector rhs(nf);
    for (Index a = 0; a < nf; ++a) {
        double r = -c(free[a]);
        for (Index j = 0; j < n; ++j)
            if (std::find(free.begin(), free.end(), j) == free.end()) r -= qp.H(free[a], j) * out(j);
        rhs(a) = r;
        for (Index b = 0; b < nf; ++b) hff(a, b) = qp.H(free[a], free[b]);
    }
    const Vector zf = hff.llt().solve(rhs);
    for (Index a = 0; a < nf; ++a) out(free[a]) = zf(a);
    return project(out, qp.box);
}

}  // namespace

Vector oracle_solve(const CondensedQp& qp, const Vector& x, double tol, const Tolerances& tols) {
    if (!(tol > 0.0)) throw PreconditionError("oracle_solve: tolerance must be positive");
    if (x.size() != qp.plant.states()) throw DimensionError("oracle_solve: state has the wrong dimension");

    const Vector c = qp.G * x;
    const double inv_l = 1.0 / qp.spectral.lambda_max;
    const double sqrt_kappa = std::sqrt(qp.spectral.kappa);
    const double momentum = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);

    Vector z = project(Vector::Zero(qp.dim()), qp.box);
    double best = fixed_point_residual(qp, z, x);
    if (best <= tol) return z;

    constexpr long kBatch = 32;
    Vector z_prev = z;
    long iterations = 0;
    while (iterations < tols.oracle_iters) {
        for (long k = 0; k < kBatch; ++k) {
            const Vector y = z + momentum * (z - z_prev);
            Vector next = y - inv_l * (qp.H * y + c);
            clamp_into(next, qp.box);
            // Gradient-based restart keeps the momentum from oscillating.
            if ((next - z).dot(y - next) > 0.0) z_prev = next;
            else z_prev = z;
            z = std::move(next);
        }
        iterations += kBatch;

        const double res = fixed_point_residual(qp, z, x);
        const Vector polished = active_set_polish(qp, z, c);
        const double res_polished = fixed_point_residual(qp, polished, x);
        if (res_polished < res) {
            z = polished;
            z_prev = polished;
            best = res_polished;
        } else {
            best = res;
        }
        if (best <= tol) return z;
    }
    throw OracleFailure("oracle_solve: residual " + std::to_string(best) + " above tolerance after " +
                        std::to_string(iterations) + " iterations");
}

}  // namespace tdompc
