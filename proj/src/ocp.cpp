#include "tdompc/ocp.hpp"

#include <cmath>
#include <string>

#include "tdompc/errors.hpp"

namespace tdompc {

bool BoxSet::contains(const Vector& z, double slack) const {
    if (z.size() != size()) return false;
    for (Index i = 0; i < z.size(); ++i)
        if (z(i) < lower(i) - slack || z(i) > upper(i) + slack) return false;
    return true;
}

Matrix CondensedQp::input_map() const {
    const Index m = plant.inputs();
    Matrix bbar = Matrix::Zero(plant.states(), dim());
    bbar.leftCols(m) = plant.B * scaling.head(m).asDiagonal();
    return bbar;
}

Vector CondensedQp::first_input(const Vector& z) const {
    const Index m = plant.inputs();
    return scaling.head(m).cwiseProduct(z.head(m));
}

Matrix prediction_state_matrix(const Matrix& a, int horizon) {
    const Index n = a.rows();
    Matrix ahat(n * (horizon + 1), n);
    Matrix power = Matrix::Identity(n, n);
    for (int k = 0; k <= horizon; ++k) {
        ahat.middleRows(k * n, n) = power;
        power = a * power;
    }
    return ahat;
}

Matrix prediction_input_matrix(const Matrix& a, const Matrix& b, int horizon) {
    const Index n = a.rows();
    const Index m = b.cols();
    Matrix bhat = Matrix::Zero(n * (horizon + 1), m * horizon);
    // Block (i, j) = A^{i-1-j} B for j < i.
    Matrix block = b;
    for (int d = 0; d < horizon; ++d) {
        for (int j = 0; j + d + 1 <= horizon; ++j) bhat.block((j + d + 1) * n, j * m, n, m) = block;
        block = a * block;
    }
    return bhat;
}

namespace {

Matrix stacked_state_weight(const Matrix& q, const Matrix& p, int horizon) {
    const Index n = q.rows();
    Matrix hhat = Matrix::Zero(n * (horizon + 1), n * (horizon + 1));
    for (int k = 0; k < horizon; ++k) hhat.block(k * n, k * n, n, n) = q;
    hhat.bottomRightCorner(n, n) = p;
    return hhat;
}

void validate(const PlantModel& plant, const OcpSpec& spec) {
    const Index n = plant.A.rows();
    const Index m = plant.B.cols();
    if (n < 1 || plant.A.cols() != n) throw DimensionError("A must be square and non-empty");
    if (plant.B.rows() != n || m < 1) throw DimensionError("B must have as many rows as A and at least one column");
    if (spec.Q.rows() != n || spec.Q.cols() != n) throw DimensionError("Q must be n x n");
    if (spec.R.rows() != m || spec.R.cols() != m) throw DimensionError("R must be m x m");
    if (spec.P && (spec.P->rows() != n || spec.P->cols() != n)) throw DimensionError("P must be n x n");
    if (spec.horizon < 1) throw InvalidProblemError("horizon must be >= 1");
    if (spec.box.lower.size() != m || spec.box.upper.size() != m)
        throw DimensionError("input box must have one interval per input");
    for (Index i = 0; i < m; ++i)
        if (!(spec.box.lower(i) < 0.0 && 0.0 < spec.box.upper(i)))
            throw InvalidProblemError("input box interval " + std::to_string(i) +
                                      " must contain the origin in its interior");
    linalg::require_finite(plant.A, "A");
    linalg::require_finite(plant.B, "B");
}

SpectralCache make_cache(const Matrix& h, const Matrix& w, const Matrix& p, const Tolerances& tol) {
    SpectralCache c;
    try {
        const auto eig = linalg::sym_eig(h, tol);
        c.lambda_min = eig.values.minCoeff();
        c.lambda_max = eig.values.maxCoeff();
        c.h = linalg::spd_factor(h, tol);
    } catch (const NotSpdError& e) {
        throw ConditioningError(std::string("condensed Hessian is not positive definite: ") + e.what());
    }
    c.kappa = c.lambda_max / c.lambda_min;
    c.w = linalg::spd_factor(w, tol);
    c.p = linalg::spd_factor(p, tol);
    return c;
}

}  // namespace

Matrix state_weight_assembled(const PlantModel& plant, const Matrix& q, const Matrix& p, int horizon) {
    const Matrix ahat = prediction_state_matrix(plant.A, horizon);
    return linalg::symmetrized(ahat.transpose() * stacked_state_weight(q, p, horizon) * ahat);
}

Matrix state_weight_sum(const Matrix& a, const Matrix& q, const Matrix& p, int horizon) {
    Matrix w = Matrix::Zero(a.rows(), a.cols());
    Matrix power = Matrix::Identity(a.rows(), a.cols());
    for (int k = 0; k < horizon; ++k) {
        w += power.transpose() * q * power;
        power = a * power;
    }
    w += power.transpose() * p * power;
    return linalg::symmetrized(w);
}

Matrix state_weight_riccati(const PlantModel& plant, const Matrix& r, const Matrix& p, int horizon) {
    const Matrix& a = plant.A;
    const Matrix& b = plant.B;
    const Matrix s = r + b.transpose() * p * b;
    const Matrix core = p * b * s.llt().solve(b.transpose() * p);
    Matrix w = p;
    Matrix power = a;
    for (int k = 1; k <= horizon; ++k) {
        w += power.transpose() * core * power;
        power = a * power;
    }
    return linalg::symmetrized(w);
}

CondensedQp condense(const PlantModel& plant, const OcpSpec& spec, const Tolerances& tol) {
    validate(plant, spec);
    const Index n = plant.states();
    const Index m = plant.inputs();
    const int horizon = spec.horizon;

    Matrix p;
    if (spec.P) {
        p = *spec.P;
        const double res = linalg::riccati_residual(plant.A, plant.B, spec.Q, spec.R, p);
        if (res > tol.riccati_residual * p.norm())
            throw InvalidProblemError("supplied terminal weight P does not satisfy the Riccati equation (residual " +
                                      std::to_string(res) + ")");
    } else {
        try {
            p = linalg::solve_dare(plant.A, plant.B, spec.Q, spec.R, tol);
        } catch (const Error& e) {
            throw StabilizabilityError(std::string("cannot compute terminal weight: ") + e.what());
        }
    }

    CondensedQp qp;
    qp.plant = plant;
    qp.Q = spec.Q;
    qp.R = spec.R;
    qp.P = p;
    qp.horizon = horizon;
    qp.input_box = spec.box;

    const Matrix ahat = prediction_state_matrix(plant.A, horizon);
    const Matrix bhat = prediction_input_matrix(plant.A, plant.B, horizon);
    const Matrix hhat = stacked_state_weight(spec.Q, p, horizon);
    const Matrix bt_h = bhat.transpose() * hhat;

    qp.Hbar = linalg::symmetrized(bt_h * bhat);
    qp.H = qp.Hbar;
    for (int k = 0; k < horizon; ++k) qp.H.block(k * m, k * m, m, m) += spec.R;
    qp.H = linalg::symmetrized(qp.H);
    qp.G = bt_h * ahat;
    qp.W = state_weight_sum(plant.A, spec.Q, p, horizon);

    qp.box.lower = spec.box.lower.replicate(horizon, 1);
    qp.box.upper = spec.box.upper.replicate(horizon, 1);
    qp.scaling = Vector::Ones(m * horizon);

    qp.terminal_state_map = bhat.bottomRows(n);
    const Matrix s = spec.R + plant.B.transpose() * p * plant.B;
    qp.lqr_gain = s.llt().solve(plant.B.transpose() * p * plant.A);

    qp.spectral = make_cache(qp.H, qp.W, p, tol);
    return qp;
}

Vector project(const Vector& z, const BoxSet& box) {
    if (z.size() != box.size())
        throw DimensionError("project: vector has " + std::to_string(z.size()) + " entries, box has " +
                             std::to_string(box.size()));
    return z.cwiseMax(box.lower).cwiseMin(box.upper);
}

CondensedQp precondition(const CondensedQp& qp, const Vector& diagonal, const Tolerances& tol) {
    if (diagonal.size() != qp.dim()) throw DimensionError("preconditioner diagonal has the wrong length");
    if (!diagonal.allFinite() || (diagonal.array() <= 0.0).any())
        throw InvalidProblemError("preconditioner diagonal must be finite and strictly positive");

    CondensedQp out = qp;
    const auto d = diagonal.asDiagonal();
    out.H = linalg::symmetrized(d * qp.H * d);
    out.Hbar = linalg::symmetrized(d * qp.Hbar * d);
    out.G = d * qp.G;
    out.box.lower = qp.box.lower.cwiseQuotient(diagonal);
    out.box.upper = qp.box.upper.cwiseQuotient(diagonal);
    out.scaling = qp.scaling.cwiseProduct(diagonal);
    out.spectral = make_cache(out.H, out.W, out.P, tol);
    return out;
}

PreconditionedQp jacobi_precondition(const CondensedQp& qp, const Tolerances& tol) {
    const Vector d = qp.H.diagonal().cwiseSqrt().cwiseInverse();
    CondensedQp scaled = precondition(qp, d, tol);
    if (scaled.spectral.kappa <= qp.spectral.kappa) return {std::move(scaled), d};
    return {qp, Vector::Ones(qp.dim())};
}

double cost(const CondensedQp& qp, const Vector& z, const Vector& x) {
    return z.dot(qp.H * z) + 2.0 * z.dot(qp.G * x) + x.dot(qp.W * x);
}

Vector gradient(const CondensedQp& qp, const Vector& z, const Vector& x) {
    if (z.size() != qp.dim() || x.size() != qp.plant.states()) throw DimensionError("gradient: dimension mismatch");
    return 2.0 * (qp.H * z + qp.G * x);
}

}  // namespace tdompc
