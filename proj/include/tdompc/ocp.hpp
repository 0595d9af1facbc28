#pragma once

#include <optional>

#include "tdompc/linalg.hpp"

namespace tdompc {

/// Discrete-time LTI plant x+ = A x + B u.
struct PlantModel {
    Matrix A;
    Matrix B;

    Index states() const { return A.rows(); }
    Index inputs() const { return B.cols(); }
};

/// Per-input bounds; each interval must contain 0 in its interior.
struct InputBox {
    Vector lower;
    Vector upper;
};

/// Cost weights, horizon and input box of the finite-horizon OCP.
/// `P` defaults to the DARE solution; a supplied P is validated against it.
struct OcpSpec {
    Matrix Q;
    Matrix R;
    std::optional<Matrix> P;
    int horizon = 1;
    InputBox box;
};

/// Box over the stacked input sequence (stage-major: mu_0, ..., mu_{N-1}).
struct BoxSet {
    Vector lower;
    Vector upper;

    Index size() const { return lower.size(); }
    bool contains(const Vector& z, double slack = 0.0) const;
};

struct SpectralCache {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa = 1.0;
    linalg::SpdFactor h;
    linalg::SpdFactor w;
    linalg::SpdFactor p;
};

/// Condensed QP  min_{z in box} z'Hz + 2 z'Gx + x'Wx.
///
/// When preconditioned, the decision variable lives in scaled coordinates and the
/// physical input sequence is `scaling .* z`. Treated as immutable after construction.
struct CondensedQp {
    PlantModel plant;
    Matrix Q;
    Matrix R;
    Matrix P;
    int horizon = 1;
    InputBox input_box;

    Matrix H;
    Matrix Hbar;
    Matrix G;
    Matrix W;
    BoxSet box;
    Vector scaling;

    Matrix terminal_state_map;  // xi_N = A^N x + terminal_state_map * (scaling .* z)
    Matrix lqr_gain;            // Kbar = (R + B'PB)^{-1} B'PA
    SpectralCache spectral;

    Index dim() const { return H.rows(); }
    bool preconditioned() const { return (scaling.array() != 1.0).any(); }

    /// Bbar = B Xi diag(scaling): maps the decision vector to its effect on x+.
    Matrix input_map() const;
    /// Physical input sequence for decision vector z.
    Vector to_inputs(const Vector& z) const { return scaling.cwiseProduct(z); }
    /// First-stage input u = Xi (scaling .* z).
    Vector first_input(const Vector& z) const;
};

CondensedQp condense(const PlantModel& plant, const OcpSpec& spec, const Tolerances& tol = default_tolerances());

/// Componentwise clamp onto the box.
Vector project(const Vector& z, const BoxSet& box);

struct PreconditionedQp {
    CondensedQp qp;
    Vector diagonal;
};

/// Jacobi scaling D_ii = H_ii^{-1/2}. Falls back to D = I when the scaled Hessian would be
/// worse conditioned than the original, so kappa never increases.
PreconditionedQp jacobi_precondition(const CondensedQp& qp, const Tolerances& tol = default_tolerances());

/// Applies a user-supplied positive diagonal: H' = DHD, G' = DG, box' = D^{-1} box.
CondensedQp precondition(const CondensedQp& qp, const Vector& diagonal, const Tolerances& tol = default_tolerances());

double cost(const CondensedQp& qp, const Vector& z, const Vector& x);

/// Gradient of the cost in z: 2(Hz + Gx).
Vector gradient(const CondensedQp& qp, const Vector& z, const Vector& x);

/// Stacked prediction matrices: xi = Ahat x + Bhat mu.
Matrix prediction_state_matrix(const Matrix& a, int horizon);
Matrix prediction_input_matrix(const Matrix& a, const Matrix& b, int horizon);

/// The three constructions of W. They agree when P solves the DARE.
Matrix state_weight_assembled(const PlantModel& plant, const Matrix& q, const Matrix& p, int horizon);
Matrix state_weight_sum(const Matrix& a, const Matrix& q, const Matrix& p, int horizon);
Matrix state_weight_riccati(const PlantModel& plant, const Matrix& r, const Matrix& p, int horizon);

}  // namespace tdompc
