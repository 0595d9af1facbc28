#include "tdompc/benchmarks.hpp"

#include "tdompc/errors.hpp"

namespace tdompc::bench {

BenchmarkCase jones_system() {
    BenchmarkCase c;
    c.name = "jones";
    c.plant.A.resize(4, 4);
    c.plant.A << 0.7, -0.1, 0.0, 0.0,
                 0.2, -0.5, 0.1, 0.0,
                 0.0, 0.1, 0.1, 0.0,
                 0.5, 0.0, 0.5, 0.5;
    c.plant.B.resize(4, 2);
    c.plant.B << 0.0, 0.1,
                 0.1, 1.0,
                 0.1, 0.0,
                 0.0, 0.0;
    c.spec.Q = 10.0 * Matrix::Identity(4, 4);
    c.spec.R = Matrix::Identity(2, 2);
    c.spec.horizon = 5;
    c.spec.box.lower = Vector::Constant(2, -1.0);
    c.spec.box.upper = Vector::Constant(2, 1.0);
    c.x0.resize(4);
    c.x0 << 10.0, -10.0, 10.0, -10.0;
    c.nominal_ell_pgm = 10;
    c.nominal_ell_apgm = 10;
    return c;
}

std::pair<Matrix, Matrix> pendulum_continuous(const PendulumParameters& p) {
    // Mass matrix [[J, -ml], [-ml, M + m]] acting on (phi'', y''), J = 4/3 m l^2.
    const double ml = p.pole_mass * p.length;
    const double inertia = 4.0 / 3.0 * p.pole_mass * p.length * p.length;
    const double total = p.cart_mass + p.pole_mass;
    const double det = inertia * total - ml * ml;

    Matrix ac = Matrix::Zero(4, 4);
    ac(0, 1) = 1.0;
    ac(1, 1) = -inertia * p.damping / det;
    ac(1, 2) = ml * ml * p.gravity / det;
    ac(2, 3) = 1.0;
    ac(3, 1) = -ml * p.damping / det;
    ac(3, 2) = total * ml * p.gravity / det;

    Matrix bc = Matrix::Zero(4, 1);
    bc(1, 0) = inertia / det;
    bc(3, 0) = ml / det;
    return {ac, bc};
}

std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double tau) {
    if (!(tau > 0.0)) throw InvalidProblemError("zoh_discretize: sampling period must be positive");
    if (ac.rows() != ac.cols() || bc.rows() != ac.rows()) throw DimensionError("zoh_discretize: shape mismatch");
    const Index n = ac.rows();
    const Index m = bc.cols();
    Matrix aug = Matrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = ac * tau;
    aug.topRightCorner(n, m) = bc * tau;
    const Matrix e = linalg::expm(aug);
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

BenchmarkCase pendulum_case() {
    BenchmarkCase c;
    c.name = "pendulum";
    c.sampling_period = 0.2;
    const auto [ac, bc] = pendulum_continuous();
    auto [a, b] = zoh_discretize(ac, bc, *c.sampling_period);
    c.plant.A = std::move(a);
    c.plant.B = std::move(b);
    c.spec.Q = Matrix::Identity(4, 4);
    c.spec.R = Matrix::Identity(1, 1);
    c.spec.horizon = 7;
    c.spec.box.lower = Vector::Constant(1, -1.0);
    c.spec.box.upper = Vector::Constant(1, 1.0);
    c.x0 = Vector::Zero(4);
    c.x0(0) = 2.0;
    c.nominal_ell_pgm = 100000;
    c.nominal_ell_apgm = 8000;
    return c;
}

BenchmarkCase by_name(const std::string& name) {
    if (name == "jones") return jones_system();
    if (name == "pendulum") return pendulum_case();
    throw InvalidProblemError("unknown benchmark '" + name + "' (expected jones or pendulum)");
}

}  // namespace tdompc::bench
