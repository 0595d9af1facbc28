#pragma once

#include <optional>
#include <string>
#include <utility>

#include "tdompc/ocp.hpp"

namespace tdompc::bench {

struct BenchmarkCase {
    std::string name;
    PlantModel plant;
    OcpSpec spec;
    Vector x0;
    long nominal_ell_pgm = 1;
    long nominal_ell_apgm = 1;
    std::optional<double> sampling_period;
};

/// Cart-pole parameters (SI units).
struct PendulumParameters {
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double damping = 0.1;
    double length = 1.0;
    double gravity = 9.81;
};

/// Stable 4-state, 2-input system; Q = 10 I, R = I, N = 5, box [-1, 1]^2.
BenchmarkCase jones_system();

/// Linearized cart-pole about the upright equilibrium, state [y, y', phi, phi'], input force.
std::pair<Matrix, Matrix> pendulum_continuous(const PendulumParameters& params = {});

/// Zero-order-hold discretization via the exponential of [[Ac, Bc], [0, 0]] tau.
std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double tau);

/// Pendulum sampled at 0.2 s; Q = I, R = 1, N = 7, box [-1, 1].
BenchmarkCase pendulum_case();

/// "jones" or "pendulum"; throws InvalidProblemError otherwise.
BenchmarkCase by_name(const std::string& name);

}  // namespace tdompc::bench
