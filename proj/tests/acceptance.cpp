// Acceptance suite: one PASS/FAIL line per criterion; non-zero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdompc/benchmarks.hpp"
#include "tdompc/certify.hpp"
#include "tdompc/sim.hpp"
#include "tdompc/sweep.hpp"

using namespace tdompc;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "violated: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

constexpr SolverKind kKinds[] = {SolverKind::Pgm, SolverKind::Apgm};

double min_eig(const Matrix& m) { return linalg::sym_eig(linalg::symmetrized(m)).values.minCoeff(); }
double max_eig(const Matrix& m) { return linalg::sym_eig(linalg::symmetrized(m)).values.maxCoeff(); }
double h_norm(const CondensedQp& qp, const Vector& v) { return std::sqrt(std::max(v.dot(qp.H * v), 0.0)); }
double w_norm(const CondensedQp& qp, const Vector& v) { return std::sqrt(std::max(v.dot(qp.W * v), 0.0)); }

CondensedQp benchmark_qp(const bench::BenchmarkCase& c, bool precondition, int horizon = 0, double rscale = 1.0) {
    OcpSpec spec = c.spec;
    if (horizon > 0) spec.horizon = horizon;
    spec.R *= rscale;
    return make_qp(c.plant, spec, precondition);
}

std::vector<CondensedQp> random_qps(std::uint64_t seed, int count) {
    oracle::Generator gen(seed);
    std::vector<CondensedQp> qps;
    while (static_cast<int>(qps.size()) < count) {
        auto p = gen.problem(12);
        qps.push_back(condense(p.plant, p.spec));
    }
    return qps;
}

// 1. Terminal-weight dominance and agreement of the three W constructions.
void weight_identities(Outcome& o) {
    for (const auto& c : {bench::jones_system(), bench::pendulum_case()}) {
        const auto qp = condense(c.plant, c.spec);
        const double lo = min_eig(qp.W - qp.P), hi = max_eig(qp.W);
        o.require(lo >= -1e-9 * hi, c.name + " W - P not PSD");
        const Matrix w1 = state_weight_assembled(c.plant, c.spec.Q, qp.P, c.spec.horizon);
        const Matrix w2 = state_weight_sum(c.plant.A, c.spec.Q, qp.P, c.spec.horizon);
        const Matrix w3 = state_weight_riccati(c.plant, c.spec.R, qp.P, c.spec.horizon);
        const double d12 = (w1 - w2).norm() / w2.norm(), d23 = (w2 - w3).norm() / w2.norm(),
                     d13 = (w1 - w3).norm() / w2.norm();
        o.require(std::max({d12, d23, d13}) <= 1e-10, c.name + " W constructions disagree");
        o.detail << c.name << ": min eig(W-P)=" << lo << ", max rel diff=" << std::max({d12, d23, d13}) << ". ";
    }
}

// 2. Per-iteration PGM contraction against oracle-referenced errors.
void pgm_rate_check(Outcome& o) {
    oracle::Generator gen(2002);
    double worst = -1.0;
    int ratios = 0;
    for (const auto& qp : random_qps(202, 100)) {
        const double eta = pgm_rate(qp);
        const Vector x = gen.vector(qp.plant.states(), 3.0);
        const Vector s = oracle_solve(qp, x);
        Vector z = gen.vector(qp.dim(), 3.0);
        double err = (z - s).norm();
        for (int j = 0; j < 50 && err > 1e-5 * (1.0 + s.norm()); ++j) {
            z = pgm_run(qp, z, x, 1).iterate;
            const double next = (z - s).norm();
            worst = std::max(worst, next / err - eta);
            o.require(next <= (eta + 1e-9) * err, "ratio above eta");
            err = next;
            ++ratios;
        }
    }
    o.detail << ratios << " ratios, max(ratio - eta)=" << worst << ". ";
}

// 3. APGM H-norm factor at ell = ceil(ell_bar) + 20.
void apgm_rate_check(Outcome& o) {
    oracle::Generator gen(3003);
    double worst = -1.0;
    for (const auto& qp : random_qps(303, 100)) {
        const long ell = static_cast<long>(std::ceil(apgm_min_iters(qp))) + 20;
        const Vector x = gen.vector(qp.plant.states(), 3.0);
        const Vector s = oracle_solve(qp, x);
        const Vector z0 = gen.in_box(qp.box);
        const double start = h_norm(qp, z0 - s);
        if (start == 0.0) continue;
        const double factor = h_norm(qp, apgm_run(qp, z0, x, ell).iterate - s) / start;
        worst = std::max(worst, factor - apgm_rate(qp, ell));
        o.require(factor <= apgm_rate(qp, ell) + 1e-9, "factor above eta_a");
    }
    o.detail << "max(factor - eta_a)=" << worst << ". ";
}

// 4. Solution-map and value-function inequalities on sampled state pairs.
void solution_map_inequalities(Outcome& o) {
    oracle::Generator gen(4004);
    for (const auto& c : {bench::jones_system(), bench::pendulum_case()}) {
        const auto qp = condense(c.plant, c.spec);
        const Matrix hinv = qp.spectral.h.inv_sqrt * qp.spectral.h.inv_sqrt;
        const double radius = c.x0.cwiseAbs().maxCoeff();
        double slack = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 200; ++s) {
            Vector x(qp.plant.states()), y(qp.plant.states());
            for (Index i = 0; i < x.size(); ++i) {
                x(i) = gen.uniform(-radius, radius);
                y(i) = gen.uniform(-radius, radius);
            }
            const auto vx = evaluate_value_function(qp, x);
            const auto vy = evaluate_value_function(qp, y);
            const Vector ds = vx.S - vy.S;
            const Vector gd = qp.G * (x - y);
            const double checks[] = {
                -ds.dot(qp.H * ds) - ds.dot(gd),                                    // co-coercivity
                std::sqrt(std::max(gd.dot(hinv * gd), 0.0)) - h_norm(qp, ds),       // solution-map Lipschitz
                vx.V - x.dot(qp.P * x),                                             // lower sandwich
                x.dot(qp.W * x) - vx.S.dot(qp.H * vx.S) - vx.V,                     // upper sandwich
                w_norm(qp, x - y) - std::abs(vx.psi - vy.psi),                      // psi Lipschitz
            };
            for (double v : checks) slack = std::min(slack, v);
        }
        o.require(slack >= -1e-7, c.name + " inequality slack below -1e-7");
        o.detail << c.name << " min slack=" << slack << ". ";
    }
}

// 5. Jones bounds over N = 1..10 (preconditioned).
void jones_bounds(Outcome& o) {
    const auto c = bench::jones_system();
    int in_band = 0, pgm_in_band = 0, apgm_in_band = 0;
    o.detail << "N: pgm/apgm = ";
    for (int n = 1; n <= 10; ++n) {
        const auto r = gain_report(benchmark_qp(c, true, n));
        const double pgm = r.bound(SolverKind::Pgm), apgm = r.bound(SolverKind::Apgm);
        o.require(pgm >= 1.0 && pgm <= 20.0 && apgm >= 1.0 && apgm <= 20.0, "bound outside [1, 20]");
        const bool p = pgm >= 4.0 && pgm <= 10.0, a = apgm >= 4.0 && apgm <= 10.0;
        pgm_in_band += p;
        apgm_in_band += a;
        in_band += (p || a);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%d: %.2f/%.2f%s", n, pgm, apgm, n < 10 ? ", " : ". ");
        o.detail << buf;
    }
    o.require(in_band > 5, "band [4, 10] hit for a minority of N");
    o.detail << "band hit for " << in_band << "/10 N (pgm " << pgm_in_band << ", apgm " << apgm_in_band << "). ";
}

// 6. Pendulum APGM bound over the R sweep (preconditioned).
void pendulum_bounds(Outcome& o) {
    const auto c = bench::pendulum_case();
    int inside = 0;
    o.detail << "bounds: ";
    for (double r : parse_grid("logspace(-1,3,9)")) {
        const double b = iteration_bound(benchmark_qp(c, true, 0, r), SolverKind::Apgm);
        inside += (b >= 1e3 && b <= 1e5);
        o.detail << std::lround(b) << ' ';
    }
    o.require(inside > 4, "majority outside [1e3, 1e5]");
    o.detail << "; " << inside << "/9 in [1e3, 1e5]. ";
}

// 7. Simulation at the certified budget passes the stability test.
void small_gain_soundness(Outcome& o) {
    SimOptions opts;
    opts.log_errors = false;
    for (const auto& c : {bench::jones_system(), bench::pendulum_case()}) {
        for (auto kind : kKinds) {
            const auto qp = benchmark_qp(c, true);
            const long ell = certified_budget(iteration_bound(qp, kind));
            o.require(ell <= 100000, c.name + " budget above 1e5 cap");
            const auto start = std::chrono::steady_clock::now();
            const auto log = simulate_tdo(qp, kind, ell, c.x0, project(Vector::Zero(qp.dim()), qp.box), 400, opts);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const bool ok = passes(log, {});
            const double ratio = log.x.back().norm() / c.x0.norm();
            o.require(ok, c.name + " " + to_string(kind) + " failed the stability test");
            o.require(secs < (c.name == "jones" ? 120.0 : 600.0), c.name + " runtime limit");
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s/%s ell=%ld |x400|/|x0|=%.1e (%.1fs). ", c.name.c_str(),
                          to_string(kind).c_str(), ell, ratio, secs);
            o.detail << buf;
        }
    }
}

// 8. Empirical minimum budget against the bound; trend agreement over the pendulum R sweep.
void empirical_trend(Outcome& o) {
    const auto jones = bench::jones_system();
    for (auto kind : kKinds) {
        for (int n = 1; n <= 10; ++n) {
            const auto qp = benchmark_qp(jones, true, n);
            const double bound = iteration_bound(qp, kind);
            const auto found = empirical_min_iterations(qp, kind, jones.x0, certified_budget(bound));
            o.require(found && *found <= static_cast<long>(std::ceil(bound)),
                      "jones " + to_string(kind) + " N=" + std::to_string(n) + " empirical above bound");
        }
    }
    const auto pend = bench::pendulum_case();
    for (auto kind : kKinds) {
        std::vector<double> theory, observed;
        for (double r : parse_grid("logspace(-1,3,9)")) {
            const auto qp = benchmark_qp(pend, true, 0, r);
            const double bound = iteration_bound(qp, kind);
            const auto found = empirical_min_iterations(qp, kind, pend.x0, certified_budget(bound));
            o.require(found && *found <= static_cast<long>(std::ceil(bound)),
                      "pendulum " + to_string(kind) + " empirical above bound");
            theory.push_back(bound);
            observed.push_back(found ? static_cast<double>(*found) : INFINITY);
        }
        const double rho = oracle::spearman(theory, observed);
        o.require(rho >= 0.6, "pendulum " + to_string(kind) + " rank correlation below 0.6");
        o.detail << "pendulum " << to_string(kind) << " spearman=" << rho << " observed=[";
        for (std::size_t i = 0; i < observed.size(); ++i) o.detail << (i ? " " : "") << observed[i];
        o.detail << "]. ";
    }
}

// 9. Mechanism monotonicities.
void mechanisms(Outcome& o) {
    const auto jones = bench::jones_system();
    const auto pend = bench::pendulum_case();
    std::vector<CondensedQp> qps = random_qps(909, 100);
    for (bool pre : {false, true}) {
        qps.push_back(benchmark_qp(jones, pre));
        qps.push_back(benchmark_qp(pend, pre));
    }

    int gamma_checks = 0;
    for (const auto& qp : qps) {
        const auto r = gain_report(qp);
        for (long ell = 1; ell < 1000 && r.gamma2(ell + 1) > 1e-300; ++ell, ++gamma_checks)
            if (!(r.gamma2(ell + 1) < r.gamma2(ell))) o.require(false, "gamma2 not strictly decreasing");
        const long first = static_cast<long>(std::floor(r.ell_bar)) + 1;
        for (long ell = first; ell < first + 1000 && r.gamma2a(ell + 1) > 1e-300; ++ell, ++gamma_checks)
            if (!(r.gamma2a(ell + 1) < r.gamma2a(ell))) o.require(false, "gamma2a not strictly decreasing");
    }

    std::vector<std::pair<PlantModel, OcpSpec>> problems;
    for (int n = 1; n <= 12; ++n) {
        for (const auto* c : {&jones, &pend}) {
            OcpSpec spec = c->spec;
            spec.horizon = n;
            problems.emplace_back(c->plant, spec);
        }
    }
    for (double r : parse_grid("logspace(-2,6,17)")) {
        OcpSpec spec = pend.spec;
        spec.R *= r;
        problems.emplace_back(pend.plant, spec);
    }
    oracle::Generator gen(9009);
    for (int i = 0; i < 100; ++i) {
        auto p = gen.problem(12);
        problems.emplace_back(p.plant, p.spec);
    }
    int jacobi_checks = 0, rshift_checks = 0, rshift_violations = 0, fixed_terminal_violations = 0;
    double worst_rshift = 0.0;
    for (const auto& [plant, spec] : problems) {
        const auto base = make_qp(plant, spec, false);
        const auto pre = make_qp(plant, spec, true);
        o.require(pre.spectral.kappa <= base.spectral.kappa * (1 + 1e-12), "Jacobi increased kappa");
        for (auto kind : kKinds)
            o.require(iteration_bound(pre, kind) <= iteration_bound(base, kind) * (1 + 1e-9), "Jacobi increased bound");
        ++jacobi_checks;

        for (double c : {1e-3, 0.1, 1.0, 100.0}) {
            OcpSpec shifted = spec;
            shifted.R += c * Matrix::Identity(plant.inputs(), plant.inputs());
            const double kappa = condense(plant, shifted).spectral.kappa;
            if (kappa > base.spectral.kappa * (1 + 1e-12)) {
                ++rshift_violations;
                worst_rshift = std::max(worst_rshift, kappa / base.spectral.kappa);
            }
            // Same shift with the terminal weight held at its unshifted value: H' = H + cI.
            const auto eig = linalg::sym_eig(base.H + c * Matrix::Identity(base.dim(), base.dim())).values;
            if (eig.maxCoeff() / eig.minCoeff() > base.spectral.kappa * (1 + 1e-12)) ++fixed_terminal_violations;
            ++rshift_checks;
        }
    }

    o.require(rshift_violations == 0, "R + cI increased kappa in " + std::to_string(rshift_violations) + " of " +
                                          std::to_string(rshift_checks) + " shifts (worst ratio " +
                                          std::to_string(worst_rshift) + ")");
    o.require(fixed_terminal_violations == 0, "H + cI increased kappa");

    int horizon_checks = 0;
    for (bool pre : {false, true}) {
        for (auto kind : kKinds) {
            const long ell = kind == SolverKind::Pgm ? pend.nominal_ell_pgm : pend.nominal_ell_apgm;
            double previous = 0.0;
            for (int n = 2; n <= 12; ++n, ++horizon_checks) {
                const double product = gain_report(benchmark_qp(pend, pre, n)).smallgain(ell, kind);
                o.require(product >= previous, "pendulum small-gain product decreased with N");
                previous = product;
            }
        }
    }
    if (!o.pass) o.detail << ". ";
    o.detail << gamma_checks << " gain steps, " << jacobi_checks << " preconditioning pairs, " << rshift_checks
             << " R shifts (" << rshift_violations << " raised kappa; " << fixed_terminal_violations
             << " with the terminal weight held fixed), " << horizon_checks << " horizon points. ";
}

// 10. Stepwise ISS inequalities along nominal Jones runs.
void iss_audits(Outcome& o) {
    const auto c = bench::jones_system();
    double worst_plant = INFINITY, worst_opt = INFINITY;
    int plant_steps = 0, opt_steps = 0;
    for (bool pre : {false, true}) {
        const auto qp = benchmark_qp(c, pre);
        const auto r = gain_report(qp);
        const Matrix bbar = qp.input_map();
        const Matrix hinv = qp.spectral.h.inv_sqrt * qp.spectral.h.inv_sqrt;
        for (auto kind : kKinds) {
            const long ell = kind == SolverKind::Pgm ? c.nominal_ell_pgm : c.nominal_ell_apgm;
            const auto log = simulate_tdo(qp, kind, ell, c.x0, Vector::Zero(qp.dim()), 60);
            std::vector<Vector> s, e;
            for (std::size_t k = 0; k < log.x.size(); ++k) s.push_back(oracle_solve(qp, log.x[k]));
            for (std::size_t k = 0; k < log.z.size(); ++k) e.push_back(log.z[k] - s[k]);

            for (std::size_t k = 0; k < log.z.size(); ++k) {
                if (!in_terminal_region(qp, log.x[k], s[k])) continue;
                const double slack = r.beta * log.psi[k] + w_norm(qp, bbar * e[k]) - log.psi[k + 1];
                worst_plant = std::min(worst_plant, slack);
                ++plant_steps;
            }
            if (kind != SolverKind::Pgm) continue;
            const double contraction = std::pow(r.eta, static_cast<double>(ell));
            for (std::size_t k = 0; k + 1 < log.z.size(); ++k) {
                const Vector gd = qp.G * (log.x[k + 1] - log.x[k]);
                const double rhs = contraction * e[k].norm() + contraction * r.b * std::sqrt(gd.dot(hinv * gd));
                worst_opt = std::min(worst_opt, rhs - e[k + 1].norm());
                ++opt_steps;
            }
        }
    }
    o.require(plant_steps > 0 && worst_plant >= -1e-6, "value-function ISS inequality");
    o.require(opt_steps > 0 && worst_opt >= -1e-6, "optimizer ISS recursion");
    o.detail << plant_steps << " plant steps (min slack " << worst_plant << "), " << opt_steps
             << " optimizer steps (min slack " << worst_opt << "). ";
}

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds, <= 0 for none
    std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "terminal weight dominance and W identities", 1.0, weight_identities},
        {2, "PGM per-iteration contraction on 100 random QPs", 30.0, pgm_rate_check},
        {3, "APGM H-norm factor on 100 random QPs", 60.0, apgm_rate_check},
        {4, "solution map and value function inequalities", 0.0, solution_map_inequalities},
        {5, "Jones iteration bounds over N = 1..10", 0.0, jones_bounds},
        {6, "pendulum APGM bound over the R sweep", 0.0, pendulum_bounds},
        {7, "stability at the certified budget", 0.0, small_gain_soundness},
        {8, "empirical vs theoretical budgets", 0.0, empirical_trend},
        {9, "mechanism monotonicities", 60.0, mechanisms},
        {10, "ISS inequality audits on Jones runs", 0.0, iss_audits},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "runtime %.2fs over %.0fs limit", secs, c.time_limit);
            o.require(false, buf);
        }
        failures += !o.pass;
        std::printf("[%s] criterion %2d: %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
