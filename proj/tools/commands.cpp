#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tdompc/benchmarks.hpp"
#include "tdompc/errors.hpp"
#include "tdompc/sweep.hpp"

namespace tdompc::cli {

namespace {

struct RunConfig {
    std::string bench;
    std::string problem_path;
    std::string solver = "pgm";
    std::optional<long> ell;
    bool precondition = false;
    std::optional<int> horizon;
    std::optional<double> rscale;
    std::string axis = "none";
    std::string grid;
    std::string out;
    std::string csv;
    int steps = 400;
    double eps = 1e-4;
    int jobs = 1;
    bool empirical = false;
    std::optional<long> ell_max;
    bool no_error_log = false;
    std::string tol;
};

struct Problem {
    io::ProblemDefinition def;
    std::optional<bench::BenchmarkCase> bench;
};

Problem load(const RunConfig& cfg) {
    if (cfg.bench.empty() == cfg.problem_path.empty())
        throw InvalidProblemError("exactly one of --bench or --problem is required");
    Problem p;
    if (!cfg.bench.empty()) {
        auto c = bench::by_name(cfg.bench);
        p.def = {c.plant, c.spec, c.x0};
        p.bench = std::move(c);
    } else {
        p.def = io::load_problem(cfg.problem_path);
    }
    if (cfg.horizon) {
        if (*cfg.horizon < 1) throw InvalidProblemError("--horizon must be >= 1");
        p.def.spec.horizon = *cfg.horizon;
    }
    if (cfg.rscale) {
        if (!(*cfg.rscale > 0.0)) throw InvalidProblemError("--rscale must be positive");
        p.def.spec.R *= *cfg.rscale;
    }
    if (p.def.x0.size() != p.def.plant.states()) throw DimensionError("x0 does not match the number of states");
    return p;
}

long resolve_ell(const RunConfig& cfg, const Problem& p, SolverKind kind) {
    if (cfg.ell) {
        if (*cfg.ell < 1) throw InvalidProblemError("--ell must be >= 1");
        return *cfg.ell;
    }
    if (p.bench) return kind == SolverKind::Pgm ? p.bench->nominal_ell_pgm : p.bench->nominal_ell_apgm;
    throw InvalidProblemError("--ell is required for problem files");
}

StabilityTest stability_test(const RunConfig& cfg) {
    if (cfg.steps < 1) throw InvalidProblemError("--steps must be >= 1");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw InvalidProblemError("--eps must lie in (0, 1)");
    return {cfg.steps, cfg.eps};
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidProblemError("cannot write '" + path + "'");
    write(f);
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
    const Problem p = load(cfg);
    const SolverKind kind = parse_solver_kind(cfg.solver);
    const long ell = resolve_ell(cfg, p, kind);
    const CondensedQp qp = make_qp(p.def.plant, p.def.spec, cfg.precondition);
    const Certificate cert = certify(qp, ell, kind);

    emit(cfg.out, out, [&](std::ostream& os) { os << io::to_json(cert).dump(2) << '\n'; });
    emit(cfg.csv, out, [&](std::ostream& os) {
        os << io::csv_line(io::gain_report_columns()) << '\n' << io::csv_line(io::gain_report_row(cert)) << '\n';
    });
    return cert.stable ? kExitOk : kExitNotCertified;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const Problem p = load(cfg);
    const SolverKind kind = parse_solver_kind(cfg.solver);
    const long ell = resolve_ell(cfg, p, kind);
    const StabilityTest test = stability_test(cfg);
    const CondensedQp qp = make_qp(p.def.plant, p.def.spec, cfg.precondition);

    SimOptions opts;
    opts.log_errors = !cfg.no_error_log;
    const TrajectoryLog log =
        simulate_tdo(qp, kind, ell, p.def.x0, project(Vector::Zero(qp.dim()), qp.box), test.horizon_steps, opts);

    emit(cfg.out, out, [&](std::ostream& os) { io::write_trajectory_csv(os, log); });
    return passes(log, test) ? kExitOk : kExitNotCertified;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const Problem p = load(cfg);
    SweepRequest req;
    req.problem = p.def;
    req.kind = parse_solver_kind(cfg.solver);
    req.precondition = cfg.precondition;
    req.axis = parse_sweep_axis(cfg.axis);
    if (req.axis == SweepAxis::Ell) {
        req.ell = cfg.ell.value_or(1);
    } else {
        req.ell = resolve_ell(cfg, p, req.kind);
    }
    if (req.axis != SweepAxis::None) {
        if (cfg.grid.empty()) throw InvalidProblemError("--grid is required for a sweep axis");
        req.grid = parse_grid(cfg.grid);
    }
    req.empirical = cfg.empirical;
    req.ell_max = cfg.ell_max;
    req.test = stability_test(cfg);
    if (cfg.jobs < 1) throw InvalidProblemError("--jobs must be >= 1");

    const auto rows = cfg.jobs == 1 ? sweep_serial(req) : sweep_parallel(req, cfg.jobs);
    emit(cfg.out, out, [&](std::ostream& os) { write_sweep_csv(os, req, rows); });
    return kExitOk;
}

void add_problem_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--bench", cfg.bench, "Built-in benchmark: jones or pendulum");
    cmd->add_option("--problem", cfg.problem_path, "Problem definition JSON file");
    cmd->add_option("--solver", cfg.solver, "pgm or apgm");
    cmd->add_option("--ell", cfg.ell, "Solver iterations per sampling instant");
    cmd->add_flag("--precondition", cfg.precondition, "Apply Jacobi diagonal preconditioning");
    cmd->add_option("--horizon", cfg.horizon, "Override the horizon N");
    cmd->add_option("--rscale", cfg.rscale, "Scale R by this factor");
    cmd->add_option("--out", cfg.out, "Output path (default stdout)");
    cmd->add_option("--tol", cfg.tol, "Tolerance overrides, key=value[,key=value]");
}

void add_stability_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--steps", cfg.steps, "Stability test horizon (closed-loop steps)");
    cmd->add_option("--eps", cfg.eps, "Stability test shrink tolerance");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certification and simulation of time-distributed MPC"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* certify_cmd = app.add_subcommand("certify", "Compute gains and the small-gain verdict");
    add_problem_options(certify_cmd, cfg);
    certify_cmd->add_option("--csv", cfg.csv, "CSV output path (default stdout)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate the coupled plant/optimizer loop");
    add_problem_options(simulate_cmd, cfg);
    add_stability_options(simulate_cmd, cfg);
    simulate_cmd->add_flag("--no-error-log", cfg.no_error_log, "Skip per-step oracle solves");

    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate certification data over a parameter grid");
    add_problem_options(sweep_cmd, cfg);
    add_stability_options(sweep_cmd, cfg);
    sweep_cmd->add_option("--axis", cfg.axis, "ell, rscale, horizon or none");
    sweep_cmd->add_option("--grid", cfg.grid, "a:b, logspace(lo,hi,count) or a comma list");
    sweep_cmd->add_option("--jobs", cfg.jobs, "Concurrent grid points");
    sweep_cmd->add_flag("--empirical", cfg.empirical, "Also search the empirical minimum stabilizing ell");
    sweep_cmd->add_option("--ell-max", cfg.ell_max, "Upper limit for the empirical search");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (!cfg.tol.empty()) set_default_tolerances(parse_tolerances(cfg.tol, default_tolerances()));
        if (certify_cmd->parsed()) return cmd_certify(cfg, out);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
        return cmd_sweep(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace tdompc::cli
