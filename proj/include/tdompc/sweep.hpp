#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdompc/io.hpp"

namespace tdompc {

enum class SweepAxis { None, Ell, RScale, Horizon };

SweepAxis parse_sweep_axis(std::string_view text);
std::string to_string(SweepAxis axis);

/// Grid mini-language: `a:b` (inclusive integer range), `logspace(lo,hi,count)` (base 10),
/// or a comma separated list of numbers.
std::vector<double> parse_grid(std::string_view text);

struct SweepRequest {
    io::ProblemDefinition problem;
    SolverKind kind = SolverKind::Pgm;
    bool precondition = false;
    long ell = 1;
    SweepAxis axis = SweepAxis::None;
    std::vector<double> grid;
    bool empirical = false;
    std::optional<long> ell_max;  // defaults to the certified budget of each point
    StabilityTest test;
};

struct SweepRow {
    double value = 0.0;
    long ell = 1;
    Certificate cert;
    double bound = 0.0;
    std::optional<long> empirical;
};

/// Condenses and (optionally) Jacobi-preconditions.
CondensedQp make_qp(const PlantModel& plant, const OcpSpec& spec, bool precondition);

SweepRow evaluate_point(const SweepRequest& request, double value);

/// Reference implementation: grid points evaluated in order on the calling thread.
std::vector<SweepRow> sweep_serial(const SweepRequest& request);

/// OpenMP over grid points with at most `jobs` threads. Rows come back in grid order and
/// match sweep_serial exactly.
std::vector<SweepRow> sweep_parallel(const SweepRequest& request, int jobs);

std::vector<std::string> sweep_columns(const SweepRequest& request);
std::vector<std::string> sweep_cells(const SweepRequest& request, const SweepRow& row);
void write_sweep_csv(std::ostream& out, const SweepRequest& request, const std::vector<SweepRow>& rows);

}  // namespace tdompc
