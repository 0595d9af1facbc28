#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdompc/certify.hpp"
#include "tdompc/sim.hpp"

namespace tdompc::io {

/// Problem-definition document: {A, B, Q, R, N, box_lower, box_upper, x0}, matrices as
/// row-major nested arrays.
struct ProblemDefinition {
    PlantModel plant;
    OcpSpec spec;
    Vector x0;
};

nlohmann::json to_json(const ProblemDefinition& problem);
/// Throws InvalidProblemError on missing fields or ragged matrices.
ProblemDefinition problem_from_json(const nlohmann::json& doc);
ProblemDefinition load_problem(const std::string& path);

/// 12 significant digits, '.' decimal point, independent of the global locale.
std::string format_number(double value);

/// kappa, eta, ell_bar, b, beta, gamma1, zeta, zeta_a, ell_star, ell_star_a, smallgain_at_ell, verdict
const std::vector<std::string>& gain_report_columns();
std::vector<std::string> gain_report_row(const Certificate& cert);
/// Flat object with the report columns plus solver and ell.
nlohmann::json to_json(const Certificate& cert);

std::string csv_line(const std::vector<std::string>& cells);

/// Run metadata (ell, kind, steps, preconditioned, dimensions).
nlohmann::json trajectory_metadata(const TrajectoryLog& log);

/// `# <metadata json>` line, header `k,x_1..x_n,u_1..u_m,e_norm,psi`, one row per recorded
/// state. The final state row leaves the input and e_norm cells empty.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

}  // namespace tdompc::io
