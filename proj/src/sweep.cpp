#include "tdompc/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>

#include "tdompc/errors.hpp"

namespace tdompc {

SweepAxis parse_sweep_axis(std::string_view text) {
    if (text == "none") return SweepAxis::None;
    if (text == "ell") return SweepAxis::Ell;
    if (text == "rscale") return SweepAxis::RScale;
    if (text == "horizon") return SweepAxis::Horizon;
    throw InvalidProblemError("unknown sweep axis '" + std::string(text) + "' (expected ell, rscale, horizon or none)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Ell: return "ell";
        case SweepAxis::RScale: return "rscale";
        case SweepAxis::Horizon: return "horizon";
        case SweepAxis::None: break;
    }
    return "none";
}

namespace {

double to_double(std::string_view text, std::string_view context) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw InvalidProblemError("bad number '" + std::string(text) + "' in grid '" + std::string(context) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return parts;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    const std::string_view original = text;
    std::vector<double> grid;
    if (text.starts_with("logspace(") && text.ends_with(")")) {
        text.remove_prefix(9);
        text.remove_suffix(1);
        const auto parts = split(text, ',');
        if (parts.size() != 3) throw InvalidProblemError("logspace needs (lo,hi,count)");
        const double lo = to_double(parts[0], original);
        const double hi = to_double(parts[1], original);
        const double count = to_double(parts[2], original);
        if (count < 1 || count != std::floor(count)) throw InvalidProblemError("logspace count must be a positive integer");
        const auto n = static_cast<int>(count);
        for (int i = 0; i < n; ++i) {
            const double e = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            grid.push_back(std::pow(10.0, e));
        }
    } else if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 2) throw InvalidProblemError("range grid must be a:b");
        const double a = to_double(parts[0], original);
        const double b = to_double(parts[1], original);
        if (a != std::floor(a) || b != std::floor(b) || b < a)
            throw InvalidProblemError("range grid a:b needs integers with a <= b");
        for (double v = a; v <= b; v += 1.0) grid.push_back(v);
    } else {
        for (const auto part : split(text, ',')) grid.push_back(to_double(part, original));
    }
    if (grid.empty()) throw InvalidProblemError("grid is empty");
    return grid;
}

CondensedQp make_qp(const PlantModel& plant, const OcpSpec& spec, bool precondition) {
    CondensedQp qp = condense(plant, spec);
    if (precondition) return jacobi_precondition(qp).qp;
    return qp;
}

SweepRow evaluate_point(const SweepRequest& request, double value) {
    OcpSpec spec = request.problem.spec;
    SweepRow row;
    row.value = value;
    row.ell = request.ell;
    switch (request.axis) {
        case SweepAxis::Ell:
            if (value < 1 || value != std::floor(value)) throw InvalidProblemError("ell grid values must be integers >= 1");
            row.ell = static_cast<long>(value);
            break;
        case SweepAxis::RScale:
            if (!(value > 0.0)) throw InvalidProblemError("rscale grid values must be positive");
            spec.R *= value;
            break;
        case SweepAxis::Horizon:
            if (value < 1 || value != std::floor(value)) throw InvalidProblemError("horizon grid values must be integers >= 1");
            spec.horizon = static_cast<int>(value);
            break;
        case SweepAxis::None:
            break;
    }

    const CondensedQp qp = make_qp(request.problem.plant, spec, request.precondition);
    row.cert = certify(qp, row.ell, request.kind);
    row.bound = row.cert.report.bound(request.kind);
    if (request.empirical) {
        const long ell_max = request.ell_max.value_or(certified_budget(row.bound));
        row.empirical = empirical_min_iterations(qp, request.kind, request.problem.x0, ell_max, request.test);
    }
    return row;
}

namespace {

const std::vector<double>& grid_of(const SweepRequest& request) {
    static const std::vector<double> single{0.0};
    return request.axis == SweepAxis::None ? single : request.grid;
}

}  // namespace

std::vector<SweepRow> sweep_serial(const SweepRequest& request) {
    std::vector<SweepRow> rows;
    for (const double v : grid_of(request)) rows.push_back(evaluate_point(request, v));
    return rows;
}

std::vector<SweepRow> sweep_parallel(const SweepRequest& request, int jobs) {
    const auto& grid = grid_of(request);
    const auto count = static_cast<long>(grid.size());
    std::vector<SweepRow> rows(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1))
    for (long i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            rows[idx] = evaluate_point(request, grid[idx]);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<std::string> sweep_columns(const SweepRequest& request) {
    std::vector<std::string> cols{"axis", "value", "solver", "ell", "preconditioned"};
    const auto& report = io::gain_report_columns();
    cols.insert(cols.end(), report.begin(), report.end());
    cols.push_back("bound");
    cols.push_back("certified_ell");
    if (request.empirical) cols.push_back("empirical_min_ell");
    return cols;
}

std::vector<std::string> sweep_cells(const SweepRequest& request, const SweepRow& row) {
    std::vector<std::string> cells{to_string(request.axis),
                                   request.axis == SweepAxis::None ? "" : io::format_number(row.value),
                                   to_string(request.kind), std::to_string(row.ell),
                                   request.precondition ? "1" : "0"};
    const auto report = io::gain_report_row(row.cert);
    cells.insert(cells.end(), report.begin(), report.end());
    cells.push_back(io::format_number(row.bound));
    cells.push_back(std::isfinite(row.bound) ? std::to_string(certified_budget(row.bound)) : "");
    if (request.empirical) cells.push_back(row.empirical ? std::to_string(*row.empirical) : "not-found");
    return cells;
}

void write_sweep_csv(std::ostream& out, const SweepRequest& request, const std::vector<SweepRow>& rows) {
    out << io::csv_line(sweep_columns(request)) << '\n';
    for (const auto& row : rows) out << io::csv_line(sweep_cells(request, row)) << '\n';
}

}  // namespace tdompc
