#include "tdompc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "tdompc/errors.hpp"

namespace tdompc::io {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

const json& field(const json& doc, const char* key) {
    if (!doc.contains(key)) throw InvalidProblemError(std::string("problem definition is missing '") + key + "'");
    return doc.at(key);
}

Matrix matrix_from_json(const json& doc, const char* key) {
    const json& rows = field(doc, key);
    if (!rows.is_array() || rows.empty() || !rows.front().is_array() || rows.front().empty())
        throw InvalidProblemError(std::string("'") + key + "' must be a non-empty array of rows");
    const auto r = static_cast<Index>(rows.size());
    const auto c = static_cast<Index>(rows.front().size());
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != c)
            throw InvalidProblemError(std::string("'") + key + "' has ragged rows");
        for (Index j = 0; j < c; ++j) {
            const json& cell = row[static_cast<std::size_t>(j)];
            if (!cell.is_number()) throw InvalidProblemError(std::string("'") + key + "' has a non-numeric entry");
            m(i, j) = cell.get<double>();
        }
    }
    return m;
}

Vector vector_from_json(const json& doc, const char* key) {
    const json& arr = field(doc, key);
    if (!arr.is_array() || arr.empty()) throw InvalidProblemError(std::string("'") + key + "' must be a non-empty array");
    Vector v(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw InvalidProblemError(std::string("'") + key + "' has a non-numeric entry");
        v(static_cast<Index>(i)) = arr[i].get<double>();
    }
    return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ProblemDefinition& p) {
    return json{{"A", matrix_to_json(p.plant.A)},
                {"B", matrix_to_json(p.plant.B)},
                {"Q", matrix_to_json(p.spec.Q)},
                {"R", matrix_to_json(p.spec.R)},
                {"N", p.spec.horizon},
                {"box_lower", vector_to_json(p.spec.box.lower)},
                {"box_upper", vector_to_json(p.spec.box.upper)},
                {"x0", vector_to_json(p.x0)}};
}

ProblemDefinition problem_from_json(const json& doc) {
    if (!doc.is_object()) throw InvalidProblemError("problem definition must be a JSON object");
    ProblemDefinition p;
    p.plant.A = matrix_from_json(doc, "A");
    p.plant.B = matrix_from_json(doc, "B");
    p.spec.Q = matrix_from_json(doc, "Q");
    p.spec.R = matrix_from_json(doc, "R");
    const json& n = field(doc, "N");
    if (!n.is_number_integer() || n.get<long>() < 1) throw InvalidProblemError("'N' must be a positive integer");
    p.spec.horizon = n.get<int>();
    p.spec.box.lower = vector_from_json(doc, "box_lower");
    p.spec.box.upper = vector_from_json(doc, "box_upper");
    p.x0 = vector_from_json(doc, "x0");
    return p;
}

ProblemDefinition load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidProblemError("cannot open problem file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidProblemError("problem file '" + path + "' is not valid JSON: " + e.what());
    }
    return problem_from_json(doc);
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& gain_report_columns() {
    static const std::vector<std::string> cols{"kappa", "eta",      "ell_bar",    "b",
                                               "beta",  "gamma1",   "zeta",       "zeta_a",
                                               "ell_star", "ell_star_a", "smallgain_at_ell", "verdict"};
    return cols;
}

std::vector<std::string> gain_report_row(const Certificate& c) {
    const GainReport& r = c.report;
    return {format_number(r.kappa),  format_number(r.eta),        format_number(r.ell_bar),
            format_number(r.b),      format_number(r.beta),       format_number(r.gamma1),
            format_number(r.zeta),   format_number(r.zeta_a),     format_number(r.ell_star),
            format_number(r.ell_star_a), format_number(c.smallgain), c.stable ? "stable" : "not-certified"};
}

json to_json(const Certificate& c) {
    const GainReport& r = c.report;
    return json{{"solver", to_string(c.kind)},
                {"ell", c.ell},
                {"kappa", number_or_null(r.kappa)},
                {"eta", number_or_null(r.eta)},
                {"ell_bar", number_or_null(r.ell_bar)},
                {"b", number_or_null(r.b)},
                {"beta", number_or_null(r.beta)},
                {"gamma1", number_or_null(r.gamma1)},
                {"zeta", number_or_null(r.zeta)},
                {"zeta_a", number_or_null(r.zeta_a)},
                {"ell_star", number_or_null(r.ell_star)},
                {"ell_star_a", number_or_null(r.ell_star_a)},
                {"smallgain_at_ell", number_or_null(c.smallgain)},
                {"verdict", c.stable ? "stable" : "not-certified"}};
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line;
}

json trajectory_metadata(const TrajectoryLog& log) {
    const Index n = log.x.empty() ? 0 : log.x.front().size();
    const Index m = log.u.empty() ? 0 : log.u.front().size();
    return json{{"ell", log.ell},
                {"kind", log.kind ? to_string(*log.kind) : std::string("optimal")},
                {"steps", log.steps},
                {"preconditioned", log.preconditioned},
                {"states", n},
                {"inputs", m},
                {"error_logging", !log.e_norm.empty()}};
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
    const Index n = log.x.empty() ? 0 : log.x.front().size();
    const Index m = log.u.empty() ? 0 : log.u.front().size();

    out << "# " << trajectory_metadata(log).dump() << '\n';
    std::vector<std::string> header{"k"};
    for (Index i = 0; i < n; ++i) header.push_back("x_" + std::to_string(i + 1));
    for (Index i = 0; i < m; ++i) header.push_back("u_" + std::to_string(i + 1));
    header.push_back("e_norm");
    header.push_back("psi");
    out << csv_line(header) << '\n';

    for (std::size_t k = 0; k < log.x.size(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (Index i = 0; i < n; ++i) row.push_back(format_number(log.x[k](i)));
        const bool has_input = k < log.u.size();
        for (Index i = 0; i < m; ++i) row.push_back(has_input ? format_number(log.u[k](i)) : "");
        row.push_back(k < log.e_norm.size() ? format_number(log.e_norm[k]) : "");
        row.push_back(k < log.psi.size() ? format_number(log.psi[k]) : "");
        out << csv_line(row) << '\n';
    }
}

}  // namespace tdompc::io
