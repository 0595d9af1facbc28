#include "tdompc/tolerances.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "tdompc/errors.hpp"

namespace tdompc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0.0))
        throw InvalidProblemError("tolerance '" + std::string(key) + "' needs a positive number, got '" +
                                  std::string(text) + "'");
    return value;
}

}  // namespace

Tolerances parse_tolerances(std::string_view overrides, Tolerances base) {
    while (!overrides.empty()) {
        const auto comma = overrides.find(',');
        const auto item = trim(overrides.substr(0, comma));
        overrides = comma == std::string_view::npos ? std::string_view{} : overrides.substr(comma + 1);
        if (item.empty()) continue;

        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw InvalidProblemError("tolerance override '" + std::string(item) + "' is not key=value");
        const auto key = trim(item.substr(0, eq));
        const double v = parse_double(key, trim(item.substr(eq + 1)));

        if (key == "symmetry") base.symmetry = v;
        else if (key == "jacobi_offdiag") base.jacobi_offdiag = v;
        else if (key == "spd_ratio") base.spd_ratio = v;
        else if (key == "fixed_point") base.fixed_point = v;
        else if (key == "fixed_point_iters") base.fixed_point_iters = static_cast<long>(v);
        else if (key == "riccati_residual") base.riccati_residual = v;
        else if (key == "oracle") base.oracle = v;
        else if (key == "oracle_iters") base.oracle_iters = static_cast<long>(v);
        else if (key == "unit_kappa") base.unit_kappa = v;
        else throw InvalidProblemError("unknown tolerance key '" + std::string(key) + "'");
    }
    return base;
}

namespace {

Tolerances& mutable_defaults() {
    static Tolerances tol = [] {
        const char* env = std::getenv("TDO_MPC_TOL");
        return env ? parse_tolerances(env) : Tolerances{};
    }();
    return tol;
}

}  // namespace

const Tolerances& default_tolerances() { return mutable_defaults(); }

void set_default_tolerances(const Tolerances& tol) { mutable_defaults() = tol; }

}  // namespace tdompc
