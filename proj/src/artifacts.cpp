#include "sidewise/artifacts.hpp"

#include <cstdio>
#include <fstream>

#include "sidewise/errors.hpp"

namespace sidewise {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ContractError("csv: header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ContractError("csv: columns have different lengths");
    auto out = open_for_write(path);
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_number(columns[j][r]);
        out << '\n';
    }
}

void write_control_csv(const std::filesystem::path& path, const ControlResult& result) {
    const auto& u = result.control;
    std::vector<double> t(u.size()), v(u.values().begin(), u.values().end());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = u.time(n);
    write_columns_csv(path, {"t", "u"}, {t, v});
}

void write_flux_csv(const std::filesystem::path& path, const ControlResult& result) {
    const auto& y = result.achieved_flux;
    const std::size_t m = y.size();
    std::vector<double> t(m), target(m), achieved(m), error(m);
    for (std::size_t n = 0; n < m; ++n) {
        t[n] = y.time(n);
        target[n] = n < result.target.size() ? result.target[n] : 0.0;
        achieved[n] = y[n];
        error[n] = n > result.tracking_level ? achieved[n] - target[n] : 0.0;
    }
    write_columns_csv(path, {"t", "target", "achieved", "error"}, {t, target, achieved, error});
}

void write_field_binary(const std::filesystem::path& path, const SpaceTimeField& field) {
    auto out = open_for_write(path, std::ios::binary);
    field.write_binary(out);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    auto out = open_for_write(path);
    out << value.dump(2) << '\n';
}

nlohmann::json base_summary(const RunConfig& config, const CoefficientField& field, const Grid1D& grid) {
    nlohmann::json s;
    s["beta"] = beta(field);
    s["min_time"] = minimal_control_time(field);
    s["C1_theoretical"] = theoretical_observability_constant(field);
    s["constants"] = {{"growth_factor", variation_growth_factor(field)},
                      {"rho0", bounds(field).rho0},
                      {"a0", bounds(field).a0},
                      {"tv_rho", total_variation(field).rho},
                      {"tv_a", total_variation(field).a}};
    s["grid"] = {{"L", grid.length}, {"N", grid.cells}, {"T", grid.horizon}, {"M", grid.steps},
                 {"dx", grid.dx()}, {"dt", grid.dt()}, {"cfl_safety", grid.cfl_safety},
                 {"courant", grid.courant_number(field)}};
    s["seed"] = config.seed;
    s["config_hash"] = config_hash(config);
    return s;
}

nlohmann::json control_summary(const ControlResult& result) {
    nlohmann::json s;
    s["iterations"] = result.iterations;
    s["converged"] = result.converged;
    s["message"] = result.message;
    s["J_history"] = result.j_history;
    s["residual_history"] = result.residual_history;
    s["tracking_error_L2"] = result.tracking_error_l2;
    s["tracking_from"] = result.achieved_flux.empty() ? 0.0 : result.achieved_flux.time(result.tracking_level);
    return s;
}

}  // namespace sidewise
