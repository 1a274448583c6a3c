#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sidewise/coefficients.hpp"
#include "sidewise/config.hpp"
#include "sidewise/field.hpp"
#include "sidewise/grid.hpp"
#include "sidewise/hum_control.hpp"
#include "sidewise/signal.hpp"

namespace sidewise {

/// %.17g, so every double survives a text round trip.
std::string format_number(double v);

/// Writes a header line and rows of equal-length columns.
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

/// control.csv: t,u
void write_control_csv(const std::filesystem::path& path, const ControlResult& result);

/// flux.csv: t,target,achieved,error
void write_flux_csv(const std::filesystem::path& path, const ControlResult& result);

void write_field_binary(const std::filesystem::path& path, const SpaceTimeField& field);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// beta, min_time, C1_theoretical, grid parameters, seed and config hash.
nlohmann::json base_summary(const RunConfig& config, const CoefficientField& field, const Grid1D& grid);

/// iterations, J_history, residual_history, tracking_error_L2, converged, message.
nlohmann::json control_summary(const ControlResult& result);

}  // namespace sidewise
