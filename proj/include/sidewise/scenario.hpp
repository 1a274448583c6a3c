#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sidewise/config.hpp"
#include "sidewise/field.hpp"
#include "sidewise/signal.hpp"

namespace sidewise {

enum class Pipeline { forward, adjoint, hum, characteristics, penalized, observability };

/// hum, characteristics, penalized or forward.
Pipeline pipeline_for_method(const std::string& name);

struct ScenarioOutcome {
    int exit_code = 0;  ///< 0 success, 1 tracking or bound check failed
    std::string message;
    /// Tracking error for control pipelines, field error against the closed-form
    /// reference for forward runs (NaN when no reference applies).
    double error = 0.0;
    nlohmann::json summary;
};

/// Runs one pipeline and, when `write` is set, emits its artifacts into
/// config.output.dir. Refuses exact-control runs with T <= L*beta by throwing
/// MinimalTimeError; malformed configs raise ConfigError.
ScenarioOutcome run_scenario(const RunConfig& config, Pipeline pipeline, bool write = true);

/// Zero-data, constant-coefficient reference for a left Dirichlet control u and
/// y(L, .) = 0: the reflected d'Alembert series with wave speed c.
double dalembert_reference(const Profile& u, double c, double length, double x, double t);

struct ConvergenceRow {
    std::size_t level = 0;
    std::size_t cells = 0;
    std::size_t steps = 0;
    double error = 0.0;
    double order = 0.0;  ///< log2(e_{k-1}/e_k); NaN on the first level or when an error is 0
};

/// Reruns config.method on N, 2N, 4N, ... cells (levels >= 3). Forward runs
/// report the field error against dalembert_reference; the others their
/// tracking error. Levels run concurrently with per-level artifact folders
/// level_<k> when `write` is set, plus convergence.csv.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config, std::size_t levels, bool write = true);

}  // namespace sidewise
