#include "sidewise/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include "sidewise/artifacts.hpp"
#include "sidewise/characteristics.hpp"
#include "sidewise/hum_control.hpp"
#include "sidewise/observability.hpp"
#include "sidewise/wave_solver.hpp"

namespace sidewise {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Profile target_profile(const ProblemSpec& p) {
    if (p.target.kind != "factored") return make_profile(p.target);
    const Profile phi = make_profile(p.phi);
    const Profile q = make_profile(p.q);
    return [phi, q](double t) {
        const double h = 1e-5;
        return (phi(t + h) * q(t + h) - phi(t - h) * q(t - h)) / (2.0 * h);
    };
}

std::vector<double> on_nodes(const Profile& f, const Grid1D& grid) {
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
    return v;
}

std::vector<double> times_of(const TimeSignal& s) {
    std::vector<double> t(s.size());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = s.time(n);
    return t;
}

std::vector<double> values_of(const TimeSignal& s) { return {s.values().begin(), s.values().end()}; }

bool is_constant(const CoefficientField& field) {
    const auto b = bounds(field);
    return b.rho0 == b.rho1 && b.a0 == b.a1;
}

int tracking_exit(double error, double tol) { return error <= tol ? 0 : 1; }

HumOptions hum_options(const MethodSpec& m) {
    HumOptions o;
    o.max_iter = m.max_iter;
    o.tol = m.tol;
    o.preconditioner = m.preconditioner == "h1" ? Preconditioner::h1 : Preconditioner::none;
    return o;
}

SidewiseProblem control_problem(const RunConfig& config, const CoefficientField& field, const Grid1D& grid) {
    const auto target = TimeSignal::sample(grid, target_profile(config.problem));
    auto problem = SidewiseProblem::with_zero_data(field, grid, target);
    problem.y0 = on_nodes(make_profile(config.problem.y0), grid);
    problem.y1 = on_nodes(make_profile(config.problem.y1), grid);
    return problem;
}

void write_control_artifacts(const fs::path& dir, const ControlResult& result, const nlohmann::json& summary) {
    write_control_csv(dir / "control.csv", result);
    write_flux_csv(dir / "flux.csv", result);
    write_json(dir / "summary.json", summary);
}

ScenarioOutcome run_forward(const RunConfig& config, const CoefficientField& field, const Grid1D& grid,
                            bool write) {
    const auto& p = config.problem;
    const Profile u = make_profile(p.control);
    const auto y = solve_forward(field, grid, on_nodes(make_profile(p.y0), grid), on_nodes(make_profile(p.y1), grid),
                                 TimeSignal::sample(grid, u), TimeSignal::sample(grid, make_profile(p.right)));
    const auto left = extract_flux(y, field, Side::left);
    const auto right = extract_flux(y, field, Side::right);

    ScenarioOutcome out;
    out.error = kNaN;
    if (is_constant(field) && p.y0.kind == "zero" && p.y1.kind == "zero" && p.right.kind == "zero") {
        const double c = std::sqrt(field.a()[0] / field.rho()[0]);
        double diff = 0.0, ref = 0.0;
        for (std::size_t n = 0; n < y.levels(); ++n)
            for (std::size_t i = 0; i < y.nodes(); ++i) {
                const double r = dalembert_reference(u, c, grid.length, grid.x(i), grid.t(n));
                diff += (y(i, n) - r) * (y(i, n) - r);
                ref += r * r;
            }
        out.error = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
    }

    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "solve-forward";
    out.summary["max_abs"] = y.max_abs();
    if (grid.steps >= 2) {
        out.summary["energy_first"] = discrete_energy(y, field, 1);
        out.summary["energy_last"] = discrete_energy(y, field, grid.steps - 1);
    }
    out.summary["field_error_L2"] = std::isnan(out.error) ? nlohmann::json(nullptr) : nlohmann::json(out.error);
    if (write) {
        const fs::path dir = config.output.dir;
        write_columns_csv(dir / "flux.csv", {"t", "flux_left", "flux_right"},
                          {times_of(left), values_of(left), values_of(right)});
        if (config.output.field) write_field_binary(dir / "field.bin", y);
        write_json(dir / "summary.json", out.summary);
    }
    return out;
}

ScenarioOutcome run_adjoint(const RunConfig& config, const CoefficientField& field, const Grid1D& grid,
                            bool write) {
    const double min_time = minimal_control_time(field);
    if (!(grid.horizon > min_time)) throw MinimalTimeError(grid.horizon, min_time);
    const std::size_t cut = cutoff_level(field, grid);
    const auto s = TimeSignal::sample(grid, make_profile(config.problem.adjoint), grid.t(cut));
    const auto psi = solve_adjoint(field, grid, s);
    const auto observed = extract_flux(psi, field, Side::left);

    ScenarioOutcome out;
    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "solve-adjoint";
    out.summary["max_abs"] = psi.max_abs();
    const double norm = h1_star_norm(s, cut);
    const double obs = l2_norm(observed);
    out.summary["h1_star_norm"] = norm;
    out.summary["observed_L2"] = obs;
    out.summary["observability_ratio"] = obs > 0.0 ? nlohmann::json(norm / obs) : nlohmann::json(nullptr);
    out.error = 0.0;
    if (write) {
        const fs::path dir = config.output.dir;
        write_columns_csv(dir / "flux.csv", {"t", "s", "psi_x_left"}, {times_of(s), values_of(s), values_of(observed)});
        if (config.output.field) write_field_binary(dir / "field.bin", psi);
        write_json(dir / "summary.json", out.summary);
    }
    return out;
}

ScenarioOutcome run_hum(const RunConfig& config, const CoefficientField& field, const Grid1D& grid, bool write) {
    const auto problem = control_problem(config, field, grid);
    const auto result = minimize_J(problem, hum_options(config.method));

    ScenarioOutcome out;
    out.error = result.tracking_error_l2;
    out.exit_code = tracking_exit(out.error, config.method.tracking_tol);
    out.message = result.message;
    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "hum-control";
    out.summary.update(control_summary(result));
    if (write) write_control_artifacts(config.output.dir, result, out.summary);
    return out;
}

ScenarioOutcome run_penalized(const RunConfig& config, const CoefficientField& field, const Grid1D& grid,
                              bool write) {
    const auto problem = control_problem(config, field, grid);
    const auto options = hum_options(config.method);
    std::vector<std::future<ControlResult>> jobs;
    for (double kappa : config.method.kappa)
        jobs.push_back(std::async(std::launch::async,
                                  [&problem, &options, kappa] { return penalized_optimal_control(problem, kappa, options); }));
    std::vector<ControlResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    const auto& last = results.back();
    ScenarioOutcome out;
    out.error = last.tracking_error_l2;
    out.exit_code = tracking_exit(out.error, config.method.tracking_tol);
    out.message = last.message;
    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "penalized";
    out.summary.update(control_summary(last));
    out.summary["kappa"] = config.method.kappa.back();
    std::vector<double> errors, iterations, norms;
    for (const auto& r : results) {
        errors.push_back(r.tracking_error_l2);
        iterations.push_back(static_cast<double>(r.iterations));
        norms.push_back(l2_norm(r.control));
    }
    out.summary["sweep"] = {{"kappa", config.method.kappa}, {"tracking_error_L2", errors}, {"control_L2", norms}};
    if (write) {
        const fs::path dir = config.output.dir;
        write_columns_csv(dir / "kappa_sweep.csv", {"kappa", "tracking_error_L2", "iterations", "control_L2"},
                          {config.method.kappa, errors, iterations, norms});
        write_control_artifacts(dir, last, out.summary);
    }
    return out;
}

ScenarioOutcome run_characteristics(const RunConfig& config, const CoefficientField& field, const Grid1D& grid,
                                    bool write) {
    const double min_time = minimal_control_time(field);
    if (!(grid.horizon > min_time)) throw MinimalTimeError(grid.horizon, min_time);
    SpliceSpec spec;
    spec.length = grid.length;
    spec.t_bar = config.method.t_bar;
    spec.horizon = grid.horizon;
    const std::size_t fine = std::max<std::size_t>(4000, 8 * grid.steps);
    const Grid1D q_grid{grid.length, grid.cells, grid.horizon, fine, grid.cfl_safety};
    spec.q = TimeSignal::sample(q_grid, target_profile(config.problem));
    if (config.method.datum.kind != "zero") {
        const Grid1D f_grid{grid.length, grid.cells, grid.length, fine, grid.cfl_safety};
        spec.f = TimeSignal::sample(f_grid, make_profile(config.method.datum));
    }
    CharacteristicsOptions options;
    options.cells = grid.cells;
    options.cfl_safety = grid.cfl_safety;
    options.tracking_tol = config.method.tracking_tol;
    const auto result = build_control(spec, field, options);

    ScenarioOutcome out;
    out.error = result.control.tracking_error_l2;
    out.exit_code = tracking_exit(out.error, config.method.tracking_tol);
    out.message = result.control.message;
    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "char-control";
    out.summary.update(control_summary(result.control));
    out.summary["t_bar"] = spec.t_bar;
    out.summary["step3_residual"] = result.step3_residual;
    out.summary["triangle_gap"] = result.triangle_gap;
    if (write) {
        write_control_artifacts(config.output.dir, result.control, out.summary);
        if (config.output.field) write_field_binary(fs::path(config.output.dir) / "field.bin", result.leftward);
    }
    return out;
}

ScenarioOutcome run_observability(const RunConfig& config, const CoefficientField& field, const Grid1D& grid,
                                  bool write) {
    ObservabilityOptions options;
    options.samples = config.observability.samples;
    options.seed = config.seed;
    options.modes = config.observability.modes;
    options.disc_tol = config.observability.disc_tol;
    const auto report = observability_report(field, grid, options);

    ScenarioOutcome out;
    out.error = report.ratios.empty() ? 0.0 : *std::max_element(report.ratios.begin(), report.ratios.end());
    out.exit_code = report.ratio_violations + report.bound_violations == 0 ? 0 : 1;
    if (out.exit_code) out.message = "observability ratio or energy bound violated beyond disc_tol";
    out.summary = base_summary(config, field, grid);
    out.summary["pipeline"] = "observability-report";
    out.summary["C2_empirical"] = report.c2_empirical;
    out.summary["disc_tol"] = report.disc_tol;
    out.summary["ratios"] = report.ratios;
    out.summary["F_profile"] = report.f_profile;
    out.summary["bound_margin"] = report.bound_margin;
    out.summary["trace_margin"] = report.trace_margin;
    out.summary["velocity_margin"] = report.velocity_margin;
    out.summary["ratio_violations"] = report.ratio_violations;
    out.summary["bound_violations"] = report.bound_violations;
    if (write) {
        const fs::path dir = config.output.dir;
        std::vector<double> x, ids;
        for (std::size_t i = 0; i < report.f_profile.size(); ++i) x.push_back(grid.x(i));
        for (std::size_t k = 0; k < report.ratios.size(); ++k) ids.push_back(static_cast<double>(k));
        write_columns_csv(dir / "f_profile.csv", {"x", "F"}, {x, report.f_profile});
        write_columns_csv(dir / "ratios.csv", {"sample_id", "ratio"}, {ids, report.ratios});
        write_json(dir / "summary.json", out.summary);
    }
    return out;
}

}  // namespace

Pipeline pipeline_for_method(const std::string& name) {
    if (name == "hum") return Pipeline::hum;
    if (name == "characteristics") return Pipeline::characteristics;
    if (name == "penalized") return Pipeline::penalized;
    if (name == "forward") return Pipeline::forward;
    throw ConfigError("method.name", 0, "expected hum, characteristics, penalized or forward");
}

ScenarioOutcome run_scenario(const RunConfig& config, Pipeline pipeline, bool write) {
    validate(config);
    if (pipeline == Pipeline::characteristics) {
        RunConfig check = config;
        check.method.name = "characteristics";
        validate(check);
    }
    const auto field = build_field(config.coefficients, config.grid.cells);
    const auto grid = Grid1D::for_field(field, config.grid.cells, config.grid.horizon, config.grid.cfl_safety);
    switch (pipeline) {
        case Pipeline::forward: return run_forward(config, field, grid, write);
        case Pipeline::adjoint: return run_adjoint(config, field, grid, write);
        case Pipeline::hum: return run_hum(config, field, grid, write);
        case Pipeline::characteristics: return run_characteristics(config, field, grid, write);
        case Pipeline::penalized: return run_penalized(config, field, grid, write);
        case Pipeline::observability: return run_observability(config, field, grid, write);
    }
    throw ContractError("unknown pipeline");
}

double dalembert_reference(const Profile& u, double c, double length, double x, double t) {
    const auto ul = [&](double s) { return s > 0.0 ? u(s) : 0.0; };
    double y = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double kk = static_cast<double>(k);
        const double out = t - (x + 2.0 * kk * length) / c;
        const double back = t - (2.0 * (kk + 1.0) * length - x) / c;
        if (out <= 0.0 && back <= 0.0) break;
        y += ul(out) - ul(back);
    }
    return y;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config, std::size_t levels, bool write) {
    if (levels < 3) throw ConfigError("level-count", 0, "a convergence study needs at least 3 levels");
    const Pipeline pipeline = pipeline_for_method(config.method.name);
    std::vector<RunConfig> configs(levels, config);
    for (std::size_t k = 0; k < levels; ++k) {
        configs[k].grid.cells = config.grid.cells << k;
        configs[k].output.dir = (fs::path(config.output.dir) / ("level_" + std::to_string(k))).string();
    }
    std::vector<std::future<ScenarioOutcome>> jobs;
    for (const auto& c : configs)
        jobs.push_back(std::async(std::launch::async, [&c, pipeline, write] { return run_scenario(c, pipeline, write); }));

    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < levels; ++k) {
        const auto outcome = jobs[k].get();
        ConvergenceRow row;
        row.level = k;
        row.cells = configs[k].grid.cells;
        row.steps = outcome.summary["grid"]["M"].get<std::size_t>();
        row.error = outcome.error;
        row.order = kNaN;
        if (k > 0 && rows.back().error > 0.0 && row.error > 0.0)
            row.order = std::log2(rows.back().error / row.error);
        rows.push_back(row);
    }
    if (write) {
        const fs::path path = fs::path(config.output.dir) / "convergence.csv";
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::trunc);
        out << "level,N,M,error,order\n";
        for (const auto& r : rows)
            out << r.level << ',' << r.cells << ',' << r.steps << ',' << format_number(r.error) << ','
                << (std::isnan(r.order) ? std::string("n/a") : format_number(r.order)) << '\n';
    }
    return rows;
}

}  // namespace sidewise
