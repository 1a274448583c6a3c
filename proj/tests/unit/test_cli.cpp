#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "sidewise/config.hpp"
#include "sidewise/errors.hpp"
#include "sidewise/scenario.hpp"

using namespace sidewise;
namespace fs = std::filesystem;

namespace {

const fs::path configs = fs::path(SIDEWISE_TEST_DATA).parent_path().parent_path().parent_path() / "configs";

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sidewise_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char* unit_yaml = R"(coefficients: {kind: constant, length: 1, rho: 1, a: 1}
grid: {cells: 60, horizon: 2.5}
problem:
  target: {kind: sine, frequency: 1, shift: 1}
method: {name: hum, max_iter: 40}
)";

struct Run {
    int status;
    std::string output;
};

Run run_cli(const std::string& args) {
    const char* exe = std::getenv("SIDEWISE_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "SIDEWISE_CLI is not set");
    const auto log = scratch("log") / "out.txt";
    const std::string cmd = std::string(exe) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(log)};
}

}  // namespace

TEST_CASE("canonical form round-trips") {
    for (const auto& name : {"hum_demo.yaml", "char_demo.yaml", "penalized.yaml", "observability.yaml", "forward_pulse.yaml"}) {
        const auto c = load_config((configs / name).string());
        const auto text = canonical_config(c);
        CHECK(parse_config(text) == c);
        CHECK(canonical_config(parse_config(text)) == text);
    }
}

TEST_CASE("unknown keys are reported with their line") {
    const std::string text = "grid:\n  cells: 40\n  horizn: 2.5\n";
    try {
        parse_config(text);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "grid.horizn");
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("type errors name the field") {
    try {
        parse_config("grid:\n  cells: many\n");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "grid.cells");
    }
    CHECK_THROWS_AS(validate(parse_config("method: {name: simplex}\n")), ConfigError);
}

TEST_CASE("config hash is a 40-digit hex blob id that tracks content") {
    const auto a = parse_config(unit_yaml);
    auto b = a;
    b.grid.cells = 61;
    const auto ha = config_hash(a);
    CHECK(ha.size() == 40);
    CHECK(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash(a) == ha);
    CHECK(config_hash(b) != ha);
}

TEST_CASE("characteristics with variable density is refused") {
    auto c = parse_config(unit_yaml);
    c.method.name = "characteristics";
    c.coefficients.kind = "piecewise";
    c.coefficients.breakpoints = {0.5};
    c.coefficients.rho_values = {1.0, 1.5};
    c.coefficients.a_values = {1.0, 1.0};
    CHECK_THROWS_AS(run_scenario(c, Pipeline::characteristics, false), ContractError);
}

TEST_CASE("horizon below the minimal time is refused with the minimal time") {
    auto c = parse_config(unit_yaml);
    c.coefficients.length = 2.0;  // L*beta = 2
    c.grid.horizon = 1.0;
    for (auto pipeline : {Pipeline::hum, Pipeline::characteristics}) {
        try {
            run_scenario(c, pipeline, false);
            FAIL("expected a refusal");
        } catch (const MinimalTimeError& e) {
            CHECK(e.min_time() == doctest::Approx(2.0));
            CHECK(std::string(e.what()).find("2.000000") != std::string::npos);
        }
    }
}

TEST_CASE("demo scenario writes its artifacts") {
    auto c = load_config((configs / "hum_demo.yaml").string());
    c.output.dir = scratch("demo").string();
    const auto out = run_scenario(c, Pipeline::hum);
    CHECK(out.exit_code == 0);
    CHECK(out.error <= 1e-2);
    for (const auto& f : {"control.csv", "flux.csv", "summary.json"}) CHECK(fs::exists(fs::path(c.output.dir) / f));
    const auto s = out.summary;
    for (const auto& key : {"beta", "min_time", "C1_theoretical", "grid", "config_hash", "iterations", "J_history",
                            "tracking_error_L2", "constants"})
        CHECK_MESSAGE(s.contains(key), key);
    CHECK(s["tracking_error_L2"].get<double>() <= 1e-2);
    CHECK(s["config_hash"] == config_hash(c));
    CHECK(slurp(fs::path(c.output.dir) / "control.csv").rfind("t,u\n", 0) == 0);
    CHECK(slurp(fs::path(c.output.dir) / "flux.csv").rfind("t,target,achieved,error\n", 0) == 0);
}

TEST_CASE("convergence of a zero target reports no order") {
    auto c = parse_config(unit_yaml);
    c.problem.target = ProfileSpec{};
    c.grid.cells = 20;
    const auto rows = convergence_study(c, 3, false);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.error == 0.0);
        CHECK(std::isnan(r.order));
    }
}

TEST_CASE("forward convergence against the closed form is second order") {
    auto c = load_config((configs / "forward_pulse.yaml").string());
    const auto rows = convergence_study(c, 3, false);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].cells == 2 * rows[0].cells);
    CHECK(rows[2].order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("characteristics tracking converges at first order or better") {
    auto c = load_config((configs / "char_demo.yaml").string());
    c.grid.cells = 100;
    const auto rows = convergence_study(c, 3, false);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        MESSAGE("N = " << rows[k].cells << ": error " << rows[k].error << ", order " << rows[k].order);
        CHECK(rows[k].order >= 1.0);
    }
}

TEST_CASE("convergence study needs three levels") {
    CHECK_THROWS_AS(convergence_study(parse_config(unit_yaml), 2, false), ContractError);
}

TEST_CASE("identical config and seed give identical artifacts") {
    auto c = load_config((configs / "observability.yaml").string());
    c.observability.samples = 6;
    c.grid.cells = 80;
    // Same output directory both times: the config hash covers output.dir.
    const auto a = scratch("det_run"), b = scratch("det_first");
    c.output.dir = a.string();
    run_scenario(c, Pipeline::observability);
    for (const auto& e : fs::directory_iterator(a)) fs::copy_file(e.path(), b / e.path().filename());
    run_scenario(c, Pipeline::observability);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        CHECK_MESSAGE(slurp(e.path()) == slurp(b / e.path().filename()), e.path().filename().string());
    }
    CHECK(files >= 3);
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch("cmd");
    const auto cfg = dir / "unit.yaml";
    std::ofstream(cfg) << unit_yaml;

    auto r = run_cli("hum-control --config " + cfg.string() + " --out " + (dir / "ok").string());
    CHECK(r.status == 1);  // 40 iterations at N = 60 do not reach the 1e-2 tracking tolerance
    CHECK(fs::exists(dir / "ok" / "summary.json"));

    const auto bad_time = dir / "short.yaml";
    std::ofstream(bad_time) << "grid: {cells: 40, horizon: 0.5}\nmethod: {name: hum}\n";
    r = run_cli("hum-control --config " + bad_time.string() + " --out " + (dir / "short").string());
    CHECK(r.status == 2);
    CHECK(r.output.find("1.000000") != std::string::npos);

    const auto bad_key = dir / "typo.yaml";
    std::ofstream(bad_key) << "grid:\n  cels: 40\n";
    r = run_cli("hum-control --config " + bad_key.string());
    CHECK(r.status == 2);
    CHECK(r.output.find("line 2") != std::string::npos);

    r = run_cli("observability-report --config " + (configs / "observability.yaml").string() + " --seed 9 --out " +
                (dir / "obs").string());
    CHECK(r.status == 0);
    CHECK(slurp(dir / "obs" / "summary.json").find("\"seed\": 9") != std::string::npos);

    r = run_cli("no-such-command");
    CHECK(r.status != 0);
}
