#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "sidewise/config.hpp"
#include "sidewise/errors.hpp"
#include "sidewise/scenario.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t level_count = 3;
};

sidewise::RunConfig resolve(const Flags& flags) {
    sidewise::RunConfig config = flags.config.empty() ? sidewise::RunConfig{} : sidewise::load_config(flags.config);
    if (!flags.out.empty()) config.output.dir = flags.out;
    if (flags.seed) config.seed = *flags.seed;
    return config;
}

int report(const std::string& name, const sidewise::RunConfig& config, const sidewise::ScenarioOutcome& outcome) {
    std::cout << name << ": error " << outcome.error;
    if (outcome.summary.contains("iterations")) std::cout << ", iterations " << outcome.summary["iterations"];
    std::cout << ", artifacts in " << config.output.dir << '\n';
    if (!outcome.message.empty()) std::cout << "note: " << outcome.message << '\n';
    if (outcome.exit_code != 0) std::cerr << name << ": tracking or bound check failed\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sidewise boundary control of the 1-D wave equation"};
    app.require_subcommand(1);

    Flags flags;
    const auto add_flags = [&flags](CLI::App* sub) {
        sub->add_option("--config", flags.config, "YAML scenario file")->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "output directory (overrides output.dir)");
        sub->add_option("--seed", flags.seed, "RNG seed (overrides seed)");
        sub->add_option("--level-count", flags.level_count, "grid levels of a convergence study")
            ->check(CLI::PositiveNumber);
    };

    struct Entry {
        const char* name;
        const char* help;
        sidewise::Pipeline pipeline;
    };
    const Entry entries[] = {
        {"solve-forward", "forward solve with the configured boundary and initial data", sidewise::Pipeline::forward},
        {"solve-adjoint", "backward adjoint solve driven by problem.adjoint", sidewise::Pipeline::adjoint},
        {"hum-control", "exact flux tracking by the dual variational method", sidewise::Pipeline::hum},
        {"char-control", "constructive control for the unit-speed string", sidewise::Pipeline::characteristics},
        {"penalized", "penalized tracking over the kappa sweep", sidewise::Pipeline::penalized},
        {"observability-report", "ensemble check of the observability inequality", sidewise::Pipeline::observability},
    };
    std::optional<sidewise::Pipeline> chosen;
    std::string chosen_name;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_flags(sub);
        sub->callback([&chosen, &chosen_name, e] {
            chosen = e.pipeline;
            chosen_name = e.name;
        });
    }
    auto* convergence = app.add_subcommand("convergence", "rerun method.name on N, 2N, 4N, ... cells");
    add_flags(convergence);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve(flags);
        if (chosen) return report(chosen_name, config, sidewise::run_scenario(config, *chosen));

        const auto rows = sidewise::convergence_study(config, flags.level_count);
        std::cout << "level N error order\n";
        for (const auto& r : rows) {
            std::cout << r.level << ' ' << r.cells << ' ' << r.error << ' ';
            if (std::isnan(r.order))
                std::cout << "n/a\n";
            else
                std::cout << r.order << '\n';
        }
        std::cout << "table in " << config.output.dir << "/convergence.csv\n";
        return 0;
    } catch (const sidewise::MinimalTimeError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 2;
    } catch (const sidewise::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const sidewise::ContractError& e) {
        std::cerr << "rejected: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
