// adiabat-lab: run scenario configs, T-sweeps, and list the model catalogue.
// Log verbosity comes from ADIABAT_LOG_LEVEL (trace, debug, info, warn, error, off).

#include "adiabat/errors.hpp"
#include "adiabat/scenario.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

void configure_logging()
{
    auto logger = spdlog::stderr_color_mt("adiabat-lab");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("ADIABAT_LOG_LEVEL")) {
        const auto parsed = spdlog::level::from_str(level);
        // from_str maps unknown names to off; only accept a real "off".
        if (parsed != spdlog::level::off || std::string(level) == "off") {
            spdlog::set_level(parsed);
        } else {
            spdlog::warn("ignoring unknown ADIABAT_LOG_LEVEL '{}'", level);
        }
    }
}

} // namespace

int main(int argc, char** argv)
{
    configure_logging();

    CLI::App app{"Numerical lab for adiabaticity diagnostics"};
    app.require_subcommand(1);

    std::string config_file;
    std::string output_dir;

    auto* run_cmd = app.add_subcommand("run", "Evolve one scenario and write its report and time series");
    run_cmd->add_option("file", config_file, "scenario config (JSON)")->required();
    run_cmd->add_option("--output-dir", output_dir, "override the config's output_dir");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run the scenario at every T in its sweep list");
    sweep_cmd->add_option("file", config_file, "scenario config (JSON)")->required();
    sweep_cmd->add_option("--output-dir", output_dir, "override the config's output_dir");

    auto* list_cmd = app.add_subcommand("list-models", "Print the models and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const adiabat::lab::Logger log = [](const std::string& msg) { spdlog::info("{}", msg); };
    try {
        if (list_cmd->parsed()) {
            std::cout << adiabat::lab::list_models();
            return 0;
        }
        const auto cfg = adiabat::lab::load_config(config_file);
        const std::filesystem::path dir = output_dir.empty() ? cfg.output_dir : output_dir;
        spdlog::debug("config {} -> {}", config_file, dir.string());
        if (run_cmd->parsed()) {
            const auto outcome = adiabat::lab::run(cfg, dir, log);
            for (const auto& f : outcome.files) {
                std::cout << f.string() << '\n';
            }
        } else if (sweep_cmd->parsed()) {
            const auto outcome = adiabat::lab::sweep(cfg, dir, log);
            std::cout << outcome.table.string() << '\n';
            if (outcome.slope) {
                std::cout << "slope " << adiabat::report::format_double(*outcome.slope) << '\n';
            }
        }
        return 0;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return adiabat::lab::exit_code_for(e);
    }
}
