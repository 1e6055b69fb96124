#include "chsplit/app.hpp"
#include "chsplit/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

enum ExitCode { ok = 0, config_error = 2, solver_error = 3, io_error = 4, internal_error = 5 };

// CHSPLIT_NUM_THREADS caps the number of concurrent level runs.
unsigned thread_cap()
{
    const char* env = std::getenv("CHSPLIT_NUM_THREADS");
    if (!env || !*env) {
        return 0;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
        throw chsplit::ConfigError("CHSPLIT_NUM_THREADS: expected a positive integer, got \"" + std::string(env) +
                                   "\"");
    }
    return static_cast<unsigned>(v);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed finite element Cahn-Hilliard solver with a second-order convex-splitting scheme"};
    app.set_version_flag("--version", chsplit::version());
    app.require_subcommand(1);

    std::string simulate_config;
    auto* simulate = app.add_subcommand("simulate", "Run one trajectory and write diagnostics and snapshots");
    simulate->add_option("config", simulate_config, "JSON run configuration")->required();

    std::string cauchy_config;
    auto* cauchy = app.add_subcommand("cauchy", "Run a Cauchy convergence study over nested levels");
    cauchy->add_option("config", cauchy_config, "JSON run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        const bool is_sim = simulate->parsed();
        chsplit::RunConfig config = chsplit::load_config(is_sim ? simulate_config : cauchy_config);
        const chsplit::RunMode wanted = is_sim ? chsplit::RunMode::Simulate : chsplit::RunMode::Cauchy;
        if (config.mode != wanted) {
            throw chsplit::ConfigError(std::string("mode: config is for \"") +
                                       (is_sim ? "cauchy" : "simulate") + "\" but the subcommand is \"" +
                                       (is_sim ? "simulate" : "cauchy") + "\"");
        }
        if (const unsigned cap = thread_cap(); cap > 0 && config.threads > cap) {
            config.threads = cap;
        }
        if (is_sim) {
            chsplit::run_simulate(config, std::cout);
        } else {
            chsplit::run_cauchy(config, std::cout);
        }
    } catch (const chsplit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const chsplit::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const chsplit::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    } catch (const chsplit::NumericalError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    } catch (const chsplit::CompatibilityError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return internal_error;
    }
    return ok;
}
