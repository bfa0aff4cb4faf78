#include "varfrac_cli/config.hpp"
#include "varfrac_cli/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"varfrac: variable-order fractional Laplacian extension toolkit"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute one JSON-configured task");
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    run->add_option("config", config_path, "path to the JSON config")->required();
    run->add_option("--out-dir", out_dir, "directory for output files (created if missing)");
    run->add_option("--threads", threads,
                    "worker threads; falls back to VARFRAC_THREADS, then 1");

    CLI11_PARSE(app, argc, argv);

    if (threads <= 0) {
        const char* env = std::getenv("VARFRAC_THREADS");
        threads = env ? std::atoi(env) : 1;
        if (threads <= 0) threads = 1;
    }

    try {
        varfrac_cli::RunConfig cfg = varfrac_cli::load_config(config_path);
        return varfrac_cli::run_task(cfg, out_dir, threads);
    } catch (const varfrac_cli::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
