// Batch driver: loads a JSON run config, builds the corpus, executes the
// requested verification suites and writes machine-readable reports.
//
//   verify <config-file> [--suite NAME]... [--out DIR] [--seed N]
//
// Exit codes: 0 all asserted checks pass, 1 an asserted check failed,
// 2 configuration error.

#include <iostream>

#include "CLI11.hpp"
#include "varsparse/suites.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sparse-domination verification toolkit"};
    std::string config_path;
    std::vector<std::string> suites;
    std::string out_dir;
    std::int64_t seed = -1;
    app.add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--suite", suites, "run only the named suite (repeatable)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "corpus seed (overrides the config)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    varsparse::RunConfig cfg;
    try {
        cfg = varsparse::RunConfig::from_file(config_path);
        if (!suites.empty()) cfg.suites = suites;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        const std::string out = out_dir.empty() ? cfg.out_dir : out_dir;
        int code = varsparse::run_all(cfg, out, &std::cout);
        if (code == 2) std::cerr << "config error: no runnable suites configured\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}
