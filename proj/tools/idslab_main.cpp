#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "idslab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"idslab - random lattice operator laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = 0;
    auto* run = app.add_subcommand("run", "execute one experiment from a JSON config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--workers", workers, "worker threads (default: logical cores)");
    run->add_option("--out", out_dir, "output directory");

    std::uint64_t audit_seed = 1;
    double budget = 20.0;
    bool inject = false;
    auto* audit = app.add_subcommand("audit", "run the hard-invariant property suites");
    audit->add_option("--seed", audit_seed, "master seed");
    audit->add_option("--budget", budget, "time budget in seconds");
    audit->add_flag("--inject-fault", inject, "deliberately fail one suite (harness self-test)")
        ->group("");

    auto* version = app.add_subcommand("version", "print the tool version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = idslab::ExperimentConfig::parse_file(config_path);
            auto res = idslab::run_experiment(cfg, out_dir, workers);
            std::cout << "wrote " << res.manifest.checksums.size() + 1 << " artifacts to "
                      << res.outdir.string() << " (fingerprint " << cfg.fingerprint << ")\n";
            return 0;
        }
        if (audit->parsed()) {
            auto res = idslab::audit_suite(audit_seed, budget, inject);
            std::cout << idslab::audit_report_text(res);
            if (res.skipped) std::cout << "skipped\n";
            return res.passed() || res.skipped ? 0 : 1;
        }
        if (version->parsed()) {
            std::cout << "idslab " << idslab::kVersion << "\n";
            return 0;
        }
    } catch (const idslab::ConfigError& e) {
        std::cerr << idslab::json{{"error", e.what()}, {"key", e.key}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << idslab::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
