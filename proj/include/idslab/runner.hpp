#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "idslab/expcli.hpp"

namespace idslab {

struct RunResult {
    std::filesystem::path outdir;
    RunManifest manifest;
};

/// Execute one experiment, writing CSV artifacts, JSON sidecars and the
/// manifest under outdir. Deterministic for fixed (config, seed) whatever
/// the worker count.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir,
                         int workers);

struct AuditEntry {
    std::string name;
    int trials = 0;
    int violations = 0;
    std::string repro;  // minimal config of the first violation
};

struct AuditResult {
    std::vector<AuditEntry> entries;
    bool skipped = false;

    bool passed() const {
        for (auto& e : entries)
            if (e.violations > 0) return false;
        return true;
    }
};

/// Hard-invariant property suites (bracketing, SSF bounds, spectral
/// averaging, Toeplitz bounds, interlacing) within a wall-clock budget.
AuditResult audit_suite(std::uint64_t seed, double budget_seconds, bool inject_fault = false);

std::string audit_report_text(const AuditResult& result);
json audit_report_json(const AuditResult& result);

}  // namespace idslab
