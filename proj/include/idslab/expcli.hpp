#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "idslab/model.hpp"
#include "idslab/policy.hpp"

namespace idslab {

using nlohmann::json;

/// Schema error with the offending key recorded for machine consumption.
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(const std::string& msg, std::string k)
        : std::runtime_error(msg), key(std::move(k)) {}
};

enum class Experiment { Ids, Wegner, Ssf, Averaging, Percolation, Spencer, Toeplitz, AuditSuite };

const char* to_string(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::Ids;
    std::uint64_t seed = 1;
    int trials = 1;
    int workers = 0;  // 0 = take the CLI flag / hardware default
    std::vector<int> scales;
    std::vector<double> energies;
    AlloyModel model;
    NumericPolicy policy;
    json extra;        // experiment-specific block, already schema-checked
    json canonical;    // canonicalised config document
    std::string fingerprint;

    static ExperimentConfig parse(const json& doc);
    static ExperimentConfig parse_file(const std::filesystem::path& path);
};

/// FNV-1a 64-bit hash of a string, hex-encoded; used for config
/// fingerprints and artifact checksums.
std::string fnv1a_hex(const std::string& data);

std::string format_g17(double v);

struct RunManifest {
    std::string fingerprint;
    std::string version;
    double wall_ms = 0.0;
    std::map<std::string, std::string> checksums;  // file name -> fnv1a

    json to_json() const;
};

// JSON serialization of the lattice types (documented schema: site order
// is first-axis-fastest; bands store A(i, i+b) for b = 0..bandwidth)
json box_to_json(const BoxSpec& box);
BoxSpec box_from_json(const json& j);
json potential_to_json(const BoxSpec& box, const PotentialField& v);
PotentialField potential_from_json(const json& j, BoxSpec* box_out = nullptr);
json hamiltonian_to_json(const HamiltonianMatrix& h);
HamiltonianMatrix hamiltonian_from_json(const json& j);

json disorder_to_json(const DisorderSpec& d);
DisorderSpec disorder_from_json(const json& j);
json profile_to_json(const SingleSiteProfile& p);
SingleSiteProfile profile_from_json(const json& j);

}  // namespace idslab
