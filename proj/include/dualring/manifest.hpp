#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualring/config.hpp"

namespace dualring {

inline constexpr const char* kArtifactVersion = "dualring 0.1.0";

// Replay record for a CLI run: with the same config, seed and version, every
// listed CSV/binary output is reproduced byte for byte (the manifest's own
// timestamp is informational).
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string artifact_version = kArtifactVersion;
    std::string timestamp_utc;
    std::vector<std::string> outputs;

    void add_output(const std::string& path) { outputs.push_back(path); }
    void write(const std::string& path) const;
};

RunManifest make_manifest(const std::string& command, const ExperimentConfig& config);

}  // namespace dualring
