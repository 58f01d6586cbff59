#include "dualring/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

namespace dualring {

namespace {

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["artifact_version"] = artifact_version;
    j["timestamp_utc"] = timestamp_utc;
    j["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path);
    out << j.dump(2) << '\n';
}

RunManifest make_manifest(const std::string& command, const ExperimentConfig& config) {
    RunManifest m;
    m.command = command;
    m.config_hash = dualring::config_hash(config);
    m.seed = config.seed;
    m.timestamp_utc = utc_now();
    return m;
}

}  // namespace dualring
