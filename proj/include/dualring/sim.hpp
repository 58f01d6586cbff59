#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dualring/rng.hpp"
#include "dualring/timetags.hpp"

namespace dualring {

// Everything between the chip and one logical detector, lumped: path plus
// detector loss, Gaussian timing jitter, uncorrelated dark/background counts,
// optional dead time. The default jitter (68.2 ps per channel) makes a
// two-detector coincidence peak 227 ps FWHM. Dark defaults are placeholders,
// not calibrated against any measurement.
struct DetectorChain {
    double efficiency_db = 0.0;
    double jitter_sigma_ps = 68.2;
    double dark_rate_hz = 200.0;
    double dead_time_ps = 0.0;

    void validate() const;
    double efficiency() const;
};

// Channel numbering: without a splitter the outputs are signal=0, idler=1.
// With a splitter the signal is divided over two arms and the idler becomes
// the herald: herald=1, arms 2 and 3.
inline constexpr std::uint32_t kChannelSignal = 0;
inline constexpr std::uint32_t kChannelIdler = 1;
inline constexpr std::uint32_t kChannelHerald = 1;
inline constexpr std::uint32_t kChannelArmA = 2;
inline constexpr std::uint32_t kChannelArmB = 3;

struct SimConfig {
    double pair_rate_hz = 0.0;      // on-chip pair generation rate
    double duration_s = 1.0;
    std::uint64_t seed = 1;
    DetectorChain signal_chain;
    DetectorChain idler_chain;
    std::optional<double> splitter_ratio;  // probability of arm A

    void validate() const;
    std::uint64_t duration_ps() const;
};

// Incremental generator: pair emissions are a Poisson process, each photon
// survives its chain independently, surviving tags are jittered and rounded
// to integer picoseconds (ties to even), dark counts are merged in, dead-time
// pruning runs last. Chunks are emitted in time order; the concatenation over
// chunks is independent of the chunk boundaries.
class StreamingSimulator {
public:
    explicit StreamingSimulator(const SimConfig& config);

    // Tags in [previous boundary, min(t1, duration)), per channel.
    std::map<std::uint32_t, std::vector<std::uint64_t>> next_chunk(std::uint64_t t1_ps);

    bool finished() const { return emitted_to_ >= config_.duration_ps(); }
    const SimConfig& config() const { return config_; }
    std::vector<std::uint32_t> channels() const;

private:
    struct ChannelState {
        std::uint32_t id = 0;
        double efficiency = 1.0;
        double jitter_sigma_ps = 0.0;
        double dark_rate_hz = 0.0;
        double dead_time_ps = 0.0;
        Rng survive;
        Rng jitter;
        Rng darks;
        double next_dark_ps = 0.0;
        std::vector<std::uint64_t> pending;
        bool has_last_kept = false;
        std::uint64_t last_kept = 0;

        ChannelState(std::uint32_t id_, const DetectorChain& chain, std::uint64_t seed,
                     std::uint64_t stream_base);
    };

    void accept_photon(ChannelState& ch, double emission_ps);
    void generate_until(double t_ps);

    SimConfig config_;
    Rng emission_rng_;
    Rng splitter_rng_;
    double emission_t_ps_ = 0.0;
    bool emissions_done_ = false;
    std::uint64_t emitted_to_ = 0;
    double margin_ps_ = 0.0;
    std::vector<ChannelState> channels_;
};

// Whole-run convenience wrapper around StreamingSimulator.
std::map<std::uint32_t, TimeTagStream> simulate_pair_streams(const SimConfig& config);

}  // namespace dualring
