#include "dualring/sim.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <stdexcept>

#include "dualring/units.hpp"

namespace dualring {

namespace {

// RNG stream ids; fixed so per-channel sequences never depend on the other
// channels or on chunking.
constexpr std::uint64_t kStreamEmission = 0;
constexpr std::uint64_t kStreamSplitter = 1;
constexpr std::uint64_t kStreamChannelBase = 8;  // 4 streams per channel

std::int64_t round_ties_even(double x) {
    return static_cast<std::int64_t>(std::nearbyint(x));
}

}  // namespace

void DetectorChain::validate() const {
    if (efficiency_db < 0.0) throw std::invalid_argument("efficiency_db must be >= 0");
    if (jitter_sigma_ps < 0.0) throw std::invalid_argument("jitter_sigma_ps must be >= 0");
    if (dark_rate_hz < 0.0) throw std::invalid_argument("dark_rate_hz must be >= 0");
    if (dead_time_ps < 0.0) throw std::invalid_argument("dead_time_ps must be >= 0");
}

double DetectorChain::efficiency() const { return loss_db_to_efficiency(efficiency_db); }

void SimConfig::validate() const {
    if (pair_rate_hz < 0.0) throw std::invalid_argument("pair_rate_hz must be >= 0");
    if (duration_s <= 0.0) throw std::invalid_argument("duration_s must be > 0");
    signal_chain.validate();
    idler_chain.validate();
    if (splitter_ratio && (*splitter_ratio < 0.0 || *splitter_ratio > 1.0))
        throw std::invalid_argument("splitter_ratio must be in [0,1]");
}

std::uint64_t SimConfig::duration_ps() const {
    return static_cast<std::uint64_t>(std::llround(duration_s * 1e12));
}

StreamingSimulator::ChannelState::ChannelState(std::uint32_t id_,
                                               const DetectorChain& chain,
                                               std::uint64_t seed,
                                               std::uint64_t stream_base)
    : id(id_),
      efficiency(chain.efficiency()),
      jitter_sigma_ps(chain.jitter_sigma_ps),
      dark_rate_hz(chain.dark_rate_hz),
      dead_time_ps(chain.dead_time_ps),
      survive(seed, stream_base + 0),
      jitter(seed, stream_base + 1),
      darks(seed, stream_base + 2) {}

StreamingSimulator::StreamingSimulator(const SimConfig& config)
    : config_(config),
      emission_rng_(config.seed, kStreamEmission),
      splitter_rng_(config.seed, kStreamSplitter) {
    config_.validate();
    double max_sigma = std::max(config.signal_chain.jitter_sigma_ps,
                                config.idler_chain.jitter_sigma_ps);
    margin_ps_ = 16.0 * max_sigma + 1.0;

    auto add_channel = [&](std::uint32_t id, const DetectorChain& chain) {
        channels_.emplace_back(id, chain, config.seed,
                               kStreamChannelBase + 4ULL * id);
    };
    if (config_.splitter_ratio) {
        add_channel(kChannelHerald, config_.idler_chain);
        add_channel(kChannelArmA, config_.signal_chain);
        add_channel(kChannelArmB, config_.signal_chain);
    } else {
        add_channel(kChannelSignal, config_.signal_chain);
        add_channel(kChannelIdler, config_.idler_chain);
    }
}

std::vector<std::uint32_t> StreamingSimulator::channels() const {
    std::vector<std::uint32_t> ids;
    for (const auto& ch : channels_) ids.push_back(ch.id);
    return ids;
}

void StreamingSimulator::accept_photon(ChannelState& ch, double emission_ps) {
    if (!ch.survive.bernoulli(ch.efficiency)) return;
    double t = emission_ps;
    if (ch.jitter_sigma_ps > 0.0) t += ch.jitter.gaussian(0.0, ch.jitter_sigma_ps);
    const std::int64_t tag = round_ties_even(t);
    if (tag < 0 || static_cast<std::uint64_t>(tag) >= config_.duration_ps()) return;
    ch.pending.push_back(static_cast<std::uint64_t>(tag));
}

void StreamingSimulator::generate_until(double t_ps) {
    const double duration = static_cast<double>(config_.duration_ps());
    const double stop = std::min(t_ps, duration);

    if (!emissions_done_ && config_.pair_rate_hz > 0.0) {
        const double mean_gap = 1e12 / config_.pair_rate_hz;
        ChannelState* signal_a = nullptr;
        ChannelState* signal_b = nullptr;
        ChannelState* idler = nullptr;
        if (config_.splitter_ratio) {
            idler = &channels_[0];
            signal_a = &channels_[1];
            signal_b = &channels_[2];
        } else {
            signal_a = &channels_[0];
            idler = &channels_[1];
        }
        while (emission_t_ps_ < stop) {
            emission_t_ps_ += emission_rng_.exponential(mean_gap);
            if (emission_t_ps_ >= duration) {
                emissions_done_ = true;
                break;
            }
            if (config_.splitter_ratio) {
                const bool to_a = splitter_rng_.bernoulli(*config_.splitter_ratio);
                accept_photon(to_a ? *signal_a : *signal_b, emission_t_ps_);
            } else {
                accept_photon(*signal_a, emission_t_ps_);
            }
            accept_photon(*idler, emission_t_ps_);
        }
    } else if (config_.pair_rate_hz <= 0.0) {
        emission_t_ps_ = duration;
        emissions_done_ = true;
    }

    for (auto& ch : channels_) {
        if (ch.dark_rate_hz <= 0.0) continue;
        const double mean_gap = 1e12 / ch.dark_rate_hz;
        while (ch.next_dark_ps < stop) {
            ch.next_dark_ps += ch.darks.exponential(mean_gap);
            if (ch.next_dark_ps >= duration) {
                ch.next_dark_ps = duration + margin_ps_;  // exhausted
                break;
            }
            const std::int64_t tag = round_ties_even(ch.next_dark_ps);
            if (tag >= 0 && static_cast<std::uint64_t>(tag) < config_.duration_ps())
                ch.pending.push_back(static_cast<std::uint64_t>(tag));
        }
    }
}

std::map<std::uint32_t, std::vector<std::uint64_t>> StreamingSimulator::next_chunk(
    std::uint64_t t1_ps) {
    const std::uint64_t duration = config_.duration_ps();
    t1_ps = std::min(t1_ps, duration);
    if (t1_ps < emitted_to_)
        throw std::invalid_argument("chunk boundaries must be nondecreasing");

    // Jittered tags below t1 can only come from emissions below t1 + margin.
    generate_until(static_cast<double>(t1_ps) + margin_ps_);

    std::map<std::uint32_t, std::vector<std::uint64_t>> out;
    for (auto& ch : channels_) {
        std::sort(ch.pending.begin(), ch.pending.end());
        const bool final_chunk = t1_ps >= duration;
        auto cut = final_chunk
                       ? ch.pending.end()
                       : std::lower_bound(ch.pending.begin(), ch.pending.end(), t1_ps);
        std::vector<std::uint64_t> head(ch.pending.begin(), cut);
        ch.pending.erase(ch.pending.begin(), cut);

        if (ch.dead_time_ps > 0.0) {
            std::vector<std::uint64_t> kept;
            kept.reserve(head.size());
            const auto dead = static_cast<std::uint64_t>(std::llround(ch.dead_time_ps));
            for (std::uint64_t t : head) {
                if (ch.has_last_kept && t - ch.last_kept < dead && t >= ch.last_kept)
                    continue;
                kept.push_back(t);
                ch.last_kept = t;
                ch.has_last_kept = true;
            }
            head = std::move(kept);
        }
        out[ch.id] = std::move(head);
    }
    emitted_to_ = t1_ps;
    return out;
}

std::map<std::uint32_t, TimeTagStream> simulate_pair_streams(const SimConfig& config) {
    StreamingSimulator sim(config);
    auto chunks = sim.next_chunk(config.duration_ps());
    std::map<std::uint32_t, TimeTagStream> out;
    for (auto& [ch, tags] : chunks) {
        TimeTagStream s;
        s.channel = ch;
        s.duration_ps = config.duration_ps();
        s.tags = std::move(tags);
        out[ch] = std::move(s);
    }
    return out;
}

}  // namespace dualring
