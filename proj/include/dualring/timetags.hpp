#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dualring {

// One detector channel's event record. Tags are picoseconds from the start of
// the acquisition, sorted ascending, strictly inside [0, duration_ps).
// Duplicate tags are possible when dead time is zero.
struct TimeTagStream {
    std::uint32_t channel = 0;
    std::vector<std::uint64_t> tags;
    std::uint64_t duration_ps = 0;

    void validate() const;
    double duration_s() const { return static_cast<double>(duration_ps) * 1e-12; }
    std::size_t count() const { return tags.size(); }
};

// Bernoulli routing of each tag to output A with probability ratio; the tag
// multiset is preserved and both outputs stay sorted.
std::pair<TimeTagStream, TimeTagStream> split_stream(const TimeTagStream& stream,
                                                     double ratio, std::uint64_t seed,
                                                     std::uint32_t channel_a,
                                                     std::uint32_t channel_b);

// Sorted union via a k-way merge. All inputs must share a duration.
TimeTagStream merge_streams(const std::vector<TimeTagStream>& streams);

// Binary time-tag file:
//   header: magic "TTAGV001", u64 record count, u64 duration (ps)
//   records: u64 timestamp (ps), u32 channel, u32 reserved (zero)
// all little-endian.
inline constexpr char kTagFileMagic[8] = {'T', 'T', 'A', 'G', 'V', '0', '0', '1'};

void write_timetag_file(const std::string& path,
                        const std::map<std::uint32_t, TimeTagStream>& streams);
std::map<std::uint32_t, TimeTagStream> read_timetag_file(const std::string& path);

// CSV import, header channel,timestamp_ps. Duration defaults to one past the
// latest tag when not supplied.
std::map<std::uint32_t, TimeTagStream> read_timetag_csv(const std::string& path,
                                                        std::uint64_t duration_ps = 0);

}  // namespace dualring
